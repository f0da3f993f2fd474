#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dce/errors.hpp"

namespace dce::cli {

/// One CSV-ready table: a header and string-formatted rows. Numbers are
/// rendered with 17 significant digits so reruns are byte-identical.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> warnings;  // surfaced on the diagnostic stream
};

std::string format_field(double v);
void write_csv(const ResultTable& table, std::ostream& out);

/// A validated, runnable scenario of one of the supported kinds:
/// oscillator, resonance, cavity1d, mirror, stats, estimate.
class Scenario {
public:
    /// Parses and validates; throws ParseError with a field-path diagnostic
    /// on malformed input and InvalidInput on precondition violations.
    static Scenario from_json_text(const std::string& text,
                                   double default_tolerance);
    static Scenario from_file(const std::string& path,
                              double default_tolerance);

    const std::string& kind() const;
    std::uint64_t seed() const;

    /// Output columns, known without running.
    std::vector<std::string> output_header() const;

    /// Executes the scenario. Numerical failures surface as dce::Error
    /// subclasses (exit code 2 at the CLI).
    ResultTable run() const;

    Scenario(const Scenario&);
    Scenario(Scenario&&) noexcept;
    Scenario& operator=(Scenario);
    ~Scenario();

private:
    Scenario();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Cartesian-product sweep over parameter paths in a base scenario.
class Sweep {
public:
    static Sweep from_file(const std::string& path, double default_tolerance);

    /// Runs every grid point (lexicographic order over the axes, first axis
    /// outermost) with up to `jobs` worker threads. Output rows are ordered
    /// by grid index regardless of scheduling. A failing point contributes
    /// an error row; `any_failed` reports whether one occurred.
    ResultTable run(int jobs, bool& any_failed) const;

    std::size_t total_points() const;

    Sweep(Sweep&&) noexcept;
    ~Sweep();

private:
    Sweep();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// True for errors that indicate bad input rather than numerical failure.
bool is_validation_error(const Error& e);

}  // namespace dce::cli
