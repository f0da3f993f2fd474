// dcesim — scenario-driven cavity photon-generation calculations.
//
// Subcommands:
//   run      execute one scenario file, write a CSV result
//   sweep    run a parameter sweep (one CSV row per grid point)
//   estimate run an estimate scenario (built-in reference inputs by default)
//
// Exit codes: 0 success, 1 validation/parse error, 2 numerical failure,
// 3 sweep finished with failed grid points.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dce/scenario.hpp"

namespace {

constexpr double kBuiltinTolerance = 1e-10;

double resolve_tolerance(const std::optional<double>& flag_value) {
    if (flag_value) return *flag_value;
    if (const char* env = std::getenv("DCESIM_TOLERANCE")) {
        try {
            const double v = std::stod(env);
            if (v > 1e-14 && v < 1e-3) return v;
            std::cerr << "error: DCESIM_TOLERANCE out of range (1e-14, 1e-3), "
                         "using default\n";
        } catch (...) {
            std::cerr << "error: DCESIM_TOLERANCE is not a number, using "
                         "default\n";
        }
    }
    return kBuiltinTolerance;
}

int write_output(const dce::cli::ResultTable& table, const std::string& path) {
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
    if (path.empty() || path == "-") {
        dce::cli::write_csv(table, std::cout);
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file: " << path << "\n";
        return 1;
    }
    dce::cli::write_csv(table, out);
    return 0;
}

int report_error(const dce::Error& e) {
    if (dce::cli::is_validation_error(e)) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    // Machine-readable diagnostic line for numerical failures.
    std::cerr << "{\"error\":{\"code\":\"" << e.code() << "\",\"message\":\""
              << e.what() << "\"}}\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavity photon-generation scenarios"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path = "-";
    int jobs = 1;
    std::optional<double> tolerance;

    auto add_common = [&](CLI::App* cmd, bool scenario_required) {
        auto* opt = cmd->add_option("--scenario", scenario_path,
                                    "scenario file (JSON)");
        if (scenario_required) opt->required();
        cmd->add_option("--out", out_path, "output CSV path ('-' for stdout)");
        cmd->add_option("--tolerance", tolerance,
                        "default integrator/quadrature tolerance");
        cmd->add_option("--jobs", jobs,
                        "max parallel grid points (sweeps; single scenarios "
                        "run serially)")
            ->check(CLI::Range(1, 256));
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario");
    add_common(run_cmd, true);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep_cmd, true);

    CLI::App* estimate_cmd =
        app.add_subcommand("estimate", "run feasibility estimates");
    add_common(estimate_cmd, false);

    CLI11_PARSE(app, argc, argv);
    const double tol = resolve_tolerance(tolerance);

    try {
        if (run_cmd->parsed()) {
            const auto scenario = dce::cli::Scenario::from_file(scenario_path, tol);
            return write_output(scenario.run(), out_path);
        }
        if (sweep_cmd->parsed()) {
            const auto sweep = dce::cli::Sweep::from_file(scenario_path, tol);
            bool any_failed = false;
            const auto table = sweep.run(jobs, any_failed);
            const int rc = write_output(table, out_path);
            if (rc != 0) return rc;
            return any_failed ? 3 : 0;
        }
        // estimate
        if (scenario_path.empty()) {
            const auto scenario = dce::cli::Scenario::from_json_text(
                "{\"kind\":\"estimate\"}", tol);
            return write_output(scenario.run(), out_path);
        }
        const auto scenario = dce::cli::Scenario::from_file(scenario_path, tol);
        if (scenario.kind() != "estimate") {
            std::cerr << "error: kind: the estimate subcommand requires an "
                         "estimate scenario\n";
            return 1;
        }
        return write_output(scenario.run(), out_path);
    } catch (const dce::Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
