#pragma once

#include <stdexcept>
#include <string>

namespace dce {

/// Base class for all library errors. Carries a stable machine-readable code
/// alongside the human-readable message so front ends can map failures to
/// exit codes and diagnostics without string matching.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct NonPositiveFrequency : Error {
    explicit NonPositiveFrequency(const std::string& msg)
        : Error("NonPositiveFrequency", msg) {}
};

struct ToleranceNotMet : Error {
    explicit ToleranceNotMet(const std::string& msg)
        : Error("ToleranceNotMet", msg) {}
};

struct WindowNotStationary : Error {
    explicit WindowNotStationary(const std::string& msg)
        : Error("WindowNotStationary", msg) {}
};

struct IllConditionedFit : Error {
    explicit IllConditionedFit(const std::string& msg)
        : Error("IllConditionedFit", msg) {}
};

struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& msg)
        : Error("QuadratureFailure", msg) {}
};

struct TruncationInsufficient : Error {
    explicit TruncationInsufficient(const std::string& msg)
        : Error("TruncationInsufficient", msg) {}
};

struct FitWindowTooShort : Error {
    explicit FitWindowTooShort(const std::string& msg)
        : Error("FitWindowTooShort", msg) {}
};

struct NoSignChange : Error {
    explicit NoSignChange(const std::string& msg)
        : Error("NoSignChange", msg) {}
};

struct DegenerateBalance : Error {
    explicit DegenerateBalance(const std::string& msg)
        : Error("DegenerateBalance", msg) {}
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg)
        : Error("InvalidInput", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg)
        : Error("ParseError", msg) {}
};

}  // namespace dce
