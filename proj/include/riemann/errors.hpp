#pragma once

#include <stdexcept>
#include <string>

namespace riemann {

enum class ErrorKind {
    unsupported_form,
    projection_failure,
    near_singularity,
    standoff_violation,
    continuation_failure,
    resolution_failure,
    quadrature_failure,
    path_error,
    wrong_sheet,
    invalid_input,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::unsupported_form: return "unsupported-form";
    case ErrorKind::projection_failure: return "projection-failure";
    case ErrorKind::near_singularity: return "near-singularity";
    case ErrorKind::standoff_violation: return "standoff-violation";
    case ErrorKind::continuation_failure: return "continuation-failure";
    case ErrorKind::resolution_failure: return "resolution-failure";
    case ErrorKind::quadrature_failure: return "quadrature-failure";
    case ErrorKind::path_error: return "path-error";
    case ErrorKind::wrong_sheet: return "wrong-sheet";
    case ErrorKind::invalid_input: return "invalid-input";
    }
    return "unknown";
}

/// Base exception for every failure raised by the library. `value` carries the
/// kind-specific diagnostic: last residual for projection failures, progress
/// fraction for continuation failures, depth for quadrature failures.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, double value = 0.0)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), value_(value), detail_(what)
    {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    double value() const noexcept { return value_; }

private:
    ErrorKind kind_;
    double value_;
    std::string detail_;
};

} // namespace riemann
