#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qce {

enum class ErrorKind {
    SqueezingDegenerate,
    DegenerateState,
    Truncation,
    NumericalFault,
    EigenSolver,
    StepSize,
    ShapeMismatch,
    DegenerateAbscissa,
    Parse,
    Range,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can emit a structured error record.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::SqueezingDegenerate: return "squeezing_degenerate";
    case ErrorKind::DegenerateState: return "degenerate_state";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::NumericalFault: return "numerical_fault";
    case ErrorKind::EigenSolver: return "eigen_solver";
    case ErrorKind::StepSize: return "step_size";
    case ErrorKind::ShapeMismatch: return "shape_mismatch";
    case ErrorKind::DegenerateAbscissa: return "degenerate_abscissa";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Range: return "range";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace qce
