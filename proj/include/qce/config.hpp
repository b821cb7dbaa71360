#pragma once

// Run configuration for the qce command-line tool.
//
// Sources, lowest to highest precedence: a `key = value` config file (`#`
// starts a comment), QCE_* environment variables (QCE_T_END for t-end, ...),
// then command-line flags.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qce/dynamics.hpp"
#include "qce/field_state.hpp"

namespace qce {

enum class Mode { Evolve, Stats, Sweep, Validate };
enum class OutputFormat { Csv, Json };
enum class SweepAxis { Theta, C };

std::string_view to_string(Mode mode);
std::string_view to_string(SweepAxis axis);

struct GridSpec {
    double t_end = 100.0;
    double dt = 0.05;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::Theta;
    std::vector<double> values;
};

struct OutputSpec {
    std::string path;          // empty: standard output
    OutputFormat format = OutputFormat::Csv;
    std::string summary_path;  // sweep fit summary; empty: derived from path
};

struct RunConfig {
    Mode mode = Mode::Evolve;
    FieldParams field;
    CouplingParams coupling;
    GridSpec grid;
    std::optional<SweepSpec> sweep;
    OutputSpec output;
    double statistics_phi = 0.0;
    double tail_tolerance = kDefaultTailTolerance;
    std::size_t fock_cap = kDefaultFockCap;
    double oracle_dt = 2e-4;
    unsigned threads = 0;
};

/// Returns the value of an environment variable, or nullopt.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup system_env();
EnvLookup no_env();

/// Accepts decimal radians and multiples of pi: `pi`, `-pi`, `pi/2`, `3pi/4`, `0.5*pi`.
double parse_angle(std::string_view text);

/// Parses `<mode> [flags...]`. A `--config PATH` flag, or `file`, supplies
/// defaults that flags override.
RunConfig parse_config(std::span<const std::string> args,
                       const std::optional<std::filesystem::path>& file = std::nullopt,
                       const EnvLookup& env = system_env());

std::string usage();

} // namespace qce
