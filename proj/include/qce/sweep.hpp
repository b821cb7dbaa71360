#pragma once

// Parameter sweeps over the squeezing phase theta and the superposition
// weight c, relating the long-time average of the qubit-1 linear entropy to
// the photon-number (Mandel Q) and quadrature noise of the initial field.

#include <cstddef>
#include <span>
#include <vector>

#include "qce/dynamics.hpp"
#include "qce/field_state.hpp"

namespace qce {

struct SweepPoint {
    double theta = 0.0;
    double c = 0.0;
    double mandel_q = 0.0;
    double var_x1 = 0.0;
    double s_bar_long = 0.0;
};

struct SweepOptions {
    /// Relative phase used for the static statistics (Q, var_x1). The
    /// dynamics always use the phase of the base parameters.
    double statistics_phi = 0.0;
    double tail_tolerance = kDefaultTailTolerance;
    std::size_t fock_cap = kDefaultFockCap;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

inline constexpr double kDefaultLongTime = 2000.0;
inline constexpr double kDefaultSweepDt = 0.1;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double residual_max = 0.0;
};

/// Cumulative average of the linear entropy on uniform_grid(t_end, dt).
std::vector<double> cumulative_entropy(const FockExpansion& expansion, const CouplingParams& cpl,
                                       double t_end, double dt);

SweepPoint sweep_point(const FieldParams& params, const CouplingParams& cpl, double t_long, double dt,
                       const SweepOptions& options = {});

std::vector<SweepPoint> theta_sweep(const FieldParams& base, const CouplingParams& cpl,
                                    std::span<const double> thetas, double t_long = kDefaultLongTime,
                                    double dt = kDefaultSweepDt, const SweepOptions& options = {});

std::vector<SweepPoint> c_sweep(const FieldParams& base, const CouplingParams& cpl, std::span<const double> cs,
                                double t_long = kDefaultLongTime, double dt = kDefaultSweepDt,
                                const SweepOptions& options = {});

/// n equally spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Ordinary least squares y = slope x + intercept. When all ys are equal the
/// fit is exact by convention: slope 0, r_squared 1.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

} // namespace qce
