#pragma once

// Reduced qubit states and the observables computed from them.
//
// Two-qubit basis ordering is fixed as (|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>),
// indices 0..3. In this ordering sigma_y (x) sigma_y is the anti-diagonal
// matrix with entries (-1, +1, +1, -1) read from the top-right corner.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qce/dynamics.hpp"
#include "qce/linalg.hpp"

namespace qce {

enum BasisIndex : std::size_t { kEE = 0, kEG = 1, kGE = 2, kGG = 3 };

struct TwoQubitDensity {
    linalg::Matrix<4> m{};

    [[nodiscard]] cplx operator()(std::size_t i, std::size_t j) const { return m[i][j]; }
    [[nodiscard]] double trace() const { return m[0][0].real() + m[1][1].real() + m[2][2].real() + m[3][3].real(); }
};

/// Qubit 1 reduced density; rho_ge is conj(rho_eg).
struct QubitDensity {
    double rho_ee = 1.0;
    double rho_gg = 0.0;
    cplx rho_eg{};
};

struct MetricsSample {
    double time = 0.0;
    double entropy = 0.0;
    double inversion = 0.0;
    double concurrence = 0.0;
    double coherence_l1 = 0.0;
};

struct TimeSeries {
    std::vector<double> grid;
    std::vector<MetricsSample> samples;
    std::vector<double> cumulative_entropy;
};

TwoQubitDensity two_qubit_density(const JointState& state);

/// Direct sums for rho_gg, rho_ee and rho_eg.
QubitDensity qubit1_density(const JointState& state);

QubitDensity partial_trace_qubit2(const TwoQubitDensity& rho);

/// Density built from explicit pure-state amplitudes in the fixed basis.
TwoQubitDensity pure_density(const std::array<cplx, 4>& psi);

double atomic_inversion(const QubitDensity& q);
double linear_entropy(const QubitDensity& q);

/// Eigenvalues of rho (sy(x)sy) rho* (sy(x)sy), descending, clamped at 0.
std::array<double, 4> wootters_eigenvalues(const TwoQubitDensity& rho);
double concurrence(const TwoQubitDensity& rho);

double l1_coherence(const TwoQubitDensity& rho);

/// The six upper-triangle sums evaluated straight from the joint state,
/// times two.
double l1_coherence_six_sum(const JointState& state);

MetricsSample metrics_sample(const JointState& state);

/// Times t_k = k dt for k = 0..K with K = round(t_end / dt).
std::vector<double> uniform_grid(double t_end, double dt);

/// Running trapezoidal average (1/t_k) int_0^{t_k} f dt; the first entry is f(0).
std::vector<double> cumulative_average(std::span<const double> grid, std::span<const double> values);

TimeSeries metrics_series(const FockExpansion& expansion, const CouplingParams& cpl,
                          std::span<const double> grid);

/// Entropy-only series, cheaper than metrics_series; used by the sweeps.
std::vector<double> entropy_series(const FockExpansion& expansion, const CouplingParams& cpl,
                                   std::span<const double> grid);

} // namespace qce
