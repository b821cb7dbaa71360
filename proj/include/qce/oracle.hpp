#pragma once

// Brute-force witnesses for the closed-form evolution: each excitation
// manifold's 4x4 Hamiltonian is built explicitly and propagated either by
// exact eigen-decomposition or by fixed-step RK4.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qce/dynamics.hpp"

namespace qce {

/// Real symmetric tridiagonal block on (|e1e2,n-1>, |e1g2,n>, |g1e2,n>, |g1g2,n+1>)
/// with off-diagonals (a_n, lambda, b_n). For n = 0 the first row and column
/// vanish because |e1e2,-1> does not exist.
struct ManifoldHamiltonian {
    std::size_t n = 0;
    std::array<std::array<double, 4>, 4> matrix{};

    [[nodiscard]] std::array<double, 3> off_diagonals() const
    {
        return {matrix[0][1], matrix[1][2], matrix[2][3]};
    }
};

ManifoldHamiltonian build_manifold_hamiltonian(std::size_t n, const CouplingParams& cpl);

/// Ascending eigenvalues of the block by cyclic Jacobi rotations.
std::array<double, 4> manifold_eigenvalues(const ManifoldHamiltonian& h);

struct NumericPropagation {
    std::vector<JointState> states;  // one per requested checkpoint
    double max_norm_drift = 0.0;     // max over manifolds of | |psi|^2 - 1 |, never corrected
};

/// RK4 with fixed step dt, integrating i d/dt psi = H psi manifold by manifold
/// from (0, 1, 0, 0). Requires dt * omega_+(n_max) < 0.1.
NumericPropagation propagate_numeric(const FockExpansion& expansion, const CouplingParams& cpl,
                                     std::span<const double> checkpoints, double dt);

JointState propagate_numeric(const FockExpansion& expansion, const CouplingParams& cpl, double t_end,
                             double dt);

/// Exact propagation via eigen-decomposition of each block.
JointState spectral_propagate(const FockExpansion& expansion, const CouplingParams& cpl, double t);

/// Max absolute component-wise deviation over all manifolds and channels
/// (amplitudes A_ij^(n) and the weights N gamma_n).
double compare_states(const JointState& a, const JointState& b);

struct ValidationReport {
    std::vector<double> checkpoints;
    double analytic_vs_spectral = 0.0;
    double analytic_vs_numeric = 0.0;
    double spectral_vs_numeric = 0.0;
    double numeric_norm_drift = 0.0;
    double max_deviation = 0.0;
    bool passed = false;
};

inline constexpr double kOracleTolerance = 1e-8;

/// Runs the three propagators against each other at every checkpoint.
ValidationReport validate_dynamics(const FockExpansion& expansion, const CouplingParams& cpl,
                                   std::span<const double> checkpoints, double stepper_dt,
                                   double tolerance = kOracleTolerance);

} // namespace qce
