#pragma once

// Closed-form interaction-picture evolution of the two qubits plus field.
// The Hamiltonian conserves the excitation number, so the dynamics splits
// into independent 4-dimensional manifolds labelled by n:
//   { |e1 e2, n-1>, |e1 g2, n>, |g1 e2, n>, |g1 g2, n+1> }.

#include <array>
#include <cstddef>
#include <vector>

#include "qce/field_state.hpp"

namespace qce {

/// Qubit-qubit coupling lambda and qubit-field coupling g, in units of
/// inverse time (the CLI works in units where g = 1).
struct CouplingParams {
    double lambda = 1.0;
    double g = 1.0;
};

void validate(const CouplingParams& cpl);

struct ManifoldSpectrum {
    std::size_t n = 0;
    double a_n = 0.0;          // g sqrt(n)
    double b_n = 0.0;          // g sqrt(n + 1)
    double r_n = 0.0;          // sqrt((g^2 + lambda^2)^2 + 4 n g^2 lambda^2)
    double omega_plus = 0.0;
    double omega_minus = 0.0;
};

ManifoldSpectrum manifold_spectrum(std::size_t n, const CouplingParams& cpl);

/// Amplitudes on the manifold basis, in the order (A12, A22, A23, A24).
struct ManifoldAmplitudes {
    cplx a12{};
    cplx a22{};
    cplx a23{};
    cplx a24{};

    [[nodiscard]] std::array<cplx, 4> as_array() const { return {a12, a22, a23, a24}; }
    [[nodiscard]] double norm_sq() const
    {
        return std::norm(a12) + std::norm(a22) + std::norm(a23) + std::norm(a24);
    }
};

ManifoldAmplitudes manifold_amplitudes(const ManifoldSpectrum& spec, const CouplingParams& cpl, double t);

/// |Psi(t)>_I = sum_n w_n [A12^(n)|e1e2,n-1> + A22^(n)|e1g2,n> + A23^(n)|g1e2,n> + A24^(n)|g1g2,n+1>]
/// with w_n = N gamma_n.
struct JointState {
    double time = 0.0;
    std::vector<cplx> weights;
    std::vector<ManifoldAmplitudes> amps;
    double tail_mass = 0.0;

    [[nodiscard]] std::size_t size() const { return weights.size(); }
    [[nodiscard]] cplx weight(std::size_t n) const { return n < weights.size() ? weights[n] : cplx{}; }
    [[nodiscard]] ManifoldAmplitudes amp(std::size_t n) const
    {
        return n < amps.size() ? amps[n] : ManifoldAmplitudes{};
    }
    [[nodiscard]] double norm_sq() const;
};

/// Weights N gamma_n copied out of an expansion.
std::vector<cplx> joint_weights(const FockExpansion& expansion);

/// Initial condition |e1, g2> (x) |psi_f(0)>.
JointState initial_state(const FockExpansion& expansion);

JointState evolve_state(const FockExpansion& expansion, const CouplingParams& cpl, double t);

/// Same as evolve_state but reuses precomputed spectra and weights; used by
/// the time-series driver.
class Evolver {
public:
    Evolver(const FockExpansion& expansion, const CouplingParams& cpl);

    [[nodiscard]] JointState at(double t) const;
    [[nodiscard]] const std::vector<ManifoldSpectrum>& spectra() const { return spectra_; }

private:
    CouplingParams cpl_;
    std::vector<cplx> weights_;
    std::vector<ManifoldSpectrum> spectra_;
    double tail_mass_;
};

} // namespace qce
