#include "qce/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qce/errors.hpp"
#include "qce/linalg.hpp"

namespace qce {

namespace {

using Vec4 = std::array<cplx, 4>;

// -i H psi for the tridiagonal block.
Vec4 apply_generator(const std::array<double, 3>& off, const Vec4& psi)
{
    const cplx mi(0.0, -1.0);
    return {mi * (off[0] * psi[1]),
            mi * (off[0] * psi[0] + off[1] * psi[2]),
            mi * (off[1] * psi[1] + off[2] * psi[3]),
            mi * (off[2] * psi[2])};
}

Vec4 axpy(const Vec4& x, double h, const Vec4& k)
{
    return {x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2], x[3] + h * k[3]};
}

void rk4_step(const std::array<double, 3>& off, Vec4& psi, double h)
{
    const Vec4 k1 = apply_generator(off, psi);
    const Vec4 k2 = apply_generator(off, axpy(psi, 0.5 * h, k1));
    const Vec4 k3 = apply_generator(off, axpy(psi, 0.5 * h, k2));
    const Vec4 k4 = apply_generator(off, axpy(psi, h, k3));
    for (std::size_t i = 0; i < 4; ++i) psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

ManifoldAmplitudes from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

linalg::Matrix<4> as_complex(const ManifoldHamiltonian& h)
{
    linalg::Matrix<4> m{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m[i][j] = h.matrix[i][j];
    return m;
}

} // namespace

ManifoldHamiltonian build_manifold_hamiltonian(std::size_t n, const CouplingParams& cpl)
{
    const double nd = static_cast<double>(n);
    const double a = cpl.g * std::sqrt(nd);
    const double b = cpl.g * std::sqrt(nd + 1.0);
    ManifoldHamiltonian h;
    h.n = n;
    h.matrix[0][1] = h.matrix[1][0] = a;
    h.matrix[1][2] = h.matrix[2][1] = cpl.lambda;
    h.matrix[2][3] = h.matrix[3][2] = b;
    return h;
}

std::array<double, 4> manifold_eigenvalues(const ManifoldHamiltonian& h)
{
    return linalg::jacobi_eigen<4>(as_complex(h)).values;
}

NumericPropagation propagate_numeric(const FockExpansion& expansion, const CouplingParams& cpl,
                                     std::span<const double> checkpoints, double dt)
{
    validate(cpl);
    if (!(dt > 0.0)) throw Error(ErrorKind::StepSize, "step size must be > 0");
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        if (!(checkpoints[k] >= 0.0) || (k > 0 && checkpoints[k] < checkpoints[k - 1]))
            throw Error(ErrorKind::Range, "checkpoints must be non-negative and non-decreasing");
    }
    const std::size_t size = expansion.size();
    const double fastest = manifold_spectrum(size == 0 ? 0 : size - 1, cpl).omega_plus;
    if (dt * fastest >= 0.1) {
        std::ostringstream os;
        os << "dt * omega_+ = " << dt * fastest << " violates dt * omega_+(n_max) < 0.1";
        throw Error(ErrorKind::StepSize, os.str());
    }

    NumericPropagation out;
    out.states.resize(checkpoints.size());
    const auto weights = joint_weights(expansion);
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        out.states[k].time = checkpoints[k];
        out.states[k].weights = weights;
        out.states[k].tail_mass = expansion.tail_mass;
        out.states[k].amps.resize(size);
    }

    for (std::size_t n = 0; n < size; ++n) {
        const auto off = build_manifold_hamiltonian(n, cpl).off_diagonals();
        Vec4 psi{0.0, 1.0, 0.0, 0.0};
        double t = 0.0;
        for (std::size_t k = 0; k < checkpoints.size(); ++k) {
            const double span = checkpoints[k] - t;
            const auto steps = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
            for (std::size_t s = 0; s < steps; ++s) rk4_step(off, psi, dt);
            const double rest = span - static_cast<double>(steps) * dt;
            if (rest > 1e-14) rk4_step(off, psi, rest);
            t = checkpoints[k];
            out.states[k].amps[n] = from_vec(psi);
            const double drift = std::abs(out.states[k].amps[n].norm_sq() - 1.0);
            out.max_norm_drift = std::max(out.max_norm_drift, drift);
        }
    }
    return out;
}

JointState propagate_numeric(const FockExpansion& expansion, const CouplingParams& cpl, double t_end, double dt)
{
    const std::array<double, 1> checkpoint{t_end};
    return std::move(propagate_numeric(expansion, cpl, checkpoint, dt).states.front());
}

JointState spectral_propagate(const FockExpansion& expansion, const CouplingParams& cpl, double t)
{
    validate(cpl);
    JointState s;
    s.time = t;
    s.weights = joint_weights(expansion);
    s.tail_mass = expansion.tail_mass;
    s.amps.resize(s.weights.size());
    for (std::size_t n = 0; n < s.weights.size(); ++n) {
        linalg::HermitianEigen<4> eig;
        try {
            eig = linalg::jacobi_eigen<4>(as_complex(build_manifold_hamiltonian(n, cpl)));
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " (manifold " << n << ")";
            throw Error(e.kind(), os.str());
        }
        Vec4 psi{};
        for (std::size_t k = 0; k < 4; ++k) {
            // overlap of eigenvector k with the initial ket |e1 g2, n>
            const cplx coeff = std::polar(1.0, -eig.values[k] * t) * std::conj(eig.vectors[1][k]);
            for (std::size_t i = 0; i < 4; ++i) psi[i] += eig.vectors[i][k] * coeff;
        }
        s.amps[n] = from_vec(psi);
    }
    return s;
}

double compare_states(const JointState& a, const JointState& b)
{
    if (a.size() != b.size() || a.amps.size() != b.amps.size())
        throw Error(ErrorKind::ShapeMismatch, "joint states have different truncations");
    if (std::abs(a.time - b.time) > 1e-12 * std::max(1.0, std::abs(a.time)))
        throw Error(ErrorKind::ShapeMismatch, "joint states are at different times");
    double worst = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        worst = std::max(worst, std::abs(a.weights[n] - b.weights[n]));
        const auto x = a.amps[n].as_array();
        const auto y = b.amps[n].as_array();
        for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

ValidationReport validate_dynamics(const FockExpansion& expansion, const CouplingParams& cpl,
                                   std::span<const double> checkpoints, double stepper_dt, double tolerance)
{
    ValidationReport report;
    report.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    const NumericPropagation numeric = propagate_numeric(expansion, cpl, checkpoints, stepper_dt);
    report.numeric_norm_drift = numeric.max_norm_drift;
    const Evolver evolver(expansion, cpl);
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const JointState analytic = evolver.at(checkpoints[k]);
        const JointState spectral = spectral_propagate(expansion, cpl, checkpoints[k]);
        report.analytic_vs_spectral = std::max(report.analytic_vs_spectral, compare_states(analytic, spectral));
        report.analytic_vs_numeric = std::max(report.analytic_vs_numeric, compare_states(analytic, numeric.states[k]));
        report.spectral_vs_numeric = std::max(report.spectral_vs_numeric, compare_states(spectral, numeric.states[k]));
    }
    report.max_deviation =
        std::max({report.analytic_vs_spectral, report.analytic_vs_numeric, report.spectral_vs_numeric});
    report.passed = report.max_deviation < tolerance;
    return report;
}

} // namespace qce
