#include "qce/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "qce/errors.hpp"

namespace qce {

namespace {

constexpr double kOmegaMinusZero = 1e-12;
constexpr double kUnitarityFault = 1e-8;

} // namespace

void validate(const CouplingParams& cpl)
{
    if (!std::isfinite(cpl.lambda) || !std::isfinite(cpl.g))
        throw Error(ErrorKind::Range, "couplings must be finite");
    if (cpl.lambda < 0.0) throw Error(ErrorKind::Range, "lambda violates lambda >= 0");
    if (cpl.g < 0.0) throw Error(ErrorKind::Range, "g violates g >= 0");
}

ManifoldSpectrum manifold_spectrum(std::size_t n, const CouplingParams& cpl)
{
    const double g2 = cpl.g * cpl.g;
    const double l2 = cpl.lambda * cpl.lambda;
    const double nd = static_cast<double>(n);

    ManifoldSpectrum s;
    s.n = n;
    s.a_n = cpl.g * std::sqrt(nd);
    s.b_n = cpl.g * std::sqrt(nd + 1.0);
    s.r_n = std::sqrt((g2 + l2) * (g2 + l2) + 4.0 * nd * g2 * l2);
    const double sum = (2.0 * nd + 1.0) * g2 + l2;
    s.omega_plus = std::sqrt(0.5 * (sum + s.r_n));
    // omega_-^2 = (sum - r_n)/2 rewritten as 2 n (n+1) g^4 / (sum + r_n), which
    // is free of cancellation and exactly zero for n = 0 or g = 0.
    const double denom = sum + s.r_n;
    const double minus_sq = denom > 0.0 ? 2.0 * nd * (nd + 1.0) * g2 * g2 / denom : 0.0;
    s.omega_minus = std::sqrt(std::max(0.0, minus_sq));
    return s;
}

ManifoldAmplitudes manifold_amplitudes(const ManifoldSpectrum& spec, const CouplingParams& cpl, double t)
{
    if (spec.r_n == 0.0) return {0.0, 1.0, 0.0, 0.0};  // g = lambda = 0

    const double g2 = cpl.g * cpl.g;
    const double l2 = cpl.lambda * cpl.lambda;
    // plus_gap = omega_+^2 - b_n^2, minus_gap = b_n^2 - omega_-^2; they sum to r_n.
    const double plus_gap = 0.5 * (spec.r_n + l2 - g2);
    const double minus_gap = 0.5 * (spec.r_n - l2 + g2);

    const double wp = spec.omega_plus;
    const double wm = spec.omega_minus;
    const double sp = std::sin(wp * t);
    const double cp = std::cos(wp * t);
    const double sm = std::sin(wm * t);
    const double cm = std::cos(wm * t);
    const double sinc_minus = wm < kOmegaMinusZero ? t : sm / wm;
    const double inv_r = 1.0 / spec.r_n;

    ManifoldAmplitudes a;
    a.a12 = cplx(0.0, spec.a_n * inv_r * (-plus_gap / wp * sp - minus_gap * sinc_minus));
    if (spec.a_n == 0.0) a.a12 = 0.0;
    a.a22 = cm + plus_gap * inv_r * (cp - cm);
    a.a23 = cplx(0.0, -cpl.lambda * inv_r * (wp * sp - wm * sm));
    a.a24 = cpl.lambda * spec.b_n * inv_r * (cp - cm);
    return a;
}

double JointState::norm_sq() const
{
    double s = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) s += std::norm(weights[n]) * amps[n].norm_sq();
    return s;
}

std::vector<cplx> joint_weights(const FockExpansion& expansion)
{
    std::vector<cplx> w(expansion.size());
    for (std::size_t n = 0; n < w.size(); ++n) w[n] = expansion.weight(n);
    return w;
}

JointState initial_state(const FockExpansion& expansion)
{
    JointState s;
    s.time = 0.0;
    s.weights = joint_weights(expansion);
    s.amps.assign(s.weights.size(), ManifoldAmplitudes{0.0, 1.0, 0.0, 0.0});
    s.tail_mass = expansion.tail_mass;
    return s;
}

Evolver::Evolver(const FockExpansion& expansion, const CouplingParams& cpl)
    : cpl_(cpl), weights_(joint_weights(expansion)), tail_mass_(expansion.tail_mass)
{
    validate(cpl);
    spectra_.reserve(weights_.size());
    for (std::size_t n = 0; n < weights_.size(); ++n) spectra_.push_back(manifold_spectrum(n, cpl));
}

JointState Evolver::at(double t) const
{
    if (!(t >= 0.0)) throw Error(ErrorKind::Range, "evolution time must be >= 0");
    JointState s;
    s.time = t;
    s.weights = weights_;
    s.tail_mass = tail_mass_;
    s.amps.resize(weights_.size());
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        s.amps[n] = manifold_amplitudes(spectra_[n], cpl_, t);
        const double drift = std::abs(s.amps[n].norm_sq() - 1.0);
        if (drift > kUnitarityFault) {
            std::ostringstream os;
            os << "manifold " << n << " lost unitarity by " << drift << " at t = " << t;
            throw Error(ErrorKind::NumericalFault, os.str());
        }
    }
    return s;
}

JointState evolve_state(const FockExpansion& expansion, const CouplingParams& cpl, double t)
{
    return Evolver(expansion, cpl).at(t);
}

} // namespace qce
