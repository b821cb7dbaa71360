#include "qce/field_state.hpp"

#include <cmath>
#include <sstream>

#include "qce/errors.hpp"

namespace qce {

namespace {

constexpr double kRescaleHigh = 1e100;
constexpr double kRescaleLow = 1e-100;

void require_squeezed(double r)
{
    if (!(r > 0.0))
        throw Error(ErrorKind::SqueezingDegenerate,
                    "squeezed-state coefficients need r > 0; use the coherent limit at r = 0");
}

// log|C_0| and arg C_0 of the squeezed coherent state, i.e. the n = 0 term of
// the closed form (H_0 = 1).
struct LogValue {
    double log_mag;
    double phase;
};

LogValue ground_coefficient(cplx alpha, double r, double theta)
{
    const cplx exponent = -0.5 * std::norm(alpha) -
                          0.5 * std::conj(alpha) * std::conj(alpha) *
                              std::polar(1.0, theta) * std::tanh(r);
    return {exponent.real() - 0.5 * std::log(std::cosh(r)), exponent.imag()};
}

} // namespace

double FieldParams::mu() const { return std::cosh(r); }
cplx FieldParams::nu() const { return std::polar(std::sinh(r), theta); }
cplx FieldParams::xi() const { return std::polar(r, theta); }

void validate(const FieldParams& params)
{
    const bool finite = std::isfinite(params.alpha.real()) && std::isfinite(params.alpha.imag()) &&
                        std::isfinite(params.r) && std::isfinite(params.theta) &&
                        std::isfinite(params.phi) && std::isfinite(params.c);
    if (!finite) throw Error(ErrorKind::Range, "field parameters must be finite");
    if (params.c < 0.0 || params.c > 1.0) {
        std::ostringstream os;
        os << "c = " << params.c << " violates 0 <= c <= 1";
        throw Error(ErrorKind::Range, os.str());
    }
    if (params.r < 0.0) {
        std::ostringstream os;
        os << "r = " << params.r << " violates r >= 0";
        throw Error(ErrorKind::Range, os.str());
    }
}

SqueezingFactors squeezing_factors(double r, double theta)
{
    return {std::cosh(r), std::polar(std::sinh(r), theta)};
}

std::vector<cplx> fock_coefficients_closed_form(cplx alpha, double r, double theta,
                                                std::size_t n_max)
{
    require_squeezed(r);
    const double mu = std::cosh(r);
    const double sh = std::sinh(r);
    // sqrt(nu) = e^{i theta/2} sqrt(sinh r) is used consistently in both the
    // prefactor (nu / 2mu)^{n/2} and the Hermite argument, so the branch
    // choice cancels.
    const cplx sqrt_nu = std::polar(std::sqrt(sh), 0.5 * theta);
    const cplx beta = alpha * mu + std::conj(alpha) * std::polar(sh, theta);
    const cplx z = beta / (std::sqrt(2.0 * mu) * sqrt_nu);
    const double log_q = 0.5 * std::log(sh / (2.0 * mu));
    const LogValue c0 = ground_coefficient(alpha, r, theta);

    std::vector<cplx> out(n_max + 1);
    // Hermite values h_{n-1}, h_n carried with a shared log-scale.
    cplx h_prev{};
    cplx h = 1.0;
    double log_scale = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (n > 0) {
            const cplx next = 2.0 * z * h - 2.0 * static_cast<double>(n - 1) * h_prev;
            h_prev = h;
            h = next;
        }
        const double mag = std::abs(h);
        if (mag > kRescaleHigh || (mag > 0.0 && mag < kRescaleLow)) {
            h /= mag;
            h_prev /= mag;
            log_scale += std::log(mag);
        }
        const double nd = static_cast<double>(n);
        const double log_mag = c0.log_mag + log_scale + nd * log_q - 0.5 * std::lgamma(nd + 1.0);
        const double phase = c0.phase + 0.5 * nd * theta;
        out[n] = h * std::polar(std::exp(log_mag), phase);
    }
    return out;
}

std::vector<cplx> fock_coefficients_recurrence(cplx alpha, double r, double theta,
                                               std::size_t n_max)
{
    require_squeezed(r);
    const double mu = std::cosh(r);
    const cplx nu = std::polar(std::sinh(r), theta);
    const cplx beta = mu * alpha + nu * std::conj(alpha);
    const LogValue c0 = ground_coefficient(alpha, r, theta);

    std::vector<cplx> out(n_max + 1);
    // Scaled iterates s_n = C_n / exp(log_scale).
    cplx s_prev{};
    cplx s = std::polar(1.0, c0.phase);
    double log_scale = c0.log_mag;
    out[0] = s * std::exp(log_scale);
    for (std::size_t n = 0; n < n_max; ++n) {
        const double nd = static_cast<double>(n);
        const cplx next = (beta * s - nu * std::sqrt(nd) * s_prev) / (mu * std::sqrt(nd + 1.0));
        s_prev = s;
        s = next;
        const double mag = std::abs(s);
        if (mag > kRescaleHigh || (mag > 0.0 && mag < kRescaleLow)) {
            s /= mag;
            s_prev /= mag;
            log_scale += std::log(mag);
        }
        out[n + 1] = s * std::exp(log_scale);
    }
    return out;
}

std::vector<cplx> coherent_coefficients(cplx alpha, std::size_t n_max)
{
    std::vector<cplx> out(n_max + 1);
    const double amp = std::abs(alpha);
    out[0] = std::exp(-0.5 * amp * amp);
    if (amp == 0.0) return out;
    const double log_amp = std::log(amp);
    const double arg = std::arg(alpha);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        const double log_mag = -0.5 * amp * amp + nd * log_amp - 0.5 * std::lgamma(nd + 1.0);
        out[n] = std::polar(std::exp(log_mag), nd * arg);
    }
    return out;
}

double normalization_constant(const FieldParams& params)
{
    const cplx shifted = params.alpha * params.mu() + std::conj(params.alpha) * params.nu();
    const double overlap = std::exp(-2.0 * std::norm(shifted));
    const double bracket = 1.0 + 2.0 * params.c * std::sqrt(1.0 - params.c * params.c) *
                                     std::cos(params.phi) * overlap;
    if (bracket <= 1e-300)
        throw Error(ErrorKind::DegenerateState,
                    "the two superposed branches cancel (null superposition)");
    return 1.0 / std::sqrt(bracket);
}

FockExpansion cat_expansion(const FieldParams& params, double tol, std::size_t n_cap)
{
    validate(params);
    if (!(tol > 0.0)) throw Error(ErrorKind::Range, "tail tolerance must be > 0");
    if (n_cap < 1) throw Error(ErrorKind::Range, "Fock cap must be >= 1");

    const double norm = normalization_constant(params);
    const bool coherent = params.r == 0.0;
    const auto plus = coherent ? coherent_coefficients(params.alpha, n_cap)
                               : fock_coefficients_recurrence(params.alpha, params.r, params.theta, n_cap);
    const auto minus = coherent ? coherent_coefficients(-params.alpha, n_cap)
                                : fock_coefficients_recurrence(-params.alpha, params.r, params.theta, n_cap);

    const cplx minus_weight = std::polar(std::sqrt(1.0 - params.c * params.c), params.phi);
    std::vector<cplx> gamma(n_cap + 1);
    for (std::size_t n = 0; n <= n_cap; ++n) gamma[n] = params.c * plus[n] + minus_weight * minus[n];

    // suffix[n] = N^2 sum_{k >= n} |gamma_k|^2 over the computed range
    std::vector<double> suffix(n_cap + 2, 0.0);
    for (std::size_t k = n_cap + 1; k-- > 0;) suffix[k] = suffix[k + 1] + norm * norm * std::norm(gamma[k]);
    const double total = suffix[0];
    if (total > 1.0 + 1e-9 || !std::isfinite(total))
        throw Error(ErrorKind::NumericalFault, "Fock expansion exceeds unit norm; normalization inconsistent");
    const double beyond_cap = std::max(0.0, 1.0 - total);

    std::size_t n_max = n_cap + 1;
    for (std::size_t n = 0; n <= n_cap; ++n) {
        if (suffix[n + 1] + beyond_cap < tol) {
            n_max = n;
            break;
        }
    }
    if (n_max > n_cap) {
        std::ostringstream os;
        os << "Fock cap " << n_cap << " reached with discarded probability "
           << suffix[n_cap + 1] + beyond_cap << " >= " << tol;
        throw Error(ErrorKind::Truncation, os.str());
    }

    FockExpansion out;
    out.coeffs.assign(gamma.begin(), gamma.begin() + static_cast<std::ptrdiff_t>(n_max) + 1);
    out.norm_constant = norm;
    out.n_max = n_max;
    out.tail_mass = suffix[n_max + 1] + beyond_cap;
    const double kept = total - suffix[n_max + 1];
    if (std::abs(kept - 1.0) > 1e-9)
        throw Error(ErrorKind::NumericalFault, "Fock expansion normalization inconsistent with direct summation");
    return out;
}

FieldStatistics field_statistics(const FockExpansion& expansion)
{
    double mean = 0.0;
    double mean_sq = 0.0;
    cplx a1{};
    cplx a2{};
    const std::size_t size = expansion.size();
    for (std::size_t n = 0; n < size; ++n) {
        const double nd = static_cast<double>(n);
        const cplx w = expansion.weight(n);
        const double p = std::norm(w);
        mean += nd * p;
        mean_sq += nd * nd * p;
        a1 += std::conj(w) * expansion.weight(n + 1) * std::sqrt(nd + 1.0);
        a2 += std::conj(w) * expansion.weight(n + 2) * std::sqrt((nd + 1.0) * (nd + 2.0));
    }
    FieldStatistics s;
    s.mean_n = mean;
    s.mean_n_sq = mean_sq;
    // Vacuum has no photon-number fluctuations; report the Poissonian value.
    s.mandel_q = mean > 0.0 ? (mean_sq - mean * mean - mean) / mean : 0.0;
    s.var_x1 = 0.25 * (1.0 + 2.0 * mean + 2.0 * a2.real() - 4.0 * a1.real() * a1.real());
    s.var_x2 = 0.25 * (1.0 + 2.0 * mean - 2.0 * a2.real() - 4.0 * a1.imag() * a1.imag());
    return s;
}

double closed_form_mean_n(const FieldParams& params)
{
    const double n2 = std::pow(normalization_constant(params), 2);
    const double a2 = std::norm(params.alpha);
    const double r = params.r;
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double cross = 2.0 * params.c * std::sqrt(1.0 - params.c * params.c) *
                         std::exp(-2.0 * a2 * (std::cosh(2.0 * r) + std::cos(params.theta) * std::sinh(2.0 * r))) *
                         (sh2 - a2 * std::cosh(4.0 * r) - a2 * std::cos(params.theta) * std::sinh(4.0 * r)) *
                         std::cos(params.phi);
    return n2 * (a2 + sh2 + cross);
}

} // namespace qce
