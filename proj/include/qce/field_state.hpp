#pragma once

// Initial state of the single-mode environment: a superposition of two
// squeezed coherent states c|alpha, xi> + e^{i phi} sqrt(1 - c^2) |-alpha, xi>,
// expanded in the Fock basis.

#include <complex>
#include <cstddef>
#include <vector>

namespace qce {

using cplx = std::complex<double>;

/// Preparation parameters of the field. The squeezing parameter is
/// xi = r e^{i theta}.
struct FieldParams {
    cplx alpha{0.0, 0.0};
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double c = 0.0;

    [[nodiscard]] double mu() const;
    [[nodiscard]] cplx nu() const;
    [[nodiscard]] cplx xi() const;
};

/// Throws Error(Range) when c is outside [0, 1], r < 0, or a value is not finite.
void validate(const FieldParams& params);

struct SqueezingFactors {
    double mu;
    cplx nu;
};

SqueezingFactors squeezing_factors(double r, double theta);

/// Truncated expansion; the physical state is norm_constant * sum_n coeffs[n] |n>.
struct FockExpansion {
    std::vector<cplx> coeffs;
    double norm_constant = 1.0;
    std::size_t n_max = 0;
    double tail_mass = 0.0;

    /// N * gamma_n, zero beyond the truncation.
    [[nodiscard]] cplx weight(std::size_t n) const
    {
        return n < coeffs.size() ? norm_constant * coeffs[n] : cplx{};
    }
    [[nodiscard]] std::size_t size() const { return coeffs.size(); }
};

struct FieldStatistics {
    double mean_n = 0.0;
    double mean_n_sq = 0.0;
    double mandel_q = 0.0;
    double var_x1 = 0.0;
    double var_x2 = 0.0;
};

inline constexpr double kDefaultTailTolerance = 1e-12;
inline constexpr std::size_t kDefaultFockCap = 512;

/// Hermite-polynomial closed form, evaluated with a
/// running log-scale. Exists to cross-check the recurrence.
std::vector<cplx> fock_coefficients_closed_form(cplx alpha, double r, double theta,
                                                std::size_t n_max);

/// Production evaluator: C_0 from the closed form, then the eigenvalue
/// recurrence mu sqrt(n+1) C_{n+1} = (mu alpha + nu alpha*) C_n - nu sqrt(n) C_{n-1}.
std::vector<cplx> fock_coefficients_recurrence(cplx alpha, double r, double theta,
                                               std::size_t n_max);

/// r = 0 limit: e^{-|alpha|^2/2} alpha^n / sqrt(n!).
std::vector<cplx> coherent_coefficients(cplx alpha, std::size_t n_max);

double normalization_constant(const FieldParams& params);

FockExpansion cat_expansion(const FieldParams& params,
                            double tol = kDefaultTailTolerance,
                            std::size_t n_cap = kDefaultFockCap);

FieldStatistics field_statistics(const FockExpansion& expansion);

/// Displayed closed form for <n>, evaluated as printed.
double closed_form_mean_n(const FieldParams& params);

} // namespace qce
