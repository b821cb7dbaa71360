#pragma once

// Small dense Hermitian eigenproblems (4x4 and 8x8) solved by cyclic Jacobi
// rotations. Absolute eigenvalue accuracy is of order eps * ||A||.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>

#include "qce/errors.hpp"

namespace qce::linalg {

using cplx = std::complex<double>;

template <std::size_t N>
using Matrix = std::array<std::array<cplx, N>, N>;

template <std::size_t N>
struct HermitianEigen {
    std::array<double, N> values{};  // ascending
    Matrix<N> vectors{};             // column k is the eigenvector of values[k]
};

template <std::size_t N>
Matrix<N> identity()
{
    Matrix<N> m{};
    for (std::size_t i = 0; i < N; ++i) m[i][i] = 1.0;
    return m;
}

template <std::size_t N>
double off_diagonal_norm(const Matrix<N>& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (i != j) s += std::norm(a[i][j]);
    return std::sqrt(s);
}

template <std::size_t N>
double frobenius_norm(const Matrix<N>& a)
{
    double s = 0.0;
    for (const auto& row : a)
        for (const auto& x : row) s += std::norm(x);
    return std::sqrt(s);
}

/// Eigen-decomposition of a Hermitian matrix. Only the upper triangle's
/// Hermitian part is meaningful; the input is symmetrised first.
template <std::size_t N>
HermitianEigen<N> jacobi_eigen(Matrix<N> a, int max_sweeps = 64)
{
    for (std::size_t i = 0; i < N; ++i) {
        a[i][i] = a[i][i].real();
        for (std::size_t j = i + 1; j < N; ++j) {
            const cplx h = 0.5 * (a[i][j] + std::conj(a[j][i]));
            a[i][j] = h;
            a[j][i] = std::conj(h);
        }
    }
    Matrix<N> v = identity<N>();
    const double scale = frobenius_norm(a);
    const double target = scale * 1e-17;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= target) break;
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double mag = std::abs(a[p][q]);
                if (mag == 0.0) continue;
                const cplx phase = a[p][q] / mag;
                const double app = a[p][p].real();
                const double aqq = a[q][q].real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary acting on the (p, q) plane: V = diag(1, conj(phase)) * R
                const cplx vpp = c;
                const cplx vpq = s;
                const cplx vqp = -s * std::conj(phase);
                const cplx vqq = c * std::conj(phase);

                for (std::size_t k = 0; k < N; ++k) {
                    const cplx akp = a[k][p];
                    const cplx akq = a[k][q];
                    a[k][p] = akp * vpp + akq * vqp;
                    a[k][q] = akp * vpq + akq * vqq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx apk = a[p][k];
                    const cplx aqk = a[q][k];
                    a[p][k] = std::conj(vpp) * apk + std::conj(vqp) * aqk;
                    a[q][k] = std::conj(vpq) * apk + std::conj(vqq) * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                a[p][p] = a[p][p].real();
                a[q][q] = a[q][q].real();

                for (std::size_t k = 0; k < N; ++k) {
                    const cplx vkp = v[k][p];
                    const cplx vkq = v[k][q];
                    v[k][p] = vkp * vpp + vkq * vqp;
                    v[k][q] = vkp * vpq + vkq * vqq;
                }
            }
        }
    }
    if (sweep == max_sweeps && off_diagonal_norm(a) > target * 1e3)
        throw Error(ErrorKind::EigenSolver, "Jacobi eigen-solver did not converge");

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i][i].real() < a[j][j].real(); });

    HermitianEigen<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = a[order[k]][order[k]].real();
        for (std::size_t i = 0; i < N; ++i) out.vectors[i][k] = v[i][order[k]];
    }
    return out;
}

} // namespace qce::linalg
