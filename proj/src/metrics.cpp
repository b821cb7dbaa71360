#include "qce/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qce/errors.hpp"

namespace qce {

namespace {

constexpr double kTraceFault = 1e-8;
constexpr double kConsistencyFault = 1e-10;
constexpr double kRangeSlack = 1e-10;

// Eigenvalues of rho below this (relative to the trace) are treated as exact
// zeros when factoring rho = W W^dagger.
constexpr double kRankCutoff = 1e-14;

double clamp_to_range(double value, double lo, double hi, const char* what)
{
    if (!std::isfinite(value) || value < lo - kRangeSlack || value > hi + kRangeSlack) {
        std::ostringstream os;
        os << what << " = " << value << " outside [" << lo << ", " << hi << "]";
        throw Error(ErrorKind::NumericalFault, os.str());
    }
    return std::clamp(value, lo, hi);
}

// Sign pattern of sigma_y (x) sigma_y on the anti-diagonal, row i -> column 3 - i.
constexpr std::array<double, 4> kSpinFlipSign{-1.0, 1.0, 1.0, -1.0};

} // namespace

TwoQubitDensity two_qubit_density(const JointState& state)
{
    const std::size_t size = state.size();
    linalg::Matrix<4> m{};
    for (std::size_t n = 0; n < size; ++n) {
        const cplx w0 = state.weight(n);
        const cplx w1 = state.weight(n + 1);
        const cplx w2 = state.weight(n + 2);
        const ManifoldAmplitudes a0 = state.amp(n);
        const ManifoldAmplitudes a1 = state.amp(n + 1);
        const ManifoldAmplitudes a2 = state.amp(n + 2);
        const double p0 = std::norm(w0);
        const cplx w10 = w1 * std::conj(w0);
        const cplx w20 = w2 * std::conj(w0);

        m[kEE][kEE] += std::norm(w1) * std::norm(a1.a12);
        m[kEE][kEG] += w10 * a1.a12 * std::conj(a0.a22);
        m[kEE][kGE] += w10 * a1.a12 * std::conj(a0.a23);
        m[kEE][kGG] += w20 * a2.a12 * std::conj(a0.a24);
        m[kEG][kEG] += p0 * std::norm(a0.a22);
        m[kEG][kGE] += p0 * a0.a22 * std::conj(a0.a23);
        m[kEG][kGG] += w10 * a1.a22 * std::conj(a0.a24);
        m[kGE][kGE] += p0 * std::norm(a0.a23);
        m[kGE][kGG] += w10 * a1.a23 * std::conj(a0.a24);
        m[kGG][kGG] += p0 * std::norm(a0.a24);
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < i; ++j) m[i][j] = std::conj(m[j][i]);

    TwoQubitDensity rho{m};
    const double drift = std::abs(rho.trace() - 1.0);
    if (drift > kTraceFault) {
        std::ostringstream os;
        os << "two-qubit density trace deviates from 1 by " << drift;
        throw Error(ErrorKind::NumericalFault, os.str());
    }
    return rho;
}

QubitDensity qubit1_density(const JointState& state)
{
    double gg = 0.0;
    double ee = 0.0;
    cplx eg{};
    const std::size_t size = state.size();
    for (std::size_t n = 0; n < size; ++n) {
        const double p = std::norm(state.weight(n));
        const ManifoldAmplitudes a = state.amp(n);
        const ManifoldAmplitudes next = state.amp(n + 1);
        gg += p * (std::norm(a.a23) + std::norm(a.a24));
        ee += std::norm(state.weight(n + 1)) * std::norm(next.a12) + p * std::norm(a.a22);
        eg += state.weight(n + 1) * std::conj(state.weight(n)) *
              (next.a12 * std::conj(a.a23) + next.a22 * std::conj(a.a24));
    }
    return {ee, gg, eg};
}

QubitDensity partial_trace_qubit2(const TwoQubitDensity& rho)
{
    return {rho(kEE, kEE).real() + rho(kEG, kEG).real(), rho(kGE, kGE).real() + rho(kGG, kGG).real(),
            rho(kEE, kGE) + rho(kEG, kGG)};
}

TwoQubitDensity pure_density(const std::array<cplx, 4>& psi)
{
    TwoQubitDensity rho;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) rho.m[i][j] = psi[i] * std::conj(psi[j]);
    return rho;
}

double atomic_inversion(const QubitDensity& q)
{
    return 1.0 - 2.0 * q.rho_gg;
}

double linear_entropy(const QubitDensity& q)
{
    const double w = atomic_inversion(q);
    return 0.5 - 0.5 * w * w - 2.0 * std::norm(q.rho_eg);
}

std::array<double, 4> wootters_eigenvalues(const TwoQubitDensity& rho)
{
    // Factor rho = W W^dagger, W = U sqrt(D). The square roots of the
    // eigenvalues of rho rho~ are the singular values of tau = W^T S W with
    // S = sigma_y (x) sigma_y; those are read off the Hermitian dilation
    // [[0, tau], [tau^dagger, 0]] whose spectrum is {+-sigma_i}.
    const auto eig = linalg::jacobi_eigen<4>(rho.m);
    const double cutoff = kRankCutoff * std::max(1.0, std::abs(rho.trace()));
    linalg::Matrix<4> w{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (eig.values[k] <= cutoff) continue;
        const double s = std::sqrt(eig.values[k]);
        for (std::size_t i = 0; i < 4; ++i) w[i][k] = s * eig.vectors[i][k];
    }
    linalg::Matrix<4> tau{};
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t k = j; k < 4; ++k) {
            cplx acc{};
            for (std::size_t i = 0; i < 4; ++i) acc += w[i][j] * kSpinFlipSign[i] * w[3 - i][k];
            tau[j][k] = acc;
            tau[k][j] = acc;
        }
    }
    linalg::Matrix<8> dilation{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            dilation[i][4 + j] = tau[i][j];
            dilation[4 + j][i] = std::conj(tau[i][j]);
        }
    }
    const auto spectrum = linalg::jacobi_eigen<8>(dilation);
    std::array<double, 4> xi{};
    for (std::size_t k = 0; k < 4; ++k) {
        const double sigma = std::max(0.0, spectrum.values[7 - k]);
        xi[k] = sigma * sigma;
    }
    return xi;
}

double concurrence(const TwoQubitDensity& rho)
{
    const auto xi = wootters_eigenvalues(rho);
    const double lambda = std::sqrt(xi[0]) - std::sqrt(xi[1]) - std::sqrt(xi[2]) - std::sqrt(xi[3]);
    return std::clamp(lambda, 0.0, 1.0);
}

double l1_coherence(const TwoQubitDensity& rho)
{
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) s += std::abs(rho(i, j));
    return s;
}

double l1_coherence_six_sum(const JointState& state)
{
    std::array<cplx, 6> sums{};
    for (std::size_t n = 0; n < state.size(); ++n) {
        const cplx w0c = std::conj(state.weight(n));
        const cplx g10 = state.weight(n + 1) * w0c;
        const cplx g20 = state.weight(n + 2) * w0c;
        const cplx g00 = state.weight(n) * w0c;
        const ManifoldAmplitudes a0 = state.amp(n);
        const ManifoldAmplitudes a1 = state.amp(n + 1);
        const ManifoldAmplitudes a2 = state.amp(n + 2);
        sums[0] += g10 * a1.a12 * std::conj(a0.a22);
        sums[1] += g10 * a1.a12 * std::conj(a0.a23);
        sums[2] += g20 * a2.a12 * std::conj(a0.a24);
        sums[3] += g00 * a0.a22 * std::conj(a0.a23);
        sums[4] += g10 * a1.a22 * std::conj(a0.a24);
        sums[5] += g10 * a1.a23 * std::conj(a0.a24);
    }
    double total = 0.0;
    for (const auto& s : sums) total += std::abs(s);
    return 2.0 * total;
}

MetricsSample metrics_sample(const JointState& state)
{
    const TwoQubitDensity rho = two_qubit_density(state);
    const QubitDensity q = qubit1_density(state);
    const QubitDensity traced = partial_trace_qubit2(rho);
    const double mismatch = std::max({std::abs(q.rho_ee - traced.rho_ee), std::abs(q.rho_gg - traced.rho_gg),
                                      std::abs(q.rho_eg - traced.rho_eg)});
    if (mismatch > kConsistencyFault) {
        std::ostringstream os;
        os << "qubit-1 density differs from the partial trace by " << mismatch;
        throw Error(ErrorKind::NumericalFault, os.str());
    }

    MetricsSample s;
    s.time = state.time;
    s.entropy = clamp_to_range(linear_entropy(q), 0.0, 0.5, "linear entropy");
    s.inversion = clamp_to_range(atomic_inversion(q), -1.0, 1.0, "atomic inversion");
    s.concurrence = concurrence(rho);
    s.coherence_l1 = l1_coherence(rho);
    return s;
}

std::vector<double> uniform_grid(double t_end, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Range, "dt violates dt > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorKind::Range, "t_end violates t_end >= 0");
    const auto steps = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    std::vector<double> grid(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) grid[k] = static_cast<double>(k) * dt;
    return grid;
}

std::vector<double> cumulative_average(std::span<const double> grid, std::span<const double> values)
{
    if (grid.size() != values.size()) throw Error(ErrorKind::ShapeMismatch, "grid and values differ in length");
    std::vector<double> out(grid.size());
    if (grid.empty()) return out;
    out[0] = values[0];
    double integral = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        integral += 0.5 * (grid[k] - grid[k - 1]) * (values[k] + values[k - 1]);
        out[k] = grid[k] > 0.0 ? integral / grid[k] : values[k];
    }
    return out;
}

namespace {

void check_grid(std::span<const double> grid)
{
    if (grid.empty()) throw Error(ErrorKind::Range, "time grid is empty");
    if (grid.front() != 0.0) throw Error(ErrorKind::Range, "time grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw Error(ErrorKind::Range, "time grid must be strictly increasing");
}

[[noreturn]] void rethrow_at(const Error& e, double t)
{
    std::ostringstream os;
    os << e.what() << " (t = " << t << ")";
    throw Error(e.kind(), os.str());
}

} // namespace

TimeSeries metrics_series(const FockExpansion& expansion, const CouplingParams& cpl,
                          std::span<const double> grid)
{
    check_grid(grid);
    const Evolver evolver(expansion, cpl);
    TimeSeries series;
    series.grid.assign(grid.begin(), grid.end());
    series.samples.reserve(grid.size());
    std::vector<double> entropy;
    entropy.reserve(grid.size());
    for (const double t : grid) {
        try {
            series.samples.push_back(metrics_sample(evolver.at(t)));
        } catch (const Error& e) {
            rethrow_at(e, t);
        }
        entropy.push_back(series.samples.back().entropy);
    }
    series.cumulative_entropy = cumulative_average(grid, entropy);
    return series;
}

std::vector<double> entropy_series(const FockExpansion& expansion, const CouplingParams& cpl,
                                   std::span<const double> grid)
{
    check_grid(grid);
    const Evolver evolver(expansion, cpl);
    std::vector<double> entropy;
    entropy.reserve(grid.size());
    for (const double t : grid) {
        try {
            const QubitDensity q = qubit1_density(evolver.at(t));
            entropy.push_back(clamp_to_range(linear_entropy(q), 0.0, 0.5, "linear entropy"));
        } catch (const Error& e) {
            rethrow_at(e, t);
        }
    }
    return entropy;
}

} // namespace qce
