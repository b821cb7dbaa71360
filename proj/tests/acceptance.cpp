// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qce/errors.hpp"
#include "qce/metrics.hpp"
#include "qce/oracle.hpp"
#include "qce/sweep.hpp"

using namespace qce;
using std::numbers::pi;

namespace {

// Pinned tolerances.
constexpr double kMeanTarget = 26.38;
constexpr double kMeanTol = 0.01;
constexpr double kOracleTol = 1e-8;
constexpr double kOracleDt = 2e-4;
constexpr double kSpectrumTol = 1e-10;
constexpr double kQRootLo = 0.5;
constexpr double kQRootHi = 0.7;
constexpr double kLongTime = 2000.0;
constexpr double kMidTime = 1500.0;
constexpr double kSweepDt = 0.1;
constexpr double kSaturationTol = 0.01;
constexpr double kRSquaredMin = 0.95;
constexpr double kEsdWindow = 50.0;
constexpr double kEsdDt = 0.05;
constexpr std::size_t kEsdMinRun = 5;
constexpr double kDecoupledTol = 1e-10;
constexpr int kPropertyDraws = 1000;
constexpr double kNormTol = 1e-9;
constexpr double kDensityTol = 1e-10;
constexpr double kEquivalenceTol = 1e-8;
constexpr double kUncertaintyTol = 1e-10;

const double kS2 = 1 / std::sqrt(2.0);

FieldParams field(double theta, double c, double phi)
{
    FieldParams p;
    p.alpha = 5.0;
    p.r = 1.0;
    p.theta = theta;
    p.phi = phi;
    p.c = c;
    return p;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome mean_photon_number()
{
    const auto p = field(0.0, kS2, pi);
    const double closed = closed_form_mean_n(p);
    const double fock = field_statistics(cat_expansion(p)).mean_n;
    const bool ok = std::abs(closed - kMeanTarget) <= kMeanTol && std::abs(fock - kMeanTarget) <= kMeanTol;
    return {ok, fmt("closed form %.6f, Fock sum %.6f, target %.2f +- %.2f", closed, fock, kMeanTarget, kMeanTol)};
}

Outcome oracle_equivalence()
{
    const auto checkpoints = linspace(0.0, 50.0, 51);
    double worst = 0.0;
    for (double theta : {0.0, pi})
        for (double c : {0.0, kS2}) {
            const auto report =
                validate_dynamics(cat_expansion(field(theta, c, pi)), {1.0, 1.0}, checkpoints, kOracleDt, kOracleTol);
            worst = std::max(worst, report.max_deviation);
        }
    return {worst < kOracleTol, fmt("max deviation %.3e over 4 configurations, 51 checkpoints in [0, 50]", worst)};
}

Outcome spectrum_check()
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const CouplingParams cpl{u(rng), u(rng)};
        for (std::size_t n = 0; n <= 512; ++n) {
            const auto s = manifold_spectrum(n, cpl);
            const std::array<double, 4> expected{-s.omega_plus, -s.omega_minus, s.omega_minus, s.omega_plus};
            const auto got = manifold_eigenvalues(build_manifold_hamiltonian(n, cpl));
            for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(got[k] - expected[k]));
        }
    }
    return {worst < kSpectrumTol, fmt("max |eigenvalue - (+-omega)| %.3e, n <= 512, 100 couplings", worst)};
}

Outcome q_sign_change()
{
    const auto thetas = linspace(0.0, pi, 11);
    bool ok = true;
    std::ostringstream detail;
    for (double c : {0.0, kS2}) {
        auto q = [&](double theta) { return field_statistics(cat_expansion(field(theta, c, 0.0))).mandel_q; };
        std::vector<double> values;
        for (double t : thetas) values.push_back(q(t));
        int changes = 0;
        std::size_t bracket = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
            if ((values[i] > 0) != (values[i - 1] > 0)) {
                ++changes;
                bracket = i;
            }
        double root = std::nan("");
        if (changes == 1) {
            double lo = thetas[bracket - 1];
            double hi = thetas[bracket];
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((q(mid) > 0) == (values[bracket] > 0) ? hi : lo) = mid;
            }
            root = 0.5 * (lo + hi);
        }
        const bool this_ok =
            values.front() < 0 && values.back() > 0 && changes == 1 && root > kQRootLo && root < kQRootHi;
        ok = ok && this_ok;
        detail << fmt("c=%.4f: Q(0)=%.4f Q(pi)=%.4f changes=%d root=%.4f; ", c, values.front(), values.back(), changes,
                      root);
    }
    return {ok, detail.str()};
}

Outcome quadrature_ordering()
{
    const auto thetas = linspace(0.0, pi, 11);
    bool ok = true;
    double min_gap = INFINITY;
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        auto v = [&](double c) { return field_statistics(cat_expansion(field(thetas[i], c, 0.0))).var_x1; };
        const double a = v(kS2);
        const double b = v(0.5);
        const double z = v(0.0);
        ok = ok && a > b && b > z;
        min_gap = std::min({min_gap, a - b, b - z});
    }
    return {ok, fmt("smallest adjacent gap %.4e over 10 theta points", min_gap)};
}

Outcome long_time_average()
{
    bool order_ok = true;
    double worst_drift = 0.0;
    std::ostringstream detail;
    const auto mid = static_cast<std::size_t>(std::llround(kMidTime / kSweepDt));
    for (double theta : {0.0, pi}) {
        std::array<double, 3> sbar{};
        int k = 0;
        for (double c : {kS2, 0.5, 0.0}) {
            const auto avg = cumulative_entropy(cat_expansion(field(theta, c, pi)), {1.0, 1.0}, kLongTime, kSweepDt);
            sbar[static_cast<std::size_t>(k++)] = avg.back();
            worst_drift = std::max(worst_drift, std::abs(avg.back() - avg[mid]));
        }
        order_ok = order_ok && sbar[0] > sbar[1] && sbar[1] > sbar[2];
        detail << fmt("theta=%.4f S_bar(c=0.7071,0.5,0)=%.4f,%.4f,%.4f; ", theta, sbar[0], sbar[1], sbar[2]);
    }
    detail << fmt("ordering %s; max |S_bar(2000)-S_bar(1500)| = %.4f (tol %.2f)", order_ok ? "holds" : "violated",
                  worst_drift, kSaturationTol);
    return {order_ok && worst_drift < kSaturationTol, detail.str()};
}

Outcome near_linearity()
{
    SweepOptions opt;
    bool ok = true;
    std::ostringstream detail;
    const auto thetas = linspace(0.0, pi, 11);
    for (double c : {0.0, kS2}) {
        const auto pts = theta_sweep(field(0.0, c, pi), {1.0, 1.0}, thetas, kLongTime, kSweepDt, opt);
        std::vector<double> q;
        std::vector<double> s;
        for (const auto& p : pts) {
            q.push_back(p.mandel_q);
            s.push_back(p.s_bar_long);
        }
        const auto fit = linear_fit(q, s);
        ok = ok && fit.r_squared >= kRSquaredMin;
        detail << fmt("theta sweep c=%.4f r2=%.4f; ", c, fit.r_squared);
    }
    const auto cs = linspace(0.0, kS2, 11);
    for (double theta : {0.0, pi}) {
        const auto pts = c_sweep(field(theta, 0.0, pi), {1.0, 1.0}, cs, kLongTime, kSweepDt, opt);
        std::vector<double> v;
        std::vector<double> s;
        for (const auto& p : pts) {
            v.push_back(p.var_x1);
            s.push_back(p.s_bar_long);
        }
        const auto fit = linear_fit(v, s);
        ok = ok && fit.r_squared >= kRSquaredMin;
        detail << fmt("c sweep theta=%.4f r2=%.4f; ", theta, fit.r_squared);
    }
    detail << fmt("threshold %.2f", kRSquaredMin);
    return {ok, detail.str()};
}

std::pair<std::size_t, std::size_t> zero_runs(double theta)
{
    const auto series =
        metrics_series(cat_expansion(field(theta, kS2, pi)), {1.0, 1.0}, uniform_grid(kEsdWindow, kEsdDt));
    std::size_t run = 0;
    std::size_t longest = 0;
    std::size_t total = 0;
    for (const auto& s : series.samples) {
        if (s.concurrence == 0.0 && s.entropy > 0.0) {
            ++run;
            longest = std::max(longest, run);
        } else {
            if (run >= kEsdMinRun) total += run;
            run = 0;
        }
    }
    if (run >= kEsdMinRun) total += run;
    return {longest, total};
}

Outcome sudden_death()
{
    const auto [longest_pi, total_pi] = zero_runs(pi);
    const auto [longest_0, total_0] = zero_runs(0.0);
    const bool ok = longest_pi >= kEsdMinRun && total_pi > total_0;
    return {ok, fmt("theta=pi: longest run %zu, zero measure %.2f; theta=0: longest run %zu, zero measure %.2f",
                    longest_pi, total_pi * kEsdDt, longest_0, total_0 * kEsdDt)};
}

Outcome decoupled_limit()
{
    const double lambda = 1.0;
    std::vector<double> grid;
    for (int k = 0; k <= 4000; ++k) grid.push_back(4 * pi / lambda * k / 4000);
    const auto series = metrics_series(cat_expansion(field(0.0, kS2, pi)), {lambda, 0.0}, grid);
    double worst = 0.0;
    for (const auto& s : series.samples) {
        const double x = std::sin(2 * lambda * s.time);
        worst = std::max({worst, std::abs(s.entropy - x * x / 2), std::abs(s.concurrence - std::abs(x)),
                          std::abs(s.coherence_l1 - std::abs(x))});
    }
    return {worst < kDecoupledTol, fmt("max pointwise error %.3e over lambda t in [0, 4 pi]", worst)};
}

Outcome property_suites()
{
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int draws = 0;
    int failures = 0;
    int skipped = 0;
    double worst_norm = 0.0;
    double worst_equiv = 0.0;
    while (draws < kPropertyDraws) {
        FieldParams p;
        p.alpha = std::polar(3.5 * u(rng), 2 * pi * u(rng));
        p.r = 1.3 * u(rng);
        p.theta = 2 * pi * u(rng);
        p.phi = 2 * pi * u(rng);
        p.c = u(rng);
        const CouplingParams cpl{2 * u(rng), 0.05 + 2 * u(rng)};
        const double t = 100 * u(rng);
        FockExpansion e;
        try {
            e = cat_expansion(p);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::DegenerateState) throw;
            ++skipped;
            continue;
        }
        ++draws;
        bool ok = true;

        const auto stats = field_statistics(e);
        ok = ok && stats.mandel_q >= -1.0 && stats.var_x1 * stats.var_x2 >= 1.0 / 16 - kUncertaintyTol;

        const auto state = evolve_state(e, cpl, t);
        const double norm_err = std::abs(state.norm_sq() - 1.0);
        worst_norm = std::max(worst_norm, norm_err);
        ok = ok && norm_err < kNormTol;
        for (const auto& a : state.amps) ok = ok && std::abs(a.norm_sq() - 1.0) < kDensityTol;

        const auto rho = two_qubit_density(state);
        Eigen::Matrix4cd m;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = rho(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
        ok = ok && (m - m.adjoint()).cwiseAbs().maxCoeff() < kDensityTol && std::abs(rho.trace() - 1.0) < kDensityTol &&
             es.eigenvalues().minCoeff() >= -kDensityTol;

        const auto q = qubit1_density(state);
        const auto pt = partial_trace_qubit2(rho);
        ok = ok && std::abs(q.rho_ee - pt.rho_ee) < kDensityTol && std::abs(q.rho_eg - pt.rho_eg) < kDensityTol;

        const auto s = metrics_sample(state);
        ok = ok && s.entropy >= 0 && s.entropy <= 0.5 && s.concurrence >= 0 && s.concurrence <= 1 &&
             s.coherence_l1 >= 0 && std::abs(s.inversion) <= 1;

        const double equiv = compare_states(state, spectral_propagate(e, cpl, t));
        worst_equiv = std::max(worst_equiv, equiv);
        ok = ok && equiv < kEquivalenceTol;

        if (!ok) ++failures;
    }
    return {failures == 0, fmt("%d draws (%d degenerate skipped), %d failing; worst norm error %.2e, worst evaluator "
                               "gap %.2e",
                               draws, skipped, failures, worst_norm, worst_equiv)};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"mean photon number", mean_photon_number},
        {"oracle equivalence", oracle_equivalence},
        {"spectrum check", spectrum_check},
        {"Q sign change", q_sign_change},
        {"quadrature ordering", quadrature_ordering},
        {"long-time average ordering and saturation", long_time_average},
        {"near-linearity", near_linearity},
        {"sudden death detection", sudden_death},
        {"decoupled-limit exactness", decoupled_limit},
        {"property suites", property_suites},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("error: ") + e.what()};
        }
        if (!outcome.pass) ++failed;
        std::printf("%s criterion %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", index, name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
