#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qce/errors.hpp"
#include "qce/metrics.hpp"

using namespace qce;
using std::numbers::pi;

namespace {

const double kS2 = 1 / std::sqrt(2.0);

FockExpansion expansion(double theta, double c, double phi = pi)
{
    FieldParams p;
    p.alpha = 5.0;
    p.r = 1.0;
    p.theta = theta;
    p.phi = phi;
    p.c = c;
    return cat_expansion(p);
}

TwoQubitDensity werner(double p)
{
    TwoQubitDensity bell = pure_density({0.0, kS2, kS2, 0.0});
    TwoQubitDensity rho;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) rho.m[i][j] = p * bell.m[i][j] + (i == j ? (1 - p) / 4 : 0.0);
    return rho;
}

} // namespace

TEST_CASE("two-qubit density at t = 0 and in the decoupled limit")
{
    const auto e = expansion(0.0, kS2);
    const auto rho0 = two_qubit_density(evolve_state(e, {1, 1}, 0.0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(rho0(i, j) - (i == 1 && j == 1 ? 1.0 : 0.0)) < 1e-12);

    const CouplingParams dec{1.0, 0.0};
    const auto rho = two_qubit_density(evolve_state(e, dec, pi / 4));
    const auto ref = pure_density({0.0, kS2, cplx(0, -kS2), 0.0});
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(rho(i, j) - ref(i, j)) < 1e-12);
}

TEST_CASE("two-qubit density matches the full-space partial trace")
{
    for (double theta : {0.0, pi}) {
        const auto e = expansion(theta, kS2);
        const int dim = static_cast<int>(e.size()) + 1;
        Eigen::VectorXcd field(dim);
        for (int n = 0; n < dim; ++n) field(n) = e.weight(static_cast<std::size_t>(n));
        const CouplingParams cpl{1.0, 1.0};
        const oracle::FullSpace full(field, cpl);
        for (double t : {0.4, 3.3, 17.0, 60.0}) {
            const auto rho = two_qubit_density(evolve_state(e, cpl, t));
            const auto ref = full.qubit_density(t);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    CHECK(std::abs(rho(i, j) - ref(static_cast<int>(i), static_cast<int>(j))) < 1e-10);
        }
    }
}

TEST_CASE("qubit 1 density")
{
    const auto e = expansion(0.0, kS2);
    const auto q0 = qubit1_density(evolve_state(e, {1, 1}, 0.0));
    CHECK(q0.rho_ee == doctest::Approx(1.0));
    CHECK(q0.rho_gg == doctest::Approx(0.0));
    CHECK(std::abs(q0.rho_eg) == 0.0);

    const CouplingParams dec{1.3, 0.0};
    for (double t : {0.1, 0.9, 2.2}) {
        const auto q = qubit1_density(evolve_state(e, dec, t));
        CHECK(q.rho_ee == doctest::Approx(std::cos(1.3 * t) * std::cos(1.3 * t)).epsilon(1e-12));
        CHECK(std::abs(q.rho_eg) < 1e-12);
    }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> time(0.0, 200.0);
    const Evolver ev(expansion(pi, kS2), {1, 1});
    for (int k = 0; k < 200; ++k) {
        const auto s = ev.at(time(rng));
        const auto a = qubit1_density(s);
        const auto b = partial_trace_qubit2(two_qubit_density(s));
        CHECK(std::abs(a.rho_ee - b.rho_ee) < 1e-10);
        CHECK(std::abs(a.rho_gg - b.rho_gg) < 1e-10);
        CHECK(std::abs(a.rho_eg - b.rho_eg) < 1e-10);
    }
}

TEST_CASE("linear entropy")
{
    CHECK(linear_entropy({1.0, 0.0, 0.0}) == 0.0);
    CHECK(linear_entropy({0.5, 0.5, 0.0}) == doctest::Approx(0.5));
    CHECK(linear_entropy({0.5, 0.5, 0.5}) == doctest::Approx(0.0));
    const QubitDensity q{0.3, 0.7, cplx(0.1, -0.2)};
    CHECK(linear_entropy(q) == doctest::Approx(1 - (0.09 + 0.49 + 2 * 0.05)).epsilon(1e-12));
    CHECK(atomic_inversion(q) == doctest::Approx(1 - 2 * 0.7));

    const auto e = expansion(0.0, kS2);
    const auto s = linear_entropy(qubit1_density(evolve_state(e, {1.0, 0.0}, pi / 4)));
    CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("concurrence")
{
    CHECK(concurrence(pure_density({0.0, kS2, kS2, 0.0})) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(concurrence(pure_density({0.0, 1.0, 0.0, 0.0})) == 0.0);
    CHECK(concurrence(werner(0.5)) == doctest::Approx(0.25).epsilon(1e-13));
    for (double p : {0.0, 0.2, 1.0 / 3, 0.4, 0.75, 1.0})
        CHECK(concurrence(werner(p)) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-12));

    SUBCASE("random pure states, exact formula")
    {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> g;
        for (int k = 0; k < 500; ++k) {
            std::array<cplx, 4> psi;
            double norm = 0.0;
            for (auto& x : psi) {
                x = {g(rng), g(rng)};
                norm += std::norm(x);
            }
            for (auto& x : psi) x /= std::sqrt(norm);
            CHECK(std::abs(concurrence(pure_density(psi)) - oracle::concurrence_pure(psi)) < 1e-12);
        }
    }
    SUBCASE("random mixed states, brute-force eigen-solve")
    {
        std::mt19937_64 rng(13);
        std::normal_distribution<double> g;
        for (int k = 0; k < 500; ++k) {
            const int rank = 1 + k % 4;
            Eigen::MatrixXcd a(4, rank);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < rank; ++j) a(i, j) = cplx(g(rng), g(rng));
            Eigen::Matrix4cd rho = a * a.adjoint();
            rho /= rho.trace().real();
            const double ours = concurrence(oracle::from_eigen(rho));
            // the general eigen-solve loses accuracy at the repeated zero roots of rank-deficient inputs
            CHECK(std::abs(ours - oracle::concurrence_brute(rho)) < (rank == 4 ? 1e-10 : 1e-5));
            const auto xi = wootters_eigenvalues(oracle::from_eigen(rho));
            for (int i = 0; i < 3; ++i) CHECK(xi[static_cast<std::size_t>(i)] >= xi[static_cast<std::size_t>(i + 1)]);
            CHECK(xi[3] >= 0.0);
        }
    }
}

TEST_CASE("l1 coherence")
{
    CHECK(l1_coherence(pure_density({0.0, 1.0, 0.0, 0.0})) == 0.0);
    CHECK(l1_coherence(pure_density({0.0, kS2, kS2, 0.0})) == doctest::Approx(1.0).epsilon(1e-14));
    const auto e = expansion(0.0, kS2);
    CHECK(l1_coherence(two_qubit_density(evolve_state(e, {1.0, 0.0}, pi / 4))) == doctest::Approx(1.0).epsilon(1e-12));

    const Evolver ev(expansion(pi, kS2), {1, 1});
    for (int k = 0; k < 100; ++k) {
        const auto s = ev.at(0.37 * k);
        CHECK(std::abs(l1_coherence(two_qubit_density(s)) - l1_coherence_six_sum(s)) < 1e-9);
    }
}

TEST_CASE("decoupled limit is exact pointwise")
{
    const double lambda = 0.8;
    const auto e = expansion(0.0, kS2);
    std::vector<double> grid;
    for (int k = 0; k <= 1000; ++k) grid.push_back(4 * pi / lambda * k / 1000);
    const auto series = metrics_series(e, {lambda, 0.0}, grid);
    for (const auto& s : series.samples) {
        const double x = std::sin(2 * lambda * s.time);
        CHECK(std::abs(s.entropy - x * x / 2) < 1e-10);
        CHECK(std::abs(s.concurrence - std::abs(x)) < 1e-10);
        CHECK(std::abs(s.coherence_l1 - std::abs(x)) < 1e-10);
    }
}

TEST_CASE("time grid and cumulative average")
{
    const auto grid = uniform_grid(100.0, 0.05);
    CHECK(grid.size() == 2001);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(uniform_grid(0.05, 0.05).size() == 2);

    const std::vector<double> g{0.0, 0.5, 1.5, 2.0};
    const std::vector<double> constant(4, 0.3);
    for (double v : cumulative_average(g, constant)) CHECK(v == doctest::Approx(0.3).epsilon(1e-15));
    const std::vector<double> linear{0.0, 0.5, 1.5, 2.0};
    const auto avg = cumulative_average(g, linear);
    CHECK(avg[0] == 0.0);
    CHECK(avg[3] == doctest::Approx(1.0).epsilon(1e-15));

    // decoupled: mean of sin^2(2 lambda t)/2 tends to 1/4
    const auto series = metrics_series(expansion(0.0, kS2), {1.0, 0.0}, uniform_grid(1000.0, 0.05));
    CHECK(series.cumulative_entropy.back() == doctest::Approx(0.25).epsilon(1e-3));

    CHECK_THROWS_AS(metrics_series(expansion(0.0, kS2), {1, 1}, std::vector<double>{0.0, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(metrics_series(expansion(0.0, kS2), {1, 1}, std::vector<double>{0.5, 1.0}), Error);
}

TEST_CASE("metrics series ranges and entropy-only path")
{
    for (double theta : {0.0, pi}) {
        const auto e = expansion(theta, kS2);
        const auto grid = uniform_grid(100.0, 0.05);
        const auto series = metrics_series(e, {1, 1}, grid);
        CHECK(series.samples.front().entropy == 0.0);
        CHECK(series.samples.front().concurrence == 0.0);
        CHECK(series.samples.front().coherence_l1 == 0.0);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto& s = series.samples[k];
            CHECK(s.entropy >= 0.0);
            CHECK(s.entropy <= 0.5);
            CHECK(s.concurrence >= 0.0);
            CHECK(s.concurrence <= 1.0);
            CHECK(s.coherence_l1 >= 0.0);
            CHECK(std::abs(s.inversion) <= 1.0);
            CHECK(series.cumulative_entropy[k] >= 0.0);
            CHECK(series.cumulative_entropy[k] <= 0.5);
        }
        const auto entropy = entropy_series(e, {1, 1}, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(entropy[k] == series.samples[k].entropy);
    }
}

TEST_CASE("sudden death intervals")
{
    const auto grid = uniform_grid(50.0, 0.05);
    auto zero_measure = [&](double theta) {
        const auto series = metrics_series(expansion(theta, kS2), {1, 1}, grid);
        std::size_t run = 0;
        std::size_t longest = 0;
        std::size_t total = 0;
        for (const auto& s : series.samples) {
            if (s.concurrence == 0.0 && s.entropy > 0.0) {
                ++run;
            } else {
                if (run >= 5) total += run;
                run = 0;
            }
            longest = std::max(longest, run);
        }
        if (run >= 5) total += run;
        return std::pair{longest, total};
    };
    const auto [longest_pi, total_pi] = zero_measure(pi);
    const auto [longest_0, total_0] = zero_measure(0.0);
    CHECK(longest_pi >= 5);
    CHECK(total_pi > total_0);
}
