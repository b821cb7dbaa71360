#include "qce/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "qce/errors.hpp"
#include "qce/metrics.hpp"

namespace qce {

namespace {

// Evaluates every point independently and stores it at its own index, so the
// result is identical whatever the thread count.
std::vector<SweepPoint> run_points(const std::vector<FieldParams>& params, const CouplingParams& cpl,
                                   double t_long, double dt, const SweepOptions& options, const char* axis)
{
    if (params.empty()) throw Error(ErrorKind::Range, "sweep needs at least one value");
    if (!(t_long > 0.0)) throw Error(ErrorKind::Range, "T_long violates T_long > 0");

    std::vector<SweepPoint> out(params.size());
    std::vector<std::exception_ptr> failures(params.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < params.size(); i = next++) {
            try {
                out[i] = sweep_point(params[i], cpl, t_long, dt, options);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(params.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i]) continue;
        const double value = std::string_view(axis) == "theta" ? params[i].theta : params[i].c;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " (" << axis << " = " << value << ")";
            throw Error(e.kind(), os.str());
        }
    }
    return out;
}

} // namespace

std::vector<double> cumulative_entropy(const FockExpansion& expansion, const CouplingParams& cpl, double t_end,
                                       double dt)
{
    const auto grid = uniform_grid(t_end, dt);
    const auto entropy = entropy_series(expansion, cpl, grid);
    return cumulative_average(grid, entropy);
}

SweepPoint sweep_point(const FieldParams& params, const CouplingParams& cpl, double t_long, double dt,
                       const SweepOptions& options)
{
    FieldParams stats_params = params;
    stats_params.phi = options.statistics_phi;
    const FieldStatistics stats =
        field_statistics(cat_expansion(stats_params, options.tail_tolerance, options.fock_cap));
    const FockExpansion expansion = cat_expansion(params, options.tail_tolerance, options.fock_cap);

    SweepPoint p;
    p.theta = params.theta;
    p.c = params.c;
    p.mandel_q = stats.mandel_q;
    p.var_x1 = stats.var_x1;
    p.s_bar_long = cumulative_entropy(expansion, cpl, t_long, dt).back();
    return p;
}

std::vector<SweepPoint> theta_sweep(const FieldParams& base, const CouplingParams& cpl,
                                    std::span<const double> thetas, double t_long, double dt,
                                    const SweepOptions& options)
{
    std::vector<FieldParams> params(thetas.size(), base);
    for (std::size_t i = 0; i < thetas.size(); ++i) params[i].theta = thetas[i];
    return run_points(params, cpl, t_long, dt, options, "theta");
}

std::vector<SweepPoint> c_sweep(const FieldParams& base, const CouplingParams& cpl, std::span<const double> cs,
                                double t_long, double dt, const SweepOptions& options)
{
    std::vector<FieldParams> params(cs.size(), base);
    for (std::size_t i = 0; i < cs.size(); ++i) params[i].c = cs[i];
    return run_points(params, cpl, t_long, dt, options, "c");
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1) out.back() = hi;
    return out;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size()) throw Error(ErrorKind::ShapeMismatch, "xs and ys differ in length");
    if (xs.size() < 3) throw Error(ErrorKind::Range, "linear fit needs at least 3 points");
    if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); }))
        throw Error(ErrorKind::DegenerateAbscissa, "all abscissae are equal");

    LinearFit fit;
    if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) {
        fit.intercept = ys.front();
        fit.r_squared = 1.0;
        return fit;
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double residual = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss_res += residual * residual;
        fit.residual_max = std::max(fit.residual_max, std::abs(residual));
    }
    fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    return fit;
}

} // namespace qce
