#include "qce/run.hpp"

#include <ostream>

#include <json.hpp>

#include "qce/errors.hpp"
#include "qce/field_state.hpp"
#include "qce/io.hpp"
#include "qce/metrics.hpp"
#include "qce/oracle.hpp"
#include "qce/sweep.hpp"

namespace qce {

namespace {

constexpr std::size_t kValidationCheckpoints = 11;

void emit(const std::string& path, const std::string& content, std::ostream& out)
{
    if (path.empty()) out << content << std::flush;
    else write_atomic(path, content);
}

int run_evolve(const RunConfig& cfg, std::ostream& out)
{
    const auto expansion = cat_expansion(cfg.field, cfg.tail_tolerance, cfg.fock_cap);
    const auto grid = uniform_grid(cfg.grid.t_end, cfg.grid.dt);
    const auto series = metrics_series(expansion, cfg.coupling, grid);
    emit(cfg.output.path, cfg.output.format == OutputFormat::Csv ? evolve_csv(series) : evolve_json(series), out);
    return kExitOk;
}

int run_stats(const RunConfig& cfg, std::ostream& out)
{
    const auto expansion = cat_expansion(cfg.field, cfg.tail_tolerance, cfg.fock_cap);
    const auto stats = field_statistics(expansion);
    emit(cfg.output.path,
         cfg.output.format == OutputFormat::Csv ? stats_csv(stats, expansion) : stats_json(stats, expansion), out);
    return kExitOk;
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    SweepOptions options;
    options.statistics_phi = cfg.statistics_phi;
    options.tail_tolerance = cfg.tail_tolerance;
    options.fock_cap = cfg.fock_cap;
    options.threads = cfg.threads;

    const SweepSpec& spec = *cfg.sweep;
    const auto points =
        spec.axis == SweepAxis::Theta
            ? theta_sweep(cfg.field, cfg.coupling, spec.values, cfg.grid.t_end, cfg.grid.dt, options)
            : c_sweep(cfg.field, cfg.coupling, spec.values, cfg.grid.t_end, cfg.grid.dt, options);
    const auto axis = to_string(spec.axis);
    emit(cfg.output.path,
         cfg.output.format == OutputFormat::Csv ? sweep_csv(axis, points) : sweep_json(axis, points), out);

    const std::string summary = fit_summary_json(axis, points);
    if (!cfg.output.summary_path.empty()) write_atomic(cfg.output.summary_path, summary);
    else if (!cfg.output.path.empty()) write_atomic(cfg.output.path + ".fit.json", summary);
    else err << summary << std::flush;
    return kExitOk;
}

int run_validate(const RunConfig& cfg, std::ostream& out)
{
    const auto expansion = cat_expansion(cfg.field, cfg.tail_tolerance, cfg.fock_cap);
    const auto checkpoints = linspace(0.0, cfg.grid.t_end, kValidationCheckpoints);
    const auto report = validate_dynamics(expansion, cfg.coupling, checkpoints, cfg.oracle_dt);
    emit(cfg.output.path,
         cfg.output.format == OutputFormat::Csv ? validate_csv(report) : validate_json(report), out);
    return report.passed ? kExitOk : kExitValidationFailed;
}

void error_record(std::ostream& err, std::string_view kind, std::string_view message)
{
    nlohmann::json j{{"error", kind}, {"message", message}};
    err << j.dump() << '\n' << std::flush;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    switch (config.mode) {
    case Mode::Evolve: return run_evolve(config, out);
    case Mode::Stats: return run_stats(config, out);
    case Mode::Sweep: return run_sweep(config, out, err);
    case Mode::Validate: return run_validate(config, out);
    }
    return kExitFailure;
}

int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    if (args.empty()) {
        err << usage();
        return kExitUsage;
    }
    if (args.front() == "-h" || args.front() == "--help" || args.front() == "help") {
        out << usage();
        return kExitOk;
    }
    try {
        return run(parse_config(args), out, err);
    } catch (const Error& e) {
        error_record(err, to_string(e.kind()), e.what());
        return e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Range ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        error_record(err, "internal", e.what());
        return kExitFailure;
    }
}

} // namespace qce
