#include "qce/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qce/errors.hpp"

namespace qce {

namespace {

using nlohmann::json;

template <typename... Ts>
void csv_row(std::string& out, const Ts&... fields)
{
    bool first = true;
    auto put = [&](const auto& f) {
        if (!first) out += ',';
        first = false;
        if constexpr (std::is_arithmetic_v<std::decay_t<decltype(f)>>)
            out += format_number(static_cast<double>(f));
        else
            out += f;
    };
    (put(fields), ...);
    out += '\n';
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

json fit_json(const LinearFit& fit)
{
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"r_squared", fit.r_squared},
            {"residual_max", fit.residual_max}};
}

double axis_value(std::string_view axis, const SweepPoint& p)
{
    return axis == "theta" ? p.theta : p.c;
}

} // namespace

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string evolve_csv(const TimeSeries& series)
{
    std::string out = "t,S,W,concurrence,coherence_l1,S_bar\n";
    for (std::size_t k = 0; k < series.samples.size(); ++k) {
        const auto& s = series.samples[k];
        csv_row(out, s.time, s.entropy, s.inversion, s.concurrence, s.coherence_l1, series.cumulative_entropy[k]);
    }
    return out;
}

std::string evolve_json(const TimeSeries& series)
{
    json rows = json::array();
    for (std::size_t k = 0; k < series.samples.size(); ++k) {
        const auto& s = series.samples[k];
        rows.push_back({{"t", s.time},
                        {"S", s.entropy},
                        {"W", s.inversion},
                        {"concurrence", s.concurrence},
                        {"coherence_l1", s.coherence_l1},
                        {"S_bar", series.cumulative_entropy[k]}});
    }
    return dump(rows);
}

std::string stats_csv(const FieldStatistics& stats, const FockExpansion& expansion)
{
    std::string out = "mean_n,mean_n_sq,mandel_q,var_x1,var_x2,n_max,tail_mass\n";
    csv_row(out, stats.mean_n, stats.mean_n_sq, stats.mandel_q, stats.var_x1, stats.var_x2, expansion.n_max,
            expansion.tail_mass);
    return out;
}

std::string stats_json(const FieldStatistics& stats, const FockExpansion& expansion)
{
    return dump({{"mean_n", stats.mean_n},
                 {"mean_n_sq", stats.mean_n_sq},
                 {"mandel_q", stats.mandel_q},
                 {"var_x1", stats.var_x1},
                 {"var_x2", stats.var_x2},
                 {"n_max", expansion.n_max},
                 {"tail_mass", expansion.tail_mass}});
}

std::string sweep_csv(std::string_view axis, std::span<const SweepPoint> points)
{
    std::string out = "axis_value,mandel_q,var_x1,s_bar_long\n";
    for (const auto& p : points) csv_row(out, axis_value(axis, p), p.mandel_q, p.var_x1, p.s_bar_long);
    return out;
}

std::string sweep_json(std::string_view axis, std::span<const SweepPoint> points)
{
    json rows = json::array();
    for (const auto& p : points)
        rows.push_back({{"axis_value", axis_value(axis, p)},
                        {"mandel_q", p.mandel_q},
                        {"var_x1", p.var_x1},
                        {"s_bar_long", p.s_bar_long}});
    return dump({{"axis", axis}, {"points", rows}});
}

std::string fit_summary_json(std::string_view axis, std::span<const SweepPoint> points)
{
    std::vector<double> q;
    std::vector<double> v;
    std::vector<double> s;
    for (const auto& p : points) {
        q.push_back(p.mandel_q);
        v.push_back(p.var_x1);
        s.push_back(p.s_bar_long);
    }
    json j{{"axis", axis}, {"points", points.size()}};
    // A fit that cannot be formed is reported in place as an error object.
    const auto try_fit = [&](const std::vector<double>& xs) -> json {
        try {
            return fit_json(linear_fit(xs, s));
        } catch (const Error& e) {
            return {{"error", to_string(e.kind())}, {"message", e.what()}};
        }
    };
    j["s_bar_vs_mandel_q"] = try_fit(q);
    j["s_bar_vs_var_x1"] = try_fit(v);
    return dump(j);
}

std::string validate_csv(const ValidationReport& report)
{
    std::string out =
        "checkpoints,analytic_vs_spectral,analytic_vs_numeric,spectral_vs_numeric,numeric_norm_drift,max_deviation,"
        "passed\n";
    csv_row(out, report.checkpoints.size(), report.analytic_vs_spectral, report.analytic_vs_numeric,
            report.spectral_vs_numeric, report.numeric_norm_drift, report.max_deviation, report.passed ? 1 : 0);
    return out;
}

std::string validate_json(const ValidationReport& report)
{
    return dump({{"checkpoints", report.checkpoints},
                 {"analytic_vs_spectral", report.analytic_vs_spectral},
                 {"analytic_vs_numeric", report.analytic_vs_numeric},
                 {"spectral_vs_numeric", report.spectral_vs_numeric},
                 {"numeric_norm_drift", report.numeric_norm_drift},
                 {"max_deviation", report.max_deviation},
                 {"passed", report.passed}});
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (table.header.empty()) {
            for (auto f : fields) table.header.emplace_back(f);
            continue;
        }
        if (fields.size() != table.header.size())
            throw Error(ErrorKind::Parse, "csv line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(table.header.size()) + " fields");
        std::vector<double> row;
        for (auto f : fields) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw Error(ErrorKind::Parse, "csv line " + std::to_string(line_no) + ": bad number '" +
                                                  std::string(f) + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_atomic(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    std::random_device rd;
    const fs::path tmp = path.string() + ".tmp." + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw Error(ErrorKind::Io, "write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

} // namespace qce
