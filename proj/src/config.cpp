#include "qce/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "qce/errors.hpp"
#include "qce/sweep.hpp"

namespace qce {

namespace {

struct KeyInfo {
    std::string_view name;
    std::string_view help;
};

constexpr KeyInfo kKeys[] = {
    {"mode", "evolve | stats | sweep | validate (config file / env only)"},
    {"alpha", "coherent amplitude, real part (required)"},
    {"alpha-im", "coherent amplitude, imaginary part (default 0)"},
    {"r", "squeezing magnitude r >= 0 (required)"},
    {"theta", "squeezing phase (default 0)"},
    {"phi", "superposition relative phase (default pi)"},
    {"c", "superposition weight in [0, 1] (default 0)"},
    {"lambda", "qubit-qubit coupling (default 1)"},
    {"g", "qubit-field coupling (default 1)"},
    {"t-end", "final time (default 100; sweep: T_long, default 2000)"},
    {"dt", "time step (default 0.05; sweep default 0.1)"},
    {"axis", "sweep axis: theta | c (default theta)"},
    {"values", "comma-separated sweep values"},
    {"points", "number of equally spaced sweep values when --values is absent (default 11)"},
    {"output", "output file (default: standard output)"},
    {"format", "csv | json (default csv)"},
    {"summary", "sweep fit summary path (default <output>.fit.json)"},
    {"stats-phi", "relative phase used for sweep statistics (default 0)"},
    {"tol", "Fock tail tolerance (default 1e-12)"},
    {"n-cap", "Fock truncation cap (default 512)"},
    {"oracle-dt", "RK4 step for validate (default 2e-4)"},
    {"threads", "sweep worker threads, 0 = hardware (default 0)"},
};

struct Setting {
    std::string value;
    std::string origin;
};

using Settings = std::map<std::string, Setting, std::less<>>;

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string normalize_key(std::string_view key)
{
    std::string out(key);
    for (auto& ch : out) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (ch == '_') ch = '-';
    }
    return out;
}

bool known_key(std::string_view key)
{
    return std::any_of(std::begin(kKeys), std::end(kKeys), [&](const KeyInfo& k) { return k.name == key; });
}

void read_file(const std::filesystem::path& path, Settings& settings)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open config file " + path.string());
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string where = path.filename().string() + ":" + std::to_string(number);
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Parse, where + ": expected 'key = value'");
        const std::string key = normalize_key(trim(std::string_view(body).substr(0, eq)));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!known_key(key)) throw Error(ErrorKind::Parse, where + ": unknown key '" + key + "'");
        if (value.empty()) throw Error(ErrorKind::Parse, where + ": empty value for '" + key + "'");
        settings[key] = {value, where};
    }
}

void read_env(const EnvLookup& env, Settings& settings)
{
    for (const auto& k : kKeys) {
        std::string var = "QCE_";
        for (char ch : k.name) var += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (auto value = env(var)) settings[std::string(k.name)] = {trim(*value), "environment " + var};
    }
}

double to_double(const Setting& s, std::string_view key)
{
    const std::string& text = s.value;
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw Error(ErrorKind::Parse, s.origin + ": '" + text + "' is not a number for '" + std::string(key) + "'");
    return value;
}

double to_angle(const Setting& s, std::string_view key)
{
    try {
        return parse_angle(s.value);
    } catch (const Error&) {
        throw Error(ErrorKind::Parse, s.origin + ": '" + s.value + "' is not an angle for '" + std::string(key) + "'");
    }
}

std::size_t to_count(const Setting& s, std::string_view key)
{
    std::size_t value = 0;
    const auto* end = s.value.data() + s.value.size();
    const auto [ptr, ec] = std::from_chars(s.value.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw Error(ErrorKind::Parse, s.origin + ": '" + s.value + "' is not a non-negative integer for '" +
                                          std::string(key) + "'");
    return value;
}

Mode to_mode(std::string_view text)
{
    if (text == "evolve") return Mode::Evolve;
    if (text == "stats") return Mode::Stats;
    if (text == "sweep") return Mode::Sweep;
    if (text == "validate") return Mode::Validate;
    throw Error(ErrorKind::Parse, "unknown mode '" + std::string(text) + "' (expected evolve|stats|sweep|validate)");
}

[[noreturn]] void range_error(std::string_view key, double value, std::string_view invariant)
{
    std::ostringstream os;
    os << key << " = " << value << " violates " << invariant;
    throw Error(ErrorKind::Range, os.str());
}

std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(trim(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

void parse_flags(std::span<const std::string> flags, Settings& settings, std::optional<std::filesystem::path>& file)
{
    CLI::App app{"qce"};
    app.allow_extras(false);
    app.set_help_flag();
    std::map<std::string, std::string> values;
    std::string config_path;
    app.add_option("--config", config_path, "key = value config file");
    for (const auto& k : kKeys) {
        if (k.name == "mode") continue;
        app.add_option("--" + std::string(k.name), values[std::string(k.name)], std::string(k.help));
    }
    for (const auto& arg : flags) {
        if (!arg.starts_with("--")) continue;
        const std::string name = arg.substr(2, arg.find('=') == std::string::npos ? std::string::npos : arg.find('=') - 2);
        if (name != "config" && (name == "mode" || !known_key(name)))
            throw Error(ErrorKind::Parse, "unknown flag '--" + name + "'");
    }
    std::vector<std::string> reversed(flags.rbegin(), flags.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
    if (app.count("--config") > 0) file = config_path;
    for (const auto& k : kKeys) {
        if (k.name == "mode") continue;
        const std::string flag = "--" + std::string(k.name);
        if (app.count(flag) > 0) settings[std::string(k.name)] = {values[std::string(k.name)], flag};
    }
}

} // namespace

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::Evolve: return "evolve";
    case Mode::Stats: return "stats";
    case Mode::Sweep: return "sweep";
    case Mode::Validate: return "validate";
    }
    return "unknown";
}

std::string_view to_string(SweepAxis axis)
{
    return axis == SweepAxis::Theta ? "theta" : "c";
}

EnvLookup system_env()
{
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

EnvLookup no_env()
{
    return [](const std::string&) -> std::optional<std::string> { return std::nullopt; };
}

double parse_angle(std::string_view text)
{
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const auto fail = [&] { return Error(ErrorKind::Parse, "invalid angle '" + std::string(text) + "'"); };
    if (s.empty()) throw fail();

    const auto number = [&](std::string_view part) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size() || !std::isfinite(v)) throw fail();
        return v;
    };

    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) return number(s);

    std::string_view coeff = std::string_view(s).substr(0, pi_pos);
    std::string_view rest = std::string_view(s).substr(pi_pos + 2);
    if (!coeff.empty() && coeff.back() == '*') coeff.remove_suffix(1);
    double factor = 1.0;
    if (coeff == "-") factor = -1.0;
    else if (coeff == "+") factor = 1.0;
    else if (!coeff.empty()) factor = number(coeff);
    double divisor = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') throw fail();
        divisor = number(rest.substr(1));
        if (divisor == 0.0) throw fail();
    }
    return factor * std::numbers::pi / divisor;
}

RunConfig parse_config(std::span<const std::string> args, const std::optional<std::filesystem::path>& file,
                       const EnvLookup& env)
{
    std::optional<std::string> mode_arg;
    std::span<const std::string> flags = args;
    if (!args.empty() && !args.front().starts_with("-")) {
        mode_arg = args.front();
        flags = args.subspan(1);
    }

    Settings flag_settings;
    std::optional<std::filesystem::path> config_file = file;
    parse_flags(flags, flag_settings, config_file);

    Settings settings;
    if (config_file) read_file(*config_file, settings);
    read_env(env, settings);
    for (auto& [k, v] : flag_settings) settings[k] = v;

    RunConfig cfg;
    if (mode_arg) cfg.mode = to_mode(*mode_arg);
    else if (auto it = settings.find("mode"); it != settings.end()) cfg.mode = to_mode(it->second.value);
    else throw Error(ErrorKind::Parse, "missing mode (expected evolve|stats|sweep|validate)");

    const auto get = [&](std::string_view key) -> const Setting* {
        const auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };
    const auto require = [&](std::string_view key) -> const Setting& {
        const Setting* s = get(key);
        if (!s) throw Error(ErrorKind::Parse, "missing required parameter '" + std::string(key) + "'");
        return *s;
    };

    double alpha_re = to_double(require("alpha"), "alpha");
    double alpha_im = 0.0;
    if (const auto* s = get("alpha-im")) alpha_im = to_double(*s, "alpha-im");
    cfg.field.alpha = {alpha_re, alpha_im};
    cfg.field.r = to_double(require("r"), "r");
    cfg.field.theta = 0.0;
    cfg.field.phi = std::numbers::pi;
    cfg.field.c = 0.0;
    if (const auto* s = get("theta")) cfg.field.theta = to_angle(*s, "theta");
    if (const auto* s = get("phi")) cfg.field.phi = to_angle(*s, "phi");
    if (const auto* s = get("c")) cfg.field.c = to_double(*s, "c");
    if (const auto* s = get("lambda")) cfg.coupling.lambda = to_double(*s, "lambda");
    if (const auto* s = get("g")) cfg.coupling.g = to_double(*s, "g");

    if (cfg.mode == Mode::Sweep) {
        cfg.grid.t_end = kDefaultLongTime;
        cfg.grid.dt = kDefaultSweepDt;
    }
    if (const auto* s = get("t-end")) cfg.grid.t_end = to_double(*s, "t-end");
    if (const auto* s = get("dt")) cfg.grid.dt = to_double(*s, "dt");
    if (const auto* s = get("stats-phi")) cfg.statistics_phi = to_angle(*s, "stats-phi");
    if (const auto* s = get("tol")) cfg.tail_tolerance = to_double(*s, "tol");
    if (const auto* s = get("n-cap")) cfg.fock_cap = to_count(*s, "n-cap");
    if (const auto* s = get("oracle-dt")) cfg.oracle_dt = to_double(*s, "oracle-dt");
    if (const auto* s = get("threads")) cfg.threads = static_cast<unsigned>(to_count(*s, "threads"));
    if (const auto* s = get("output")) cfg.output.path = s->value;
    if (const auto* s = get("summary")) cfg.output.summary_path = s->value;
    if (const auto* s = get("format")) {
        if (s->value == "csv") cfg.output.format = OutputFormat::Csv;
        else if (s->value == "json") cfg.output.format = OutputFormat::Json;
        else throw Error(ErrorKind::Parse, s->origin + ": format must be csv or json");
    }

    if (cfg.mode == Mode::Sweep) {
        SweepSpec sweep;
        if (const auto* s = get("axis")) {
            if (s->value == "theta") sweep.axis = SweepAxis::Theta;
            else if (s->value == "c") sweep.axis = SweepAxis::C;
            else throw Error(ErrorKind::Parse, s->origin + ": axis must be theta or c");
        }
        if (const auto* s = get("values")) {
            for (const auto& item : split_list(s->value)) {
                const Setting piece{item, s->origin};
                sweep.values.push_back(sweep.axis == SweepAxis::Theta ? to_angle(piece, "values")
                                                                      : to_double(piece, "values"));
            }
        } else {
            std::size_t points = 11;
            if (const auto* s = get("points")) points = to_count(*s, "points");
            if (points < 1) range_error("points", 0.0, "points >= 1");
            sweep.values = sweep.axis == SweepAxis::Theta ? linspace(0.0, std::numbers::pi, points)
                                                          : linspace(0.0, 1.0 / std::numbers::sqrt2, points);
        }
        for (double v : sweep.values)
            if (sweep.axis == SweepAxis::C && (v < 0.0 || v > 1.0)) range_error("c", v, "0 <= c <= 1");
        cfg.sweep = std::move(sweep);
    }

    const auto& f = cfg.field;
    if (f.c < 0.0 || f.c > 1.0) range_error("c", f.c, "0 <= c <= 1");
    if (f.r < 0.0) range_error("r", f.r, "r >= 0");
    if (cfg.coupling.lambda < 0.0) range_error("lambda", cfg.coupling.lambda, "lambda >= 0");
    if (cfg.coupling.g < 0.0) range_error("g", cfg.coupling.g, "g >= 0");
    if (!(cfg.grid.dt > 0.0)) range_error("dt", cfg.grid.dt, "dt > 0");
    if (!(cfg.grid.t_end > 0.0)) range_error("t-end", cfg.grid.t_end, "t_end > 0");
    if (!(cfg.tail_tolerance > 0.0)) range_error("tol", cfg.tail_tolerance, "tol > 0");
    if (cfg.fock_cap < 1) range_error("n-cap", 0.0, "n_cap >= 1");
    if (!(cfg.oracle_dt > 0.0)) range_error("oracle-dt", cfg.oracle_dt, "oracle_dt > 0");
    return cfg;
}

std::string usage()
{
    std::ostringstream os;
    os << "usage: qce <evolve|stats|sweep|validate> [--config FILE] [--key value ...]\n\nkeys:\n";
    for (const auto& k : kKeys) {
        if (k.name == "mode") continue;
        os << "  --" << k.name;
        for (std::size_t pad = k.name.size(); pad < 12; ++pad) os << ' ';
        os << k.help << '\n';
    }
    os << "\nEvery key may also be set in the config file (`key = value`) or as QCE_<KEY>.\n";
    return os.str();
}

} // namespace qce
