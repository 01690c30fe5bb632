// config.cpp: config parsing and validation

#include "rabichaos/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rabichaos {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(std::string_view source, int line, const std::string& what) {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw ConfigError(msg.str());
}

double parse_double(std::string_view text, std::string_view key) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("key '" + std::string(key) + "': not a number: '" + std::string(text) + "'");
    return v;
}

int parse_int(std::string_view text, std::string_view key) {
    text = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("key '" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view key) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_double(text.substr(0, comma), key));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_number(v[i]);
    }
    return s;
}

using Setter = void (*)(RunConfig&, std::string_view, std::string_view);

#define RC_DOUBLE(field) [](RunConfig& c, std::string_view k, std::string_view v) { c.field = parse_double(v, k); }
#define RC_INT(field) [](RunConfig& c, std::string_view k, std::string_view v) { c.field = parse_int(v, k); }

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table{
        {"omega", RC_DOUBLE(params.omega)},
        {"omega0", RC_DOUBLE(params.omega0)},
        {"g1", RC_DOUBLE(params.g1)},
        {"g2", RC_DOUBLE(params.g2)},
        {"np", RC_INT(params.np)},
        {"energy", RC_DOUBLE(energy)},
        {"energy_tolerance", RC_DOUBLE(energy_tolerance)},
        {"delta", RC_DOUBLE(delta)},
        {"t_start", RC_DOUBLE(window.t_start)},
        {"t_end", RC_DOUBLE(window.t_end)},
        {"dt", RC_DOUBLE(dt)},
        {"fit.start_factor", RC_DOUBLE(fit.start_factor)},
        {"fit.smoothing", RC_DOUBLE(fit.smoothing)},
        {"fit.search_span", RC_DOUBLE(fit.search_span)},
        {"fit.fall_fraction", RC_DOUBLE(fit.fall_fraction)},
        {"fit.t_start", RC_DOUBLE(fit_t_start)},
        {"fit.t_end", RC_DOUBLE(fit_t_end)},
        {"np_check", RC_INT(np_check)},
        {"map.grid", RC_INT(map_grid)},
        {"husimi.grid", RC_INT(husimi_grid)},
        {"husimi.range", RC_DOUBLE(husimi_range)},
        {"husimi.times", [](RunConfig& c, std::string_view k, std::string_view v) { c.husimi_times = parse_list(v, k); }},
        {"husimi.peak_threshold", RC_DOUBLE(husimi_peak_threshold)},
        {"inversion.width", RC_DOUBLE(inversion_width)},
        {"collapse.fraction", RC_DOUBLE(collapse_fraction)},
        {"classical.tol", RC_DOUBLE(classical_tol)},
        {"classical.drift_limit", RC_DOUBLE(drift_limit)},
        {"lyapunov.t_end", RC_DOUBLE(lyapunov_t_end)},
        {"lyapunov.renorm", RC_DOUBLE(lyapunov_renorm)},
        {"poincare.t_end", RC_DOUBLE(poincare_t_end)},
        {"poincare.max_points", RC_INT(poincare_max_points)},
        {"poincare.scan", RC_INT(poincare_scan)},
        {"workers", RC_INT(workers)},
        {"out", [](RunConfig& c, std::string_view, std::string_view v) { c.out_dir = std::string(v); }},
    };
    return table;
}

#undef RC_DOUBLE
#undef RC_INT

bool valid_point_name(std::string_view name) {
    if (name.empty()) return false;
    for (char ch : name)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) return false;
    return true;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

const NamedPoint& RunConfig::point(std::string_view name) const {
    for (const auto& p : points)
        if (p.name == name) return p;
    throw ConfigError("no point named '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> e;
    const auto num = [&](std::string k, double v) { e.emplace_back(std::move(k), format_number(v)); };
    const auto integer = [&](std::string k, int v) { e.emplace_back(std::move(k), std::to_string(v)); };
    num("omega", params.omega);
    num("omega0", params.omega0);
    num("g1", params.g1);
    num("g2", params.g2);
    integer("np", params.np);
    num("energy", energy);
    num("energy_tolerance", energy_tolerance);
    for (const auto& p : points) {
        // Shell-solved points are echoed with their solved p2 so the echo
        // reproduces them bit for bit.
        e.emplace_back("point." + p.name, format_list({p.point.q1, p.point.p1, p.point.q2, p.point.p2}));
    }
    num("delta", delta);
    num("t_start", window.t_start);
    num("t_end", window.t_end);
    num("dt", dt);
    num("fit.start_factor", fit.start_factor);
    num("fit.smoothing", fit.smoothing);
    num("fit.search_span", fit.search_span);
    num("fit.fall_fraction", fit.fall_fraction);
    if (fit_t_start) num("fit.t_start", *fit_t_start);
    if (fit_t_end) num("fit.t_end", *fit_t_end);
    integer("np_check", np_check);
    integer("map.grid", map_grid);
    integer("husimi.grid", husimi_grid);
    num("husimi.range", husimi_range);
    e.emplace_back("husimi.times", format_list(husimi_times));
    num("husimi.peak_threshold", husimi_peak_threshold);
    num("inversion.width", inversion_width);
    if (collapse_fraction) num("collapse.fraction", *collapse_fraction);
    num("classical.tol", classical_tol);
    num("classical.drift_limit", drift_limit);
    num("lyapunov.t_end", lyapunov_t_end);
    num("lyapunov.renorm", lyapunov_renorm);
    num("poincare.t_end", poincare_t_end);
    integer("poincare.max_points", poincare_max_points);
    integer("poincare.scan", poincare_scan);
    e.emplace_back("out", out_dir);
    integer("workers", workers);
    return e;
}

void RunConfig::validate() const {
    params.validate();
    const auto require = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(std::string("key '") + key + "': " + what);
    };
    require(energy_tolerance > 0.0, "energy_tolerance", "must be > 0");
    require(window.t_start < window.t_end, "t_end", "must exceed t_start");
    require(dt > 0.0, "dt", "must be > 0");
    require(fit.start_factor > 0.0, "fit.start_factor", "must be > 0");
    require(fit.smoothing > 0.0, "fit.smoothing", "must be > 0");
    require(fit.search_span > 0.0, "fit.search_span", "must be > 0");
    require(fit.fall_fraction > 0.0 && fit.fall_fraction < 1.0, "fit.fall_fraction", "must be in (0, 1)");
    require(!(fit_t_start && fit_t_end) || *fit_t_start < *fit_t_end, "fit.t_end", "must exceed fit.t_start");
    require(np_check == 0 || np_check > params.np, "np_check", "must be 0 or larger than np");
    require(map_grid >= 1, "map.grid", "must be >= 1");
    require(husimi_grid >= 3, "husimi.grid", "must be >= 3");
    require(husimi_range > 0.0, "husimi.range", "must be > 0");
    require(husimi_peak_threshold >= 0.0 && husimi_peak_threshold < 1.0, "husimi.peak_threshold", "must be in [0, 1)");
    require(inversion_width > 0.0, "inversion.width", "must be > 0");
    require(!collapse_fraction || (*collapse_fraction > 0.0 && *collapse_fraction < 1.0), "collapse.fraction",
            "must be in (0, 1)");
    require(classical_tol > 0.0, "classical.tol", "must be > 0");
    require(drift_limit > 0.0, "classical.drift_limit", "must be > 0");
    require(lyapunov_renorm > 0.0, "lyapunov.renorm", "must be > 0");
    require(lyapunov_t_end >= lyapunov_renorm, "lyapunov.t_end", "must be >= lyapunov.renorm");
    require(poincare_t_end > 0.0, "poincare.t_end", "must be > 0");
    require(poincare_max_points >= 1, "poincare.max_points", "must be >= 1");
    require(poincare_scan >= 0, "poincare.scan", "must be >= 0");
    require(workers >= 1, "workers", "must be >= 1");

    for (const auto& p : points) {
        const double r2 = p.point.bloch_radius2();
        if (!(r2 < 2.0)) {
            std::ostringstream msg;
            msg << "point '" << p.name << "': outside Bloch domain (q1^2 + p1^2 = " << r2 << ", must be < 2)";
            throw ConfigError(msg.str());
        }
        const double e = classical_energy(p.point, params);
        if (std::abs(e - energy) > energy_tolerance) {
            std::ostringstream msg;
            msg << "point '" << p.name << "': classical energy " << e << " is off the shell E = " << energy;
            throw ConfigError(msg.str());
        }
    }
}

RunConfig parse_config(std::string_view text, std::string_view source) {
    RunConfig cfg;
    struct PendingPoint {
        std::string name;
        std::vector<double> values;
        int line;
    };
    std::vector<PendingPoint> pending;
    std::map<std::string, int, std::less<>> seen;

    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail_at(source, line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) fail_at(source, line_no, "empty key");
        if (value.empty()) fail_at(source, line_no, "key '" + std::string(key) + "' has no value");
        if (const auto [it, fresh] = seen.emplace(std::string(key), line_no); !fresh)
            fail_at(source, line_no, "duplicate key '" + std::string(key) + "' (first set on line " +
                                         std::to_string(it->second) + ")");

        try {
            if (key.starts_with("point.")) {
                const std::string name(key.substr(6));
                if (!valid_point_name(name)) fail_at(source, line_no, "invalid point name '" + name + "'");
                std::vector<double> v = parse_list(value, key);
                if (v.size() != 3 && v.size() != 4)
                    fail_at(source, line_no, "point '" + name + "' needs 3 (q1, p1, q2) or 4 (q1, p1, q2, p2) numbers");
                pending.push_back({name, std::move(v), line_no});
                continue;
            }
            const auto it = setters().find(key);
            if (it == setters().end()) fail_at(source, line_no, "unknown key '" + std::string(key) + "'");
            it->second(cfg, key, value);
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            if (what.starts_with(std::string(source) + ":")) throw;
            fail_at(source, line_no, what);
        }
    }

    try {
        cfg.params.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    for (const auto& p : pending) {
        NamedPoint np{p.name, {p.values[0], p.values[1], p.values[2], 0.0}, p.values.size() == 3};
        if (!(np.point.bloch_radius2() < 2.0)) {
            std::ostringstream msg;
            msg << source << ":" << p.line << ": point '" << p.name
                << "': outside Bloch domain (q1^2 + p1^2 = " << np.point.bloch_radius2() << ", must be < 2)";
            throw ConfigError(msg.str());
        }
        if (np.p2_from_shell) {
            try {
                np.point.p2 = solve_p2_on_shell(np.point.q1, np.point.p1, np.point.q2, cfg.energy, cfg.params).p2;
            } catch (const ValidationError& e) {
                fail_at(source, p.line, "point '" + p.name + "': " + e.what());
            }
        } else {
            np.point.p2 = p.values[3];
        }
        cfg.points.push_back(np);
    }
    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

}  // namespace rabichaos
