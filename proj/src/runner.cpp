// runner.cpp: subcommands behind the rabichaos CLI

#include "rabichaos/runner.hpp"

#include "rabichaos/classical.hpp"
#include "rabichaos/dynamics.hpp"
#include "rabichaos/observables.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace rabichaos {

namespace {

struct Outputs {
    std::vector<std::string> header;
    std::vector<CsvTable> tables;
    std::map<std::string, std::vector<std::string>> error_logs;

    CsvTable& add(CsvTable table) {
        tables.push_back(std::move(table));
        return tables.back();
    }
};

// Runs f(i) for i in [0, n) on up to `workers` threads. Each task writes only
// its own slot, so results are independent of scheduling. The first failure
// in index order is rethrown after all tasks finish.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& f) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto w = static_cast<std::size_t>(std::max(1, workers));
    if (w == 1 || n <= 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < std::min(w, n); ++k) pool.emplace_back(body);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string fmt(double v) { return format_number(v); }

std::string point_label(const NamedPoint& p) {
    std::ostringstream s;
    s << "point " << p.name << " = (" << fmt(p.point.q1) << ", " << fmt(p.point.p1) << ", " << fmt(p.point.q2)
      << ", " << fmt(p.point.p2) << ")";
    return s.str();
}

void note_cutoff_margins(const RunConfig& cfg, Outputs& out) {
    for (const auto& p : cfg.points)
        if (!cutoff_margin_ok(field_parameter(p.point), cfg.params.np))
            out.header.push_back("warning: " + p.name + ": |beta|^2 + 6|beta| exceeds np = " +
                                 std::to_string(cfg.params.np));
}

GrowthFit fit_otoc(const RunConfig& cfg, const TimeSeries& series, std::string& source) {
    if (cfg.fit_t_start && cfg.fit_t_end) {
        source = "config";
        return fit_growth_rate(series, {*cfg.fit_t_start, *cfg.fit_t_end});
    }
    AutoWindowOptions opts = cfg.fit;
    if (cfg.fit_t_end) opts.t_end_cap = cfg.fit_t_end;
    source = "auto";
    return fit_growth_rate_auto(series, opts);
}

struct OtocResult {
    OtocSeries series;
    GrowthFit fit;
    std::string fit_source;
    std::optional<double> cutoff_deviation;
};

std::vector<OtocResult> compute_otoc(const RunConfig& cfg) {
    const SpectralDecomposition spec = decompose(build_hamiltonian(cfg.params));
    const OperatorSet ops = build_operators(cfg.params);
    const std::vector<double> times = uniform_times(cfg.window.t_start, cfg.window.t_end, cfg.dt);

    std::optional<SpectralDecomposition> spec_check;
    std::optional<OperatorSet> ops_check;
    ModelParams check_params = cfg.params;
    if (cfg.np_check > 0) {
        check_params.np = cfg.np_check;
        spec_check = decompose(build_hamiltonian(check_params));
        ops_check = build_operators(check_params);
    }

    std::vector<OtocResult> results(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.workers, [&](std::size_t i) {
        const PhasePoint& x = cfg.points[i].point;
        OtocResult& r = results[i];
        r.series = otoc_variance(coherent_state(x, cfg.params), spec, ops.q2, ops.p2, times);
        r.fit = fit_otoc(cfg, r.series.sum, r.fit_source);
        if (spec_check) {
            const OtocSeries ref = otoc_variance(coherent_state(x, check_params), *spec_check, ops_check->q2,
                                                 ops_check->p2, times);
            r.cutoff_deviation = max_relative_deviation(r.series.sum, ref.sum);
        }
    });
    return results;
}

inline constexpr double kCutoffAgreement = 1e-4;

void emit_otoc(const RunConfig& cfg, const std::vector<OtocResult>& results, Outputs& out) {
    bool all_converged = true;
    bool checked = false;
    CsvTable fit_table("otoc_fit.csv", {"name", "rate", "t_start", "t_end", "r_squared", "samples", "window",
                                         "cutoff_rel_dev"});
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const std::string& name = cfg.points[i].name;
        CsvTable t("otoc_" + name + ".csv", {"t", "var_q2", "var_p2", "sum"});
        t.add_note(point_label(cfg.points[i]));
        t.add_note("fit: rate = " + fmt(r.fit.rate) + ", window = [" + fmt(r.fit.window.t_start) + ", " +
                   fmt(r.fit.window.t_end) + "] (" + r.fit_source + "), R^2 = " + fmt(r.fit.r_squared));
        for (std::size_t k = 0; k < r.series.sum.size(); ++k)
            t.add_numbers({r.series.sum.times[k], r.series.var_q2.values[k], r.series.var_p2.values[k],
                           r.series.sum.values[k]});
        out.add(std::move(t));
        if (r.cutoff_deviation) {
            checked = true;
            all_converged = all_converged && *r.cutoff_deviation <= kCutoffAgreement;
        }
        fit_table.add_row({name, fmt(r.fit.rate), fmt(r.fit.window.t_start), fmt(r.fit.window.t_end),
                           fmt(r.fit.r_squared), std::to_string(r.fit.samples), r.fit_source,
                           r.cutoff_deviation ? fmt(*r.cutoff_deviation) : ""});
    }
    out.add(std::move(fit_table));
    if (checked) {
        out.header.push_back(std::string("cutoff_converged: ") + (all_converged ? "yes" : "no (unconverged)") +
                             " (np = " + std::to_string(cfg.params.np) + " vs np_check = " +
                             std::to_string(cfg.np_check) + ", relative tolerance " + fmt(kCutoffAgreement) + ")");
    }
}

void run_otoc(const RunConfig& cfg, Outputs& out) {
    emit_otoc(cfg, compute_otoc(cfg), out);
}

void run_echo(const RunConfig& cfg, Outputs& out) {
    ModelParams shifted = cfg.params;
    shifted.omega += cfg.delta;
    const SpectralDecomposition spec = decompose(build_hamiltonian(cfg.params));
    const SpectralDecomposition perturbed = decompose(build_hamiltonian(shifted));
    const std::vector<double> times = uniform_times(cfg.window.t_start, cfg.window.t_end, cfg.dt);

    std::vector<TimeSeries> echoes(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.workers, [&](std::size_t i) {
        echoes[i] = loschmidt_echo(coherent_state(cfg.points[i].point, cfg.params), spec, perturbed, times);
    });
    CsvTable summary("echo_summary.csv", {"name", "mean_L", "final_L"});
    for (std::size_t i = 0; i < echoes.size(); ++i) {
        CsvTable t("echo_" + cfg.points[i].name + ".csv", {"t", "L"});
        t.add_note(point_label(cfg.points[i]));
        for (std::size_t k = 0; k < echoes[i].size(); ++k) t.add_numbers({echoes[i].times[k], echoes[i].values[k]});
        out.add(std::move(t));
        summary.add_row({cfg.points[i].name, fmt(trapezoid_average(echoes[i])), fmt(echoes[i].values.back())});
    }
    out.add(std::move(summary));
}

struct InversionResult {
    TimeSeries w;
    TimeSeries envelope;
    std::optional<TimeWindow> collapse;
};

std::vector<InversionResult> compute_inversion(const RunConfig& cfg) {
    const SpectralDecomposition spec = decompose(build_hamiltonian(cfg.params));
    const std::vector<double> times = uniform_times(cfg.window.t_start, cfg.window.t_end, cfg.dt);
    std::vector<InversionResult> results(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.workers, [&](std::size_t i) {
        InversionResult& r = results[i];
        r.w = population_inversion(coherent_state(cfg.points[i].point, cfg.params), spec, times);
        r.envelope = moving_stddev(r.w, cfg.inversion_width);
        if (cfg.collapse_fraction) r.collapse = collapse_window(r.w, cfg.inversion_width, *cfg.collapse_fraction);
    });
    return results;
}

void emit_inversion(const RunConfig& cfg, const std::vector<InversionResult>& results, Outputs& out) {
    std::optional<CsvTable> summary;
    if (cfg.collapse_fraction) summary.emplace("inversion_summary.csv", std::vector<std::string>{"name", "collapse_start", "collapse_end"});
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        CsvTable t("inversion_" + cfg.points[i].name + ".csv", {"t", "W", "moving_std"});
        t.add_note(point_label(cfg.points[i]));
        for (std::size_t k = 0; k < r.w.size(); ++k) t.add_numbers({r.w.times[k], r.w.values[k], r.envelope.values[k]});
        out.add(std::move(t));
        if (summary)
            summary->add_row({cfg.points[i].name, r.collapse ? fmt(r.collapse->t_start) : "",
                              r.collapse ? fmt(r.collapse->t_end) : ""});
    }
    if (summary) out.add(std::move(*summary));
}

void run_inversion(const RunConfig& cfg, Outputs& out) {
    emit_inversion(cfg, compute_inversion(cfg), out);
}

void run_husimi(const RunConfig& cfg, Outputs& out) {
    const SpectralDecomposition spec = decompose(build_hamiltonian(cfg.params));
    std::vector<double> times = cfg.husimi_times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const HusimiGridSpec grid{-cfg.husimi_range, cfg.husimi_range, cfg.husimi_grid,
                              -cfg.husimi_range, cfg.husimi_range, cfg.husimi_grid};

    std::vector<std::vector<HusimiGrid>> snaps(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.workers, [&](std::size_t i) {
        evolve_series(coherent_state(cfg.points[i].point, cfg.params), spec, times,
                      [&](std::size_t k, const Eigen::Ref<const Eigen::VectorXcd>& psi) {
                          snaps[i].push_back(husimi_q(psi, grid, times[k]));
                      });
    });
    out.header.push_back("husimi: Q(q2, p2) = (1/pi) <beta|rho_field|beta>, beta = (q2 + i p2)/sqrt(2); "
                         "sum Q dq2 dp2 / 2 = 1");
    CsvTable peaks("husimi_peaks.csv", {"name", "t", "mass", "n_peaks", "peaks"});
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        for (const HusimiGrid& g : snaps[i]) {
            CsvTable t("husimi_" + cfg.points[i].name + "_t" + fmt(g.time) + ".csv", {"q2", "p2", "Q"});
            t.add_note(point_label(cfg.points[i]) + ", t = " + fmt(g.time));
            for (std::size_t a = 0; a < g.q2_axis.size(); ++a)
                for (std::size_t b = 0; b < g.p2_axis.size(); ++b)
                    t.add_numbers({g.q2_axis[a], g.p2_axis[b], g.values(static_cast<Eigen::Index>(a),
                                                                         static_cast<Eigen::Index>(b))});
            out.add(std::move(t));
            const auto maxima = local_maxima(g, cfg.husimi_peak_threshold);
            std::string list;
            for (const auto& m : maxima) {
                if (!list.empty()) list += ' ';
                list += fmt(m.q2) + ':' + fmt(m.p2) + ':' + fmt(m.value);
            }
            peaks.add_row({cfg.points[i].name, fmt(g.time), fmt(g.mass()), std::to_string(maxima.size()), list});
        }
    }
    out.add(std::move(peaks));
}

void run_entropy_map(const RunConfig& cfg, Outputs& out) {
    const MapGrid grid{cfg.map_grid, 1.4142135623730951, 0.0};
    const EntropyMap map = entropy_map(grid, cfg.params, cfg.energy, cfg.window, cfg.dt, cfg.workers);
    out.add(entropy_map_table(map));
    auto& log = out.error_logs["entropy_map_errors.log"];
    for (const auto& c : map.cells)
        if (!c.error.empty()) log.push_back(fmt(c.q1) + "," + fmt(c.p1) + ": " + c.error);

    const SpectralDecomposition spec = decompose(build_hamiltonian(cfg.params));
    std::vector<double> sm(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.workers, [&](std::size_t i) {
        sm[i] = time_averaged_entropy(cfg.points[i].point, cfg.params, spec, cfg.window, cfg.dt);
    });
    CsvTable points("entropy_points.csv", {"name", "q1", "p1", "p2", "S_m"});
    for (std::size_t i = 0; i < sm.size(); ++i) {
        const auto& p = cfg.points[i];
        points.add_row({p.name, fmt(p.point.q1), fmt(p.point.p1), fmt(p.point.p2), fmt(sm[i])});
    }
    out.add(std::move(points));
}

IntegratorOptions integrator_options(const RunConfig& cfg) {
    IntegratorOptions o;
    o.tolerance = cfg.classical_tol;
    o.max_relative_drift = cfg.drift_limit;
    return o;
}

struct SectionResult {
    SectionPoints section;
    CurveMetrics metrics;
    double hull_area{0.0};
};

std::vector<SectionResult> compute_sections(const RunConfig& cfg) {
    std::vector<SectionResult> results(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.workers, [&](std::size_t i) {
        SectionResult& r = results[i];
        r.section = poincare_section(cfg.points[i].point, cfg.params, cfg.poincare_t_end,
                                     static_cast<std::size_t>(cfg.poincare_max_points), integrator_options(cfg));
        r.metrics = closed_curve_metrics(r.section.points);
        r.hull_area = convex_hull_area(r.section.points);
    });
    return results;
}

void emit_sections(const RunConfig& cfg, const std::vector<SectionResult>& results, Outputs& out) {
    CsvTable summary("poincare_summary.csv", {"name", "points", "hull_area", "diameter", "thickness", "max_gap",
                                               "closed_curve", "max_energy_drift"});
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        CsvTable t("poincare_" + cfg.points[i].name + ".csv", {"q1", "p1", "p2"});
        t.add_note(point_label(cfg.points[i]));
        for (const auto& s : r.section.points) t.add_numbers({s.q1, s.p1, s.p2});
        out.add(std::move(t));
        summary.add_row({cfg.points[i].name, std::to_string(r.section.points.size()), fmt(r.hull_area),
                         fmt(r.metrics.diameter), fmt(r.metrics.thickness), fmt(r.metrics.max_gap),
                         is_closed_curve(r.metrics) ? "yes" : "no", fmt(r.section.max_relative_drift)});
    }
    out.add(std::move(summary));
}

void run_poincare(const RunConfig& cfg, Outputs& out) {
    emit_sections(cfg, compute_sections(cfg), out);
    if (cfg.poincare_scan == 0) return;

    // Shell-filling scan: seeds along q1 = 0, q2 = 0 across the Bloch disk.
    const int n = cfg.poincare_scan;
    std::vector<std::optional<SectionPoints>> scans(static_cast<std::size_t>(n));
    std::vector<std::string> errors(static_cast<std::size_t>(n));
    std::vector<double> seeds_p1(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) seeds_p1[k] = -1.4 + 2.8 * (k + 0.5) / n;
    parallel_for(static_cast<std::size_t>(n), cfg.workers, [&](std::size_t k) {
        try {
            const double p2 = solve_p2_on_shell(0.0, seeds_p1[k], 0.0, cfg.energy, cfg.params).p2;
            scans[k] = poincare_section({0.0, seeds_p1[k], 0.0, p2}, cfg.params, cfg.poincare_t_end,
                                        static_cast<std::size_t>(cfg.poincare_max_points), integrator_options(cfg));
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });
    CsvTable t("poincare_scan.csv", {"seed", "q1", "p1", "p2"});
    auto& log = out.error_logs["poincare_scan_errors.log"];
    for (int k = 0; k < n; ++k) {
        if (!errors[k].empty()) log.push_back("seed " + std::to_string(k) + " (p1 = " + fmt(seeds_p1[k]) + "): " + errors[k]);
        if (!scans[k]) continue;
        for (const auto& s : scans[k]->points) t.add_row({std::to_string(k), fmt(s.q1), fmt(s.p1), fmt(s.p2)});
    }
    out.add(std::move(t));
}

void run_lyapunov(const RunConfig& cfg, Outputs& out) {
    std::vector<LyapunovEstimate> est(cfg.points.size());
    parallel_for(cfg.points.size(), cfg.workers, [&](std::size_t i) {
        est[i] = lyapunov_exponent(cfg.points[i].point, cfg.params, cfg.lyapunov_t_end, cfg.lyapunov_renorm,
                                   integrator_options(cfg));
    });
    CsvTable summary("lyapunov_summary.csv", {"name", "lambda", "converged", "t_end", "renorm_interval"});
    for (std::size_t i = 0; i < est.size(); ++i) {
        CsvTable t("lyapunov_" + cfg.points[i].name + ".csv", {"t", "running_estimate"});
        t.add_note(point_label(cfg.points[i]));
        for (const auto& [time, value] : est[i].history) t.add_numbers({time, value});
        out.add(std::move(t));
        summary.add_row({cfg.points[i].name, fmt(est[i].lambda), est[i].converged ? "yes" : "no",
                         fmt(cfg.lyapunov_t_end), fmt(est[i].renorm_interval)});
    }
    out.add(std::move(summary));
}

void run_jc_suite(const RunConfig& cfg, Outputs& out) {
    if (!cfg.collapse_fraction) throw ConfigError("jc-suite needs collapse.fraction in the config");
    const auto sections = compute_sections(cfg);
    const auto otoc = compute_otoc(cfg);
    const auto inversion = compute_inversion(cfg);
    emit_sections(cfg, sections, out);
    emit_otoc(cfg, otoc, out);
    emit_inversion(cfg, inversion, out);

    CsvTable summary("jc_summary.csv", {"name", "closed_curve", "otoc_rate", "fit_start", "fit_end",
                                         "collapse_start", "collapse_end", "overlap"});
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        const auto& c = inversion[i].collapse;
        const GrowthFit& f = otoc[i].fit;
        summary.add_row({cfg.points[i].name, is_closed_curve(sections[i].metrics) ? "yes" : "no", fmt(f.rate),
                         fmt(f.window.t_start), fmt(f.window.t_end), c ? fmt(c->t_start) : "",
                         c ? fmt(c->t_end) : "", c ? fmt(window_overlap_fraction(f.window, *c)) : ""});
    }
    out.add(std::move(summary));
}

using Handler = void (*)(const RunConfig&, Outputs&);

const std::map<std::string, Handler, std::less<>>& handlers() {
    static const std::map<std::string, Handler, std::less<>> table{
        {"poincare", run_poincare},         {"entropy-map", run_entropy_map}, {"echo", run_echo},
        {"otoc", run_otoc},                 {"husimi", run_husimi},           {"inversion", run_inversion},
        {"lyapunov", run_lyapunov},         {"jc-suite", run_jc_suite},
    };
    return table;
}

void write_outputs(const std::filesystem::path& dir, const Outputs& out, std::string_view failure) {
    std::filesystem::create_directories(dir);
    for (const auto& t : out.tables) {
        std::ofstream f(dir / t.file_name(), std::ios::binary);
        f << t.render(out.header, failure);
        if (!f) throw std::runtime_error("failed to write " + (dir / t.file_name()).string());
    }
    for (const auto& [name, lines] : out.error_logs) {
        if (lines.empty()) continue;
        std::ofstream f(dir / name, std::ios::binary);
        for (const auto& l : lines) f << l << '\n';
    }
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"poincare", "entropy-map", "echo",     "otoc",
                                                "husimi",   "inversion",   "lyapunov", "jc-suite"};
    return names;
}

void apply_overrides(RunConfig& cfg, std::string_view subcommand, const Overrides& o) {
    if (o.grid) {
        if (subcommand == "husimi")
            cfg.husimi_grid = *o.grid;
        else
            cfg.map_grid = *o.grid;
    }
    if (o.np) cfg.params.np = *o.np;
    if (o.t_end) {
        if (subcommand == "lyapunov")
            cfg.lyapunov_t_end = *o.t_end;
        else if (subcommand == "poincare")
            cfg.poincare_t_end = *o.t_end;
        else
            cfg.window.t_end = *o.t_end;
    }
    if (o.out) cfg.out_dir = *o.out;
    if (o.workers) cfg.workers = *o.workers;
    cfg.validate();
}

CsvTable::CsvTable(std::string file_name, std::vector<std::string> columns)
    : name_(std::move(file_name)), columns_(std::move(columns)) {}

void CsvTable::add_note(std::string line) { notes_.push_back(std::move(line)); }

void CsvTable::add_row(std::vector<std::string> cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    rows_.push_back(std::move(row));
}

void CsvTable::add_numbers(std::initializer_list<double> values) {
    std::string row;
    bool first = true;
    for (double v : values) {
        if (!first) row += ',';
        row += format_number(v);
        first = false;
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::render(const std::vector<std::string>& header, std::string_view failure) const {
    std::string s;
    for (const auto& h : header) s += "# " + h + '\n';
    for (const auto& n : notes_) s += "# " + n + '\n';
    if (!failure.empty()) s += "# FAILED: " + std::string(failure) + '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) s += ',';
        s += columns_[i];
    }
    s += '\n';
    for (const auto& r : rows_) s += r + '\n';
    return s;
}

std::vector<std::string> provenance_header(const RunConfig& cfg, std::string_view subcommand,
                                           std::string_view config_source) {
    std::vector<std::string> h;
    h.push_back(std::string("rabichaos ") + RABICHAOS_VERSION);
    h.push_back("command: " + std::string(subcommand) + " " + std::string(config_source));
    for (const auto& [k, v] : cfg.echo()) {
        // Worker count and output directory do not affect the data.
        if (k == "workers" || k == "out") continue;
        h.push_back(k + " = " + v);
    }
    return h;
}

CsvTable entropy_map_table(const EntropyMap& map) {
    CsvTable t("entropy_map.csv", {"q1", "p1", "S_m"});
    t.add_note("grid: " + std::to_string(map.grid.n) + " x " + std::to_string(map.grid.n) + " over [-" +
               format_number(map.grid.extent) + ", " + format_number(map.grid.extent) +
               "]^2; empty S_m marks an inadmissible point");
    for (const auto& c : map.cells)
        t.add_row({format_number(c.q1), format_number(c.p1), c.entropy ? format_number(*c.entropy) : ""});
    return t;
}

int run(std::string_view subcommand, const RunConfig& cfg, std::string_view config_source, std::ostream& log) {
    const auto it = handlers().find(subcommand);
    if (it == handlers().end()) {
        log << "unknown subcommand '" << subcommand << "'\n";
        return kExitValidation;
    }
    Outputs out;
    out.header = provenance_header(cfg, subcommand, config_source);
    const bool classical = subcommand == "poincare" || subcommand == "lyapunov";
    if (!classical) note_cutoff_margins(cfg, out);
    if (classical) out.header.push_back("cutoff_converged: n/a (classical)");
    else if (subcommand != "otoc" && subcommand != "jc-suite") out.header.push_back("cutoff_converged: unchecked");

    try {
        it->second(cfg, out);
    } catch (const NumericalGateError& e) {
        log << "numerical gate failed: " << e.what() << '\n';
        try {
            write_outputs(cfg.out_dir, out, e.what());
        } catch (const std::exception& w) {
            log << w.what() << '\n';
        }
        return kExitNumericalGate;
    } catch (const ValidationError& e) {
        log << "validation error: " << e.what() << '\n';
        return kExitValidation;
    }
    write_outputs(cfg.out_dir, out, {});
    return kExitOk;
}

}  // namespace rabichaos
