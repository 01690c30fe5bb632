// observables.cpp: state diagnostics built on top of the propagation engine

#include "rabichaos/observables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace rabichaos {

ReducedDensityMatrix reduce_to_atom(const Eigen::Ref<const Eigen::VectorXcd>& psi) {
    if (psi.size() < 4 || psi.size() % 2 != 0) throw ValidationError("reduce_to_atom: bad state dimension");
    const Eigen::Index f = psi.size() / 2;
    const auto e = psi.head(f);
    const auto g = psi.tail(f);
    ReducedDensityMatrix rho;
    rho(0, 0) = e.squaredNorm();
    rho(1, 1) = g.squaredNorm();
    rho(0, 1) = g.dot(e);  // sum_n psi_{e,n} conj(psi_{g,n})
    rho(1, 0) = std::conj(rho(0, 1));
    const double trace = rho(0, 0).real() + rho(1, 1).real();
    if (std::abs(trace - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "reduce_to_atom: state not normalized (trace " << trace << ")";
        throw ValidationError(msg.str());
    }
    return rho;
}

ReducedDensityMatrix reduce_to_atom(const QuantumState& state) {
    return reduce_to_atom(state.amplitudes());
}

double purity(const ReducedDensityMatrix& rho) {
    return (rho * rho).trace().real();
}

double linear_entropy(const ReducedDensityMatrix& rho) {
    return 1.0 - purity(rho);
}

TimeSeries entropy_series(const QuantumState& state0, const SpectralDecomposition& spec,
                          std::span<const double> times) {
    TimeSeries out{"linear_entropy", {times.begin(), times.end()}, std::vector<double>(times.size())};
    evolve_series(state0, spec, times, [&](std::size_t i, const Eigen::Ref<const Eigen::VectorXcd>& psi) {
        out.values[i] = linear_entropy(reduce_to_atom(psi));
    });
    return out;
}

double trapezoid_average(const TimeSeries& series) {
    series.validate();
    if (series.size() < 2) throw ValidationError("trapezoid_average: need at least two samples");
    double acc = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i)
        acc += 0.5 * (series.values[i] + series.values[i - 1]) * (series.times[i] - series.times[i - 1]);
    return acc / (series.times.back() - series.times.front());
}

double time_averaged_entropy(const PhasePoint& point, const ModelParams& params,
                             const SpectralDecomposition& spec, TimeWindow window, double dt) {
    if (!(window.t_start < window.t_end)) throw ValidationError("entropy window needs t1 < t2");
    const QuantumState psi0 = coherent_state(point, params);
    const std::vector<double> times = uniform_times(window.t_start, window.t_end, dt);
    return trapezoid_average(entropy_series(psi0, spec, times));
}

double time_averaged_entropy(const PhasePoint& point, const ModelParams& params,
                             TimeWindow window, double dt) {
    return time_averaged_entropy(point, params, decompose(build_hamiltonian(params)), window, dt);
}

double MapGrid::coordinate(int i) const noexcept {
    if (n == 1) return 0.0;
    return -extent + 2.0 * extent * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::size_t EntropyMap::admissible() const noexcept {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(),
                                                  [](const MapCell& c) { return c.entropy.has_value(); }));
}

EntropyMap entropy_map(const MapGrid& grid, const ModelParams& params, double energy,
                       TimeWindow window, double dt, int workers) {
    if (grid.n < 1) throw ValidationError("entropy map grid needs n >= 1");
    const SpectralDecomposition spec = decompose(build_hamiltonian(params));
    const std::vector<double> times = uniform_times(window.t_start, window.t_end, dt);

    EntropyMap map{grid, std::vector<MapCell>(static_cast<std::size_t>(grid.n) * grid.n)};
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            MapCell& cell = map.cells[static_cast<std::size_t>(i) * grid.n + j];
            cell.q1 = grid.coordinate(i);
            cell.p1 = grid.coordinate(j);
        }

    auto evaluate = [&](MapCell& cell) {
        try {
            const ShellRoots roots = solve_p2_on_shell(cell.q1, cell.p1, grid.q2, energy, params);
            cell.p2 = roots.p2;
            const QuantumState psi0 = coherent_state({cell.q1, cell.p1, grid.q2, roots.p2}, params);
            cell.entropy = trapezoid_average(entropy_series(psi0, spec, times));
        } catch (const std::exception& e) {
            cell.entropy.reset();
            cell.error = e.what();
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < map.cells.size(); k = next++) evaluate(map.cells[k]);
    };
    const int n_workers = std::max(1, workers);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    return map;
}

double HusimiGrid::mass() const {
    if (q2_axis.size() < 2 || p2_axis.size() < 2) return 0.0;
    const double dq = q2_axis[1] - q2_axis[0];
    const double dp = p2_axis[1] - p2_axis[0];
    return values.sum() * dq * dp * 0.5;
}

HusimiGrid husimi_q(const Eigen::Ref<const Eigen::VectorXcd>& psi, const HusimiGridSpec& spec, double time) {
    if (spec.nq < 2 || spec.np < 2) throw ValidationError("Husimi grid needs at least 2 points per axis");
    const Eigen::Index f = psi.size() / 2;
    const auto axis = [](double lo, double hi, int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        return v;
    };
    HusimiGrid out{axis(spec.q_min, spec.q_max, spec.nq), axis(spec.p_min, spec.p_max, spec.np),
                   Eigen::MatrixXd(spec.nq, spec.np), time};

    for (int i = 0; i < spec.nq; ++i) {
        for (int j = 0; j < spec.np; ++j) {
            const cplx beta = cplx(out.q2_axis[i], out.p2_axis[j]) / std::numbers::sqrt2;
            // <beta|n> = e^{-|beta|^2/2} conj(beta)^n / sqrt(n!)
            const std::vector<cplx> c = glauber_amplitudes(std::conj(beta), static_cast<int>(f) - 1);
            cplx amp_e = 0.0, amp_g = 0.0;
            for (Eigen::Index n = 0; n < f; ++n) {
                amp_e += c[n] * psi(n);
                amp_g += c[n] * psi(f + n);
            }
            out.values(i, j) = (std::norm(amp_e) + std::norm(amp_g)) / std::numbers::pi;
        }
    }
    return out;
}

HusimiGrid husimi_q(const QuantumState& state, const HusimiGridSpec& spec, double time) {
    return husimi_q(state.amplitudes(), spec, time);
}

std::vector<HusimiPeak> local_maxima(const HusimiGrid& grid, double rel_threshold) {
    const Eigen::MatrixXd& q = grid.values;
    const double floor = rel_threshold * q.maxCoeff();
    std::vector<HusimiPeak> peaks;
    for (Eigen::Index i = 1; i + 1 < q.rows(); ++i) {
        for (Eigen::Index j = 1; j + 1 < q.cols(); ++j) {
            const double v = q(i, j);
            if (v < floor) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if ((di != 0 || dj != 0) && q(i + di, j + dj) > v) {
                        is_max = false;
                        break;
                    }
            if (is_max) peaks.push_back({grid.q2_axis[i], grid.p2_axis[j], v});
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const HusimiPeak& a, const HusimiPeak& b) { return a.value > b.value; });
    return peaks;
}

TimeSeries population_inversion(const QuantumState& state0, const SpectralDecomposition& spec,
                                std::span<const double> times) {
    TimeSeries out{"inversion", {times.begin(), times.end()}, std::vector<double>(times.size())};
    const Eigen::Index f = state0.dim() / 2;
    evolve_series(state0, spec, times, [&](std::size_t i, const Eigen::Ref<const Eigen::VectorXcd>& psi) {
        out.values[i] = psi.head(f).squaredNorm() - psi.tail(f).squaredNorm();
    });
    return out;
}

TimeSeries moving_stddev(const TimeSeries& series, double width) {
    series.validate();
    TimeSeries out{series.label + "_moving_std", series.times, std::vector<double>(series.size())};
    const double half = 0.5 * width;
    std::size_t lo = 0, hi = 0;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        while (hi < series.size() && series.times[hi] <= t + half) {
            sum += series.values[hi];
            sum2 += series.values[hi] * series.values[hi];
            ++hi;
        }
        while (series.times[lo] < t - half) {
            sum -= series.values[lo];
            sum2 -= series.values[lo] * series.values[lo];
            ++lo;
        }
        const double n = static_cast<double>(hi - lo);
        const double mean = sum / n;
        out.values[i] = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
    }
    return out;
}

std::optional<TimeWindow> collapse_window(const TimeSeries& inversion, double width, double fraction) {
    if (!(width > 0.0) || !(fraction > 0.0)) throw ValidationError("collapse_window needs width > 0 and fraction > 0");
    const TimeSeries env = moving_stddev(inversion, width);
    const double t0 = env.times.front();
    std::size_t peak = 0;
    for (std::size_t i = 0; i < env.size() && env.times[i] <= t0 + 2.0 * width; ++i)
        if (env.values[i] > env.values[peak]) peak = i;
    const double threshold = fraction * env.values[peak];

    std::size_t i = peak;
    while (i < env.size()) {
        while (i < env.size() && env.values[i] >= threshold) ++i;
        if (i == env.size()) break;
        std::size_t j = i;
        while (j + 1 < env.size() && env.values[j + 1] < threshold) ++j;
        // Dips shorter than the averaging width are ripple of the envelope.
        if (env.times[j] - env.times[i] >= width) return TimeWindow{env.times[i], env.times[j]};
        i = j + 1;
    }
    return std::nullopt;
}

GrowthFit fit_growth_rate(const TimeSeries& series, TimeWindow window) {
    series.validate();
    if (series.size() == 0 || window.t_start < series.times.front() || window.t_end > series.times.back())
        throw ValidationError("fit window outside the series range");
    if (!(window.t_start < window.t_end)) throw ValidationError("fit window needs t_start < t_end");

    double st = 0.0, sy = 0.0;
    std::size_t n = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.times[i];
        if (t < window.t_start || t > window.t_end) continue;
        if (!(series.values[i] > 0.0)) throw ValidationError("fit_growth_rate: nonpositive value in window");
        const double y = std::log(series.values[i]);
        pts.emplace_back(t, y);
        st += t;
        sy += y;
        ++n;
    }
    if (n < 5) throw ValidationError("fit_growth_rate: fewer than 5 samples in window");

    // Centered sums for numerical stability.
    const double tm = st / static_cast<double>(n);
    const double ym = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [t, y] : pts) {
        sxx += (t - tm) * (t - tm);
        sxy += (t - tm) * (y - ym);
        syy += (y - ym) * (y - ym);
    }
    GrowthFit fit;
    fit.rate = sxy / sxx;
    fit.intercept = ym - fit.rate * tm;
    fit.window = window;
    fit.samples = n;
    double ss_res = 0.0;
    for (const auto& [t, y] : pts) {
        const double r = y - (fit.intercept + fit.rate * t);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

TimeWindow auto_growth_window(const TimeSeries& series, const AutoWindowOptions& options) {
    series.validate();
    const std::size_t n = series.size();
    if (n < 5) throw ValidationError("auto_growth_window: series too short");
    const std::vector<double>& t = series.times;
    const std::vector<double>& y = series.values;
    if (!(y[0] > 0.0)) throw ValidationError("auto_growth_window: nonpositive initial value");

    std::size_t start = 0;
    while (start < n && !(y[start] > options.start_factor * y[0])) ++start;
    if (start >= n - 1) throw ValidationError("auto_growth_window: series never exceeds the start threshold");

    std::vector<double> log_y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(y[i] > 0.0)) throw ValidationError("auto_growth_window: nonpositive value in series");
        log_y[i] = std::log(y[i]);
    }
    std::vector<double> deriv(n);
    deriv[0] = (log_y[1] - log_y[0]) / (t[1] - t[0]);
    deriv[n - 1] = (log_y[n - 1] - log_y[n - 2]) / (t[n - 1] - t[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) deriv[i] = (log_y[i + 1] - log_y[i - 1]) / (t[i + 1] - t[i - 1]);

    // Centered moving average of the log-derivative.
    std::vector<double> smooth(n);
    {
        const double half = 0.5 * options.smoothing;
        std::size_t lo = 0, hi = 0;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            while (hi < n && t[hi] <= t[i] + half) sum += deriv[hi++];
            while (t[lo] < t[i] - half) sum -= deriv[lo++];
            smooth[i] = sum / static_cast<double>(hi - lo);
        }
    }

    std::size_t peak = start;
    for (std::size_t i = start; i < n && t[i] <= t[start] + options.search_span; ++i)
        if (smooth[i] > smooth[peak]) peak = i;
    std::size_t end = peak;
    while (end < n - 1 && smooth[end] >= options.fall_fraction * smooth[peak]) ++end;

    TimeWindow w{t[start], t[end]};
    if (options.t_end_cap) w.t_end = std::min(w.t_end, *options.t_end_cap);
    if (!(w.t_start < w.t_end)) throw ValidationError("auto_growth_window: empty window");
    return w;
}

GrowthFit fit_growth_rate_auto(const TimeSeries& series, const AutoWindowOptions& options) {
    return fit_growth_rate(series, auto_growth_window(series, options));
}

double window_overlap_fraction(TimeWindow a, TimeWindow b) noexcept {
    const double len = a.t_end - a.t_start;
    if (!(len > 0.0)) return 0.0;
    const double lo = std::max(a.t_start, b.t_start);
    const double hi = std::min(a.t_end, b.t_end);
    return std::max(0.0, hi - lo) / len;
}

}  // namespace rabichaos
