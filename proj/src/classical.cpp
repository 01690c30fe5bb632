// classical.cpp: semiclassical orbits, sections and Lyapunov exponents

#include "rabichaos/classical.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace rabichaos {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Adaptive Runge-Kutta-Fehlberg 7(8) driver that keeps its step size across
// calls and reports every accepted step.
template <std::size_t N>
class FlowDriver {
public:
    using State = std::array<double, N>;

    explicit FlowDriver(double tol) : stepper_(odeint::make_controlled(tol, tol, Stepper{})) {}

    // Advances (x, t) to exactly t_target. on_step(t_prev, x_prev, t, x) is
    // called after every accepted step.
    template <class System, class OnStep>
    void advance(System& sys, State& x, double& t, double t_target, OnStep&& on_step) {
        const double dir = t_target >= t ? 1.0 : -1.0;
        if (dt_ == 0.0 || dt_ * dir < 0.0) dt_ = dir * 1e-2;
        while ((t_target - t) * dir > 0.0) {
            const double remaining = t_target - t;
            const bool clamped = std::abs(dt_) >= std::abs(remaining);
            double dt = clamped ? remaining : dt_;
            const State x_prev = x;
            const double t_prev = t;
            int tries = 0;
            while (stepper_.try_step(sys, x, t, dt) == odeint::fail) {
                if (std::abs(dt) < 1e-13 * std::max(1.0, std::abs(t)) || ++tries > 200) {
                    std::ostringstream msg;
                    msg << "step size underflow at t = " << t;
                    throw NumericalGateError(msg.str());
                }
            }
            // Keep the controller's suggestion unless the step was a short
            // clamped one at the target.
            if (!clamped || std::abs(dt) > std::abs(dt_)) dt_ = dt;
            // A rejected clamped step is retried shorter and lands before
            // the target; only snap away the rounding of a full step.
            if (std::abs(t_target - t) <= 1e-13 * std::max(1.0, std::abs(t_target))) t = t_target;
            on_step(t_prev, x_prev, t, x);
        }
    }

    template <class System>
    void advance(System& sys, State& x, double& t, double t_target) {
        advance(sys, x, t, t_target, [](double, const State&, double, const State&) {});
    }

private:
    using Stepper = odeint::runge_kutta_fehlberg78<State>;
    decltype(odeint::make_controlled(1.0, 1.0, Stepper{})) stepper_;
    double dt_{0.0};
};

struct BlochSystem {
    const ModelParams& params;
    void operator()(const BlochState& y, BlochState& dy, double) const { dy = bloch_velocity(y, params); }
};

// Bloch state plus one tangent vector.
using TangentState = std::array<double, 10>;

struct TangentSystem {
    const ModelParams& params;
    void operator()(const TangentState& z, TangentState& dz, double) const {
        const BlochState y{z[0], z[1], z[2], z[3], z[4]};
        const BlochState v = bloch_velocity(y, params);
        const double w = params.omega, w0 = params.omega0;
        const double gp = params.g_plus(), gm = params.g_minus();
        const auto& [sx, sy, sz, ar, ai] = y;
        const double bx = 2.0 * gp * ar, by = -2.0 * gm * ai;
        const double d0 = z[5], d1 = z[6], d2 = z[7], d3 = z[8], d4 = z[9];
        for (int i = 0; i < 5; ++i) dz[i] = v[i];
        dz[5] = -w * d1 + by * d2 - 2.0 * gm * sz * d4;
        dz[6] = w * d0 - bx * d2 - 2.0 * gp * sz * d3;
        dz[7] = -by * d0 + bx * d1 + 2.0 * gp * sy * d3 + 2.0 * gm * sx * d4;
        dz[8] = -0.5 * gm * d1 + w0 * d4;
        dz[9] = -0.5 * gp * d0 - w0 * d3;
    }
};

double cubic_hermite_root(double h, double y0, double y1, double d0, double d1) {
    // Hermite interpolant on s in [0, 1]; bracketed root by bisection + secant.
    const auto value = [&](double s) {
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1
               + (s3 - s2) * h * d1;
    };
    double lo = 0.0, hi = 1.0, flo = y0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = value(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PhaseVelocity equations_of_motion(const PhasePoint& x, const ModelParams& params) {
    const double r2 = x.bloch_radius2();
    if (!(r2 < 2.0 - kSingularityGuard)) {
        std::ostringstream msg;
        msg << "equations_of_motion: q1^2 + p1^2 = " << r2 << " inside the singular guard band";
        throw ValidationError(msg.str());
    }
    const double f = std::sqrt(1.0 - 0.5 * r2);
    const double gp = params.g_plus(), gm = params.g_minus();
    const double v = gp * x.q1 * x.q2 + gm * x.p1 * x.p2;
    return {params.omega * x.p1 + f * gm * x.p2 - x.p1 / (2.0 * f) * v,
            -params.omega * x.q1 - f * gp * x.q2 + x.q1 / (2.0 * f) * v,
            params.omega0 * x.p2 + f * gm * x.p1,
            -params.omega0 * x.q2 - f * gp * x.q1};
}

BlochState to_bloch(const PhasePoint& x) {
    require_bloch_domain(x.q1, x.p1);
    const double r2 = x.bloch_radius2();
    const double f = std::sqrt(1.0 - 0.5 * r2);
    return {kSqrt2 * f * x.q1, -kSqrt2 * f * x.p1, r2 - 1.0, x.q2 / kSqrt2, x.p2 / kSqrt2};
}

PhasePoint from_bloch(const BlochState& y) {
    const double r2 = std::clamp(1.0 + y[2], 0.0, std::nextafter(2.0, 0.0));
    const double r = std::sqrt(r2);
    const double phi = std::atan2(-y[1], y[0]);
    return {r * std::cos(phi), r * std::sin(phi), kSqrt2 * y[3], kSqrt2 * y[4]};
}

BlochState bloch_velocity(const BlochState& y, const ModelParams& params) {
    const auto& [sx, sy, sz, ar, ai] = y;
    const double gp = params.g_plus(), gm = params.g_minus();
    const double bx = 2.0 * gp * ar, by = -2.0 * gm * ai, bz = params.omega;
    return {by * sz - bz * sy,
            bz * sx - bx * sz,
            bx * sy - by * sx,
            params.omega0 * ai - 0.5 * gm * sy,
            -params.omega0 * ar - 0.5 * gp * sx};
}

double bloch_energy(const BlochState& y, const ModelParams& params) {
    const auto& [sx, sy, sz, ar, ai] = y;
    return 0.5 * params.omega * sz + params.omega0 * (ar * ar + ai * ai) + params.g_plus() * ar * sx
           - params.g_minus() * ai * sy;
}

double relative_drift(double energy, double energy0) noexcept {
    const double scale = energy0 != 0.0 ? std::abs(energy0) : 1.0;
    return std::abs(energy - energy0) / scale;
}

namespace {

void check_drift(double drift, double limit, double t) {
    if (drift > limit) {
        std::ostringstream msg;
        msg << "energy drift " << drift << " exceeds " << limit << " at t = " << t;
        throw NumericalGateError(msg.str());
    }
}

}  // namespace

Orbit integrate(const PhasePoint& x0, const ModelParams& params, double t_end,
                const IntegratorOptions& options) {
    params.validate();
    if (!(options.tolerance > 0.0)) throw ValidationError("integrator tolerance must be > 0");
    Orbit orbit;
    orbit.params = params;
    orbit.energy0 = classical_energy(x0, params);
    orbit.samples.push_back({0.0, x0});

    BlochSystem sys{params};
    FlowDriver<5> driver(options.tolerance);
    BlochState y = to_bloch(x0);
    double t = 0.0;
    const double dir = t_end >= 0.0 ? 1.0 : -1.0;
    const double interval = options.sample_interval > 0.0 ? options.sample_interval : std::abs(t_end);
    const auto n_samples = static_cast<std::size_t>(std::ceil(std::abs(t_end) / interval - 1e-9));
    for (std::size_t k = 1; k <= n_samples; ++k) {
        const double target = k == n_samples ? t_end : dir * static_cast<double>(k) * interval;
        driver.advance(sys, y, t, target);
        const double drift = relative_drift(bloch_energy(y, params), orbit.energy0);
        orbit.max_relative_drift = std::max(orbit.max_relative_drift, drift);
        check_drift(drift, options.max_relative_drift, t);
        orbit.samples.push_back({t, from_bloch(y)});
    }
    return orbit;
}

SectionPoints poincare_section(const PhasePoint& x0, const ModelParams& params, double t_end,
                               std::size_t max_points, const IntegratorOptions& options) {
    params.validate();
    if (!(t_end > 0.0)) throw ValidationError("poincare_section needs t_end > 0");
    SectionPoints out;
    out.energy0 = classical_energy(x0, params);

    BlochSystem sys{params};
    FlowDriver<5> driver(options.tolerance);
    BlochState y = to_bloch(x0);
    double t = 0.0;

    struct Done {};
    auto on_step = [&](double t0, const BlochState& y0, double t1, const BlochState& y1) {
        const double drift = relative_drift(bloch_energy(y1, params), out.energy0);
        out.max_relative_drift = std::max(out.max_relative_drift, drift);
        check_drift(drift, options.max_relative_drift, t1);

        // q2 = sqrt2 * Re alpha; look for a sign change inside the step.
        if (!((y0[3] < 0.0 && y1[3] >= 0.0) || (y0[3] > 0.0 && y1[3] <= 0.0))) return;
        const double h = t1 - t0;
        const double s = cubic_hermite_root(h, y0[3], y1[3], bloch_velocity(y0, params)[3],
                                            bloch_velocity(y1, params)[3]);
        double tc = t0 + s * h;

        // Newton polish on q2(t) = 0, always restarting from the bracket start.
        BlochState yc{};
        for (int it = 0; it < 12; ++it) {
            FlowDriver<5> polish(options.tolerance);
            yc = y0;
            double tt = t0;
            if (tc != t0) polish.advance(sys, yc, tt, tc);
            const double q2 = kSqrt2 * yc[3];
            if (it >= 3 && std::abs(q2) < 1e-10) break;
            tc -= yc[3] / bloch_velocity(yc, params)[3];
        }
        if (!(std::abs(kSqrt2 * yc[3]) < 1e-10)) {
            std::ostringstream msg;
            msg << "section crossing near t = " << tc << " did not converge (|q2| = " << std::abs(kSqrt2 * yc[3]) << ")";
            throw NumericalGateError(msg.str());
        }
        if (!(yc[4] > 0.0)) return;
        const PhasePoint x = from_bloch(yc);
        out.points.push_back({tc, x.q1, x.p1, x.p2});
        if (out.points.size() >= max_points) throw Done{};
    };
    try {
        driver.advance(sys, y, t, t_end, on_step);
    } catch (const Done&) {
    }
    return out;
}

LyapunovEstimate lyapunov_exponent(const PhasePoint& x0, const ModelParams& params, double t_end,
                                   double renorm_interval, const IntegratorOptions& options) {
    params.validate();
    if (!(renorm_interval > 0.0) || !(t_end >= renorm_interval))
        throw ValidationError("lyapunov_exponent needs 0 < renorm_interval <= t_end");
    const double e0 = classical_energy(x0, params);
    const BlochState y0 = to_bloch(x0);
    TangentState z{};
    std::copy(y0.begin(), y0.end(), z.begin());
    z[8] = 1.0;  // field-direction deviation, tangent to the Bloch sphere

    TangentSystem sys{params};
    FlowDriver<10> driver(options.tolerance);
    LyapunovEstimate est;
    est.renorm_interval = renorm_interval;
    double t = 0.0;
    double log_sum = 0.0;
    const auto n = static_cast<std::size_t>(std::floor(t_end / renorm_interval + 1e-9));
    est.history.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        driver.advance(sys, z, t, static_cast<double>(k) * renorm_interval);
        double norm2 = 0.0;
        for (int i = 5; i < 10; ++i) norm2 += z[i] * z[i];
        const double norm = std::sqrt(norm2);
        log_sum += std::log(norm);
        for (int i = 5; i < 10; ++i) z[i] /= norm;
        const BlochState y{z[0], z[1], z[2], z[3], z[4]};
        check_drift(relative_drift(bloch_energy(y, params), e0), options.max_relative_drift, t);
        est.history.emplace_back(t, log_sum / t);
    }
    est.lambda = est.history.back().second;

    const std::size_t q = est.history.size() - est.history.size() / 4;
    double mean = 0.0, sq = 0.0;
    const double m = static_cast<double>(est.history.size() - q);
    for (std::size_t i = q; i < est.history.size(); ++i) mean += est.history[i].second;
    mean /= m;
    for (std::size_t i = q; i < est.history.size(); ++i) sq += std::pow(est.history[i].second - mean, 2);
    est.converged = m > 1 && std::sqrt(sq / m) < 0.1 * std::abs(mean);
    return est;
}

double convex_hull_area(const std::vector<SectionPoint>& points) {
    std::vector<std::pair<double, double>> p;
    p.reserve(points.size());
    for (const auto& s : points) p.emplace_back(s.q1, s.p1);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return 0.0;
    const auto cross = [](const auto& o, const auto& a, const auto& b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> hull(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    hull.resize(k - 1);
    double area = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        area += a.first * b.second - b.first * a.second;
    }
    return 0.5 * std::abs(area);
}

CurveMetrics closed_curve_metrics(const std::vector<SectionPoint>& points) {
    CurveMetrics m;
    const std::size_t n = points.size();
    if (n < 8) return m;
    double cq = 0.0, cp = 0.0;
    for (const auto& s : points) {
        cq += s.q1;
        cp += s.p1;
    }
    cq /= static_cast<double>(n);
    cp /= static_cast<double>(n);

    struct Polar {
        double angle, radius, q, p;
    };
    std::vector<Polar> pts;
    pts.reserve(n);
    for (const auto& s : points)
        pts.push_back({std::atan2(s.p1 - cp, s.q1 - cq), std::hypot(s.q1 - cq, s.p1 - cp), s.q1, s.p1});
    std::sort(pts.begin(), pts.end(), [](const Polar& a, const Polar& b) { return a.angle < b.angle; });

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m.diameter = std::max(m.diameter, std::hypot(pts[i].q - pts[j].q, pts[i].p - pts[j].p));

    const std::size_t half = std::max<std::size_t>(2, n / 80);
    for (std::size_t i = 0; i < n; ++i) {
        const Polar& next = pts[(i + 1) % n];
        m.max_gap = std::max(m.max_gap, std::hypot(next.q - pts[i].q, next.p - pts[i].p));
        double acc = 0.0;
        for (std::size_t d = 1; d <= half; ++d) acc += pts[(i + d) % n].radius + pts[(i + n - d) % n].radius;
        const double smooth = acc / static_cast<double>(2 * half);
        m.thickness = std::max(m.thickness, std::abs(pts[i].radius - smooth));
    }
    return m;
}

bool is_closed_curve(const CurveMetrics& m) noexcept {
    return m.diameter > 0.0 && m.thickness < 0.05 * m.diameter && m.max_gap < 0.25 * m.diameter;
}

}  // namespace rabichaos
