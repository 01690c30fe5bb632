// classical.hpp: mean-field (semiclassical) dynamics: Hamilton's equations,
// orbit integration, Poincare sections q2 = 0 (p2 > 0), and the maximal
// Lyapunov exponent.
//
// The canonical chart (q1, p1, q2, p2) is singular on the circle
// q1^2 + p1^2 = 2, which is the single excited-state pole of the Bloch sphere.
// Orbits are therefore integrated in the regular chart (s, alpha): the Bloch
// vector s = (<sigma_x>, <sigma_y>, <sigma_z>) and the field amplitude
// alpha = (q2 + i p2)/sqrt 2, and mapped back to PhasePoint on output.

#pragma once

#include "rabichaos/model.hpp"

#include <array>
#include <vector>

namespace rabichaos {

using PhaseVelocity = std::array<double, 4>;

// Hamilton's equations of the mean-field energy in the canonical chart.
// Throws ValidationError within kSingularityGuard of the pole circle.
inline constexpr double kSingularityGuard = 1e-9;
PhaseVelocity equations_of_motion(const PhasePoint& x, const ModelParams& params);

// (sx, sy, sz, Re alpha, Im alpha)
using BlochState = std::array<double, 5>;

BlochState to_bloch(const PhasePoint& x);
PhasePoint from_bloch(const BlochState& y);

// Equations of motion and energy in the Bloch chart.
BlochState bloch_velocity(const BlochState& y, const ModelParams& params);
double bloch_energy(const BlochState& y, const ModelParams& params);

struct IntegratorOptions {
    double tolerance{1e-11};
    double sample_interval{0.1};   // orbit sampling cadence
    double max_relative_drift{1e-8};
};

struct OrbitSample {
    double t;
    PhasePoint x;
};

struct Orbit {
    std::vector<OrbitSample> samples;
    double energy0{0.0};
    double max_relative_drift{0.0};
    ModelParams params;
};

// Relative energy error |E - E0| / |E0| (absolute when E0 == 0).
double relative_drift(double energy, double energy0) noexcept;

// Integrates to t_end (negative t_end integrates backward). Throws
// NumericalGateError if the energy drift gate trips or the step size
// underflows.
Orbit integrate(const PhasePoint& x0, const ModelParams& params, double t_end,
                const IntegratorOptions& options = {});

struct SectionPoint {
    double t;
    double q1;
    double p1;
    double p2;
};

struct SectionPoints {
    std::vector<SectionPoint> points;
    double energy0{0.0};
    double max_relative_drift{0.0};
};

// Sign changes of q2 with p2 > 0, each refined to |q2| < 1e-10 (cubic
// Hermite root in the bracketing step, then Newton polish in time).
SectionPoints poincare_section(const PhasePoint& x0, const ModelParams& params, double t_end,
                               std::size_t max_points, const IntegratorOptions& options = {});

struct LyapunovEstimate {
    double lambda{0.0};
    std::vector<std::pair<double, double>> history;  // (t, running estimate)
    double renorm_interval{1.0};
    bool converged{false};  // last-quarter std < 10% of its mean
};

// Benettin method on the tangent flow, renormalizing every renorm_interval.
LyapunovEstimate lyapunov_exponent(const PhasePoint& x0, const ModelParams& params, double t_end,
                                   double renorm_interval = 1.0, const IntegratorOptions& options = {});

// Shape measures for section point clouds in the (q1, p1) plane.
double convex_hull_area(const std::vector<SectionPoint>& points);

struct CurveMetrics {
    double diameter{0.0};     // largest pairwise distance
    double thickness{0.0};    // largest radial deviation from the smoothed curve
    double max_gap{0.0};      // largest step between angularly sorted neighbours
};

// Sorts the points by angle about their centroid and measures how far the
// cloud is from a single thin closed curve.
CurveMetrics closed_curve_metrics(const std::vector<SectionPoint>& points);

// Thickness < 5% of the diameter and no neighbour gap above 25% of it.
bool is_closed_curve(const CurveMetrics& m) noexcept;

}  // namespace rabichaos
