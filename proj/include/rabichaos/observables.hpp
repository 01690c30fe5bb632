// observables.hpp: reduced density matrix and linear entropy, entropy maps,
// Husimi Q snapshots, atomic inversion, and exponential growth fits.

#pragma once

#include "rabichaos/dynamics.hpp"
#include "rabichaos/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rabichaos {

// Atomic reduced density matrix in (e, g) ordering.
using ReducedDensityMatrix = Eigen::Matrix2cd;

ReducedDensityMatrix reduce_to_atom(const QuantumState& state);
// Raw-vector form for evolved states; throws ValidationError if the trace is
// off by more than 1e-10.
ReducedDensityMatrix reduce_to_atom(const Eigen::Ref<const Eigen::VectorXcd>& psi);

double purity(const ReducedDensityMatrix& rho);
// S = 1 - Tr rho^2
double linear_entropy(const ReducedDensityMatrix& rho);

TimeSeries entropy_series(const QuantumState& state0, const SpectralDecomposition& spec,
                          std::span<const double> times);

// Trapezoidal (1/T) * integral of the series over its full time range.
double trapezoid_average(const TimeSeries& series);

struct TimeWindow {
    double t_start{0.0};
    double t_end{50.0};
};

// S_m over `window` on a grid of spacing dt.
double time_averaged_entropy(const PhasePoint& point, const ModelParams& params,
                             TimeWindow window, double dt);
double time_averaged_entropy(const PhasePoint& point, const ModelParams& params,
                             const SpectralDecomposition& spec, TimeWindow window, double dt);

// Square q1, p1 grid over [-extent, extent]^2 (extent defaults to the Bloch
// disk radius sqrt 2). Points on the section q2 = const, p2 solved on shell.
struct MapGrid {
    int n{101};
    double extent{1.4142135623730951};
    double q2{0.0};

    double coordinate(int i) const noexcept;
};

struct MapCell {
    double q1{0.0};
    double p1{0.0};
    std::optional<double> p2;
    std::optional<double> entropy;  // empty marks an inadmissible point
    std::string error;
};

struct EntropyMap {
    MapGrid grid;
    std::vector<MapCell> cells;  // row-major: index = i_q1 * n + i_p1

    std::size_t admissible() const noexcept;
};

// Cells are evaluated independently on `workers` threads and stored by grid
// index, so the result does not depend on the worker count.
EntropyMap entropy_map(const MapGrid& grid, const ModelParams& params, double energy,
                       TimeWindow window, double dt, int workers);

struct HusimiGridSpec {
    double q_min{-10.0};
    double q_max{10.0};
    int nq{201};
    double p_min{-10.0};
    double p_max{10.0};
    int np{201};
};

// Q(q2, p2) = (1/pi) <beta| rho_field |beta>, beta = (q2 + i p2)/sqrt 2.
// values(i, j) is at (q2_axis[i], p2_axis[j]).
struct HusimiGrid {
    std::vector<double> q2_axis;
    std::vector<double> p2_axis;
    Eigen::MatrixXd values;
    double time{0.0};

    // Riemann sum of Q over d^2 beta = dq2 dp2 / 2; equals 1 for a grid
    // covering the state.
    double mass() const;
};

HusimiGrid husimi_q(const Eigen::Ref<const Eigen::VectorXcd>& psi, const HusimiGridSpec& spec,
                    double time = 0.0);
HusimiGrid husimi_q(const QuantumState& state, const HusimiGridSpec& spec, double time = 0.0);

struct HusimiPeak {
    double q2;
    double p2;
    double value;
};

// Interior grid points not exceeded by any of their 8 neighbours and at
// least rel_threshold times the global maximum, strongest first.
std::vector<HusimiPeak> local_maxima(const HusimiGrid& grid, double rel_threshold);

// W(t) = <sigma_z>(t) = P_e - P_g.
TimeSeries population_inversion(const QuantumState& state0, const SpectralDecomposition& spec,
                                 std::span<const double> times);

// Centered moving standard deviation over `width` time units (window
// truncated at the series ends).
TimeSeries moving_stddev(const TimeSeries& series, double width);

// First stretch, after the initial oscillation, where the moving standard
// deviation of W stays below `fraction` of its early-time peak for at least
// `width`. The early peak is the maximum over t <= 2 * width.
std::optional<TimeWindow> collapse_window(const TimeSeries& inversion, double width, double fraction);

struct GrowthFit {
    double rate{0.0};
    double intercept{0.0};
    TimeWindow window;
    double r_squared{0.0};
    std::size_t samples{0};
};

// Least-squares slope of ln(values) vs t over samples with t in [t1, t2].
GrowthFit fit_growth_rate(const TimeSeries& series, TimeWindow window);

// Fit-window policy for early exponential growth:
//   start: first sample where the series exceeds start_factor * value(t0);
//   end:   first sample after the peak of the smoothed log-derivative (peak
//          searched over search_span after start) where the derivative
//          drops below fall_fraction of that peak, capped at t_end_cap.
struct AutoWindowOptions {
    double start_factor{1.5};
    double smoothing{1.0};
    double search_span{10.0};
    double fall_fraction{0.5};
    std::optional<double> t_end_cap;
};

TimeWindow auto_growth_window(const TimeSeries& series, const AutoWindowOptions& options = {});
GrowthFit fit_growth_rate_auto(const TimeSeries& series, const AutoWindowOptions& options = {});

// |A cap B| / |A|.
double window_overlap_fraction(TimeWindow a, TimeWindow b) noexcept;

}  // namespace rabichaos
