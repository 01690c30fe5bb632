#include "oracles.hpp"

#include "rabichaos/dynamics.hpp"
#include "rabichaos/observables.hpp"

#include <doctest.h>

#include <numbers>

using namespace rabichaos;

namespace {

// Atom-major product state: atom (ce, cg) (x) field amplitudes.
QuantumState product(cplx ce, cplx cg, const Eigen::VectorXcd& field) {
    const auto n = field.size();
    Eigen::VectorXcd v(2 * n);
    v.head(n) = ce * field;
    v.tail(n) = cg * field;
    return QuantumState(v.normalized());
}

TimeSeries make_series(const std::vector<double>& t, double (*f)(double)) {
    TimeSeries s{"s", t, std::vector<double>(t.size())};
    for (std::size_t i = 0; i < t.size(); ++i) s.values[i] = f(t[i]);
    return s;
}

}  // namespace

TEST_CASE("reduced density matrix and linear entropy") {
    const int np = 10;
    Eigen::VectorXcd f0 = Eigen::VectorXcd::Zero(np + 1), f1 = f0;
    f0(0) = 1.0;
    f1(1) = 1.0;
    const auto prod = product(cplx(0.6), cplx(0.0, 0.8), f0);
    const auto rho = reduce_to_atom(prod);
    CHECK(rho(0, 0).real() == doctest::Approx(0.36));
    CHECK(std::abs(rho(0, 1) - cplx(0.6) * std::conj(cplx(0.0, 0.8))) < 1e-14);
    CHECK(linear_entropy(rho) < 1e-14);

    // |e,0> + |g,1> is maximally entangled.
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * (np + 1));
    v(0) = v(np + 1 + 1) = 1.0 / std::sqrt(2.0);
    CHECK(linear_entropy(reduce_to_atom(QuantumState(v))) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(purity(reduce_to_atom(QuantumState(v))) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("coherent seeds start unentangled") {
    const ModelParams p{1.0, 0.2, 0.9, 0.5, 150};
    const auto spec = decompose(build_hamiltonian(p));
    for (const PhasePoint x : {PhasePoint{0.0, -0.95, 0.0, 6.14757}, PhasePoint{-0.86413, 0.92136, 0.0, 3.37955},
                               PhasePoint{1.2, 0.3, -2.0, 1.0}}) {
        const auto s = entropy_series(coherent_state(x, p), spec, uniform_times(0.0, 1.0, 0.1));
        CHECK(s.values.front() < 1e-10);
        for (double v : s.values) CHECK((v >= -1e-12 && v <= 0.5 + 1e-12));
    }
}

TEST_CASE("trapezoid average") {
    const auto t = uniform_times(0.0, 2.0, 0.001);
    CHECK(trapezoid_average(make_series(t, [](double x) { return x * x; })) == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    CHECK(trapezoid_average(make_series(t, [](double) { return 0.25; })) == doctest::Approx(0.25));
}

TEST_CASE("vacuum husimi function matches its closed form") {
    const int np = 30;
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(np + 1);
    f(0) = 1.0;
    const auto vac = product(cplx(0.0), cplx(1.0), f);
    const auto g = husimi_q(vac, HusimiGridSpec{});
    double worst = 0.0;
    for (std::size_t i = 0; i < g.q2_axis.size(); ++i)
        for (std::size_t j = 0; j < g.p2_axis.size(); ++j) {
            const double q = g.q2_axis[i], pp = g.p2_axis[j];
            const double ref = std::exp(-(q * q + pp * pp) / 2.0) / std::numbers::pi;
            worst = std::max(worst, std::abs(g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref));
        }
    CHECK(worst < 1e-10);
    CHECK(std::abs(g.mass() - 1.0) < 1e-3);
    const auto peaks = local_maxima(g, 0.05);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].q2 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("husimi of a coherent state is centred on it and normalized") {
    const ModelParams p{1.0, 0.2, 0.9, 0.5, 150};
    const PhasePoint x{0.3, 0.2, 2.0, -3.0};
    const auto g = husimi_q(coherent_state(x, p), HusimiGridSpec{});
    CHECK(std::abs(g.mass() - 1.0) < 1e-3);
    const auto peaks = local_maxima(g, 0.05);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].q2 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(peaks[0].p2 == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(peaks[0].value == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("husimi of a cat state shows two maxima") {
    const int np = 80;
    const Eigen::VectorXcd cat = oracle::coherent_field(cplx(3.0, 0.0), np) + oracle::coherent_field(cplx(-3.0, 0.0), np);
    const auto g = husimi_q(product(cplx(1.0), cplx(0.0), cat), HusimiGridSpec{});
    const auto peaks = local_maxima(g, 0.05);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0].q2) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(0.03));
    CHECK(peaks[0].q2 * peaks[1].q2 < 0.0);
}

TEST_CASE("moving standard deviation") {
    const auto t = uniform_times(0.0, 10.0, 0.01);
    const auto flat = moving_stddev(make_series(t, [](double) { return 0.3; }), 1.0);
    for (double v : flat.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
    // A sinusoid averaged over whole periods has std 1/sqrt(2).
    const auto sine = moving_stddev(make_series(t, [](double x) { return std::sin(2.0 * std::numbers::pi * x); }), 1.0);
    CHECK(sine.values[500] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-2));
}

TEST_CASE("collapse window on a synthetic collapse and revival") {
    // Rabi oscillation whose envelope vanishes on [3, 7].
    const auto t = uniform_times(0.0, 12.0, 0.01);
    const auto w = make_series(t, [](double x) {
        const double env = (x < 2.0) ? 1.0 : (x < 3.0 ? 3.0 - x : (x < 7.0 ? 0.0 : std::min(1.0, x - 7.0)));
        return env * std::cos(2.0 * std::numbers::pi * 2.0 * x);
    });
    const auto c = collapse_window(w, 0.5, 0.3);
    REQUIRE(c);
    CHECK(c->t_start == doctest::Approx(2.9).epsilon(0.05));
    CHECK(c->t_end == doctest::Approx(7.5).epsilon(0.05));
    CHECK_FALSE(collapse_window(make_series(t, [](double x) { return std::cos(4.0 * x); }), 2.0, 0.3));
}

TEST_CASE("growth fit recovers an exact exponential") {
    const auto t = uniform_times(0.0, 10.0, 0.01);
    const auto s = make_series(t, [](double x) { return 1.5 * std::exp(0.42 * x); });
    const auto fit = fit_growth_rate(s, {1.0, 6.0});
    CHECK(fit.rate == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(1.5)).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.samples == 501);
    CHECK_THROWS_AS(fit_growth_rate(s, {1.0, 1.02}), ValidationError);
    CHECK_THROWS_AS(fit_growth_rate(s, {5.0, 20.0}), ValidationError);
}

TEST_CASE("automatic window brackets the growth phase before saturation") {
    // Logistic-like growth from 1, saturating near 400.
    const auto t = uniform_times(0.0, 30.0, 0.01);
    const auto s = make_series(t, [](double x) { return 400.0 / (1.0 + 399.0 * std::exp(-0.5 * x)); });
    const auto w = auto_growth_window(s);
    CHECK(w.t_start > 0.0);
    CHECK(w.t_end < 16.0);
    const auto fit = fit_growth_rate_auto(s);
    CHECK(fit.rate == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("window overlap fraction") {
    CHECK(window_overlap_fraction({1.0, 3.0}, {2.0, 10.0}) == doctest::Approx(0.5));
    CHECK(window_overlap_fraction({1.0, 3.0}, {0.0, 10.0}) == doctest::Approx(1.0));
    CHECK(window_overlap_fraction({1.0, 3.0}, {4.0, 10.0}) == 0.0);
}

TEST_CASE("entropy map marks inadmissible cells and does not depend on the worker count") {
    const ModelParams p{1.0, 0.2, 0.9, 0.5, 60};
    const MapGrid grid{7, std::sqrt(2.0), 0.0};
    const TimeWindow window{0.0, 2.0};
    const auto one = entropy_map(grid, p, 2.0, window, 0.05, 1);
    const auto three = entropy_map(grid, p, 2.0, window, 0.05, 3);
    REQUIRE(one.cells.size() == 49);
    CHECK(one.admissible() > 0);
    CHECK(one.admissible() < 49);
    for (std::size_t i = 0; i < one.cells.size(); ++i) {
        CHECK(one.cells[i].entropy.has_value() == three.cells[i].entropy.has_value());
        if (one.cells[i].entropy) {
            CHECK(*one.cells[i].entropy == *three.cells[i].entropy);
            CHECK(one.cells[i].error.empty());
        } else {
            CHECK_FALSE(one.cells[i].error.empty());
        }
    }
    // Corner cells lie outside the Bloch disk.
    CHECK_FALSE(one.cells.front().entropy);
}

TEST_CASE("time-averaged entropy overloads agree") {
    const ModelParams p{1.0, 0.2, 0.9, 0.5, 60};
    const PhasePoint x{0.2, -0.3, 0.0, 2.0};
    const double a = time_averaged_entropy(x, p, {0.0, 3.0}, 0.01);
    const double b = time_averaged_entropy(x, p, decompose(build_hamiltonian(p)), {0.0, 3.0}, 0.01);
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
    CHECK(a > 0.0);
}
