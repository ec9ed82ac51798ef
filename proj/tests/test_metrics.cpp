#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "rci/errors.hpp"
#include "rci/metrics.hpp"

using namespace rci;
using doctest::Approx;

namespace {

Vec grid(double t_end, double dt) {
    Vec t;
    const auto n = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k <= n; ++k) t.push_back(k * dt);
    return t;
}

template <class F>
Vec sample(const Vec& t, F f) {
    Vec v;
    for (double x : t) v.push_back(f(x));
    return v;
}

} // namespace

TEST_CASE("ITAE") {
    const Vec t = grid(10.0, 0.1);
    CHECK(itae(Vec(t.size(), 0.0), t) == 0.0);
    const double closed = (1.0 - 11.0 * std::exp(-10.0)) / 10.0;
    CHECK(std::abs(itae(sample(t, [](double x) { return std::exp(-x); }), t) - closed) <= 1e-4);
    CHECK(itae(Vec(t.size(), 1.0), t) == Approx(5.0).epsilon(1e-12));
    const Vec e = sample(t, [](double x) { return std::sin(x) * std::exp(-0.2 * x); });
    const Vec e3 = sample(t, [](double x) { return -3.0 * std::sin(x) * std::exp(-0.2 * x); });
    CHECK(itae(e3, t) == Approx(3.0 * itae(e, t)).epsilon(1e-12));
}

TEST_CASE("peak and overshoot") {
    const Vec t = grid(10.0, 0.001);
    const auto mono = peak_and_overshoot(sample(t, [](double x) { return std::exp(-x); }), t);
    CHECK(mono.max_overshoot == 0.0);
    CHECK(mono.peak_time == Approx(10.0));

    // e^{-t} cos t first reaches its most negative value at t = 3 pi / 4.
    const auto osc = peak_and_overshoot(sample(t, [](double x) { return std::exp(-x) * std::cos(x); }), t);
    const double t_min = 0.75 * std::numbers::pi;
    CHECK(osc.peak_time == Approx(t_min).epsilon(1e-3));
    CHECK(osc.max_overshoot == Approx(std::exp(-t_min) / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(osc.max_overshoot == Approx(0.067020).epsilon(1e-4));

    const auto neg = peak_and_overshoot(sample(t, [](double x) { return -std::exp(-x) * std::cos(x); }), t);
    CHECK(neg.max_overshoot == Approx(osc.max_overshoot));
}

TEST_CASE("settled statistics") {
    const Vec t = grid(20.0, 0.1);
    const auto c = settled_stats(Vec(t.size(), 2.5), t);
    CHECK(c.mean == 2.5);
    CHECK(c.std == 0.0);

    Vec alt(t.size());
    for (std::size_t k = 0; k < alt.size(); ++k) alt[k] = (k % 2) ? 1.0 : -1.0;
    // Window t >= 15 holds samples 150..200: 26 even (-1) and 25 odd (+1).
    const auto a = settled_stats(alt, t);
    CHECK(a.mean == Approx(-1.0 / 51.0));
    CHECK(a.std == Approx(std::sqrt(1.0 - 1.0 / (51.0 * 51.0))));

    const Vec s = sample(t, [](double x) { return std::sin(0.15 * x); });
    double sum = 0, sq = 0;
    int count = 0;
    for (int k = 150; k <= 200; ++k) {
        sum += std::sin(0.15 * 0.1 * k);
        ++count;
    }
    const double mean = sum / count;
    for (int k = 150; k <= 200; ++k) sq += std::pow(std::sin(0.15 * 0.1 * k) - mean, 2);
    const auto st = settled_stats(s, t);
    CHECK(st.mean == Approx(mean).epsilon(1e-12));
    CHECK(st.std == Approx(std::sqrt(sq / count)).epsilon(1e-12));

    Vec shifted = s;
    for (auto& v : shifted) v += 42.0;
    CHECK(std::abs(settled_stats(shifted, t).std - st.std) < 1e-12);
    CHECK_THROWS_AS(settled_stats(Vec{1, 2, 3}, Vec{0, 1, 2}), DimensionError);
}

TEST_CASE("composite norm") {
    CHECK(composite_norm(Vec{0.0, 3.0}, Vec{0.0, 4.0}) == Vec{0.0, 5.0});
    CHECK_THROWS_AS(composite_norm(Vec{1.0}, Vec{}), DimensionError);
}

TEST_CASE("metrics of the guidance run") {
    const auto tr = fixtures::aircraft_run(fixtures::k_star(), AircraftParams{}.disturbance());
    const auto m = compute_metrics(tr);
    REQUIRE(m.itae.size() == 2);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(m.itae[c] >= 0.0);
        CHECK(m.std_settled[c] >= 0.0);
        CHECK(m.peak_time[c] >= 0.0);
        CHECK(m.peak_time[c] <= 20.0);
        CHECK(std::isfinite(m.composite_mean_settled[c]));
        CHECK(m.composite_std_settled[c] >= 0.0);
    }
    CHECK(m.max_overshoot[0] <= 0.8);
    CHECK(m.max_overshoot[1] <= 0.4);
}

TEST_CASE("larger R_K gives smaller ITAE across the delta-K family") {
    std::vector<double> r, i0, i1;
    for (double eps : {-4.0, -2.0, -1.0, 0.5, 0.8, 1.0}) {
        const auto k = fixtures::shifted(fixtures::k_star(), eps);
        r.push_back(compute_indicators(fixtures::aircraft_lin(), k).certified->r_k);
        const auto m = compute_metrics(fixtures::aircraft_run(k, AircraftParams{}.disturbance()));
        i0.push_back(m.itae[0]);
        i1.push_back(m.itae[1]);
    }
    CHECK(fixtures::spearman(r, i0) <= -0.8);
    CHECK(fixtures::spearman(r, i1) <= -0.8);
}
