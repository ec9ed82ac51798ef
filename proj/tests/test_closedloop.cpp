#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "rci/closedloop.hpp"
#include "rci/errors.hpp"

using namespace rci;
using doctest::Approx;

namespace {

PlantModel scalar(double a) { return linear_plant(RealMatrix::from_rows({{a}}), RealMatrix::from_rows({{1.0}})); }

GainPair scalar_gains(double kp, double ki) { return {RealMatrix::from_rows({{kp}}), RealMatrix::from_rows({{ki}})}; }

const std::vector<double> zero1{0.0};

} // namespace

TEST_CASE("PI step") {
    auto s = PIState::initial(scalar_gains(1.0, 0.0));
    auto [s1, u1] = pi_step(s, std::vector<double>{0.7}, 0.1);
    CHECK(u1[0] == Approx(0.7));

    auto st = PIState::initial(scalar_gains(0.0, 1.0));
    Vec u;
    for (int k = 0; k < 10; ++k) std::tie(st, u) = pi_step(st, std::vector<double>{1.0}, 0.1);
    CHECK(u[0] == Approx(1.0));
    CHECK(st.last_output[0] == Approx(1.0));
    for (int k = 0; k < 5; ++k) std::tie(st, u) = pi_step(st, zero1, 0.1);
    CHECK(u[0] == Approx(1.0));

    CHECK_THROWS_AS(pi_step(st, std::vector<double>{1.0, 2.0}, 0.1), DimensionError);
    CHECK_THROWS_AS(pi_step(st, zero1, 0.0), ParameterError);
}

TEST_CASE("trivial loops") {
    SimConfig cfg;
    cfg.t_end = 2.0;
    const auto none = SinusoidDisturbance::none(1);
    const auto tr = simulate(scalar(0.0), scalar_gains(0.0, 0.0), none, zero1, std::vector<double>{0.4}, cfg);
    for (const auto& x : tr.x) CHECK(x[0] == 0.4);

    cfg.t_end = 1.0;
    cfg.stride = 1;
    const auto decay = simulate(scalar(-1.0), scalar_gains(0.0, 0.0), none, zero1, std::vector<double>{1.0}, cfg);
    CHECK(decay.t.back() == Approx(1.0));
    CHECK(std::abs(decay.x.back()[0] - std::exp(-1.0)) < 1e-6);
    CHECK(decay.size() == 101);
}

TEST_CASE("RK4 converges at fourth order") {
    const auto none = SinusoidDisturbance::none(1);
    auto err = [&](double h) {
        SimConfig cfg;
        cfg.t_end = 1.0;
        cfg.step = h;
        cfg.stride = 1;
        const auto tr = simulate(scalar(-1.0), scalar_gains(0.0, 0.0), none, zero1, std::vector<double>{1.0}, cfg);
        return std::abs(tr.x.back()[0] - std::exp(-1.0));
    };
    for (double h : {0.04, 0.02}) {
        const double ratio = err(h) / err(h / 2);
        CHECK(ratio >= 14.0);
        CHECK(ratio <= 18.0);
    }
}

TEST_CASE("time grid and series lengths") {
    const auto tr = fixtures::aircraft_run(fixtures::k_star(), AircraftParams{}.disturbance());
    CHECK_FALSE(tr.truncated);
    CHECK(tr.size() == 201);
    for (std::size_t k = 1; k < tr.size(); ++k) CHECK(std::abs((tr.t[k] - tr.t[k - 1]) - 0.1) < 1e-12);
    for (const auto* s : {&tr.x, &tr.e, &tr.edot, &tr.u, &tr.udot, &tr.d}) CHECK(s->size() == tr.size());
    CHECK(tr.e[0][0] == Approx(-std::numbers::pi / 3));
    CHECK(tr.u[0][0] == Approx(std::numbers::pi / 3));
    CHECK(tr.u[0][1] == Approx(1.0));
}

TEST_CASE("bit-identical reruns") {
    const auto a = fixtures::aircraft_run(fixtures::k_star(), AircraftParams{}.disturbance());
    const auto b = fixtures::aircraft_run(fixtures::k_star(), AircraftParams{}.disturbance());
    CHECK(a.e == b.e);
    CHECK(a.u == b.u);
    CHECK(a.udot == b.udot);
}

TEST_CASE("input rate series") {
    SimulationTrace tr;
    for (int k = 0; k < 5; ++k) {
        tr.t.push_back(0.1 * k);
        tr.u.push_back({2.0});
    }
    for (const auto& r : input_rate_series(tr)) CHECK(r[0] == 0.0);
    for (int k = 0; k < 5; ++k) tr.u[k] = {0.1 * k};
    for (const auto& r : input_rate_series(tr)) CHECK(r[0] == Approx(1.0));
}

TEST_CASE("position form from a zero integrator hits the roll singularity") {
    const AircraftParams p;
    SimConfig cfg;
    const auto tr = simulate(aircraft_error_plant(p), fixtures::k_star(), p.disturbance(), p.reference(),
                             p.initial_state(), cfg);
    CHECK(tr.truncated);
    CHECK(tr.truncation_time == 0.0);
    CHECK(!tr.error.empty());
}

TEST_CASE("violations are logged and clipping enforces the magnitude box") {
    const AircraftParams p;
    auto cfg = fixtures::aircraft_sim_config();
    const auto free = simulate(aircraft_error_plant(p), fixtures::k_star(), p.disturbance(), p.reference(),
                               p.initial_state(), cfg);
    CHECK_FALSE(free.violations.empty());
    cfg.clip_inputs = true;
    const auto clipped = simulate(aircraft_error_plant(p), fixtures::k_star(), p.disturbance(), p.reference(),
                                  p.initial_state(), cfg);
    for (const auto& u : clipped.u) {
        CHECK(u[0] >= p.phi_min - 1e-12);
        CHECK(u[0] <= p.phi_max + 1e-12);
    }
}

TEST_CASE("unperturbed loop converges") {
    const AircraftParams p;
    auto cfg = fixtures::aircraft_sim_config();
    cfg.t_end = 40.0;
    const auto tr = simulate(aircraft_error_plant(p), fixtures::k_star(), SinusoidDisturbance::none(2), p.reference(),
                             p.initial_state(), cfg);
    REQUIRE_FALSE(tr.truncated);
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (tr.t[k] >= 30.0) CHECK(norm2(tr.e[k]) <= 1e-3);
}

TEST_CASE("velocity-form Jacobian from simulated flows") {
    const GainPair k = scalar_gains(-3.0, -2.0);
    const auto fd = velocity_form_jacobian_fd(scalar(0.0), k);
    CHECK(max_abs_diff(fd, RealMatrix::from_rows({{-3, -2}, {1, 0}})) < 1e-4);

    const auto air = aircraft_error_plant({});
    const auto afd = velocity_form_jacobian_fd(air, fixtures::k_star());
    CHECK(max_abs_diff(afd, assemble_ak0(air.linearize(), fixtures::k_star())) < 1e-4);
}

TEST_CASE("CSV layout") {
    CHECK(trace_csv_header(2, 2, 2) == "t,x_1,x_2,e_1,e_2,u_1,u_2,udot_1,udot_2,d_1,d_2");
    const auto tr = fixtures::aircraft_run(fixtures::k_star(), AircraftParams{}.disturbance());
    std::ostringstream os;
    write_trace_csv(os, tr);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == trace_csv_header(2, 2, 2));
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
    }
    CHECK(rows == tr.size());
}

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.step = 0.2;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.step = 0.01;
    cfg.stride = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.stride = 1;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}
