#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "rci/errors.hpp"
#include "rci/tuner.hpp"

using namespace rci;
using doctest::Approx;

namespace {

TuningProblem aircraft_problem() {
    const AircraftParams p;
    const auto lim = p.limits();
    TuningProblem t;
    t.lin = fixtures::aircraft_lin();
    t.x0 = p.initial_error();
    t.i_star = 5.0;
    t.u_min = lim.u_min;
    t.u_max = lim.u_max;
    t.udot_min = lim.udot_min;
    t.udot_max = lim.udot_max;
    return t;
}

TuningProblem toy_problem() {
    TuningProblem t;
    t.lin = {RealMatrix::from_rows({{0.0}}), RealMatrix::from_rows({{1.0}})};
    t.x0 = {1.0};
    t.i_star = 20.0;
    t.u_min = {-10.0};
    t.u_max = {10.0};
    t.udot_min = {-INFINITY};
    t.udot_max = {INFINITY};
    return t;
}

GAConfig small_ga() {
    GAConfig c;
    c.population = 30;
    c.generations = 30;
    return c;
}

} // namespace

TEST_CASE("feasibility of the published gains") {
    const auto prob = aircraft_problem();
    const auto f = evaluate_feasibility(prob, fixtures::k_star());
    REQUIRE(f.report.certified);
    CHECK(f.report.certified->i_k < 5.0);
    // u(t0) = K_P x0 + 0.1 K_I x0 and udot(t0) = K_I x0 for x0 = (-pi/3, -pi/6).
    CHECK(f.u_t0[0] == Approx(-(1.6968 * 1.0471976 + 0.5906 * 0.5235988) -
                              0.1 * (3.4869 * 1.0471976 + 0.1784 * 0.5235988))
                           .epsilon(1e-6));
    CHECK(f.udot_t0[0] == Approx(-(3.4869 * 1.0471976 + 0.1784 * 0.5235988)).epsilon(1e-6));
    // Those start-up commands leave the boxes, so the published gains are not feasible here.
    CHECK_FALSE(f.feasible);
    bool input = false, rate = false;
    for (const auto& v : f.violations) {
        input |= v.constraint == "input";
        rate |= v.constraint == "rate";
        CHECK(v.amount > 0.0);
    }
    CHECK(input);
    CHECK(rate);
}

TEST_CASE("infeasibility classes") {
    const auto prob = aircraft_problem();
    const GainPair big{100.0 * fixtures::k_star().kp, 100.0 * fixtures::k_star().ki};
    bool rate = false;
    for (const auto& v : evaluate_feasibility(prob, big).violations) rate |= v.constraint == "rate";
    CHECK(rate);

    const GainPair zero{RealMatrix(2, 2), RealMatrix(2, 2)};
    const auto z = evaluate_feasibility(prob, zero);
    CHECK_FALSE(z.feasible);
    CHECK(z.violations.front().constraint == "hurwitz");
    CHECK(fitness(prob, zero) < 0.0);
}

TEST_CASE("fitness and penalty ordering") {
    const auto toy = toy_problem();
    const GainPair good{RealMatrix::from_rows({{-3.0}}), RealMatrix::from_rows({{-2.0}})};
    CHECK(fitness(toy, good) == Approx(compute_indicators(toy.lin, good).certified->r_k).epsilon(1e-15));

    const GainPair unstable{RealMatrix::from_rows({{1.0}}), RealMatrix::from_rows({{1.0}})};
    const GainPair stable_but_boxed{RealMatrix::from_rows({{-19.0}}), RealMatrix::from_rows({{-5.0}})};
    CHECK(fitness(toy, unstable) < fitness(toy, stable_but_boxed));
    CHECK(fitness(toy, stable_but_boxed) < 0.0);
}

TEST_CASE("genome round trip") {
    const auto k = fixtures::k_star();
    CHECK(decode_genome(encode_genome(k), 2, 2) == k);
    CHECK(encode_genome(k).size() == 8);
    CHECK_THROWS_AS(decode_genome(Vec(7, 0.0), 2, 2), DimensionError);
}

TEST_CASE("GA on the scalar problem reaches the grid optimum") {
    const auto oracle = fixtures::toy_grid_oracle(-10.0, 0.0, 200, 10.0, 1.0, 20.0, 0.1);
    CHECK(oracle.r_k == Approx(0.92433).epsilon(1e-4));
    const auto res = ga_optimize(toy_problem(), GAConfig{});
    CHECK(res.feasible);
    CHECK(res.best_fitness >= 0.95 * oracle.r_k);
    CHECK(std::is_sorted(res.history.begin(), res.history.end()));
    CHECK(evaluate_feasibility(toy_problem(), res.best).feasible);
}

TEST_CASE("GA determinism and thread independence") {
    auto cfg = small_ga();
    cfg.threads = 1;
    const auto a = ga_optimize(aircraft_problem(), cfg);
    cfg.threads = 4;
    const auto b = ga_optimize(aircraft_problem(), cfg);
    CHECK(a.best == b.best);
    CHECK(a.history == b.history);
    cfg.seed = 7;
    const auto c = ga_optimize(aircraft_problem(), cfg);
    CHECK_FALSE(c.history == a.history);
}

TEST_CASE("infeasible problem is reported") {
    auto prob = toy_problem();
    prob.i_star = 1e-9;
    const auto res = ga_optimize(prob, small_ga());
    CHECK_FALSE(res.feasible);
    CHECK(res.best_fitness < 0.0);
    CHECK(std::is_sorted(res.history.begin(), res.history.end()));
}

TEST_CASE("penalty separation over a run") {
    // Every feasible fitness is positive and every penalty is at most -1.
    const auto prob = toy_problem();
    const auto res = ga_optimize(prob, small_ga());
    for (double f : res.history) CHECK((f > 0.0 || f <= -1.0));
}

TEST_CASE("config validation") {
    GAConfig c;
    c.population = 1;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = GAConfig{};
    c.mutation_rate = 1.5;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    auto p = toy_problem();
    p.i_star = 0.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("delta-K sweep") {
    const auto lin = fixtures::aircraft_lin();
    const std::vector<double> eps{0.0, -4.0, 1.0};
    const auto rows = delta_k_sweep(fixtures::k_star(), eps, lin);
    const auto base = compute_indicators(lin, fixtures::k_star());
    CHECK(rows[0].r_k == base.certified->r_k);
    CHECK(rows[0].i_k == base.certified->i_k);
    CHECK(rows[1].r_k == Approx(0.7742).epsilon(1e-3));
    CHECK(rows[1].i_k == Approx(7.873).epsilon(1e-3));
    CHECK(rows[2].r_k == Approx(0.2192).epsilon(1e-3));
    CHECK(rows[2].i_k == Approx(8.258).epsilon(1e-3));

    std::ostringstream os;
    write_delta_k_csv(os, rows);
    CHECK(os.str().rfind("epsilon,R_K,I_K\n", 0) == 0);
}

TEST_CASE("disturbance sweep") {
    const AircraftParams p;
    const std::vector<double> l_ds{0.0, 0.1, 0.2}, omegas{0.1, 0.2};
    const auto rows = disturbance_sweep(aircraft_error_plant(p), fixtures::k_star(), p.disturbance(), l_ds, omegas,
                                        p.reference(), p.initial_state(), fixtures::aircraft_sim_config());
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].l_d == 0.0);
    CHECK(rows[5].omega == 0.2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(rows[i].metrics.mean_settled[0]) <= 1e-3);
        CHECK(std::abs(rows[i].metrics.mean_settled[1]) <= 1e-3);
    }
    std::ostringstream os;
    write_disturbance_csv(os, rows);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "L_d,omega,channel,itae,pt,mo,ms,st");
    int count = 0;
    while (std::getline(in, line)) ++count;
    CHECK(count == 12);
}
