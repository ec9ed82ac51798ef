#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rci/closedloop.hpp"
#include "rci/indicators.hpp"
#include "rci/metrics.hpp"
#include "rci/plants.hpp"

namespace rci {

/**
 * max_K R_K subject to I_K <= I*, u_min <= u_K(t0) <= u_max and
 * udot_min <= udot_K(t0) <= udot_max, where for the controller input x0
 *
 *   u_K(t0)    = K_P x0 + dt0 K_I x0
 *   udot_K(t0) = K_I x0
 *
 * Infinite bounds are allowed and mean "unconstrained".
 */
struct TuningProblem {
    LinearizationPoint lin;
    Vec x0;
    double i_star = 5.0;
    Vec u_min, u_max;
    Vec udot_min, udot_max;
    double dt0 = 0.1;

    void validate() const;
};

struct FeasibilityViolation {
    std::string constraint; ///< "hurwitz", "attractor", "input", "rate"
    std::size_t channel = 0;
    double amount = 0.0;    ///< distance outside the bound (>= 0)
};

struct FeasibilityResult {
    bool feasible = false;
    std::vector<FeasibilityViolation> violations;
    double total_violation = 0.0;
    IndicatorReport report;
    Vec u_t0;
    Vec udot_t0;
};

FeasibilityResult evaluate_feasibility(const TuningProblem& problem, const GainPair& gains);

/**
 * R_K when feasible, otherwise -(1 + V). V sums the box and attractor-cap
 * excesses; an unstable loop additionally pays 50 + its spectral abscissa,
 * so any stabilizing candidate outranks any destabilizing one.
 */
double fitness(const TuningProblem& problem, const GainPair& gains);

struct GAConfig {
    std::size_t population = 60;
    std::size_t generations = 80;
    double crossover_rate = 0.9;
    double mutation_rate = 0.2;
    double mutation_scale = 0.1; ///< fraction of the gene box width
    double mutation_decay = 0.98;
    std::size_t elitism = 2;
    std::size_t tournament = 3;
    double blend_alpha = 0.5;
    std::uint64_t seed = 42;
    double gene_min = -20.0;
    double gene_max = 20.0;
    std::size_t threads = 0; ///< 0: hardware concurrency

    void validate() const;
};

struct TuningResult {
    GainPair best;
    IndicatorReport report;
    double best_fitness = 0.0;
    std::vector<double> history; ///< best fitness per generation
    bool feasible = false;
};

/// Genome layout: K_P row-major, then K_I row-major.
GainPair decode_genome(std::span<const double> genome, std::size_t m, std::size_t n);
Vec encode_genome(const GainPair& gains);

TuningResult ga_optimize(const TuningProblem& problem, const GAConfig& cfg);

struct DeltaKRow {
    double epsilon = 0.0;
    bool hurwitz = false;
    double r_k = 0.0;
    double i_k = 0.0;
};

/// Indicators of (K_P - eps I, K_I - eps I) for each eps. Requires m = n.
std::vector<DeltaKRow> delta_k_sweep(const GainPair& base, std::span<const double> epsilons,
                                     const LinearizationPoint& lin);

struct DisturbanceRow {
    double l_d = 0.0;
    double omega = 0.0;
    MetricsReport metrics;
    bool truncated = false;
};

/**
 * One simulation per (L_d, omega) pair with every disturbance channel set to
 * amplitude L_d and frequency omega (phase kinds taken from base). Runs are
 * independent and execute in parallel; the row order is L_d-major.
 */
std::vector<DisturbanceRow> disturbance_sweep(const PlantModel& plant, const GainPair& gains,
                                              const SinusoidDisturbance& base, std::span<const double> l_ds,
                                              std::span<const double> omegas, std::span<const double> reference,
                                              std::span<const double> x0, const SimConfig& cfg);

void write_delta_k_csv(std::ostream& os, const std::vector<DeltaKRow>& rows);
/// One line per (row, channel): L_d, omega, channel, itae, pt, mo, ms, st.
void write_disturbance_csv(std::ostream& os, const std::vector<DisturbanceRow>& rows);

} // namespace rci
