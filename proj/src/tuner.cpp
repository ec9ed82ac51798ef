#include "rci/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "rci/errors.hpp"

namespace rci {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent stream per (generation, individual); no shared generator state.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t index) {
    const std::uint64_t key = splitmix64(splitmix64(seed) ^ splitmix64((generation << 32) ^ index));
    return std::mt19937_64(key);
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers with static chunks.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += threads) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_box(const Vec& lo, const Vec& hi, std::size_t m, const char* what) {
    if (lo.size() != m || hi.size() != m)
        throw DimensionError(std::string("TuningProblem: ") + what + " bounds must have length m");
    for (std::size_t i = 0; i < m; ++i)
        if (!(lo[i] < hi[i])) throw ParameterError(std::string("TuningProblem: empty ") + what + " box");
}

void add_box_violations(FeasibilityResult& r, const Vec& v, const Vec& lo, const Vec& hi, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < lo[i]) r.violations.push_back({name, i, lo[i] - v[i]});
        if (v[i] > hi[i]) r.violations.push_back({name, i, v[i] - hi[i]});
    }
}

constexpr double unstable_penalty = 50.0;

} // namespace

void TuningProblem::validate() const {
    lin.validate();
    const std::size_t m = lin.inputs(), n = lin.states();
    if (x0.size() != n) throw DimensionError("TuningProblem: x0 must have length n");
    if (!(i_star > 0.0)) throw ParameterError("TuningProblem: I* must be positive");
    if (!(dt0 > 0.0)) throw ParameterError("TuningProblem: dt0 must be positive");
    check_box(u_min, u_max, m, "input");
    check_box(udot_min, udot_max, m, "rate");
}

FeasibilityResult evaluate_feasibility(const TuningProblem& problem, const GainPair& gains) {
    problem.validate();
    gains.validate(problem.lin.inputs(), problem.lin.states());
    FeasibilityResult r;
    r.u_t0 = gains.kp * problem.x0;
    r.udot_t0 = gains.ki * problem.x0;
    for (std::size_t i = 0; i < r.u_t0.size(); ++i) r.u_t0[i] += problem.dt0 * r.udot_t0[i];

    try {
        r.report = compute_indicators(problem.lin, gains);
    } catch (const Error&) {
        // Near-marginal spectra can make the Lyapunov solve fail; treat as unstable.
        r.report = IndicatorReport{};
        r.report.a_k0 = assemble_ak0(problem.lin, gains);
        r.report.eig_real_parts = eig_real_parts(r.report.a_k0);
        r.report.hurwitz = false;
    }
    if (!r.report.certified) {
        const double abscissa = r.report.eig_real_parts.empty() ? 0.0 : r.report.eig_real_parts.front();
        r.violations.push_back({"hurwitz", 0, std::max(abscissa, 0.0)});
    } else if (r.report.certified->i_k > problem.i_star) {
        r.violations.push_back({"attractor", 0, r.report.certified->i_k - problem.i_star});
    }
    add_box_violations(r, r.u_t0, problem.u_min, problem.u_max, "input");
    add_box_violations(r, r.udot_t0, problem.udot_min, problem.udot_max, "rate");
    for (const auto& v : r.violations) r.total_violation += v.amount;
    r.feasible = r.violations.empty();
    return r;
}

double fitness(const TuningProblem& problem, const GainPair& gains) {
    const auto f = evaluate_feasibility(problem, gains);
    if (f.feasible) return f.report.certified->r_k;
    // log1p keeps huge excesses (I_K near the stability boundary) below the
    // unstable offset, so the ordering stable-infeasible > unstable holds.
    double v = 0.0;
    for (const auto& viol : f.violations) {
        if (viol.constraint == "hurwitz")
            v += unstable_penalty + viol.amount;
        else
            v += std::log1p(viol.amount);
    }
    return -(1.0 + v);
}

void GAConfig::validate() const {
    if (population < 2) throw ParameterError("GAConfig: population must be >= 2");
    if (generations < 1) throw ParameterError("GAConfig: generations must be >= 1");
    for (double r : {crossover_rate, mutation_rate})
        if (!(r >= 0.0 && r <= 1.0)) throw ParameterError("GAConfig: rates must lie in [0, 1]");
    if (!(mutation_scale >= 0.0) || !(mutation_decay > 0.0)) throw ParameterError("GAConfig: bad mutation schedule");
    if (elitism >= population) throw ParameterError("GAConfig: elitism must be below the population size");
    if (tournament < 1) throw ParameterError("GAConfig: tournament size must be >= 1");
    if (!(gene_min < gene_max)) throw ParameterError("GAConfig: empty gene box");
    if (!(blend_alpha >= 0.0)) throw ParameterError("GAConfig: blend alpha must be >= 0");
}

GainPair decode_genome(std::span<const double> genome, std::size_t m, std::size_t n) {
    if (genome.size() != 2 * m * n) throw DimensionError("decode_genome: genome length must be 2mn");
    const Vec kp(genome.begin(), genome.begin() + static_cast<std::ptrdiff_t>(m * n));
    const Vec ki(genome.begin() + static_cast<std::ptrdiff_t>(m * n), genome.end());
    return {RealMatrix(m, n, kp), RealMatrix(m, n, ki)};
}

Vec encode_genome(const GainPair& gains) {
    Vec g(gains.kp.data().begin(), gains.kp.data().end());
    g.insert(g.end(), gains.ki.data().begin(), gains.ki.data().end());
    return g;
}

TuningResult ga_optimize(const TuningProblem& problem, const GAConfig& cfg) {
    problem.validate();
    cfg.validate();
    const std::size_t m = problem.lin.inputs(), n = problem.lin.states();
    const std::size_t genes = 2 * m * n;
    const std::size_t pop_size = cfg.population;

    std::vector<Vec> pop(pop_size, Vec(genes));
    for (std::size_t i = 0; i < pop_size; ++i) {
        auto rng = stream(cfg.seed, 0, i);
        std::uniform_real_distribution<double> u(cfg.gene_min, cfg.gene_max);
        for (auto& g : pop[i]) g = u(rng);
    }

    TuningResult res;
    std::vector<double> fit(pop_size);
    std::vector<std::size_t> order(pop_size);
    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        parallel_for(pop_size, cfg.threads, [&](std::size_t i) { fit[i] = fitness(problem, decode_genome(pop[i], m, n)); });
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });
        res.history.push_back(fit[order.front()]);
        if (gen + 1 == cfg.generations) break;

        const double sigma = cfg.mutation_scale * (cfg.gene_max - cfg.gene_min) *
                             std::pow(cfg.mutation_decay, static_cast<double>(gen));
        std::vector<Vec> next(pop_size);
        for (std::size_t i = 0; i < cfg.elitism; ++i) next[i] = pop[order[i]];
        parallel_for(pop_size - cfg.elitism, cfg.threads, [&](std::size_t off) {
            const std::size_t i = cfg.elitism + off;
            auto rng = stream(cfg.seed, gen + 1, i);
            std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::normal_distribution<double> gauss(0.0, 1.0);
            auto select = [&] {
                std::size_t best = pick(rng);
                for (std::size_t k = 1; k < cfg.tournament; ++k) {
                    const std::size_t c = pick(rng);
                    if (fit[c] > fit[best] || (fit[c] == fit[best] && c < best)) best = c;
                }
                return best;
            };
            const Vec& p1 = pop[select()];
            const Vec& p2 = pop[select()];
            Vec child = p1;
            if (unit(rng) < cfg.crossover_rate) {
                for (std::size_t k = 0; k < genes; ++k) {
                    const double w = -cfg.blend_alpha + (1.0 + 2.0 * cfg.blend_alpha) * unit(rng);
                    child[k] = p1[k] + w * (p2[k] - p1[k]);
                }
            }
            for (auto& g : child) {
                if (unit(rng) < cfg.mutation_rate) g += sigma * gauss(rng);
                g = std::clamp(g, cfg.gene_min, cfg.gene_max);
            }
            next[i] = std::move(child);
        });
        pop = std::move(next);
    }

    res.best = decode_genome(pop[order.front()], m, n);
    res.best_fitness = fit[order.front()];
    const auto check = evaluate_feasibility(problem, res.best);
    res.feasible = check.feasible;
    res.report = check.report;
    return res;
}

std::vector<DeltaKRow> delta_k_sweep(const GainPair& base, std::span<const double> epsilons,
                                     const LinearizationPoint& lin) {
    base.validate(lin.inputs(), lin.states());
    if (lin.inputs() != lin.states()) throw DimensionError("delta_k_sweep: needs square gains (m = n)");
    const RealMatrix eye = RealMatrix::identity(lin.states());
    std::vector<DeltaKRow> rows;
    for (double eps : epsilons) {
        const GainPair k{base.kp - eps * eye, base.ki - eps * eye};
        const auto rep = compute_indicators(lin, k);
        DeltaKRow row{eps, rep.hurwitz, 0.0, 0.0};
        if (rep.certified) {
            row.r_k = rep.certified->r_k;
            row.i_k = rep.certified->i_k;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<DisturbanceRow> disturbance_sweep(const PlantModel& plant, const GainPair& gains,
                                              const SinusoidDisturbance& base, std::span<const double> l_ds,
                                              std::span<const double> omegas, std::span<const double> reference,
                                              std::span<const double> x0, const SimConfig& cfg) {
    base.validate();
    std::vector<DisturbanceRow> rows;
    for (double l : l_ds)
        for (double w : omegas) rows.push_back({l, w, {}, false});
    parallel_for(rows.size(), 0, [&](std::size_t i) {
        SinusoidDisturbance d = base;
        std::fill(d.amplitude.begin(), d.amplitude.end(), rows[i].l_d);
        std::fill(d.omega.begin(), d.omega.end(), rows[i].omega);
        const auto trace = simulate(plant, gains, d, reference, x0, cfg);
        rows[i].truncated = trace.truncated;
        if (trace.size() >= 4) rows[i].metrics = compute_metrics(trace);
    });
    return rows;
}

void write_delta_k_csv(std::ostream& os, const std::vector<DeltaKRow>& rows) {
    const auto old = os.precision(10);
    os << "epsilon,R_K,I_K\n";
    for (const auto& r : rows) {
        os << r.epsilon << ',';
        if (r.hurwitz)
            os << r.r_k << ',' << r.i_k << '\n';
        else
            os << "nan,nan\n";
    }
    os.precision(old);
}

void write_disturbance_csv(std::ostream& os, const std::vector<DisturbanceRow>& rows) {
    const auto old = os.precision(10);
    os << "L_d,omega,channel,itae,pt,mo,ms,st\n";
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.metrics.itae.size(); ++c) {
            os << r.l_d << ',' << r.omega << ',' << (c + 1) << ',' << r.metrics.itae[c] << ','
               << r.metrics.peak_time[c] << ',' << r.metrics.max_overshoot[c] << ',' << r.metrics.mean_settled[c]
               << ',' << r.metrics.std_settled[c] << '\n';
        }
    }
    os.precision(old);
}

} // namespace rci
