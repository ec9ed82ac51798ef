#include "rci/cli/commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rci/cli/reports.hpp"
#include "rci/errors.hpp"

namespace rci::cli {

using nlohmann::json;

namespace {

std::filesystem::path prepare_dir(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    return cfg.output_dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

const TuningProblem& require_tuning(const RunConfig& cfg) {
    if (!cfg.tuning) throw ConfigError("this command needs a 'tuning' section for the plant");
    return *cfg.tuning;
}

/// Explicit gains, or the GA optimum when the config asks for optimization.
GainPair resolve_gains(const RunConfig& cfg, std::ostream& log) {
    if (cfg.gains) return *cfg.gains;
    if (!cfg.optimize) throw ConfigError("this command needs a 'gains' section");
    const auto res = ga_optimize(require_tuning(cfg), cfg.ga);
    log << "optimized gains (fitness " << res.best_fitness << ", feasible " << std::boolalpha << res.feasible << ")\n";
    return res.best;
}

} // namespace

int cmd_indicators(const RunConfig& cfg, std::ostream& log) {
    if (cfg.plant.m == 0) throw ConfigError("indicators need a controlled plant (m > 0)");
    const GainPair k = resolve_gains(cfg, log);
    const auto rep = compute_indicators(cfg.plant.linearize(), k);
    const auto dir = prepare_dir(cfg);
    write_json(dir / "indicators.json", indicator_report_to_json(rep));
    if (!rep.certified) {
        log << "A_K(0) is not Hurwitz (abscissa " << rep.eig_real_parts.front() << "); no indicators\n";
        return AnalysisFailure;
    }
    log << std::setprecision(6) << "R_K = " << rep.certified->r_k << "  I_K = " << rep.certified->i_k << '\n';
    return Success;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& log) {
    const auto res = ga_optimize(require_tuning(cfg), cfg.ga);
    const auto dir = prepare_dir(cfg);
    write_json(dir / "tuning.json", tuning_result_to_json(res));
    std::ostringstream csv;
    csv << std::setprecision(17) << "generation,best_fitness\n";
    for (std::size_t g = 0; g < res.history.size(); ++g) csv << g << ',' << res.history[g] << '\n';
    write_text(dir / "fitness_history.csv", csv.str());
    log << std::setprecision(6) << "best fitness " << res.best_fitness << ", feasible " << std::boolalpha
        << res.feasible << '\n';
    return res.feasible ? Success : AnalysisFailure;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    SimulationTrace trace;
    if (cfg.plant.m == 0) {
        trace = simulate_autonomous(cfg.plant, cfg.disturbance, cfg.x0, cfg.sim);
    } else {
        const GainPair k = resolve_gains(cfg, log);
        trace = simulate(cfg.plant, k, cfg.disturbance, cfg.reference, cfg.x0, cfg.sim);
    }
    const auto dir = prepare_dir(cfg);
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_text(dir / "trace.csv", csv.str());

    json j{{"truncated", trace.truncated}, {"violations", trace.violations.size()}};
    if (trace.truncated) {
        j["truncation_time"] = trace.truncation_time;
        j["error"] = trace.error;
    }
    if (trace.size() >= 4) j["metrics"] = metrics_to_json(compute_metrics(trace));
    write_json(dir / "metrics.json", j);
    log << trace.size() << " samples, " << trace.violations.size() << " constraint violations\n";
    if (trace.truncated) {
        log << "run truncated at t = " << trace.truncation_time << ": " << trace.error << '\n';
        return NumericFailure;
    }
    return Success;
}

int cmd_sweep(const RunConfig& cfg, SweepKind kind, std::ostream& log) {
    const GainPair k = resolve_gains(cfg, log);
    const auto dir = prepare_dir(cfg);
    std::ostringstream csv;
    if (kind == SweepKind::DeltaK) {
        const auto rows = delta_k_sweep(k, cfg.sweep.epsilons, cfg.plant.linearize());
        write_delta_k_csv(csv, rows);
        write_text(dir / "delta_k.csv", csv.str());
        log << rows.size() << " gain sets evaluated\n";
        return Success;
    }
    Vec l_ds = cfg.sweep.l_d;
    if (cfg.sweep.include_zero_row) l_ds.insert(l_ds.begin(), 0.0);
    const auto rows =
        disturbance_sweep(cfg.plant, k, cfg.disturbance, l_ds, cfg.sweep.omega, cfg.reference, cfg.x0, cfg.sim);
    write_disturbance_csv(csv, rows);
    write_text(dir / "disturbance.csv", csv.str());
    std::size_t truncated = 0;
    for (const auto& r : rows) truncated += r.truncated ? 1 : 0;
    log << rows.size() << " disturbance settings simulated\n";
    return truncated ? NumericFailure : Success;
}

int cmd_verify_duffing(const RunConfig& cfg, std::ostream& log) {
    if (cfg.plant_name != "duffing") throw ConfigError("verify-duffing needs plant.name = \"duffing\"");
    const auto& spec = cfg.duffing;
    const SinusoidDisturbance d{{spec.l_d}, {spec.omega}, {Phase::Sine}};
    const auto trace = simulate_autonomous(cfg.plant, d, spec.x0, cfg.sim);
    if (trace.truncated) throw NumericError("Duffing run diverged at t = " + std::to_string(trace.truncation_time));
    const RealMatrix j0 = cfg.plant.linearize().jac_x;
    const double lf = spec.l_f.value_or(spectral_norm(j0));
    const auto cert = theorem1_certificate(j0, lf, spec.l_d);
    DuffingVerification v{verify_trajectory(trace, cfg.plant, cert, spec.slack), cert.rate, cert.radius, cert.beta,
                          lf, spec.l_d, spec.slack};
    const auto dir = prepare_dir(cfg);
    write_json(dir / "duffing_verification.json", duffing_verification_to_json(v));
    std::ostringstream csv;
    csv << std::setprecision(17) << "t,f_norm,envelope\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double fn = norm2(cfg.plant.dynamics(trace.e[k], {}));
        csv << trace.t[k] << ',' << fn << ',' << envelope(v.verdict.envelope, trace.t[k]) << '\n';
    }
    write_text(dir / "duffing_envelope.csv", csv.str());
    log << std::setprecision(6) << "dominated " << std::boolalpha << v.verdict.dominated << ", final-quarter max "
        << v.verdict.final_quarter_max << ", radius " << cert.radius << '\n';
    return v.verdict.dominated && v.verdict.final_quarter_max <= cert.radius ? Success : AnalysisFailure;
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log, std::ostream& err) {
    std::ostringstream sink;
    std::ostream& out = opts.quiet ? sink : log;
    try {
        RunConfig cfg = load_config(opts.config);
        if (opts.out) cfg.output_dir = *opts.out;
        if (opts.seed) cfg.ga.seed = *opts.seed;
        if (name == "indicators") return cmd_indicators(cfg, out);
        if (name == "optimize") return cmd_optimize(cfg, out);
        if (name == "simulate") return cmd_simulate(cfg, out);
        if (name == "sweep") {
            const auto kind = opts.sweep_kind ? opts.sweep_kind : cfg.sweep.kind;
            if (!kind) throw ConfigError("sweep kind not given (sweep.kind or --kind)");
            return cmd_sweep(cfg, *kind, out);
        }
        if (name == "verify-duffing") return cmd_verify_duffing(cfg, out);
        throw ConfigError("unknown command '" + name + "'");
    } catch (const ConfigError& ex) {
        err << "config error: " << ex.what() << '\n';
        return ConfigFailure;
    } catch (const DimensionError& ex) {
        err << "config error: " << ex.what() << '\n';
        return ConfigFailure;
    } catch (const ParameterError& ex) {
        err << "config error: " << ex.what() << '\n';
        return ConfigFailure;
    } catch (const StabilityError& ex) {
        err << "analysis failure: " << ex.what() << '\n';
        return AnalysisFailure;
    } catch (const std::exception& ex) {
        err << "numeric failure: " << ex.what() << '\n';
        return NumericFailure;
    }
}

} // namespace rci::cli
