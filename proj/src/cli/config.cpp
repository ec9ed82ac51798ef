#include "rci/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "rci/errors.hpp"

namespace rci::cli {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& section, const std::set<std::string>& keys) {
    if (!obj.is_object()) throw ConfigError("section '" + section + "' must be an object");
    for (const auto& [k, _] : obj.items())
        if (!keys.count(k)) throw ConfigError("unknown key '" + k + "' in section '" + section + "'");
}

template <class T>
T value_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("key '") + key + "': " + ex.what());
    }
}

Vec vec_or(const json& obj, const char* key, Vec fallback) { return value_or<Vec>(obj, key, std::move(fallback)); }

Vec bounds_or_infinite(const json& obj, const char* key, std::size_t m, double inf_sign) {
    if (!obj.contains(key)) return Vec(m, inf_sign * std::numeric_limits<double>::infinity());
    return value_or<Vec>(obj, key, {});
}

void parse_aircraft_params(const json& p, AircraftParams& a) {
    allow_keys(p, "plant",
               {"name", "g", "v", "gamma_c", "chi_c", "chi0", "gamma0", "phi0", "nz0", "phi_min", "phi_max",
                "phi_rate_min", "phi_rate_max", "nz_min", "nz_max", "nz_rate_min", "nz_rate_max", "l_d_chi",
                "l_d_gamma", "omega_chi", "omega_gamma"});
    auto field = [&](const char* key, double& dst) { dst = value_or<double>(p, key, dst); };
    field("g", a.g);
    field("v", a.v);
    field("gamma_c", a.gamma_c);
    field("chi_c", a.chi_c);
    field("chi0", a.chi0);
    field("gamma0", a.gamma0);
    field("phi0", a.phi0);
    field("nz0", a.nz0);
    field("phi_min", a.phi_min);
    field("phi_max", a.phi_max);
    field("phi_rate_min", a.phi_rate_min);
    field("phi_rate_max", a.phi_rate_max);
    field("nz_min", a.nz_min);
    field("nz_max", a.nz_max);
    field("nz_rate_min", a.nz_rate_min);
    field("nz_rate_max", a.nz_rate_max);
    field("l_d_chi", a.l_d_chi);
    field("l_d_gamma", a.l_d_gamma);
    field("omega_chi", a.omega_chi);
    field("omega_gamma", a.omega_gamma);
}

void parse_plant(const json& root, RunConfig& cfg) {
    if (!root.contains("plant") || !root.at("plant").is_object() || root.at("plant").empty())
        throw ConfigError("missing or empty 'plant' section");
    const json& p = root.at("plant");
    cfg.plant_name = value_or<std::string>(p, "name", "");
    if (cfg.plant_name == "aircraft") {
        AircraftParams a;
        parse_aircraft_params(p, a);
        cfg.aircraft = a;
        cfg.plant = aircraft_error_plant(a);
    } else if (cfg.plant_name == "duffing") {
        allow_keys(p, "plant", {"name", "alpha", "beta", "delta"});
        cfg.plant = duffing(value_or(p, "alpha", 0.5), value_or(p, "beta", 0.25), value_or(p, "delta", 1.5));
    } else if (cfg.plant_name == "linear") {
        allow_keys(p, "plant", {"name", "a", "b"});
        if (!p.contains("a") || !p.contains("b")) throw ConfigError("linear plant needs matrices 'a' and 'b'");
        cfg.plant = linear_plant(matrix_from_json(p.at("a")), matrix_from_json(p.at("b")));
    } else {
        throw ConfigError("unknown plant '" + cfg.plant_name + "' (expected aircraft, duffing or linear)");
    }
}

void parse_gains(const json& root, RunConfig& cfg) {
    if (!root.contains("gains")) return;
    const json& g = root.at("gains");
    allow_keys(g, "gains", {"kp", "ki", "optimize"});
    const bool explicit_gains = g.contains("kp") || g.contains("ki");
    cfg.optimize = value_or(g, "optimize", false);
    if (explicit_gains == cfg.optimize)
        throw ConfigError("'gains' must hold exactly one of explicit kp/ki or \"optimize\": true");
    if (explicit_gains) {
        if (!g.contains("kp") || !g.contains("ki")) throw ConfigError("'gains' needs both kp and ki");
        GainPair k{matrix_from_json(g.at("kp")), matrix_from_json(g.at("ki"))};
        k.validate(cfg.plant.m, cfg.plant.n);
        cfg.gains = std::move(k);
    }
}

void parse_disturbance(const json& root, RunConfig& cfg) {
    const std::size_t channels = cfg.plant.disturbance_input.cols();
    cfg.disturbance = cfg.aircraft ? cfg.aircraft->disturbance() : SinusoidDisturbance::none(channels);
    if (!root.contains("disturbance")) return;
    const json& d = root.at("disturbance");
    allow_keys(d, "disturbance", {"amplitude", "omega", "phase"});
    SinusoidDisturbance out;
    out.amplitude = vec_or(d, "amplitude", cfg.disturbance.amplitude);
    out.omega = vec_or(d, "omega", cfg.disturbance.omega);
    if (d.contains("phase")) {
        for (const auto& s : value_or<std::vector<std::string>>(d, "phase", {})) {
            if (s == "sin")
                out.phase.push_back(Phase::Sine);
            else if (s == "cos")
                out.phase.push_back(Phase::Cosine);
            else
                throw ConfigError("disturbance phase must be \"sin\" or \"cos\", got \"" + s + "\"");
        }
    } else {
        out.phase = cfg.disturbance.phase;
        out.phase.resize(out.amplitude.size(), Phase::Sine);
    }
    out.validate();
    if (out.channels() != channels)
        throw ConfigError("disturbance needs " + std::to_string(channels) + " channels for this plant");
    cfg.disturbance = std::move(out);
}

void parse_sim(const json& root, RunConfig& cfg) {
    const std::size_t n = cfg.plant.n, m = cfg.plant.m;
    cfg.reference = cfg.aircraft ? cfg.aircraft->reference() : Vec(n, 0.0);
    cfg.x0 = cfg.aircraft ? cfg.aircraft->initial_state() : Vec(n, 0.0);
    if (cfg.aircraft) {
        cfg.sim.limits = cfg.aircraft->limits();
        cfg.sim.initial_input = cfg.aircraft->initial_input();
    }
    if (root.contains("sim")) {
        const json& s = root.at("sim");
        allow_keys(s, "sim", {"t_end", "step", "stride", "clip_inputs", "limits", "initial_input", "reference", "x0"});
        cfg.sim.t_end = value_or(s, "t_end", cfg.sim.t_end);
        cfg.sim.step = value_or(s, "step", cfg.sim.step);
        cfg.sim.stride = value_or<std::size_t>(s, "stride", cfg.sim.stride);
        cfg.sim.clip_inputs = value_or(s, "clip_inputs", cfg.sim.clip_inputs);
        cfg.reference = vec_or(s, "reference", cfg.reference);
        cfg.x0 = vec_or(s, "x0", cfg.x0);
        if (s.contains("initial_input")) {
            if (s.at("initial_input").is_null())
                cfg.sim.initial_input.reset();
            else
                cfg.sim.initial_input = value_or<Vec>(s, "initial_input", {});
        }
        if (s.contains("limits")) {
            const json& l = s.at("limits");
            if (l.is_null()) {
                cfg.sim.limits.reset();
            } else {
                allow_keys(l, "sim.limits", {"u_min", "u_max", "udot_min", "udot_max"});
                InputLimits lim{vec_or(l, "u_min", {}), vec_or(l, "u_max", {}), bounds_or_infinite(l, "udot_min", m, -1),
                                bounds_or_infinite(l, "udot_max", m, 1)};
                lim.validate(m);
                cfg.sim.limits = lim;
            }
        }
    }
    if (cfg.reference.size() != n || cfg.x0.size() != n)
        throw ConfigError("sim.reference and sim.x0 must have length " + std::to_string(n));
    if (cfg.sim.initial_input && cfg.sim.initial_input->size() != m)
        throw ConfigError("sim.initial_input must have length " + std::to_string(m));
    cfg.sim.validate();
}

void parse_tuning(const json& root, RunConfig& cfg) {
    const bool present = root.contains("tuning");
    const json empty = json::object();
    const json& t = present ? root.at("tuning") : empty;
    allow_keys(t, "tuning", {"i_star", "x0", "dt0", "u_min", "u_max", "udot_min", "udot_max", "ga"});
    if (t.contains("ga")) {
        const json& g = t.at("ga");
        allow_keys(g, "tuning.ga",
                   {"population", "generations", "crossover_rate", "mutation_rate", "mutation_scale",
                    "mutation_decay", "elitism", "tournament", "blend_alpha", "seed", "gene_min", "gene_max",
                    "threads"});
        GAConfig& c = cfg.ga;
        c.population = value_or(g, "population", c.population);
        c.generations = value_or(g, "generations", c.generations);
        c.crossover_rate = value_or(g, "crossover_rate", c.crossover_rate);
        c.mutation_rate = value_or(g, "mutation_rate", c.mutation_rate);
        c.mutation_scale = value_or(g, "mutation_scale", c.mutation_scale);
        c.mutation_decay = value_or(g, "mutation_decay", c.mutation_decay);
        c.elitism = value_or(g, "elitism", c.elitism);
        c.tournament = value_or(g, "tournament", c.tournament);
        c.blend_alpha = value_or(g, "blend_alpha", c.blend_alpha);
        c.seed = value_or(g, "seed", c.seed);
        c.gene_min = value_or(g, "gene_min", c.gene_min);
        c.gene_max = value_or(g, "gene_max", c.gene_max);
        c.threads = value_or(g, "threads", c.threads);
        c.validate();
    }
    const std::size_t m = cfg.plant.m;
    if (m == 0 || (!present && !cfg.optimize && !cfg.aircraft)) return;

    TuningProblem p;
    p.lin = cfg.plant.linearize();
    p.x0 = vec_or(t, "x0", cfg.aircraft ? cfg.aircraft->initial_error() : sub(cfg.reference, cfg.x0));
    p.i_star = value_or(t, "i_star", 5.0);
    p.dt0 = value_or(t, "dt0", 0.1);
    const std::optional<InputLimits>& lim = cfg.sim.limits;
    p.u_min = t.contains("u_min") ? vec_or(t, "u_min", {}) : (lim ? lim->u_min : Vec{});
    p.u_max = t.contains("u_max") ? vec_or(t, "u_max", {}) : (lim ? lim->u_max : Vec{});
    p.udot_min = t.contains("udot_min") ? vec_or(t, "udot_min", {})
                                        : (lim ? lim->udot_min : bounds_or_infinite(t, "udot_min", m, -1));
    p.udot_max = t.contains("udot_max") ? vec_or(t, "udot_max", {})
                                        : (lim ? lim->udot_max : bounds_or_infinite(t, "udot_max", m, 1));
    if (p.u_min.empty() || p.u_max.empty()) throw ConfigError("tuning needs u_min/u_max (or sim.limits)");
    p.validate();
    cfg.tuning = std::move(p);
}

void parse_sweep(const json& root, RunConfig& cfg) {
    if (!root.contains("sweep")) return;
    const json& s = root.at("sweep");
    allow_keys(s, "sweep", {"kind", "epsilons", "l_d", "omega", "include_zero_row"});
    if (s.contains("kind")) {
        const auto kind = value_or<std::string>(s, "kind", "");
        if (kind == "delta_k")
            cfg.sweep.kind = SweepKind::DeltaK;
        else if (kind == "disturbance")
            cfg.sweep.kind = SweepKind::Disturbance;
        else
            throw ConfigError("sweep.kind must be \"delta_k\" or \"disturbance\"");
    }
    cfg.sweep.epsilons = vec_or(s, "epsilons", cfg.sweep.epsilons);
    cfg.sweep.l_d = vec_or(s, "l_d", cfg.sweep.l_d);
    cfg.sweep.omega = vec_or(s, "omega", cfg.sweep.omega);
    cfg.sweep.include_zero_row = value_or(s, "include_zero_row", cfg.sweep.include_zero_row);
}

void parse_duffing(const json& root, RunConfig& cfg) {
    if (!root.contains("duffing")) return;
    const json& d = root.at("duffing");
    allow_keys(d, "duffing", {"x0", "l_d", "omega", "slack", "l_f"});
    cfg.duffing.x0 = vec_or(d, "x0", cfg.duffing.x0);
    cfg.duffing.l_d = value_or(d, "l_d", cfg.duffing.l_d);
    cfg.duffing.omega = value_or(d, "omega", cfg.duffing.omega);
    cfg.duffing.slack = value_or(d, "slack", cfg.duffing.slack);
    if (d.contains("l_f")) cfg.duffing.l_f = value_or(d, "l_f", 0.0);
}

} // namespace

RealMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw ConfigError("matrix must be {\"rows\", \"cols\", \"data\"}");
    const auto rows = value_or<std::size_t>(j, "rows", 0);
    const auto cols = value_or<std::size_t>(j, "cols", 0);
    const auto nested = value_or<std::vector<std::vector<double>>>(j, "data", {});
    if (nested.size() != rows) throw ConfigError("matrix data has " + std::to_string(nested.size()) + " rows, declared " + std::to_string(rows));
    for (const auto& r : nested)
        if (r.size() != cols) throw ConfigError("matrix row length differs from declared cols");
    if (rows == 0 || cols == 0) throw ConfigError("matrix dimensions must be positive");
    return RealMatrix::from_rows(nested);
}

json matrix_to_json(const RealMatrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.to_rows()}}; }

RunConfig parse_config(const json& j) {
    allow_keys(j, "<root>", {"plant", "gains", "disturbance", "sim", "tuning", "sweep", "duffing", "output"});
    RunConfig cfg;
    try {
        parse_plant(j, cfg);
        parse_gains(j, cfg);
        parse_disturbance(j, cfg);
        parse_sim(j, cfg);
        parse_tuning(j, cfg);
        parse_sweep(j, cfg);
        parse_duffing(j, cfg);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& ex) {
        throw ConfigError(ex.what());
    } catch (const json::exception& ex) {
        throw ConfigError(ex.what());
    }
    if (j.contains("output")) {
        allow_keys(j.at("output"), "output", {"dir"});
        cfg.output_dir = value_or<std::string>(j.at("output"), "dir", cfg.output_dir.string());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ConfigError(path.string() + ": " + ex.what());
    }
    return parse_config(j);
}

} // namespace rci::cli
