#include "rci/closedloop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "rci/errors.hpp"

namespace rci {

namespace {

using Deriv = std::function<Vec(double, const Vec&)>;

Vec rk4_step(const Deriv& f, double t, const Vec& y, double h) {
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * h, axpy(0.5 * h, k1, y));
    const Vec k3 = f(t + 0.5 * h, axpy(0.5 * h, k2, y));
    const Vec k4 = f(t + h, axpy(h, k3, y));
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

Vec matvec_or_empty(const RealMatrix& a, std::span<const double> x) {
    if (a.cols() == 0) return Vec(a.rows(), 0.0);
    return a * x;
}

/// The PI loop around an error-coordinate plant; state y = (e, z).
struct Loop {
    const PlantModel& plant;
    const GainPair& gains;
    const SinusoidDisturbance& dist;
    Vec bias;
    const InputLimits* clip = nullptr;

    [[nodiscard]] Vec input(std::span<const double> e, std::span<const double> z) const {
        Vec u = gains.kp * e;
        const Vec ui = gains.ki * z;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += ui[i] + bias[i];
        if (clip) {
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::clamp(u[i], clip->u_min[i], clip->u_max[i]);
        }
        return u;
    }

    [[nodiscard]] Vec plant_rate(double t, std::span<const double> e, std::span<const double> u) const {
        Vec r = plant.dynamics(e, u);
        if (dist.channels() > 0) {
            const Vec d = disturbance_eval(dist, t);
            const Vec bd = matvec_or_empty(plant.disturbance_input, d);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] += bd[i];
        }
        return r;
    }

    [[nodiscard]] Vec operator()(double t, const Vec& y) const {
        const std::size_t n = plant.n;
        const std::span<const double> e(y.data(), n), z(y.data() + n, n);
        const Vec u = input(e, z);
        Vec dy = plant_rate(t, e, u);
        dy.insert(dy.end(), e.begin(), e.end());
        return dy;
    }
};

void check_disturbance(const PlantModel& plant, const SinusoidDisturbance& d) {
    d.validate();
    if (d.channels() != 0 && d.channels() != plant.disturbance_input.cols()) {
        throw DimensionError("simulate: disturbance has " + std::to_string(d.channels()) + " channels, plant expects " +
                             std::to_string(plant.disturbance_input.cols()));
    }
}

std::size_t step_count(const SimConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.t_end / cfg.step));
}

void log_violations(SimulationTrace& tr, const InputLimits& lim) {
    constexpr double tol = 1e-12;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        for (std::size_t j = 0; j < tr.u[k].size(); ++j) {
            const double u = tr.u[k][j];
            if (u < lim.u_min[j] - tol || u > lim.u_max[j] + tol)
                tr.violations.push_back({tr.t[k], j, ViolationKind::Magnitude, u});
            const double r = tr.udot[k][j];
            if (r < lim.udot_min[j] - tol || r > lim.udot_max[j] + tol)
                tr.violations.push_back({tr.t[k], j, ViolationKind::Rate, r});
        }
    }
}

} // namespace

PIState PIState::initial(const GainPair& gains) {
    gains.validate();
    return {gains, Vec(gains.states(), 0.0), Vec(gains.inputs(), 0.0), Vec(gains.inputs(), 0.0)};
}

std::pair<PIState, Vec> pi_step(PIState state, std::span<const double> error, double dt) {
    if (!(dt > 0.0)) throw ParameterError("pi_step: dt must be positive");
    const std::size_t n = state.gains.states();
    if (error.size() != n || state.integral_accumulator.size() != n)
        throw DimensionError("pi_step: error / accumulator length must equal n");
    if (state.bias.empty()) state.bias.assign(state.gains.inputs(), 0.0);
    for (std::size_t i = 0; i < n; ++i) state.integral_accumulator[i] += error[i] * dt;
    Vec u = state.gains.kp * error;
    const Vec ui = state.gains.ki * state.integral_accumulator;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += ui[i] + state.bias[i];
    state.last_output = u;
    return {std::move(state), std::move(u)};
}

void SimConfig::validate() const {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("SimConfig: t_end must be positive");
    if (!(step > 0.0 && step <= 0.1)) throw ParameterError("SimConfig: step must lie in (0, 0.1]");
    if (stride < 1) throw ParameterError("SimConfig: stride must be >= 1");
    if (std::abs(static_cast<double>(step_count(*this)) * step - t_end) > 1e-9 * t_end)
        throw ParameterError("SimConfig: t_end must be a multiple of step");
}

double SimulationTrace::dt() const {
    if (t.size() < 2) throw DimensionError("SimulationTrace: need at least two samples");
    return t[1] - t[0];
}

Vec SimulationTrace::channel(const std::vector<Vec>& series, std::size_t i) const {
    Vec out(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) out[k] = series[k].at(i);
    return out;
}

SimulationTrace simulate(const PlantModel& plant, const GainPair& gains, const SinusoidDisturbance& disturbance,
                         std::span<const double> reference, std::span<const double> x0, const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n = plant.n, m = plant.m;
    if (m == 0) throw DimensionError("simulate: plant has no inputs; use simulate_autonomous");
    gains.validate(m, n);
    if (reference.size() != n || x0.size() != n) throw DimensionError("simulate: reference and x0 must have length n");
    check_disturbance(plant, disturbance);
    if (cfg.limits) cfg.limits->validate(m);
    if (cfg.clip_inputs && !cfg.limits) throw ParameterError("simulate: clip_inputs requires limits");

    const Vec e0 = sub(reference, x0);
    Vec bias(m, 0.0);
    if (cfg.initial_input) {
        if (cfg.initial_input->size() != m) throw DimensionError("simulate: initial_input must have length m");
        bias = sub(*cfg.initial_input, gains.kp * e0);
    }
    const Loop loop{plant, gains, disturbance, bias, cfg.clip_inputs ? &*cfg.limits : nullptr};
    const Deriv deriv = [&loop](double t, const Vec& y) { return loop(t, y); };

    SimulationTrace tr;
    Vec y = e0;
    y.resize(2 * n, 0.0);
    const std::size_t steps = step_count(cfg);

    auto record = [&](double t) {
        const std::span<const double> e(y.data(), n), z(y.data() + n, n);
        const Vec u = loop.input(e, z);
        Vec edot = loop.plant_rate(t, e, u);
        tr.t.push_back(t);
        tr.e.emplace_back(e.begin(), e.end());
        tr.x.push_back(sub(reference, e));
        tr.u.push_back(u);
        tr.edot.push_back(std::move(edot));
        tr.d.push_back(disturbance.channels() ? disturbance_eval(disturbance, t) : Vec{});
    };

    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * cfg.step;
        try {
            if (k % cfg.stride == 0) record(t);
            if (k == steps) break;
            Vec next = rk4_step(deriv, t, y, cfg.step);
            if (!all_finite(next)) {
                tr.truncated = true;
                tr.truncation_time = t;
                tr.error = "non-finite state";
                break;
            }
            y = std::move(next);
        } catch (const DomainError& ex) {
            tr.truncated = true;
            tr.truncation_time = t;
            tr.error = ex.what();
            break;
        }
    }
    // A failed record() may leave series of unequal length; trim to the shortest.
    const std::size_t len = std::min({tr.t.size(), tr.e.size(), tr.u.size(), tr.edot.size(), tr.d.size()});
    tr.t.resize(len);
    tr.e.resize(len);
    tr.x.resize(len);
    tr.u.resize(len);
    tr.edot.resize(len);
    tr.d.resize(len);

    tr.udot = input_rate_series(tr);
    if (cfg.limits) log_violations(tr, *cfg.limits);
    return tr;
}

SimulationTrace simulate_autonomous(const PlantModel& plant, const SinusoidDisturbance& disturbance,
                                    std::span<const double> s0, const SimConfig& cfg) {
    cfg.validate();
    if (s0.size() != plant.n) throw DimensionError("simulate_autonomous: s0 must have length n");
    check_disturbance(plant, disturbance);
    const Vec no_input(plant.m, 0.0);
    auto rate = [&](double t, const Vec& s) {
        Vec r = plant.dynamics(s, no_input);
        if (disturbance.channels() > 0) {
            const Vec bd = matvec_or_empty(plant.disturbance_input, disturbance_eval(disturbance, t));
            for (std::size_t i = 0; i < r.size(); ++i) r[i] += bd[i];
        }
        return r;
    };
    const Deriv deriv = rate;

    SimulationTrace tr;
    Vec y(s0.begin(), s0.end());
    const std::size_t steps = step_count(cfg);
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * cfg.step;
        if (k % cfg.stride == 0) {
            tr.t.push_back(t);
            tr.e.push_back(y);
            tr.x.push_back(y);
            tr.edot.push_back(rate(t, y));
            tr.u.push_back(no_input);
            tr.d.push_back(disturbance.channels() ? disturbance_eval(disturbance, t) : Vec{});
        }
        if (k == steps) break;
        Vec next = rk4_step(deriv, t, y, cfg.step);
        if (!all_finite(next)) {
            tr.truncated = true;
            tr.truncation_time = t;
            tr.error = "non-finite state";
            break;
        }
        y = std::move(next);
    }
    tr.udot = input_rate_series(tr);
    return tr;
}

std::vector<Vec> input_rate_series(const SimulationTrace& trace) {
    const std::size_t len = trace.u.size();
    if (len == 0) return {};
    const std::size_t m = trace.u.front().size();
    std::vector<Vec> r(len, Vec(m, 0.0));
    if (len < 2) return r;
    const double dt = trace.dt();
    for (std::size_t k = 1; k < len; ++k)
        for (std::size_t j = 0; j < m; ++j) r[k][j] = (trace.u[k][j] - trace.u[k - 1][j]) / dt;
    r[0] = r[1];
    return r;
}

std::string trace_csv_header(std::size_t n, std::size_t m, std::size_t channels) {
    std::string h = "t";
    auto cols = [&h](const char* prefix, std::size_t count) {
        for (std::size_t i = 1; i <= count; ++i) h += std::string(",") + prefix + "_" + std::to_string(i);
    };
    cols("x", n);
    cols("e", n);
    cols("u", m);
    cols("udot", m);
    cols("d", channels);
    return h;
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
    const std::size_t n = trace.e.empty() ? 0 : trace.e.front().size();
    const std::size_t m = trace.u.empty() ? 0 : trace.u.front().size();
    const std::size_t c = trace.d.empty() ? 0 : trace.d.front().size();
    const auto old_prec = os.precision(17);
    os << trace_csv_header(n, m, c) << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        os << trace.t[k];
        for (const auto* series : {&trace.x, &trace.e, &trace.u, &trace.udot, &trace.d})
            for (double v : (*series)[k]) os << ',' << v;
        os << '\n';
    }
    os.precision(old_prec);
}

RealMatrix velocity_form_jacobian_fd(const PlantModel& plant, const GainPair& gains, double perturbation,
                                     double step) {
    const std::size_t n = plant.n, m = plant.m;
    gains.validate(m, n);
    if (!(perturbation > 0.0) || !(step > 0.0)) throw ParameterError("velocity_form_jacobian_fd: steps must be positive");
    const auto none = SinusoidDisturbance::none(0);
    // With bias = u_eq the equilibrium sits at e = e_eq, z = 0.
    const Loop loop{plant, gains, none, plant.equilibrium_input, nullptr};
    const Deriv deriv = [&loop](double t, const Vec& y) { return loop(t, y); };

    auto velocity_state = [&](const Vec& y) {
        const std::span<const double> e(y.data(), n), z(y.data() + n, n);
        Vec s = loop.plant_rate(0.0, e, loop.input(e, z));
        for (std::size_t i = 0; i < n; ++i) s.push_back(e[i] - plant.equilibrium_state[i]);
        return s;
    };

    RealMatrix s_mat(2 * n, 2 * n), sdot_mat(2 * n, 2 * n);
    for (std::size_t col = 0; col < 2 * n; ++col) {
        Vec y0(2 * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) y0[i] = plant.equilibrium_state[i];
        y0[col] += perturbation;
        // s at t = -2h, -h, 0, h, 2h from forward and backward RK4 flows.
        Vec fwd1 = rk4_step(deriv, 0.0, y0, step), fwd2 = rk4_step(deriv, step, fwd1, step);
        Vec bwd1 = rk4_step(deriv, 0.0, y0, -step), bwd2 = rk4_step(deriv, -step, bwd1, -step);
        const Vec sm2 = velocity_state(bwd2), sm1 = velocity_state(bwd1), s0 = velocity_state(y0),
                  sp1 = velocity_state(fwd1), sp2 = velocity_state(fwd2);
        for (std::size_t i = 0; i < 2 * n; ++i) {
            s_mat(i, col) = s0[i];
            sdot_mat(i, col) = (sm2[i] - 8.0 * sm1[i] + 8.0 * sp1[i] - sp2[i]) / (12.0 * step);
        }
    }
    return sdot_mat * inverse(s_mat);
}

} // namespace rci
