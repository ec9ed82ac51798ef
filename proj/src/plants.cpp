#include "rci/plants.hpp"

#include <cmath>

#include "rci/errors.hpp"

namespace rci {

namespace {

void require_size(std::span<const double> v, std::size_t n, const char* what) {
    if (v.size() != n) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                             std::to_string(v.size()));
    }
}

void require_box(std::span<const double> lo, std::span<const double> hi, std::size_t m, const char* what) {
    require_size(lo, m, what);
    require_size(hi, m, what);
    for (std::size_t i = 0; i < m; ++i)
        if (!(lo[i] < hi[i])) throw ParameterError(std::string(what) + ": empty box on channel " + std::to_string(i));
}

} // namespace

LinearizationPoint PlantModel::linearize() const {
    return {jac_x(equilibrium_state, equilibrium_input), jac_u(equilibrium_state, equilibrium_input)};
}

void InputLimits::validate(std::size_t m) const {
    require_box(u_min, u_max, m, "InputLimits(u)");
    require_box(udot_min, udot_max, m, "InputLimits(udot)");
}

void SinusoidDisturbance::validate() const {
    const std::size_t k = amplitude.size();
    if (omega.size() != k || phase.size() != k) throw DimensionError("SinusoidDisturbance: channel count mismatch");
    for (std::size_t i = 0; i < k; ++i) {
        if (!(std::isfinite(amplitude[i]) && amplitude[i] >= 0.0))
            throw ParameterError("SinusoidDisturbance: amplitude must be finite and >= 0");
        if (!(std::isfinite(omega[i]) && omega[i] >= 0.0))
            throw ParameterError("SinusoidDisturbance: frequency must be finite and >= 0");
    }
}

SinusoidDisturbance SinusoidDisturbance::none(std::size_t channels) {
    return {Vec(channels, 0.0), Vec(channels, 0.0), std::vector<Phase>(channels, Phase::Sine)};
}

Vec disturbance_eval(const SinusoidDisturbance& d, double t) {
    Vec out(d.channels());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double arg = d.omega[i] * t;
        out[i] = d.amplitude[i] * (d.phase[i] == Phase::Sine ? std::sin(arg) : std::cos(arg));
    }
    return out;
}

void AircraftParams::validate() const {
    if (!(v > 0.0)) throw ParameterError("AircraftParams: V must be positive");
    if (!(phi_min < phi_max) || !(nz_min < nz_max) || !(phi_rate_min < phi_rate_max) || !(nz_rate_min < nz_rate_max))
        throw ParameterError("AircraftParams: empty input box");
}

InputLimits AircraftParams::limits() const {
    return {{phi_min, nz_min}, {phi_max, nz_max}, {phi_rate_min, nz_rate_min}, {phi_rate_max, nz_rate_max}};
}

SinusoidDisturbance AircraftParams::disturbance() const {
    return {{l_d_chi, l_d_gamma}, {omega_chi, omega_gamma}, {Phase::Sine, Phase::Cosine}};
}

PlantModel duffing(double alpha, double beta, double delta) {
    if (!(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(delta)))
        throw ParameterError("duffing: parameters must be finite");
    PlantModel p;
    p.name = "duffing";
    p.n = 2;
    p.m = 0;
    p.dynamics = [=](std::span<const double> x, std::span<const double>) {
        require_size(x, 2, "duffing state");
        return Vec{x[1], -delta * x[1] - alpha * x[0] - beta * x[0] * x[0] * x[0]};
    };
    p.jac_x = [=](std::span<const double> x, std::span<const double>) {
        require_size(x, 2, "duffing state");
        return RealMatrix::from_rows({{0.0, 1.0}, {-alpha - 3.0 * beta * x[0] * x[0], -delta}});
    };
    p.jac_u = [](std::span<const double>, std::span<const double>) { return RealMatrix(2, 0); };
    p.equilibrium_state = {0.0, 0.0};
    p.equilibrium_input = {};
    p.disturbance_input = RealMatrix::from_rows({{0.0}, {1.0}});
    return p;
}

PlantModel aircraft_error_plant(const AircraftParams& params) {
    params.validate();
    const double gv = params.g / params.v;
    const double gamma_c = params.gamma_c;
    auto check_phi = [](double phi) {
        if (!std::isfinite(phi) || std::abs(phi) >= std::numbers::pi / 2.0)
            throw DomainError("aircraft: roll angle |phi| >= pi/2 (tan/sec singularity), phi = " + std::to_string(phi));
    };
    PlantModel p;
    p.name = "aircraft";
    p.n = 2;
    p.m = 2;
    p.dynamics = [=](std::span<const double> e, std::span<const double> u) {
        require_size(e, 2, "aircraft state");
        require_size(u, 2, "aircraft input");
        check_phi(u[0]);
        return Vec{-gv * std::tan(u[0]), -gv * (u[1] * std::cos(u[0]) - std::cos(gamma_c - e[1]))};
    };
    p.jac_x = [=](std::span<const double> e, std::span<const double>) {
        require_size(e, 2, "aircraft state");
        return RealMatrix::from_rows({{0.0, 0.0}, {0.0, gv * std::sin(gamma_c - e[1])}});
    };
    p.jac_u = [=](std::span<const double>, std::span<const double> u) {
        require_size(u, 2, "aircraft input");
        check_phi(u[0]);
        const double c = std::cos(u[0]);
        return RealMatrix::from_rows({{-gv / (c * c), 0.0}, {gv * u[1] * std::sin(u[0]), -gv * c}});
    };
    p.equilibrium_state = {0.0, 0.0};
    // n_z = cos(gamma_c) zeroes the climb-angle error rate at phi = 0.
    p.equilibrium_input = {0.0, std::cos(gamma_c)};
    p.disturbance_input = -1.0 * RealMatrix::identity(2);
    return p;
}

PlantModel linear_plant(const RealMatrix& a, const RealMatrix& b) {
    if (!a.is_square()) throw DimensionError("linear_plant: A must be square");
    if (b.rows() != a.rows()) throw DimensionError("linear_plant: B must have n rows");
    PlantModel p;
    p.name = "linear";
    p.n = a.rows();
    p.m = b.cols();
    p.dynamics = [a, b](std::span<const double> s, std::span<const double> u) {
        Vec r = a * s;
        if (b.cols() > 0) {
            const Vec bu = b * u;
            for (std::size_t i = 0; i < r.size(); ++i) r[i] += bu[i];
        }
        return r;
    };
    p.jac_x = [a](std::span<const double>, std::span<const double>) { return a; };
    p.jac_u = [b](std::span<const double>, std::span<const double>) { return b; };
    p.equilibrium_state = Vec(p.n, 0.0);
    p.equilibrium_input = Vec(p.m, 0.0);
    p.disturbance_input = RealMatrix::identity(p.n);
    return p;
}

std::pair<RealMatrix, RealMatrix> fd_jacobians(const PlantModel& plant, std::span<const double> s,
                                               std::span<const double> u, double h) {
    if (!(h > 0.0)) throw ParameterError("fd_jacobians: step must be positive");
    require_size(s, plant.n, "fd_jacobians state");
    require_size(u, plant.m, "fd_jacobians input");
    RealMatrix jx(plant.n, plant.n), ju(plant.n, plant.m);
    Vec sp(s.begin(), s.end()), up(u.begin(), u.end());
    for (std::size_t j = 0; j < plant.n; ++j) {
        const double orig = sp[j];
        sp[j] = orig + h;
        const Vec fp = plant.dynamics(sp, up);
        sp[j] = orig - h;
        const Vec fm = plant.dynamics(sp, up);
        sp[j] = orig;
        for (std::size_t i = 0; i < plant.n; ++i) jx(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    for (std::size_t j = 0; j < plant.m; ++j) {
        const double orig = up[j];
        up[j] = orig + h;
        const Vec fp = plant.dynamics(sp, up);
        up[j] = orig - h;
        const Vec fm = plant.dynamics(sp, up);
        up[j] = orig;
        for (std::size_t i = 0; i < plant.n; ++i) ju(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return {std::move(jx), std::move(ju)};
}

} // namespace rci
