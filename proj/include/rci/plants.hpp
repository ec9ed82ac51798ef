#pragma once

#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rci/indicators.hpp"
#include "rci/matrix.hpp"

namespace rci {

/**
 * Regulated dynamics s' = f(s, u) + B_d d(t) with f(s_eq, u_eq) = 0.
 *
 * For a tracking problem the state s is the tracking error (reference minus
 * physical state); the closed-loop simulator keeps that convention. The
 * Jacobian callbacks are analytic; fd_jacobians provides the numerical check.
 */
struct PlantModel {
    using Dynamics = std::function<Vec(std::span<const double> s, std::span<const double> u)>;
    using Jacobian = std::function<RealMatrix(std::span<const double> s, std::span<const double> u)>;

    std::string name;
    std::size_t n = 0; ///< state dimension
    std::size_t m = 0; ///< input dimension (0 for autonomous plants)
    Dynamics dynamics;
    Jacobian jac_x; ///< n x n
    Jacobian jac_u; ///< n x m
    Vec equilibrium_state;
    Vec equilibrium_input;
    RealMatrix disturbance_input; ///< B_d, n x (disturbance channels)

    [[nodiscard]] LinearizationPoint linearize() const;
};

/// Box constraints on the input and its rate, per channel.
struct InputLimits {
    Vec u_min, u_max;
    Vec udot_min, udot_max;

    void validate(std::size_t m) const;
};

enum class Phase { Sine, Cosine };

/// Channel i: amplitude[i] * sin(omega[i] t) or amplitude[i] * cos(omega[i] t).
struct SinusoidDisturbance {
    Vec amplitude;
    Vec omega;
    std::vector<Phase> phase;

    [[nodiscard]] std::size_t channels() const noexcept { return amplitude.size(); }
    void validate() const;

    static SinusoidDisturbance none(std::size_t channels);
};

Vec disturbance_eval(const SinusoidDisturbance& d, double t);

/// Fixed-wing guidance scenario. Defaults are the reference scenario values.
struct AircraftParams {
    double g = 9.81;
    double v = 25.0;
    double gamma_c = std::numbers::pi / 12.0;
    double chi_c = 0.0;
    double chi0 = std::numbers::pi / 3.0;
    double gamma0 = std::numbers::pi / 4.0;
    double phi0 = std::numbers::pi / 3.0;
    double nz0 = 1.0;
    double phi_min = -std::numbers::pi / 4.0, phi_max = std::numbers::pi / 4.0;
    double phi_rate_min = -std::numbers::pi / 6.0, phi_rate_max = std::numbers::pi / 6.0;
    double nz_min = -2.1, nz_max = 2.1;
    double nz_rate_min = -1.0, nz_rate_max = 1.0;
    double l_d_chi = 0.1, l_d_gamma = 0.1;
    double omega_chi = 0.15, omega_gamma = 0.15;

    void validate() const;

    [[nodiscard]] Vec reference() const { return {chi_c, gamma_c}; }
    [[nodiscard]] Vec initial_state() const { return {chi0, gamma0}; }
    [[nodiscard]] Vec initial_input() const { return {phi0, nz0}; }
    /// reference - initial state
    [[nodiscard]] Vec initial_error() const { return {chi_c - chi0, gamma_c - gamma0}; }
    [[nodiscard]] InputLimits limits() const;
    /// d_chi = L sin(w t), d_gamma = L cos(w t)
    [[nodiscard]] SinusoidDisturbance disturbance() const;
};

/// x1' = x2, x2' = -delta x2 - alpha x1 - beta x1^3 (+ d on channel 2).
PlantModel duffing(double alpha, double beta, double delta);

/**
 * Tracking-error dynamics of the fixed-wing kinematic model, state
 * e = (e_chi, e_gamma), input u = (phi, n_z):
 *
 *   e_chi'   = -(g/V) tan(phi)
 *   e_gamma' = -(g/V) (n_z cos(phi) - cos(gamma_c - e_gamma))
 *
 * The disturbance acting on (chi, gamma) enters the error with a minus sign.
 * Evaluating at |phi| >= pi/2 throws DomainError.
 */
PlantModel aircraft_error_plant(const AircraftParams& params);

/// s' = A s + B u, equilibrium at the origin, B_d = I.
PlantModel linear_plant(const RealMatrix& a, const RealMatrix& b);

/// Central-difference Jacobians (d f/d s, d f/d u) at (s, u).
std::pair<RealMatrix, RealMatrix> fd_jacobians(const PlantModel& plant, std::span<const double> s,
                                               std::span<const double> u, double h);

} // namespace rci
