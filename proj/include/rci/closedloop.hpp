#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rci/indicators.hpp"
#include "rci/matrix.hpp"
#include "rci/plants.hpp"

namespace rci {

/// Discrete PI controller: u = bias + K_P e + K_I * accumulator.
struct PIState {
    GainPair gains;
    Vec integral_accumulator; ///< n
    Vec last_output;          ///< m
    Vec bias;                 ///< m, zero for the plain position form

    static PIState initial(const GainPair& gains);
};

/// Rectangle-rule update: accumulator += error * dt, then evaluate the law.
std::pair<PIState, Vec> pi_step(PIState state, std::span<const double> error, double dt);

struct SimConfig {
    double t_end = 20.0;
    double step = 0.01;
    std::size_t stride = 10;
    bool clip_inputs = false;
    std::optional<InputLimits> limits;
    /**
     * Input applied at t = 0. When set, the controller bias is chosen as
     * u0 - K_P e(0) so the loop starts from the actuator's current command
     * instead of jumping to K_P e(0).
     */
    std::optional<Vec> initial_input;

    void validate() const;
};

enum class ViolationKind { Magnitude, Rate };

struct ConstraintViolation {
    double t = 0.0;
    std::size_t channel = 0;
    ViolationKind kind = ViolationKind::Magnitude;
    double value = 0.0;
};

struct SimulationTrace {
    std::vector<double> t;
    std::vector<Vec> x;    ///< reference - e
    std::vector<Vec> e;    ///< plant (error) state
    std::vector<Vec> edot; ///< f(e, u) + B_d d at the sample
    std::vector<Vec> u;
    std::vector<Vec> udot; ///< first differences over the output grid
    std::vector<Vec> d;    ///< raw disturbance channels
    std::vector<ConstraintViolation> violations;
    bool truncated = false;
    double truncation_time = 0.0;
    std::string error;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] double dt() const;
    [[nodiscard]] Vec channel(const std::vector<Vec>& series, std::size_t i) const;
};

/**
 * Fixed-step RK4 on the augmented state (e, z), z' = e, with e the plant state
 * and e(0) = reference - x0. The disturbance is evaluated at the stage times.
 * A plant DomainError or a non-finite state truncates the trace.
 */
SimulationTrace simulate(const PlantModel& plant, const GainPair& gains, const SinusoidDisturbance& disturbance,
                         std::span<const double> reference, std::span<const double> x0, const SimConfig& cfg);

/// Open-loop integration of an autonomous plant (m = 0) from s0.
SimulationTrace simulate_autonomous(const PlantModel& plant, const SinusoidDisturbance& disturbance,
                                    std::span<const double> s0, const SimConfig& cfg);

/// u'[k] = (u[k] - u[k-1]) / dt, u'[0] = u'[1].
std::vector<Vec> input_rate_series(const SimulationTrace& trace);

/// Columns t, x_*, e_*, u_*, udot_*, d_*.
void write_trace_csv(std::ostream& os, const SimulationTrace& trace);
std::string trace_csv_header(std::size_t n, std::size_t m, std::size_t channels);

/**
 * Jacobian of the closed loop in velocity coordinates s = (e', e) at the
 * equilibrium, measured from simulated trajectories only: 2n flows started
 * from small perturbations of (e, z) are integrated around t = 0, s and s'
 * are read off by time differencing, and A = S' S^-1.
 */
RealMatrix velocity_form_jacobian_fd(const PlantModel& plant, const GainPair& gains, double perturbation = 1e-5,
                                     double step = 1e-4);

} // namespace rci
