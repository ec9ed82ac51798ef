#pragma once

#include <optional>
#include <vector>

#include "rci/closedloop.hpp"
#include "rci/matrix.hpp"
#include "rci/plants.hpp"
#include "rci/spectral.hpp"

namespace rci {

/// V^(1/2)(t) <= beta/alpha + (v0_sqrt - beta/alpha) exp(-alpha t / 2).
struct EnvelopeParams {
    double alpha = 1.0;
    double beta = 0.0;
    double v0_sqrt = 0.0;

    void validate() const;
};

double envelope(const EnvelopeParams& params, double t);

/**
 * Attractor certificate for x' = f(x) + d(t) at the origin, with P solving
 * J0^T P + P J0 + I = 0 (so epsilon = 1).
 *
 *   rate   = epsilon / lambda_max(P)
 *   radius = 2 L_d L_f lambda_max(P)^2 / (epsilon lambda_min(P))
 *   beta   = 2 L_d L_f lambda_max(P) / sqrt(lambda_min(P))   (envelope drive)
 *
 * The envelope decays as exp(-rate t / 2); "rate" is the alpha of EnvelopeParams.
 */
struct Theorem1Certificate {
    SymmetricMatrix p;
    double epsilon = 1.0;
    double lf = 0.0;
    double ld = 0.0;
    double rate = 0.0;
    double radius = 0.0;
    double beta = 0.0;

    [[nodiscard]] double lambda_max_p() const { return lambda_max(p); }
    [[nodiscard]] double lambda_min_p() const { return lambda_min(p); }
};

/// Throws StabilityError if j0 is not Hurwitz, ParameterError on negative L_f / L_d.
Theorem1Certificate theorem1_certificate(const RealMatrix& j0, double lf, double ld);

struct TrajectoryVerdict {
    bool dominated = true;
    std::optional<double> first_violation_time;
    double final_quarter_max = 0.0;
    double max_ratio = 0.0; ///< max over samples of lhs / envelope
    EnvelopeParams envelope;
};

/**
 * Checks ||f(x(t))|| sqrt(lambda_min(P)) <= envelope(t) (1 + slack) at every
 * sample. f_values[k] is the vector field at sample k; v0 is taken from
 * f_values[0] as sqrt(f^T P f).
 */
TrajectoryVerdict verify_trajectory(std::span<const double> t, const std::vector<Vec>& f_values,
                                    const Theorem1Certificate& cert, double slack = 0.05);

/// Evaluates the plant's undisturbed vector field along the trace's states.
TrajectoryVerdict verify_trajectory(const SimulationTrace& trace, const PlantModel& plant,
                                    const Theorem1Certificate& cert, double slack = 0.05);

} // namespace rci
