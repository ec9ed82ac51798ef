#include "rci/attractor.hpp"

#include <algorithm>
#include <cmath>

#include "rci/errors.hpp"

namespace rci {

void EnvelopeParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("envelope: alpha must be positive");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("envelope: beta must be finite and >= 0");
    if (!(v0_sqrt >= 0.0) || !std::isfinite(v0_sqrt)) throw ParameterError("envelope: v0_sqrt must be finite and >= 0");
}

double envelope(const EnvelopeParams& params, double t) {
    params.validate();
    if (!(t >= 0.0)) throw ParameterError("envelope: t must be >= 0");
    const double floor = params.beta / params.alpha;
    return floor + (params.v0_sqrt - floor) * std::exp(-params.alpha * t / 2.0);
}

Theorem1Certificate theorem1_certificate(const RealMatrix& j0, double lf, double ld) {
    if (!(lf >= 0.0) || !(ld >= 0.0) || !std::isfinite(lf) || !std::isfinite(ld))
        throw ParameterError("theorem1_certificate: L_f and L_d must be finite and >= 0");
    if (!is_hurwitz(j0, 0.0)) throw StabilityError("theorem1_certificate: J0 is not Hurwitz");
    Theorem1Certificate c;
    c.p = solve_lyapunov(j0, SymmetricMatrix(RealMatrix::identity(j0.rows())));
    c.epsilon = 1.0;
    c.lf = lf;
    c.ld = ld;
    const double lmax = lambda_max(c.p), lmin = lambda_min(c.p);
    c.rate = c.epsilon / lmax;
    c.radius = 2.0 * ld * lf * lmax * lmax / (c.epsilon * lmin);
    c.beta = 2.0 * ld * lf * lmax / std::sqrt(lmin);
    return c;
}

TrajectoryVerdict verify_trajectory(std::span<const double> t, const std::vector<Vec>& f_values,
                                    const Theorem1Certificate& cert, double slack) {
    if (t.size() != f_values.size()) throw DimensionError("verify_trajectory: time grid and f series differ in length");
    if (t.empty()) throw DimensionError("verify_trajectory: empty trajectory");
    if (!(slack >= 0.0)) throw ParameterError("verify_trajectory: slack must be >= 0");
    const std::size_t n = cert.p.dim();
    for (const auto& f : f_values)
        if (f.size() != n) throw DimensionError("verify_trajectory: f(x) dimension differs from P");

    const Vec pf = cert.p.matrix() * f_values.front();
    double v0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) v0 += f_values.front()[i] * pf[i];

    TrajectoryVerdict v;
    v.envelope = {cert.rate, cert.beta, std::sqrt(std::max(v0, 0.0))};
    const double sqrt_lmin = std::sqrt(lambda_min(cert.p));
    const double t0 = t.front();
    const double quarter_start = t0 + 0.75 * (t.back() - t0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double fn = norm2(f_values[k]);
        const double lhs = fn * sqrt_lmin;
        const double env = envelope(v.envelope, t[k] - t0);
        const double bound = env * (1.0 + slack);
        if (env > 0.0) v.max_ratio = std::max(v.max_ratio, lhs / env);
        // Absolute floor absorbs round-off when the envelope itself is ~0.
        if (lhs > bound + 1e-12 && v.dominated) {
            v.dominated = false;
            v.first_violation_time = t[k];
        }
        if (t[k] >= quarter_start) v.final_quarter_max = std::max(v.final_quarter_max, fn);
    }
    return v;
}

TrajectoryVerdict verify_trajectory(const SimulationTrace& trace, const PlantModel& plant,
                                    const Theorem1Certificate& cert, double slack) {
    std::vector<Vec> f;
    f.reserve(trace.size());
    const Vec u(plant.m, 0.0);
    for (const auto& x : trace.e) f.push_back(plant.dynamics(x, u));
    return verify_trajectory(trace.t, f, cert, slack);
}

} // namespace rci
