#include "rci/indicators.hpp"

#include <cmath>

#include "rci/errors.hpp"

namespace rci {

void GainPair::validate() const {
    if (kp.empty() || ki.empty()) throw DimensionError("GainPair: empty gain matrix");
    validate(kp.rows(), kp.cols());
}

void GainPair::validate(std::size_t m, std::size_t n) const {
    if (kp.rows() != m || kp.cols() != n || ki.rows() != m || ki.cols() != n) {
        throw DimensionError("GainPair: expected " + std::to_string(m) + "x" + std::to_string(n) +
                             " gains, got K_P " + std::to_string(kp.rows()) + "x" + std::to_string(kp.cols()) +
                             " and K_I " + std::to_string(ki.rows()) + "x" + std::to_string(ki.cols()));
    }
    if (!kp.all_finite() || !ki.all_finite()) throw NumericError("GainPair: non-finite gain");
}

RealMatrix GainPair::stacked() const { return hstack(kp, ki); }

void LinearizationPoint::validate() const {
    if (!jac_x.is_square()) throw DimensionError("LinearizationPoint: jac_x must be square");
    if (jac_u.rows() != jac_x.rows()) throw DimensionError("LinearizationPoint: jac_u row count must equal n");
    if (!jac_x.all_finite() || !jac_u.all_finite()) throw NumericError("LinearizationPoint: non-finite Jacobian");
}

VelocityFormDecomposition assemble_d1_d2(const LinearizationPoint& lin) {
    lin.validate();
    const std::size_t n = lin.states();
    const std::size_t m = lin.inputs();
    RealMatrix d1(2 * n, 2 * n);
    d1.set_block(0, 0, lin.jac_x);
    d1.set_block(n, 0, RealMatrix::identity(n));
    RealMatrix d2(2 * n, m);
    d2.set_block(0, 0, lin.jac_u);
    return {std::move(d1), std::move(d2)};
}

RealMatrix assemble_ak0(const LinearizationPoint& lin, const GainPair& gains) {
    lin.validate();
    const std::size_t n = lin.states();
    gains.validate(lin.inputs(), n);
    RealMatrix a(2 * n, 2 * n);
    a.set_block(0, 0, lin.jac_x + lin.jac_u * gains.kp);
    a.set_block(0, n, lin.jac_u * gains.ki);
    a.set_block(n, 0, RealMatrix::identity(n));
    return a;
}

EvpSolution solve_evp(const RealMatrix& a_k0) {
    if (!a_k0.is_square()) throw DimensionError("solve_evp: A_K(0) must be square");
    if (!is_hurwitz(a_k0, 0.0)) throw InfeasibleEvpError("solve_evp: A_K(0) is not Hurwitz; the EVP is infeasible");
    // Every feasible Q dominates the Lyapunov-equality solution in the Loewner
    // order, so the equality solution minimizes lambda_max.
    const SymmetricMatrix eye(RealMatrix::identity(a_k0.rows()));
    SymmetricMatrix q = solve_lyapunov(a_k0, eye);
    const double gamma = lambda_max(q);
    return {std::move(q), gamma};
}

IndicatorReport compute_indicators(const LinearizationPoint& lin, const GainPair& gains) {
    IndicatorReport rep;
    rep.a_k0 = assemble_ak0(lin, gains);
    rep.eig_real_parts = eig_real_parts(rep.a_k0);
    rep.hurwitz = rep.eig_real_parts.front() < 0.0;
    rep.lf_plant = spectral_norm(lin.jac_x);
    rep.lf_ak0 = spectral_norm(rep.a_k0);
    if (!rep.hurwitz) return rep;

    auto evp = solve_evp(rep.a_k0);
    CertifiedIndicators c;
    c.gamma_star = evp.gamma_star;
    c.r_k = 1.0 / evp.gamma_star;
    c.tau_qstar = condition_number(evp.q_star);
    c.sigma_min_ak = min_singular_value(rep.a_k0);
    c.i_k = c.tau_qstar / (c.r_k * c.sigma_min_ak);
    c.q_star = std::move(evp.q_star);
    rep.certified = std::move(c);
    return rep;
}

double attractor_radius(double l_d, double l_f, double i_k) {
    if (!(std::isfinite(l_d) && std::isfinite(l_f) && std::isfinite(i_k)) || l_d < 0.0 || l_f < 0.0 || i_k < 0.0)
        throw ParameterError("attractor_radius: arguments must be finite and nonnegative");
    return 2.0 * l_d * l_f * i_k;
}

} // namespace rci
