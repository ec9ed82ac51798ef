#pragma once

#include <optional>
#include <vector>

#include "rci/matrix.hpp"
#include "rci/spectral.hpp"

/**
 * @file indicators.hpp
 * Robust-convergence indicators of a MIMO-PI loop.
 *
 * For a plant linearized at the origin as (jac_x, jac_u) and a PI law
 * u = K_P x + K_I * integral(x), the closed loop written in velocity
 * coordinates s = (x', x) has Jacobian
 *
 *     A_K(0) = [ jac_x + jac_u K_P   jac_u K_I ]
 *              [ I_n                 0         ]
 *
 * The indicators are built from Q*, the minimal-lambda_max solution of
 * A^T Q + Q A + I <= 0, which is the Lyapunov equality solution:
 *
 *     R_K = 1 / lambda_max(Q*)
 *     I_K = tau(Q*) / (R_K sigma_min(A_K(0)))
 */

namespace rci {

/// PI gain matrices, each m x n (inputs x states).
struct GainPair {
    RealMatrix kp;
    RealMatrix ki;

    [[nodiscard]] std::size_t inputs() const noexcept { return kp.rows(); }
    [[nodiscard]] std::size_t states() const noexcept { return kp.cols(); }

    /// Throws DimensionError / NumericError if the pair is malformed.
    void validate() const;
    /// Throws DimensionError unless both matrices are m x n.
    void validate(std::size_t m, std::size_t n) const;

    /// K = [K_P | K_I], m x 2n.
    [[nodiscard]] RealMatrix stacked() const;

    friend bool operator==(const GainPair&, const GainPair&) = default;
};

/// Jacobians of the plant at the origin.
struct LinearizationPoint {
    RealMatrix jac_x; ///< n x n
    RealMatrix jac_u; ///< n x m

    [[nodiscard]] std::size_t states() const noexcept { return jac_x.rows(); }
    [[nodiscard]] std::size_t inputs() const noexcept { return jac_u.cols(); }
    void validate() const;
};

/// A_K(0) = D1 + D2 [K_P | K_I].
struct VelocityFormDecomposition {
    RealMatrix d1; ///< 2n x 2n
    RealMatrix d2; ///< 2n x m
};

struct EvpSolution {
    SymmetricMatrix q_star;
    double gamma_star = 0.0; ///< lambda_max(q_star)
};

/// Quantities defined only when A_K(0) is Hurwitz.
struct CertifiedIndicators {
    SymmetricMatrix q_star;
    double gamma_star = 0.0;
    double r_k = 0.0;
    double i_k = 0.0;
    double sigma_min_ak = 0.0;
    double tau_qstar = 0.0;
};

struct IndicatorReport {
    RealMatrix a_k0;
    std::vector<double> eig_real_parts; ///< descending
    bool hurwitz = false;
    std::optional<CertifiedIndicators> certified; ///< present iff hurwitz
    double lf_plant = 0.0; ///< ||jac_x||_2, candidate L_f for the attractor radius
    double lf_ak0 = 0.0;   ///< ||A_K(0)||_2, the other candidate
};

VelocityFormDecomposition assemble_d1_d2(const LinearizationPoint& lin);

RealMatrix assemble_ak0(const LinearizationPoint& lin, const GainPair& gains);

/// Throws InfeasibleEvpError when a_k0 is not Hurwitz.
EvpSolution solve_evp(const RealMatrix& a_k0);

/// Non-Hurwitz gains yield hurwitz == false and no certified block.
IndicatorReport compute_indicators(const LinearizationPoint& lin, const GainPair& gains);

/// Radius 2 L_d L_f I_K of the ball the velocity-form state settles into.
double attractor_radius(double l_d, double l_f, double i_k);

} // namespace rci
