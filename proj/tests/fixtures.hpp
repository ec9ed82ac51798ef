#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "rci/closedloop.hpp"
#include "rci/indicators.hpp"
#include "rci/plants.hpp"
#include "rci/spectral.hpp"

namespace fixtures {

// Published optimal gains of the guidance example.
inline rci::GainPair k_star() {
    return {rci::RealMatrix::from_rows({{1.6968, 0.5906}, {-0.5906, 1.9556}}),
            rci::RealMatrix::from_rows({{3.4869, 0.1784}, {-0.1784, 3.4869}})};
}

inline rci::GainPair shifted(const rci::GainPair& k, double eps) {
    const auto eye = rci::RealMatrix::identity(k.states());
    return {k.kp - eps * eye, k.ki - eps * eye};
}

inline rci::LinearizationPoint aircraft_lin() { return rci::aircraft_error_plant({}).linearize(); }

/// Table-1 run: disturbance on, controller starting from the recorded input.
inline rci::SimConfig aircraft_sim_config() {
    rci::SimConfig cfg;
    cfg.limits = rci::AircraftParams{}.limits();
    cfg.initial_input = rci::AircraftParams{}.initial_input();
    return cfg;
}

inline rci::SimulationTrace aircraft_run(const rci::GainPair& k, const rci::SinusoidDisturbance& d) {
    const rci::AircraftParams p;
    return rci::simulate(rci::aircraft_error_plant(p), k, d, p.reference(), p.initial_state(), aircraft_sim_config());
}

inline rci::RealMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    rci::RealMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
}

/// M - (abscissa(M) + 1) I, Hurwitz with margin 1.
inline rci::RealMatrix random_hurwitz(std::mt19937_64& rng, std::size_t n) {
    rci::RealMatrix m = random_matrix(rng, n, n);
    const double shift = rci::spectral_abscissa(m) + 1.0;
    return m - shift * rci::RealMatrix::identity(n);
}

inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// Exhaustive search for the scalar problem e' = u, closed form Lyapunov on a grid.
struct ToyOptimum {
    double r_k = -1.0, kp = 0.0, ki = 0.0;
};

inline ToyOptimum toy_grid_oracle(double lo, double hi, int points, double u_bound, double x0, double i_star,
                                  double dt0) {
    ToyOptimum best;
    for (int a_i = 0; a_i < points; ++a_i) {
        for (int b_i = 0; b_i < points; ++b_i) {
            const double a = lo + (hi - lo) * a_i / (points - 1);
            const double b = lo + (hi - lo) * b_i / (points - 1);
            if (!(a < 0.0 && b < 0.0)) continue;
            if (std::abs(a * x0 + dt0 * b * x0) > u_bound) continue;
            // Q for A = [[a, b], [1, 0]] solving A^T Q + Q A + I = 0.
            const double q = -1.0 / (2.0 * b);
            const double p = (-0.5 - q) / a;
            const double r = -b * p - a * q;
            const double tr = p + r, det = p * r - q * q;
            const double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
            const double lmax = tr / 2.0 + disc, lmin = tr / 2.0 - disc;
            if (!(lmin > 0.0)) continue;
            // Singular values of A from A^T A = [[a^2 + 1, ab], [ab, b^2]].
            const double t2 = a * a + 1.0 + b * b, d2 = b * b;
            const double smin = std::sqrt(t2 / 2.0 - std::sqrt(std::max(t2 * t2 / 4.0 - d2, 0.0)));
            const double rk = 1.0 / lmax;
            const double ik = (lmax / lmin) / (rk * smin);
            if (ik <= i_star && rk > best.r_k) best = {rk, a, b};
        }
    }
    return best;
}

} // namespace fixtures
