#pragma once

#include <utility>
#include <vector>

#include "rci/closedloop.hpp"
#include "rci/matrix.hpp"

namespace rci {

/// (1/T) * integral of t |e(t)| over the grid, trapezoid rule, T = t.back() - t.front().
double itae(std::span<const double> e, std::span<const double> t);

struct PeakOvershoot {
    double peak_time = 0.0;
    double max_overshoot = 0.0;
};

/**
 * Overshoot of a channel decaying toward 0: max over t of -e(t) sgn(e(t0)),
 * floored at 0. Without a zero crossing the overshoot is 0 and the peak
 * time is the time of min |e|.
 */
PeakOvershoot peak_and_overshoot(std::span<const double> e, std::span<const double> t);

struct SettledStats {
    double mean = 0.0;
    double std = 0.0; ///< population standard deviation
};

/// Statistics over samples with t >= t0 + 0.75 (t_end - t0).
SettledStats settled_stats(std::span<const double> series, std::span<const double> t);

/// sqrt(e^2 + e'^2) pointwise.
Vec composite_norm(std::span<const double> e, std::span<const double> edot);

struct MetricsReport {
    Vec itae;
    Vec peak_time;
    Vec max_overshoot;
    Vec mean_settled;
    Vec std_settled;
    Vec composite_mean_settled;
    Vec composite_std_settled;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Metrics of every error channel of the trace.
MetricsReport compute_metrics(const SimulationTrace& trace);

} // namespace rci
