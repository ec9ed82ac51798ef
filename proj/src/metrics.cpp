#include "rci/metrics.hpp"

#include <cmath>

#include "rci/errors.hpp"

namespace rci {

namespace {

void check_grid(std::span<const double> series, std::span<const double> t, std::size_t min_len, const char* what) {
    if (series.size() != t.size()) throw DimensionError(std::string(what) + ": series and time grid differ in length");
    if (t.size() < min_len)
        throw DimensionError(std::string(what) + ": need at least " + std::to_string(min_len) + " samples");
}

} // namespace

double itae(std::span<const double> e, std::span<const double> t) {
    check_grid(e, t, 2, "itae");
    const double span = t.back() - t.front();
    if (!(span > 0.0)) throw ParameterError("itae: time grid must be increasing");
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k)
        acc += 0.5 * (t[k] - t[k - 1]) * (t[k] * std::abs(e[k]) + t[k - 1] * std::abs(e[k - 1]));
    return acc / span;
}

PeakOvershoot peak_and_overshoot(std::span<const double> e, std::span<const double> t) {
    check_grid(e, t, 2, "peak_and_overshoot");
    const double sign = e.front() > 0.0 ? 1.0 : (e.front() < 0.0 ? -1.0 : 0.0);
    PeakOvershoot r;
    bool crossed = false;
    if (sign != 0.0) {
        for (std::size_t k = 0; k < e.size(); ++k) {
            const double past = -e[k] * sign;
            if (past > r.max_overshoot) {
                r.max_overshoot = past;
                r.peak_time = t[k];
                crossed = true;
            }
        }
    }
    if (!crossed) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < e.size(); ++k)
            if (std::abs(e[k]) < std::abs(e[best])) best = k;
        r.peak_time = t[best];
        r.max_overshoot = 0.0;
    }
    return r;
}

SettledStats settled_stats(std::span<const double> series, std::span<const double> t) {
    check_grid(series, t, 4, "settled_stats");
    const double start = t.front() + 0.75 * (t.back() - t.front());
    double sum = 0.0;
    std::size_t count = 0;
    // Relative slack keeps the boundary sample despite grid round-off.
    const double tol = 1e-9 * (1.0 + std::abs(t.back()));
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] >= start - tol) {
            sum += series[k];
            ++count;
        }
    }
    SettledStats s;
    s.mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] >= start - tol) var += (series[k] - s.mean) * (series[k] - s.mean);
    }
    s.std = std::sqrt(var / static_cast<double>(count));
    return s;
}

Vec composite_norm(std::span<const double> e, std::span<const double> edot) {
    if (e.size() != edot.size()) throw DimensionError("composite_norm: length mismatch");
    Vec out(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) out[k] = std::hypot(e[k], edot[k]);
    return out;
}

MetricsReport compute_metrics(const SimulationTrace& trace) {
    if (trace.size() < 4) throw DimensionError("compute_metrics: trace too short");
    const std::size_t n = trace.e.front().size();
    MetricsReport r;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec e = trace.channel(trace.e, i);
        const Vec ed = trace.channel(trace.edot, i);
        r.itae.push_back(itae(e, trace.t));
        const auto po = peak_and_overshoot(e, trace.t);
        r.peak_time.push_back(po.peak_time);
        r.max_overshoot.push_back(po.max_overshoot);
        const auto st = settled_stats(e, trace.t);
        r.mean_settled.push_back(st.mean);
        r.std_settled.push_back(st.std);
        const auto cs = settled_stats(composite_norm(e, ed), trace.t);
        r.composite_mean_settled.push_back(cs.mean);
        r.composite_std_settled.push_back(cs.std);
    }
    return r;
}

} // namespace rci
