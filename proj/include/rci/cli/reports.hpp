#pragma once

#include "json.hpp"
#include "rci/attractor.hpp"
#include "rci/indicators.hpp"
#include "rci/metrics.hpp"
#include "rci/tuner.hpp"

namespace rci::cli {

// JSON forms of the reports written by the commands. Every *_from_json
// inverts the matching *_to_json exactly.

nlohmann::json indicator_report_to_json(const IndicatorReport& r);
IndicatorReport indicator_report_from_json(const nlohmann::json& j);

nlohmann::json gains_to_json(const GainPair& g);
GainPair gains_from_json(const nlohmann::json& j);

nlohmann::json tuning_result_to_json(const TuningResult& r);
TuningResult tuning_result_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const MetricsReport& r);
MetricsReport metrics_from_json(const nlohmann::json& j);

struct DuffingVerification {
    TrajectoryVerdict verdict;
    double rate = 0.0;
    double radius = 0.0;
    double beta = 0.0;
    double lf = 0.0;
    double ld = 0.0;
    double slack = 0.0;
};

nlohmann::json duffing_verification_to_json(const DuffingVerification& v);
DuffingVerification duffing_verification_from_json(const nlohmann::json& j);

} // namespace rci::cli
