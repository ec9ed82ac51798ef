#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "rci/closedloop.hpp"
#include "rci/plants.hpp"
#include "rci/tuner.hpp"

namespace rci::cli {

enum class SweepKind { DeltaK, Disturbance };

struct SweepSpec {
    std::optional<SweepKind> kind;
    Vec epsilons{-4.0, -2.0, -1.0, 0.5, 0.8, 1.0};
    Vec l_d{0.1, 0.2, 0.3};
    Vec omega{0.1, 0.15, 0.2};
    bool include_zero_row = false; ///< add an L_d = 0 row to the disturbance sweep
};

struct DuffingSpec {
    Vec x0{1.0, 0.0};
    double l_d = 2.5;
    double omega = 1.0;
    double slack = 0.05;
    std::optional<double> l_f; ///< defaults to ||J0||_2
};

/**
 * One run, fully described by a JSON file. Sections: plant, gains,
 * disturbance, sim, tuning, sweep, duffing, output. Matrices are written as
 * {"rows": r, "cols": c, "data": [[...], ...]}.
 */
struct RunConfig {
    std::string plant_name;
    PlantModel plant;
    std::optional<AircraftParams> aircraft;

    std::optional<GainPair> gains; ///< explicit gains
    bool optimize = false;         ///< gains come from the GA instead

    SinusoidDisturbance disturbance;
    SimConfig sim;
    Vec reference;
    Vec x0;

    std::optional<TuningProblem> tuning;
    GAConfig ga;
    SweepSpec sweep;
    DuffingSpec duffing;
    std::filesystem::path output_dir = "out";
};

/// Throws ConfigError with a diagnostic on malformed or inconsistent input.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

RealMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const RealMatrix& m);

} // namespace rci::cli
