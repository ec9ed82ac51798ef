#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rci/cli/config.hpp"

namespace rci::cli {

enum ExitCode : int { Success = 0, ConfigFailure = 1, AnalysisFailure = 2, NumericFailure = 3 };

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out; ///< overrides output.dir
    std::optional<std::uint64_t> seed;        ///< overrides tuning.ga.seed
    std::optional<SweepKind> sweep_kind;      ///< overrides sweep.kind
    bool quiet = false;
};

// Each command writes its artifacts under the output directory (created if
// absent) and returns an ExitCode. Summaries go to `log` unless quiet.

int cmd_indicators(const RunConfig& cfg, std::ostream& log);
int cmd_optimize(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, SweepKind kind, std::ostream& log);
int cmd_verify_duffing(const RunConfig& cfg, std::ostream& log);

/// Loads the config, applies overrides, dispatches and maps exceptions to exit codes.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& log, std::ostream& err);

} // namespace rci::cli
