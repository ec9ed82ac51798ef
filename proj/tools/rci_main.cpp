#include <iostream>
#include <utility>

#include "CLI11.hpp"
#include "rci/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Robust-convergence indicators, gain tuning and closed-loop simulation for MIMO-PI loops"};
    app.require_subcommand(1);

    rci::cli::CommandOptions opts;
    std::string out, kind;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "GA master seed (overrides tuning.ga.seed)");
        sub->add_flag("--quiet", opts.quiet, "suppress the summary on stdout");
    };
    const std::pair<const char*, const char*> subs[] = {
        {"indicators", "R_K and I_K of the configured gains"},
        {"optimize", "GA gain search under the EVP and input constraints"},
        {"simulate", "closed-loop run with trace and metrics"},
        {"verify-duffing", "check a Duffing trajectory against its attractor envelope"},
    };
    for (const auto& [name, help] : subs) add_common(app.add_subcommand(name, help));
    auto* sweep = app.add_subcommand("sweep", "delta_k or disturbance sweep");
    add_common(sweep);
    sweep->add_option("--kind", kind, "delta_k | disturbance (overrides sweep.kind)")
        ->check(CLI::IsMember({"delta_k", "disturbance"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rci::cli::ConfigFailure;
    }

    auto* sub = app.get_subcommands().front();
    if (!out.empty()) opts.out = out;
    if (sub->count("--seed") > 0) opts.seed = seed;
    if (!kind.empty()) opts.sweep_kind = kind == "delta_k" ? rci::cli::SweepKind::DeltaK : rci::cli::SweepKind::Disturbance;
    return rci::cli::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
