#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rci/cli/commands.hpp"
#include "rci/cli/config.hpp"
#include "rci/cli/reports.hpp"
#include "rci/errors.hpp"

using namespace rci;
using namespace rci::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path config_dir = RCI_CONFIG_DIR;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rci_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& cmd, const fs::path& config, const fs::path& out, std::optional<SweepKind> kind = {}) {
    CommandOptions o;
    o.config = config;
    o.out = out;
    o.quiet = true;
    o.sweep_kind = kind;
    std::ostringstream log, err;
    return run_command(cmd, o, log, err);
}

fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = fs::temp_directory_path() / ("rci_cli_test_" + name + ".json");
    std::ofstream(p) << j.dump();
    return p;
}

json kstar_gains() {
    return {{"kp", {{"rows", 2}, {"cols", 2}, {"data", {{1.6968, 0.5906}, {-0.5906, 1.9556}}}}},
            {"ki", {{"rows", 2}, {"cols", 2}, {"data", {{3.4869, 0.1784}, {-0.1784, 3.4869}}}}}};
}

} // namespace

TEST_CASE("indicators command") {
    const auto out = scratch("indicators");
    CHECK(run("indicators", config_dir / "aircraft.json", out) == Success);
    const json j = json::parse(slurp(out / "indicators.json"));
    CHECK(j.at("hurwitz").get<bool>());
    CHECK(j.at("r_k").get<double>() == doctest::Approx(0.459931).epsilon(1e-5));

    const auto rep = indicator_report_from_json(j);
    CHECK(indicator_report_to_json(rep) == j);
}

TEST_CASE("zero gains exit with an analysis failure") {
    json cfg = {{"plant", {{"name", "aircraft"}}},
                {"gains",
                 {{"kp", {{"rows", 2}, {"cols", 2}, {"data", {{0, 0}, {0, 0}}}}},
                  {"ki", {{"rows", 2}, {"cols", 2}, {"data", {{0, 0}, {0, 0}}}}}}}};
    const auto out = scratch("zero");
    CHECK(run("indicators", write_config("zero", cfg), out) == AnalysisFailure);
    const json j = json::parse(slurp(out / "indicators.json"));
    CHECK_FALSE(j.at("hurwitz").get<bool>());
    CHECK_FALSE(j.contains("r_k"));
}

TEST_CASE("malformed configs exit with a config error") {
    const auto out = scratch("bad");
    const fs::path broken = fs::temp_directory_path() / "rci_cli_test_broken.json";
    std::ofstream(broken) << "{ \"plant\": ";
    CHECK(run("indicators", broken, out) == ConfigFailure);
    CHECK(run("indicators", write_config("empty_plant", {{"plant", json::object()}}), out) == ConfigFailure);
    CHECK(run("indicators", write_config("unknown_plant", {{"plant", {{"name", "rocket"}}}}), out) == ConfigFailure);
    CHECK(run("indicators", write_config("typo", {{"plant", {{"name", "aircraft"}}}, {"gainz", 1}}), out) ==
          ConfigFailure);
    json both = {{"plant", {{"name", "aircraft"}}}, {"gains", kstar_gains()}};
    both["gains"]["optimize"] = true;
    CHECK(run("indicators", write_config("both", both), out) == ConfigFailure);
    json bad_dims = {{"plant", {{"name", "aircraft"}}},
                     {"gains",
                      {{"kp", {{"rows", 2}, {"cols", 2}, {"data", {{1, 2}}}}},
                       {"ki", {{"rows", 2}, {"cols", 2}, {"data", {{1, 2}, {3, 4}}}}}}}};
    CHECK(run("indicators", write_config("dims", bad_dims), out) == ConfigFailure);
    CHECK(run("sweep", config_dir / "aircraft.json", out) == ConfigFailure);
}

TEST_CASE("simulate command writes the trace contract") {
    const auto out = scratch("simulate");
    CHECK(run("simulate", config_dir / "aircraft.json", out) == Success);
    const std::string csv = slurp(out / "trace.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "t,x_1,x_2,e_1,e_2,u_1,u_2,udot_1,udot_2,d_1,d_2");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 202);
    const json j = json::parse(slurp(out / "metrics.json"));
    const auto m = metrics_from_json(j.at("metrics"));
    CHECK(metrics_to_json(m) == j.at("metrics"));
    CHECK(m.max_overshoot.size() == 2);

    // Reruns overwrite with identical bytes.
    CHECK(run("simulate", config_dir / "aircraft.json", out) == Success);
    CHECK(slurp(out / "trace.csv") == csv);
}

TEST_CASE("position-form start is a numeric failure") {
    json cfg = {{"plant", {{"name", "aircraft"}}}, {"gains", kstar_gains()}, {"sim", {{"initial_input", nullptr}}}};
    CHECK(run("simulate", write_config("position", cfg), scratch("position")) == NumericFailure);
}

TEST_CASE("sweeps") {
    const auto out = scratch("sweeps");
    CHECK(run("sweep", config_dir / "aircraft_delta_k.json", out) == Success);
    const std::string dk = slurp(out / "delta_k.csv");
    CHECK(dk.rfind("epsilon,R_K,I_K\n", 0) == 0);
    CHECK(std::count(dk.begin(), dk.end(), '\n') == 7);

    CHECK(run("sweep", config_dir / "aircraft_disturbance.json", out) == Success);
    const std::string ds = slurp(out / "disturbance.csv");
    CHECK(ds.rfind("L_d,omega,channel,itae,pt,mo,ms,st\n", 0) == 0);
    CHECK(std::count(ds.begin(), ds.end(), '\n') == 1 + 12 * 2);

    CHECK(run("sweep", config_dir / "aircraft.json", out, SweepKind::DeltaK) == Success);
}

TEST_CASE("optimize command") {
    const auto out = scratch("optimize");
    CHECK(run("optimize", config_dir / "scalar_toy.json", out) == Success);
    const json j = json::parse(slurp(out / "tuning.json"));
    const auto res = tuning_result_from_json(j);
    CHECK(tuning_result_to_json(res) == j);
    CHECK(res.feasible);
    CHECK(res.history.size() == 80);
    CHECK(fs::exists(out / "fitness_history.csv"));
}

TEST_CASE("seed override changes the GA run") {
    CommandOptions o;
    o.config = config_dir / "scalar_toy.json";
    o.quiet = true;
    std::ostringstream log, err;
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    o.out = a;
    REQUIRE(run_command("optimize", o, log, err) == Success);
    o.out = b;
    o.seed = 12345;
    REQUIRE(run_command("optimize", o, log, err) == Success);
    const auto ha = slurp(a / "fitness_history.csv"), hb = slurp(b / "fitness_history.csv");
    CHECK_FALSE(ha.empty());
    CHECK(ha != hb);
}

TEST_CASE("verify-duffing command") {
    const auto out = scratch("duffing");
    CHECK(run("verify-duffing", config_dir / "duffing.json", out) == Success);
    const json j = json::parse(slurp(out / "duffing_verification.json"));
    CHECK(j.at("dominated").get<bool>());
    CHECK(j.at("final_quarter_max").get<double>() <= j.at("radius").get<double>());
    CHECK(duffing_verification_to_json(duffing_verification_from_json(j)) == j);
    CHECK(run("verify-duffing", config_dir / "aircraft.json", out) == ConfigFailure);
}

TEST_CASE("the installed binary") {
    const auto out = scratch("binary");
    const std::string cmd = std::string(RCI_TOOL_PATH) + " indicators --quiet --config " +
                            (config_dir / "aircraft.json").string() + " --out " + out.string();
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "indicators.json"));
    const std::string missing = std::string(RCI_TOOL_PATH) + " indicators --config /nonexistent.json 2>/dev/null";
    CHECK(WEXITSTATUS(std::system(missing.c_str())) == ConfigFailure);
}
