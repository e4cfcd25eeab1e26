#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rfts/io.hpp"
#include "rfts/scenario.hpp"

using namespace rfts;

namespace {

const char* kMinimalConfig = R"(
[grid]
horizon_years = 1.0
time_steps = 16
maturity_cells = 15
min_maturity_years = 0.0625

[eta]
kind = constant
value_per_year = 0.5

[market]
sigma_per_sqrt_year = 0.2
short_rate_per_year = 0.03

[run]
paths = 200
seed = 11
checkpoints_years = 0.5 1.0
maturities_years = 0.5 1.0
probes = 1:0.5:1:1
)";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / ("rfts_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("minimal config parses with defaults applied") {
    const Scenario scenario = parse_scenario_text(kMinimalConfig);
    CHECK(scenario.grid.n_time() == 16);
    CHECK(scenario.grid.n_maturity() == 15);
    CHECK(scenario.grid.u_min() == doctest::Approx(0.0625));
    CHECK(scenario.kind.is_normalized);
    CHECK(scenario.eta.kind_name().substr(0, 8) == "constant");
    CHECK(scenario.n_paths == 200);
    CHECK(scenario.seed == 11);
    CHECK(scenario.workers == 0);
    CHECK(scenario.probes.size() == 1);
    CHECK(!scenario.config_hash.empty());

    // the hash identifies the resolved configuration
    const Scenario again = parse_scenario_text(kMinimalConfig);
    CHECK(again.config_hash == scenario.config_hash);
    Scenario changed = parse_scenario_text(kMinimalConfig);
    changed.seed = 12;
    CHECK(fnv1a64_hex(changed.canonical_config) == scenario.config_hash);
}

TEST_CASE("config errors name the offending field") {
    auto patched = [](const std::string& from, const std::string& to) {
        std::string text = kMinimalConfig;
        const auto pos = text.find(from);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, from.size(), to);
        return text;
    };

    CHECK_THROWS_WITH_AS(parse_scenario_text(patched("paths = 200", "paths = 0")),
                         doctest::Contains("run.paths"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_text(patched("maturity_cells = 15",
                                                     "maturity_cells = 15\nbogus_key = 1")),
                         doctest::Contains("grid.bogus_key"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_scenario_text(patched("checkpoints_years = 0.5 1.0",
                                    "checkpoints_years = 0.51 1.0")),
        doctest::Contains("run.checkpoints_years"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_text(patched("value_per_year = 0.5", "")),
                         doctest::Contains("eta.value_per_year"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_text(patched("probes = 1:0.5:1:1",
                                                     "probes = 1:0.5:1")),
                         doctest::Contains("run.probes"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario_text(patched("kind = constant", "kind = mystery")),
                         doctest::Contains("eta.kind"), ConfigError);
}

TEST_CASE("scaled field kinds parse from the catalog") {
    std::string text = kMinimalConfig;
    text += "\n[field]\nkind = scaled\nwarp = power\nwarp_power = 2.0\n";
    const Scenario scenario = parse_scenario_text(text);
    CHECK(!scenario.kind.is_normalized);
    CHECK(scenario.kind.name().substr(0, 5) == "power");

    std::string table = kMinimalConfig;
    table += "\n[field]\nkind = scaled\nwarp = table\nwarp_table = 0.05:0.3,1.0:1.1\n";
    CHECK(parse_scenario_text(table).kind.name() == "table");

    std::string bad = kMinimalConfig;
    bad += "\n[field]\nkind = scaled\nwarp = moebius\n";
    CHECK_THROWS_WITH_AS(parse_scenario_text(bad), doctest::Contains("field.warp"),
                         ConfigError);
}

TEST_CASE("simulate writes a summary, a manifest, and reruns byte-identically") {
    Scenario scenario = parse_scenario_text(kMinimalConfig);
    scenario.n_paths = 64;

    const auto dir_a = temp_dir("sim_a");
    const auto dir_b = temp_dir("sim_b");
    const RunResult first = run_simulate(scenario, dir_a.string());
    CHECK(first.exit_code == 0);
    CHECK(std::filesystem::exists(dir_a / "bond_summary.csv"));
    CHECK(std::filesystem::exists(dir_a / "manifest.json"));

    scenario.workers = 2;  // different worker count, same seed
    const RunResult second = run_simulate(scenario, dir_b.string());
    CHECK(second.exit_code == 0);
    CHECK(read_file(dir_a / "bond_summary.csv") == read_file(dir_b / "bond_summary.csv"));
    CHECK(read_file(dir_a / "manifest.json") == read_file(dir_b / "manifest.json"));

    const std::string csv = read_file(dir_a / "bond_summary.csv");
    CHECK(csv.substr(0, 16) == "checkpoint_years");
    // header + checkpoints x maturities
    std::size_t lines = 0;
    for (char c : csv) {
        lines += c == '\n' ? 1 : 0;
    }
    CHECK(lines == 1 + 2 * 2);

    const std::string manifest = read_file(dir_a / "manifest.json");
    CHECK(manifest.find(scenario.config_hash) != std::string::npos);
    CHECK(manifest.find("\"seed\": 11") != std::string::npos);
}

TEST_CASE("per-path dump is gated by the flag") {
    Scenario scenario = parse_scenario_text(kMinimalConfig);
    scenario.n_paths = 16;
    const auto dir = temp_dir("dump");
    run_simulate(scenario, dir.string(), /*dump_paths=*/true);
    const std::string dump = read_file(dir / "paths.csv");
    std::size_t lines = 0;
    for (char c : dump) {
        lines += c == '\n' ? 1 : 0;
    }
    CHECK(lines == 1 + 16 * 2);  // header + paths x maturities
}

TEST_CASE("verify passes on a driftless scenario") {
    std::string text = kMinimalConfig;
    const auto pos = text.find("value_per_year = 0.5");
    text.replace(pos, std::string("value_per_year = 0.5").size(), "value_per_year = 0.0");
    Scenario scenario = parse_scenario_text(text);
    scenario.n_paths = 4000;
    const auto dir = temp_dir("verify_zero");
    const RunResult result = run_verify(scenario, dir.string());
    CHECK(result.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "martingale.csv"));
    CHECK(std::filesystem::exists(dir / "sheet_law.csv"));
    CHECK(std::filesystem::exists(dir / "mean_one.csv"));
    CHECK(std::filesystem::exists(dir / "verify_report.json"));
    const std::string report = read_file(dir / "verify_report.json");
    CHECK(report.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("verify passes on the standard risk-premium scenario") {
    std::string text = kMinimalConfig;
    auto swap = [&](const std::string& from, const std::string& to) {
        const auto pos = text.find(from);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, from.size(), to);
    };
    swap("time_steps = 16", "time_steps = 32");
    swap("maturity_cells = 15", "maturity_cells = 31");
    swap("min_maturity_years = 0.0625", "min_maturity_years = 0.03125");
    Scenario scenario = parse_scenario_text(text);
    scenario.n_paths = 30000;
    const auto dir = temp_dir("verify_std");
    const RunResult result = run_verify(scenario, dir.string());
    CHECK(result.exit_code == 0);
}

TEST_CASE("negative control flags the unweighted drift") {
    Scenario scenario = parse_scenario_text(kMinimalConfig);
    scenario.n_paths = 6000;
    const auto dir = temp_dir("verify_nc");
    const RunResult result = run_verify(scenario, dir.string(), /*negative_control=*/true);
    CHECK(result.exit_code == 0);  // the expected failure was detected
    const std::string report = read_file(dir / "verify_report.json");
    CHECK(report.find("\"negative_control_detected\": true") != std::string::npos);
}

TEST_CASE("conditions subcommand writes the six named fields") {
    std::string text = kMinimalConfig;
    const auto pos = text.find("maturity_cells = 15");
    text.replace(pos, std::string("maturity_cells = 15").size(), "maturity_cells = 511");
    const auto pos2 = text.find("min_maturity_years = 0.0625");
    text.replace(pos2, std::string("min_maturity_years = 0.0625").size(),
                 "min_maturity_years = 0.001953125");
    Scenario scenario = parse_scenario_text(text);
    const auto dir = temp_dir("conditions");
    const RunResult result = run_conditions(scenario, dir.string());
    CHECK(result.exit_code == 0);
    const std::string json = read_file(dir / "conditions.json");
    for (const char* field : {"c1_integral", "c2_integral", "thm2_integral",
                              "half_g_norm_sq", "term1_norm_sq", "term2_norm_sq"}) {
        CHECK(json.find(field) != std::string::npos);
    }
    // eta == 0.5 on [0,1]^2: c1 = (5/8) 0.25
    const auto value_at = [&](const std::string& key) {
        const auto k = json.find("\"" + key + "\": ");
        REQUIRE(k != std::string::npos);
        return std::stod(json.substr(k + key.size() + 4));
    };
    CHECK(value_at("c1_integral") == doctest::Approx(0.15625).epsilon(1e-3));
    CHECK(value_at("c2_integral") == doctest::Approx(0.3125).epsilon(1e-3));
}

TEST_CASE("covariance subcommand runs the probe battery") {
    Scenario scenario = parse_scenario_text(kMinimalConfig);
    scenario.n_paths = 20000;
    const auto dir = temp_dir("cov");
    const RunResult result = run_covariance(scenario, dir.string());
    CHECK(result.exit_code == 0);
    const std::string csv = read_file(dir / "covariance.csv");
    CHECK(csv.find("target") != std::string::npos);
}

TEST_SUITE_END();
