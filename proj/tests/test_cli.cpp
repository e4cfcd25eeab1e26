#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string binary_path() {
    const char* bin = std::getenv("RFTS_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "RFTS_BIN must point at the rfts binary");
    return bin;
}

std::filesystem::path temp_dir(const std::string& tag) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / ("rfts_cli_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::string& args, const std::filesystem::path& dir) {
    const std::filesystem::path log = dir / "cli_output.txt";
    const std::string command =
        "\"" + binary_path() + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int raw = std::system(command.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.output = read_file(log);
    return result;
}

const char* kSmokeConfig = R"(
[grid]
horizon_years = 1.0
time_steps = 8
maturity_cells = 7
min_maturity_years = 0.125

[eta]
kind = constant
value_per_year = 0.5

[market]
sigma_per_sqrt_year = 0.2
short_rate_per_year = 0.03

[run]
paths = 10
seed = 3
checkpoints_years = 0.5 1.0
maturities_years = 0.5 1.0
)";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("simulate smoke run produces deterministic outputs") {
    const auto dir = temp_dir("smoke");
    write_file(dir / "scenario.ini", kSmokeConfig);

    const CommandResult first = run_command(
        "simulate --config \"" + (dir / "scenario.ini").string() + "\" --out-dir \"" +
            (dir / "a").string() + "\"",
        dir);
    CHECK(first.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "a" / "bond_summary.csv"));
    CHECK(std::filesystem::exists(dir / "a" / "manifest.json"));

    const CommandResult second = run_command(
        "simulate --config \"" + (dir / "scenario.ini").string() + "\" --out-dir \"" +
            (dir / "b").string() + "\" --workers 2",
        dir);
    CHECK(second.exit_code == 0);
    CHECK(read_file(dir / "a" / "bond_summary.csv") ==
          read_file(dir / "b" / "bond_summary.csv"));
}

TEST_CASE("zero paths is a configuration error naming the field") {
    const auto dir = temp_dir("zero_paths");
    std::string config = kSmokeConfig;
    const auto pos = config.find("paths = 10");
    config.replace(pos, std::string("paths = 10").size(), "paths = 0");
    write_file(dir / "scenario.ini", config);

    const CommandResult result = run_command(
        "simulate --config \"" + (dir / "scenario.ini").string() + "\" --out-dir \"" +
            (dir / "out").string() + "\"",
        dir);
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("run.paths") != std::string::npos);
}

TEST_CASE("seed override changes the outputs") {
    const auto dir = temp_dir("seed");
    write_file(dir / "scenario.ini", kSmokeConfig);
    const CommandResult a = run_command(
        "simulate --config \"" + (dir / "scenario.ini").string() + "\" --out-dir \"" +
            (dir / "a").string() + "\"",
        dir);
    const CommandResult b = run_command(
        "simulate --config \"" + (dir / "scenario.ini").string() + "\" --out-dir \"" +
            (dir / "b").string() + "\" --seed 99",
        dir);
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(read_file(dir / "a" / "bond_summary.csv") !=
          read_file(dir / "b" / "bond_summary.csv"));
}

TEST_CASE("conditions subcommand prints the report") {
    const auto dir = temp_dir("conditions");
    write_file(dir / "scenario.ini", kSmokeConfig);
    const CommandResult result = run_command(
        "conditions --config \"" + (dir / "scenario.ini").string() + "\" --out-dir \"" +
            (dir / "out").string() + "\"",
        dir);
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("c1_integral") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "out" / "conditions.json"));
}

TEST_CASE("missing config file is a configuration error") {
    const auto dir = temp_dir("missing");
    const CommandResult result = run_command(
        "verify --config \"" + (dir / "nope.ini").string() + "\"", dir);
    CHECK(result.exit_code == 2);
}

TEST_SUITE_END();
