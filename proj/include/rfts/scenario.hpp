#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfts/bonds.hpp"
#include "rfts/ensemble.hpp"
#include "rfts/eta.hpp"
#include "rfts/grid.hpp"
#include "rfts/warp.hpp"

namespace rfts {

/// Configuration error naming the offending field and constraint.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A fully resolved run configuration.
struct Scenario {
    Scenario(GridSpec g, FieldKind k, EtaSpec e)
        : grid(std::move(g)), kind(std::move(k)), eta(std::move(e)) {}

    GridSpec grid;
    FieldKind kind;
    EtaSpec eta;

    std::string name = "scenario";
    double sigma_per_sqrt_year = 0.2;
    double short_rate_per_year = 0.0;
    std::vector<double> initial_curve;  // per maturity node; empty = exp(-r0 T)

    std::size_t n_paths = 1000;
    std::uint64_t seed = 1;
    int workers = 0;

    std::vector<double> checkpoints_years;
    std::vector<double> maturities_years;
    std::vector<std::array<double, 4>> probes;  // t1:T1:t2:T2

    std::string canonical_config;  // normalized section.key = value text
    std::string config_hash;       // fnv1a64 of canonical_config

    MarketParams market() const;
};

/// Parse the nested-section key-value config format.  Unknown keys,
/// malformed values and violated constraints raise ConfigError naming the
/// section.key involved.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 statistical failure
    std::vector<std::string> files;
};

RunResult run_simulate(const Scenario& scenario, const std::string& out_dir,
                       bool dump_paths = false);
RunResult run_verify(const Scenario& scenario, const std::string& out_dir,
                     bool negative_control = false);
RunResult run_conditions(const Scenario& scenario, const std::string& out_dir);
RunResult run_covariance(const Scenario& scenario, const std::string& out_dir);

}  // namespace rfts
