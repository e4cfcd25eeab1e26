#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rfts/scenario.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t paths = 0;
    bool paths_set = false;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "scenario config file")->required();
    cmd->add_option("--out-dir", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override run.seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--paths", args.paths, "override run.paths")
        ->each([&](const std::string&) { args.paths_set = true; });
    cmd->add_option("--workers", args.workers, "worker threads (0 = hardware)");
}

rfts::Scenario load(const CommonArgs& args) {
    rfts::Scenario scenario = rfts::parse_scenario_file(args.config);
    if (args.seed_set) {
        scenario.seed = args.seed;
    }
    if (args.paths_set) {
        if (args.paths < 1) {
            throw rfts::ConfigError("run.paths", "n_paths must be at least 1");
        }
        scenario.n_paths = args.paths;
    }
    if (args.workers >= 0) {
        scenario.workers = args.workers;
    }
    return scenario;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulation and no-arbitrage verification for "
                 "random-field term-structure models"};
    app.require_subcommand(1);

    CommonArgs sim_args, ver_args, cond_args, cov_args;
    bool dump_paths = false;
    bool negative_control = false;

    CLI::App* simulate = app.add_subcommand("simulate", "simulate bond surfaces");
    add_common(simulate, sim_args);
    simulate->add_flag("--dump-paths", dump_paths, "write per-path values (large)");

    CLI::App* verify = app.add_subcommand("verify", "run the martingale checks");
    add_common(verify, ver_args);
    verify->add_flag("--negative-control", negative_control,
                     "drop the weights; the drift check must detect the bias");

    CLI::App* conditions = app.add_subcommand("conditions", "evaluate the integrability "
                                                            "conditions");
    add_common(conditions, cond_args);

    CLI::App* covariance = app.add_subcommand("covariance", "field covariance probes");
    add_common(covariance, cov_args);

    CLI11_PARSE(app, argc, argv);

    try {
        rfts::RunResult result;
        if (simulate->parsed()) {
            result = rfts::run_simulate(load(sim_args), sim_args.out_dir, dump_paths);
        } else if (verify->parsed()) {
            result = rfts::run_verify(load(ver_args), ver_args.out_dir, negative_control);
        } else if (conditions->parsed()) {
            result = rfts::run_conditions(load(cond_args), cond_args.out_dir);
        } else if (covariance->parsed()) {
            result = rfts::run_covariance(load(cov_args), cov_args.out_dir);
        }
        return result.exit_code;
    } catch (const rfts::ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
