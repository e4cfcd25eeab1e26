#include "rfts/ensemble.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

#include "rfts/field.hpp"
#include "rfts/measure.hpp"
#include "rfts/mpr.hpp"
#include "rfts/rng.hpp"
#include "rfts/sheet.hpp"

namespace rfts {

namespace {

std::size_t worker_count(int requested, std::size_t n_paths) {
    std::size_t workers = requested > 0
                              ? static_cast<std::size_t>(requested)
                              : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(workers, n_paths));
}

// Time-prefix sums sum_{k<i} lambda(k, j) dt, used to shift probe values.
Surface lambda_time_prefix(const MprSurface& lambda, const GridSpec& grid) {
    Surface prefix(grid.time_rows(), grid.maturity_cols(), 0.0);
    for (std::size_t i = 0; i + 1 < grid.time_rows(); ++i) {
        const double* l = lambda.lambda.row(i);
        const double* now = prefix.row(i);
        double* next = prefix.row(i + 1);
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            next[j] = now[j] + l[j] * grid.dt();
        }
    }
    return prefix;
}

}  // namespace

EnsembleData run_ensemble(const EnsembleInputs& inputs) {
    if (inputs.n_paths == 0) {
        throw std::invalid_argument("run_ensemble: n_paths must be positive");
    }
    const GridSpec& grid = inputs.grid;
    validate_warp_on_grid(inputs.kind.warp, grid);

    EnsembleData data;
    data.n_paths = inputs.n_paths;
    data.probes_on_shifted_field = inputs.probes_on_shifted_field;

    for (double t : inputs.checkpoint_times) {
        data.checkpoint_rows.push_back(grid.time_row_at(t));
        data.checkpoint_times.push_back(t);
    }
    for (double T : inputs.maturity_times) {
        data.maturity_cols.push_back(grid.maturity_col_at(T));
        data.maturity_times.push_back(T);
    }
    for (const auto& probe : inputs.probes) {
        ProbeNodes nodes;
        nodes.t1 = probe[0];
        nodes.T1 = probe[1];
        nodes.t2 = probe[2];
        nodes.T2 = probe[3];
        nodes.row1 = grid.time_row_at(probe[0]);
        nodes.col1 = grid.maturity_col_at(probe[1]);
        nodes.row2 = grid.time_row_at(probe[2]);
        nodes.col2 = grid.maturity_col_at(probe[3]);
        data.probes.push_back(nodes);
    }

    const bool with_bonds = inputs.market.has_value();
    const bool with_weights = inputs.with_weights;
    const bool adapted = !inputs.eta.deterministic();
    const bool need_lambda =
        with_bonds || with_weights || (inputs.probes_on_shifted_field && !data.probes.empty());

    // Shared deterministic structures.
    MarketGrid market;
    if (with_bonds) {
        market = realize_market(*inputs.market, grid);
        if (data.checkpoint_rows.empty() || data.maturity_cols.empty()) {
            throw std::invalid_argument(
                "run_ensemble: bond collection needs checkpoints and maturities");
        }
    }
    if (with_weights && data.checkpoint_rows.empty()) {
        throw std::invalid_argument("run_ensemble: weight collection needs checkpoints");
    }

    Surface shared_eta;
    MprSurface shared_lambda;
    KernelGrid shared_kernel;
    Surface shared_prefix;
    if (!adapted && need_lambda) {
        shared_eta = inputs.eta.realize(grid);
        shared_lambda = lambda_from_eta(shared_eta, grid);
        if (with_weights) {
            shared_kernel = girsanov_kernel(shared_eta, shared_lambda, inputs.kind, grid);
        }
        if (inputs.probes_on_shifted_field) {
            shared_prefix = lambda_time_prefix(shared_lambda, grid);
        }
    }

    if (with_bonds) {
        data.discounted.assign(
            data.n_paths * data.checkpoint_rows.size() * data.maturity_cols.size(), 0.0);
    }
    if (with_weights) {
        data.log_weight.assign(data.n_paths * data.checkpoint_rows.size(), 0.0);
    }
    if (!data.probes.empty()) {
        data.probe_first.assign(data.n_paths * data.probes.size(), 0.0);
        data.probe_second.assign(data.n_paths * data.probes.size(), 0.0);
    }

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t path = begin; path < end; ++path) {
            const RandomStream stream(inputs.seed, path);
            const SheetPath sheet = sample_sheet(grid, inputs.kind.warp, stream);
            const FieldPath field = build_field(sheet, inputs.kind, grid);

            MprSurface path_lambda;
            KernelGrid path_kernel;
            Surface path_eta;
            Surface path_prefix;
            const MprSurface* lambda = &shared_lambda;
            const KernelGrid* kernel = &shared_kernel;
            const Surface* prefix = &shared_prefix;
            if (adapted && need_lambda) {
                path_eta = inputs.eta.realize(grid, sheet);
                path_lambda = lambda_from_eta(path_eta, grid);
                lambda = &path_lambda;
                if (with_weights) {
                    path_kernel = girsanov_kernel(path_eta, path_lambda, inputs.kind, grid);
                    kernel = &path_kernel;
                }
                if (inputs.probes_on_shifted_field) {
                    path_prefix = lambda_time_prefix(path_lambda, grid);
                    prefix = &path_prefix;
                }
            }

            if (with_bonds) {
                const BondSurface bonds = simulate_bonds(market, *lambda, field, grid);
                for (std::size_t c = 0; c < data.checkpoint_rows.size(); ++c) {
                    for (std::size_t m = 0; m < data.maturity_cols.size(); ++m) {
                        data.discounted[data.discounted_index(path, c, m)] =
                            bonds.discounted(data.checkpoint_rows[c], data.maturity_cols[m]);
                    }
                }
            }
            if (with_weights) {
                const PathWeight weight = log_rn_density(*kernel, sheet, grid);
                for (std::size_t c = 0; c < data.checkpoint_rows.size(); ++c) {
                    data.log_weight[data.weight_index(path, c)] =
                        weight.log_density_at[data.checkpoint_rows[c]];
                }
            }
            for (std::size_t p = 0; p < data.probes.size(); ++p) {
                const ProbeNodes& nodes = data.probes[p];
                double a = field.values(nodes.row1, nodes.col1);
                double b = field.values(nodes.row2, nodes.col2);
                if (inputs.probes_on_shifted_field) {
                    a += (*prefix)(nodes.row1, nodes.col1);
                    b += (*prefix)(nodes.row2, nodes.col2);
                }
                data.probe_first[data.probe_index(path, p)] = a;
                data.probe_second[data.probe_index(path, p)] = b;
            }
        }
    };

    const std::size_t workers = worker_count(inputs.workers, data.n_paths);
    if (workers == 1) {
        run_range(0, data.n_paths);
        return data;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (data.n_paths + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(data.n_paths, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&, w, begin, end] {
            try {
                run_range(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    for (const std::exception_ptr& err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }
    return data;
}

}  // namespace rfts
