#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rfts/bonds.hpp"
#include "rfts/ensemble_data.hpp"
#include "rfts/eta.hpp"
#include "rfts/grid.hpp"
#include "rfts/warp.hpp"

namespace rfts {

/// One ensemble run: what to simulate and what to collect.
///
/// Checkpoints, maturities and probe coordinates are given in years and
/// snapped to grid nodes (non-nodes are rejected).  Paths are independent
/// and keyed by (seed, path index), so results do not depend on the worker
/// count.
struct EnsembleInputs {
    EnsembleInputs(GridSpec g, FieldKind k, EtaSpec e)
        : grid(std::move(g)), kind(std::move(k)), eta(std::move(e)) {}

    GridSpec grid;
    FieldKind kind;
    EtaSpec eta;
    std::optional<MarketParams> market;  // enables bond collection

    std::vector<double> checkpoint_times;
    std::vector<double> maturity_times;
    std::vector<std::array<double, 4>> probes;  // t1, T1, t2, T2
    bool probes_on_shifted_field = false;
    bool with_weights = true;

    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware concurrency
};

EnsembleData run_ensemble(const EnsembleInputs& inputs);

}  // namespace rfts
