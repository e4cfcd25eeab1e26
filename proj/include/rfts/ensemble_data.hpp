#pragma once

#include <cstddef>
#include <vector>

namespace rfts {

/// A probe is an ordered pair of space-time grid nodes at which field values
/// are collected per path.
struct ProbeNodes {
    std::size_t row1 = 0, col1 = 0, row2 = 0, col2 = 0;
    double t1 = 0, T1 = 0, t2 = 0, T2 = 0;
};

/// Per-path observables collected by the ensemble runner.  Storage is
/// path-major with fixed slots, so results are independent of the worker
/// count and partitioning.
struct EnsembleData {
    std::size_t n_paths = 0;

    std::vector<std::size_t> checkpoint_rows;  // time indices
    std::vector<double> checkpoint_times;      // years
    std::vector<std::size_t> maturity_cols;    // maturity indices
    std::vector<double> maturity_times;        // years
    std::vector<ProbeNodes> probes;
    bool probes_on_shifted_field = false;

    // discounted bond prices, [path][checkpoint][maturity]
    std::vector<double> discounted;
    // log Radon-Nikodym density, [path][checkpoint]
    std::vector<double> log_weight;
    // field values at the two probe endpoints, [path][probe]
    std::vector<double> probe_first;
    std::vector<double> probe_second;

    std::size_t discounted_index(std::size_t path, std::size_t ckpt, std::size_t mat) const {
        return (path * checkpoint_rows.size() + ckpt) * maturity_cols.size() + mat;
    }
    std::size_t weight_index(std::size_t path, std::size_t ckpt) const {
        return path * checkpoint_rows.size() + ckpt;
    }
    std::size_t probe_index(std::size_t path, std::size_t probe) const {
        return path * probes.size() + probe;
    }
};

}  // namespace rfts
