#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "rfts/ensemble_data.hpp"
#include "rfts/field.hpp"
#include "rfts/grid.hpp"
#include "rfts/mpr.hpp"
#include "rfts/surface.hpp"

namespace rfts {

/// Market inputs: volatility surface sigma(t, T) (per sqrt year), a
/// deterministic nonnegative short rate r(t), and the initial discount
/// curve P(0, T) per maturity node (values in (0, 1]; empty means
/// exp(-r(0) T)).
struct MarketParams {
    std::function<double(double t, double u)> sigma;
    std::function<double(double t)> short_rate;
    std::vector<double> initial_curve;

    static MarketParams constants(double sigma_per_sqrt_year, double rate_per_year);
};

/// MarketParams realized on a grid (shared across paths).
struct MarketGrid {
    Surface sigma;                    // (n_time+1) x (n_mat+1)
    std::vector<double> rate;         // r(t_i)
    std::vector<double> log_discount; // -sum_{k<i} r(t_k) dt
    std::vector<double> initial_curve;
    std::vector<double> log_initial;
};

MarketGrid realize_market(const MarketParams& params, const GridSpec& grid);
std::vector<double> resolve_initial_curve(const MarketParams& params, const GridSpec& grid);

/// Simulated discount-bond surface for one path, kept in log space so
/// prices stay strictly positive.  discounted(i, j) applies the
/// left-endpoint short-rate integral.
struct BondSurface {
    Surface log_prices;                // (n_time+1) x (n_mat+1)
    std::vector<double> log_discount;  // size n_time+1

    double price(std::size_t i, std::size_t j) const {
        return std::exp(log_prices(i, j));
    }
    double discounted(std::size_t i, std::size_t j) const {
        return std::exp(log_discount[i] + log_prices(i, j));
    }
};

/// Log-Euler step per maturity column:
/// log P(t_{i+1}) = log P(t_i)
///   + (r(t_i) + lambda(t_i,u_j) sigma(t_i,u_j) - sigma^2/2) dt
///   + sigma(t_i,u_j) (Z(t_{i+1},u_j) - Z(t_i,u_j)).
BondSurface simulate_bonds(const MarketGrid& market, const MprSurface& lambda,
                           const FieldPath& field, const GridSpec& grid);
BondSurface simulate_bonds(const MarketParams& params, const MprSurface& lambda,
                           const FieldPath& field, const GridSpec& grid);

/// Materialized discounted surface D(t_i, u_j).
Surface discounted_surface(const BondSurface& bonds);

struct MartingaleRow {
    double t = 0;
    double T = 0;
    double estimate = 0;   // weighted mean of D(t,T) exp(L(t))
    double std_error = 0;
    double ratio = 0;      // estimate / P(0,T)
    double z = 0;
    bool pass = false;
};

struct MartingaleOptions {
    bool use_weights = true;       // false = negative control (weights == 1)
    double ratio_tolerance = 0.01;
    double ess_threshold = 100.0;
};

struct MartingaleReport {
    std::vector<MartingaleRow> rows;
    double max_abs_ratio_error = 0;
    double max_abs_z = 0;
    double min_effective_n = 0;
    bool underpowered = false;
    bool drift_exceeds_5pct = false;  // some ratio deviates from 1 by > 5%
    bool passed = false;              // all |ratio - 1| <= ratio_tolerance
};

/// No-arbitrage signature: for every (checkpoint, maturity) pair the
/// reweighted mean of the discounted price must reproduce the initial
/// curve.
MartingaleReport risk_neutral_check(const EnsembleData& data,
                                    const std::vector<double>& initial_curve,
                                    const MartingaleOptions& options = {});

}  // namespace rfts
