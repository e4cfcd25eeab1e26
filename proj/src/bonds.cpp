#include "rfts/bonds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rfts/stats.hpp"

namespace rfts {

MarketParams MarketParams::constants(double sigma_per_sqrt_year, double rate_per_year) {
    MarketParams params;
    params.sigma = [sigma_per_sqrt_year](double, double) { return sigma_per_sqrt_year; };
    params.short_rate = [rate_per_year](double) { return rate_per_year; };
    return params;
}

std::vector<double> resolve_initial_curve(const MarketParams& params, const GridSpec& grid) {
    std::vector<double> curve;
    if (params.initial_curve.empty()) {
        const double r0 = params.short_rate ? params.short_rate(0.0) : 0.0;
        curve.resize(grid.maturity_cols());
        for (std::size_t j = 0; j < curve.size(); ++j) {
            curve[j] = std::exp(-r0 * grid.maturity_node(j));
        }
        return curve;
    }
    if (params.initial_curve.size() != grid.maturity_cols()) {
        throw std::invalid_argument("initial curve has " +
                                    std::to_string(params.initial_curve.size()) +
                                    " values, grid has " +
                                    std::to_string(grid.maturity_cols()) + " maturity nodes");
    }
    for (std::size_t j = 0; j < params.initial_curve.size(); ++j) {
        const double p = params.initial_curve[j];
        if (!(p > 0.0) || p > 1.0 || !std::isfinite(p)) {
            throw std::invalid_argument("initial curve value at node " + std::to_string(j) +
                                        " must lie in (0, 1]");
        }
    }
    return params.initial_curve;
}

MarketGrid realize_market(const MarketParams& params, const GridSpec& grid) {
    if (!params.sigma || !params.short_rate) {
        throw std::invalid_argument("realize_market: sigma and short_rate are required");
    }
    MarketGrid market;
    market.sigma = Surface(grid.time_rows(), grid.maturity_cols());
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            const double s = params.sigma(grid.time_node(i), grid.maturity_node(j));
            if (!std::isfinite(s)) {
                throw std::invalid_argument("sigma not finite at node (" + std::to_string(i) +
                                            ", " + std::to_string(j) + ")");
            }
            market.sigma(i, j) = s;
        }
    }
    market.rate.resize(grid.time_rows());
    market.log_discount.assign(grid.time_rows(), 0.0);
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        const double r = params.short_rate(grid.time_node(i));
        if (!std::isfinite(r) || r < 0.0) {
            throw std::invalid_argument("short rate must be finite and nonnegative at node " +
                                        std::to_string(i));
        }
        market.rate[i] = r;
        if (i + 1 < grid.time_rows()) {
            market.log_discount[i + 1] = market.log_discount[i] - r * grid.dt();
        }
    }
    market.initial_curve = resolve_initial_curve(params, grid);
    market.log_initial.resize(market.initial_curve.size());
    for (std::size_t j = 0; j < market.initial_curve.size(); ++j) {
        market.log_initial[j] = std::log(market.initial_curve[j]);
    }
    return market;
}

BondSurface simulate_bonds(const MarketGrid& market, const MprSurface& lambda,
                           const FieldPath& field, const GridSpec& grid) {
    if (field.values.rows() != grid.time_rows() ||
        field.values.cols() != grid.maturity_cols()) {
        throw std::invalid_argument("simulate_bonds: field does not match the grid");
    }
    if (!lambda.lambda.same_shape(field.values)) {
        throw std::invalid_argument("simulate_bonds: lambda does not match the grid");
    }

    const std::size_t nt = grid.n_time();
    const std::size_t cols = grid.maturity_cols();
    const double dt = grid.dt();

    BondSurface bonds;
    bonds.log_prices = Surface(nt + 1, cols);
    bonds.log_discount = market.log_discount;
    for (std::size_t j = 0; j < cols; ++j) {
        bonds.log_prices(0, j) = market.log_initial[j];
    }
    for (std::size_t i = 0; i < nt; ++i) {
        const double r = market.rate[i];
        const double* s = market.sigma.row(i);
        const double* l = lambda.lambda.row(i);
        const double* z_now = field.values.row(i);
        const double* z_next = field.values.row(i + 1);
        const double* p_now = bonds.log_prices.row(i);
        double* p_next = bonds.log_prices.row(i + 1);
        for (std::size_t j = 0; j < cols; ++j) {
            const double dz = z_next[j] - z_now[j];
            if (!std::isfinite(dz)) {
                throw std::runtime_error("simulate_bonds: field increment not finite at row " +
                                         std::to_string(i) + ", column " + std::to_string(j));
            }
            p_next[j] = p_now[j] + (r + l[j] * s[j] - 0.5 * s[j] * s[j]) * dt + s[j] * dz;
        }
    }
    return bonds;
}

BondSurface simulate_bonds(const MarketParams& params, const MprSurface& lambda,
                           const FieldPath& field, const GridSpec& grid) {
    return simulate_bonds(realize_market(params, grid), lambda, field, grid);
}

Surface discounted_surface(const BondSurface& bonds) {
    Surface d(bonds.log_prices.rows(), bonds.log_prices.cols());
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t j = 0; j < d.cols(); ++j) {
            d(i, j) = bonds.discounted(i, j);
        }
    }
    return d;
}

MartingaleReport risk_neutral_check(const EnsembleData& data,
                                    const std::vector<double>& initial_curve,
                                    const MartingaleOptions& options) {
    if (data.discounted.empty()) {
        throw std::invalid_argument("risk_neutral_check: ensemble has no bond data");
    }
    if (options.use_weights && data.log_weight.empty()) {
        throw std::invalid_argument("risk_neutral_check: ensemble has no weights");
    }

    MartingaleReport report;
    report.min_effective_n = static_cast<double>(data.n_paths);
    std::vector<double> values(data.n_paths);
    std::vector<double> logw(data.n_paths, 0.0);

    for (std::size_t c = 0; c < data.checkpoint_rows.size(); ++c) {
        if (options.use_weights) {
            for (std::size_t path = 0; path < data.n_paths; ++path) {
                logw[path] = data.log_weight[data.weight_index(path, c)];
            }
        }
        for (std::size_t m = 0; m < data.maturity_cols.size(); ++m) {
            for (std::size_t path = 0; path < data.n_paths; ++path) {
                values[path] = data.discounted[data.discounted_index(path, c, m)];
            }
            // E[D(t,T) exp(L(t))] as an unnormalized importance-sampling
            // mean: weight the values and keep the plain average.
            std::vector<double> weighted(data.n_paths);
            for (std::size_t path = 0; path < data.n_paths; ++path) {
                weighted[path] = values[path] * std::exp(logw[path]);
            }
            const Estimate est = sample_mean(weighted);
            const double p0 = initial_curve.at(data.maturity_cols[m]);

            MartingaleRow row;
            row.t = data.checkpoint_times[c];
            row.T = data.maturity_times[m];
            row.estimate = est.mean;
            row.std_error = est.std_error;
            row.ratio = est.mean / p0;
            row.z = est.std_error > 0 ? (est.mean - p0) / est.std_error : 0.0;
            row.pass = std::fabs(row.ratio - 1.0) <= options.ratio_tolerance;
            report.rows.push_back(row);

            report.max_abs_ratio_error =
                std::max(report.max_abs_ratio_error, std::fabs(row.ratio - 1.0));
            report.max_abs_z = std::max(report.max_abs_z, std::fabs(row.z));
            double ess = static_cast<double>(data.n_paths);
            if (options.use_weights) {
                double sw = 0.0, sww = 0.0;
                for (std::size_t path = 0; path < data.n_paths; ++path) {
                    const double w = std::exp(logw[path]);
                    sw += w;
                    sww += w * w;
                }
                ess = sww > 0 ? sw * sw / sww : 0.0;
            }
            report.min_effective_n = std::min(report.min_effective_n, ess);
        }
    }
    report.drift_exceeds_5pct = report.max_abs_ratio_error > 0.05;
    report.underpowered = report.min_effective_n < options.ess_threshold;
    report.passed = true;
    for (const MartingaleRow& row : report.rows) {
        report.passed = report.passed && row.pass;
    }
    return report;
}

}  // namespace rfts
