#include "rfts/measure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rfts/stats.hpp"

namespace rfts {

PathWeight log_rn_density(const KernelGrid& kernel, const SheetPath& sheet,
                          const GridSpec& grid) {
    if (kernel.g.rows() != grid.time_rows() || kernel.g.cols() != grid.maturity_cols()) {
        throw std::invalid_argument("log_rn_density: kernel does not match the grid");
    }
    if (sheet.increments.rows() != grid.n_time() ||
        sheet.increments.cols() != grid.n_maturity()) {
        throw std::invalid_argument("log_rn_density: sheet does not match the grid");
    }

    const std::size_t nt = grid.n_time();
    const std::size_t nm = grid.n_maturity();
    const double dt = grid.dt();
    const std::vector<double> dq = maturity_cell_measures(grid, kernel.kind.warp);

    // Kernel in sheet coordinates: the drift removed from the sheet has
    // density g / (d h^2/du) with respect to the squared coordinate.  For
    // the normalized kind this is g itself.
    std::vector<double> jacobian(nm);
    for (std::size_t j = 0; j < nm; ++j) {
        jacobian[j] = 1.0 / kernel.kind.warp.h_squared_prime(grid.maturity_node(j));
        if (!std::isfinite(jacobian[j])) {
            throw std::invalid_argument("log_rn_density: squared-warp slope not finite at node " +
                                        std::to_string(j));
        }
    }

    PathWeight weight;
    weight.log_density_at.assign(nt + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const double* g = kernel.g.row(i);
        const double* inc = sheet.increments.row(i);
        double stochastic = 0.0;
        double compensator = 0.0;
        for (std::size_t j = 0; j < nm; ++j) {
            const double gq = g[j] * jacobian[j];
            if (!std::isfinite(gq)) {
                throw std::runtime_error("log_rn_density: kernel not finite at row " +
                                         std::to_string(i) + ", column " + std::to_string(j));
            }
            stochastic += gq * inc[j];
            compensator += gq * gq * dq[j];
        }
        acc += -stochastic - 0.5 * compensator * dt;
        weight.log_density_at[i + 1] = acc;
    }
    return weight;
}

ShiftedField shift_field(const FieldPath& field, const MprSurface& lambda,
                         const GridSpec& grid) {
    if (field.values.rows() != grid.time_rows() ||
        field.values.cols() != grid.maturity_cols()) {
        throw std::invalid_argument("shift_field: field does not match the grid");
    }
    if (!lambda.lambda.same_shape(field.values)) {
        throw std::invalid_argument("shift_field: lambda does not match the field");
    }

    ShiftedField shifted;
    shifted.values = Surface(grid.time_rows(), grid.maturity_cols());
    const double dt = grid.dt();
    std::vector<double> drift(grid.maturity_cols(), 0.0);
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        const double* z = field.values.row(i);
        double* out = shifted.values.row(i);
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            out[j] = z[j] + drift[j];
        }
        if (i < grid.n_time()) {
            const double* l = lambda.lambda.row(i);
            for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
                drift[j] += l[j] * dt;
            }
        }
    }
    return shifted;
}

SheetLawReport weighted_sheet_test(const EnsembleData& data, const FieldKind& kind,
                                   double ess_threshold) {
    if (!data.probes_on_shifted_field) {
        throw std::invalid_argument("weighted_sheet_test: expects shifted-field probes");
    }
    if (data.log_weight.empty() || data.checkpoint_rows.empty()) {
        throw std::invalid_argument("weighted_sheet_test: ensemble has no weights");
    }

    // Weights at the last checkpoint (the full-square density).
    const std::size_t last = data.checkpoint_rows.size() - 1;
    std::vector<double> logw(data.n_paths);
    for (std::size_t path = 0; path < data.n_paths; ++path) {
        logw[path] = data.log_weight[data.weight_index(path, last)];
    }

    SheetLawReport report;
    report.min_effective_n = static_cast<double>(data.n_paths);
    std::vector<double> a(data.n_paths), b(data.n_paths);
    for (std::size_t p = 0; p < data.probes.size(); ++p) {
        for (std::size_t path = 0; path < data.n_paths; ++path) {
            a[path] = data.probe_first[data.probe_index(path, p)];
            b[path] = data.probe_second[data.probe_index(path, p)];
        }
        const Estimate est = weighted_covariance_log(a, b, logw);
        const ProbeNodes& nodes = data.probes[p];
        ProbeRow row;
        row.t1 = nodes.t1;
        row.T1 = nodes.T1;
        row.t2 = nodes.t2;
        row.T2 = nodes.T2;
        row.target = field_covariance(kind, nodes.t1, nodes.T1, nodes.t2, nodes.T2);
        row.estimate = est.mean;
        row.std_error = est.std_error;
        row.z = est.std_error > 0 ? (est.mean - row.target) / est.std_error : 0.0;
        row.effective_n = est.effective_n;
        report.rows.push_back(row);
        report.max_abs_z = std::max(report.max_abs_z, std::fabs(row.z));
        if (std::fabs(row.z) > 3.0) {
            ++report.n_exceeding;
        }
        report.min_effective_n = std::min(report.min_effective_n, est.effective_n);
    }
    report.bonferroni_expected = 0.0027 * static_cast<double>(data.probes.size());
    report.underpowered = report.min_effective_n < ess_threshold;
    report.passed = report.n_exceeding == 0;
    return report;
}

MeanOneReport mean_one_check(const EnsembleData& data) {
    if (data.log_weight.empty()) {
        throw std::invalid_argument("mean_one_check: ensemble has no weights");
    }
    MeanOneReport report;
    std::vector<double> w(data.n_paths);
    for (std::size_t c = 0; c < data.checkpoint_rows.size(); ++c) {
        double sw = 0.0, sww = 0.0;
        for (std::size_t path = 0; path < data.n_paths; ++path) {
            w[path] = std::exp(data.log_weight[data.weight_index(path, c)]);
            sw += w[path];
            sww += w[path] * w[path];
        }
        const Estimate est = sample_mean(w);
        MeanOneRow row;
        row.t = data.checkpoint_times[c];
        row.estimate = est.mean;
        row.std_error = est.std_error;
        row.z = est.std_error > 0 ? (est.mean - 1.0) / est.std_error : 0.0;
        row.effective_n = sww > 0 ? sw * sw / sww : 0.0;
        report.rows.push_back(row);
        report.max_abs_z = std::max(report.max_abs_z, std::fabs(row.z));
    }
    report.passed = report.max_abs_z <= 3.0;
    return report;
}

}  // namespace rfts
