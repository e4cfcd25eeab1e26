#include "rfts/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfts/stats.hpp"

namespace rfts {

FieldPath build_field(const SheetPath& sheet, const FieldKind& kind, const GridSpec& grid) {
    if (sheet.sheet.rows() != grid.time_rows() || sheet.sheet.cols() != grid.maturity_cols()) {
        throw std::invalid_argument("build_field: sheet does not match the grid");
    }
    validate_warp_on_grid(kind.warp, grid);

    FieldPath field;
    field.kind = kind;
    field.values = Surface(grid.time_rows(), grid.maturity_cols());

    std::vector<double> inv_h(grid.maturity_cols());
    for (std::size_t j = 0; j < inv_h.size(); ++j) {
        inv_h[j] = 1.0 / kind.warp.h(grid.maturity_node(j));
    }
    for (std::size_t i = 0; i < grid.time_rows(); ++i) {
        const double* w = sheet.sheet.row(i);
        double* z = field.values.row(i);
        for (std::size_t j = 0; j < grid.maturity_cols(); ++j) {
            z[j] = w[j] * inv_h[j];
        }
    }
    return field;
}

double field_covariance(const FieldKind& kind, double t1, double T1, double t2, double T2) {
    const double tmin = std::min(t1, t2);
    const double Tmin = std::min(T1, T2);
    const double h1 = kind.warp.h(T1);
    const double h2 = kind.warp.h(T2);
    const double hmin = kind.warp.h(Tmin);
    return tmin * (hmin * hmin) / (h1 * h2);
}

double sheet_covariance(double t1, double T1, double t2, double T2) {
    return std::min(t1, t2) * std::min(T1, T2);
}

CovarianceReport field_covariance_check(const EnsembleData& data, const FieldKind& kind) {
    if (data.probes_on_shifted_field) {
        throw std::invalid_argument("field_covariance_check: expects unshifted field probes");
    }
    CovarianceReport report;
    report.rows.reserve(data.probes.size());

    std::vector<double> a(data.n_paths), b(data.n_paths);
    for (std::size_t p = 0; p < data.probes.size(); ++p) {
        for (std::size_t path = 0; path < data.n_paths; ++path) {
            a[path] = data.probe_first[data.probe_index(path, p)];
            b[path] = data.probe_second[data.probe_index(path, p)];
        }
        const Estimate est = sample_covariance(a, b);
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
    }
    report.bonferroni_expected = 0.0027 * static_cast<double>(data.probes.size());
    report.passed = report.n_exceeding == 0;
    return report;
}

}  // namespace rfts
