#pragma once

#include <cstddef>
#include <vector>

#include "rfts/ensemble_data.hpp"
#include "rfts/grid.hpp"
#include "rfts/sheet.hpp"
#include "rfts/surface.hpp"
#include "rfts/warp.hpp"

namespace rfts {

/// Realized noise field Z(t_i, u_j) on the grid nodes.
struct FieldPath {
    Surface values;  // (n_time + 1) x (n_maturity + 1)
    FieldKind kind;
};

/// Z(t_i, u_j) = sheet(i, j) / h(u_j).  For the normalized kind this is
/// W(t, T)/sqrt(T); Z(0, .) == 0 and Z(., u_min) == 0 by the sheet origin
/// convention.
FieldPath build_field(const SheetPath& sheet, const FieldKind& kind, const GridSpec& grid);

/// Model covariance of the field:
/// Cov(Z(t1,T1), Z(t2,T2)) = (t1 ^ t2) * h(Tmin)^2 / (h(T1) h(T2)),
/// which for the normalized kind is (t1 ^ t2) * sqrt(Tmin / Tmax).
double field_covariance(const FieldKind& kind, double t1, double T1, double t2, double T2);

/// Model covariance of the plain sheet: (t1 ^ t2)(T1 ^ T2).
double sheet_covariance(double t1, double T1, double t2, double T2);

struct ProbeRow {
    double t1 = 0, T1 = 0, t2 = 0, T2 = 0;
    double target = 0;
    double estimate = 0;
    double std_error = 0;
    double z = 0;
    double effective_n = 0;
};

struct CovarianceReport {
    std::vector<ProbeRow> rows;
    double max_abs_z = 0;
    std::size_t n_exceeding = 0;       // probes with |z| > 3
    double bonferroni_expected = 0;    // expected count of |z| > 3 under the model
    bool passed = false;               // all |z| <= 3
};

/// Unweighted sample-covariance battery over the probe pairs of an
/// ensemble, compared against the model covariance of the field.
CovarianceReport field_covariance_check(const EnsembleData& data, const FieldKind& kind);

}  // namespace rfts
