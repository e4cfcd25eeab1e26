#pragma once

#include <vector>

#include "rfts/ensemble_data.hpp"
#include "rfts/field.hpp"
#include "rfts/grid.hpp"
#include "rfts/mpr.hpp"
#include "rfts/sheet.hpp"

namespace rfts {

/// Log Radon-Nikodym density along one path, accumulated over time rows:
/// L(t_i) = -sum_{k<i,j} g~(t_k,u_j) dW(k,j)
///          -(1/2) sum_{k<i,j} g~(t_k,u_j)^2 dt dq_j,
/// where g~ = g / (d h^2/du) maps the kernel to sheet coordinates (for the
/// normalized kind g~ == g and dq_j == du for j >= 1) and dq_j is the cell
/// measure of the sampled sheet.  Both sums are left-endpoint (Ito).
///
/// L(0) = 0, and L at the horizon is the full-square log density; at the
/// intermediate rows it is the density process restricted to information
/// up to t_i.
struct PathWeight {
    std::vector<double> log_density_at;  // size n_time + 1
};

PathWeight log_rn_density(const KernelGrid& kernel, const SheetPath& sheet,
                          const GridSpec& grid);

/// Field with the removable drift added back:
/// Z~(t_i, u_j) = Z(t_i, u_j) + sum_{k<i} lambda(t_k, u_j) dt.
struct ShiftedField {
    Surface values;
};

ShiftedField shift_field(const FieldPath& field, const MprSurface& lambda,
                         const GridSpec& grid);

struct SheetLawReport {
    std::vector<ProbeRow> rows;
    double max_abs_z = 0;
    std::size_t n_exceeding = 0;
    double bonferroni_expected = 0;
    double min_effective_n = 0;
    bool underpowered = false;
    bool passed = false;  // all |z| <= 3
};

/// Importance-sampled covariance of the shifted field at the ensemble's
/// probe pairs against the model sheet law.  Flags the report as
/// underpowered when the effective sample size falls below the threshold.
SheetLawReport weighted_sheet_test(const EnsembleData& data, const FieldKind& kind,
                                   double ess_threshold = 100.0);

struct MeanOneRow {
    double t = 0;
    double estimate = 0;
    double std_error = 0;
    double z = 0;
    double effective_n = 0;  // (sum w)^2 / sum w^2 of the weights at t
};

struct MeanOneReport {
    std::vector<MeanOneRow> rows;
    double max_abs_z = 0;
    bool passed = false;
};

/// Unweighted sample mean of exp(L(t)) at every checkpoint; each should be
/// one (the density process is a martingale in t).
MeanOneReport mean_one_check(const EnsembleData& data);

}  // namespace rfts
