#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rfts/bonds.hpp"
#include "rfts/field.hpp"
#include "rfts/grid.hpp"
#include "rfts/measure.hpp"
#include "rfts/mpr.hpp"
#include "rfts/stats.hpp"

namespace rfts {

/// Stable shortest-round-trip-ish formatting (%.15g); used everywhere a
/// number is written to CSV or JSON so outputs are byte-reproducible.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view text);
std::string fnv1a64_hex(std::string_view text);

struct BondSummaryRow {
    double t = 0;
    double T = 0;
    Estimate unweighted;
    double unweighted_ratio = 0;
    Estimate weighted;
    double weighted_ratio = 0;
    double weighted_z = 0;
};

std::string bond_summary_csv(const std::vector<BondSummaryRow>& rows);
std::string covariance_csv(const CovarianceReport& report);
std::string martingale_csv(const MartingaleReport& report);
std::string sheet_law_csv(const SheetLawReport& report);
std::string mean_one_csv(const MeanOneReport& report);

std::string conditions_json(const ConditionReport& report, const GridSpec& grid,
                            const std::string& eta_name, const std::string& kind_name);

struct ManifestInfo {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    std::vector<std::string> outputs;
};

std::string manifest_json(const ManifestInfo& info);

struct VerifySummary {
    bool negative_control = false;
    bool negative_control_detected = false;
    const MartingaleReport* martingale = nullptr;
    const SheetLawReport* sheet_law = nullptr;
    const MeanOneReport* mean_one = nullptr;
    bool passed = false;
};

std::string verify_report_json(const VerifySummary& summary);

}  // namespace rfts
