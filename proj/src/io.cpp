#include "rfts/io.hpp"

#include <cstdio>

#include <json.hpp>

namespace rfts {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string fnv1a64_hex(std::string_view text) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

std::string bond_summary_csv(const std::vector<BondSummaryRow>& rows) {
    std::string out =
        "checkpoint_years,maturity_years,unweighted_mean,unweighted_se,unweighted_ratio,"
        "weighted_mean,weighted_se,weighted_ratio,weighted_z,effective_n\n";
    for (const BondSummaryRow& row : rows) {
        out += format_double(row.t) + "," + format_double(row.T) + "," +
               format_double(row.unweighted.mean) + "," +
               format_double(row.unweighted.std_error) + "," +
               format_double(row.unweighted_ratio) + "," + format_double(row.weighted.mean) +
               "," + format_double(row.weighted.std_error) + "," +
               format_double(row.weighted_ratio) + "," + format_double(row.weighted_z) + "," +
               format_double(row.weighted.effective_n) + "\n";
    }
    return out;
}

std::string covariance_csv(const CovarianceReport& report) {
    std::string out = "t1_years,T1_years,t2_years,T2_years,target,estimate,se,z\n";
    for (const ProbeRow& row : report.rows) {
        out += format_double(row.t1) + "," + format_double(row.T1) + "," +
               format_double(row.t2) + "," + format_double(row.T2) + "," +
               format_double(row.target) + "," + format_double(row.estimate) + "," +
               format_double(row.std_error) + "," + format_double(row.z) + "\n";
    }
    return out;
}

std::string martingale_csv(const MartingaleReport& report) {
    std::string out = "checkpoint_years,maturity_years,estimate,se,ratio,z,pass\n";
    for (const MartingaleRow& row : report.rows) {
        out += format_double(row.t) + "," + format_double(row.T) + "," +
               format_double(row.estimate) + "," + format_double(row.std_error) + "," +
               format_double(row.ratio) + "," + format_double(row.z) + "," +
               (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

std::string sheet_law_csv(const SheetLawReport& report) {
    std::string out =
        "t1_years,T1_years,t2_years,T2_years,target,estimate,se,z,effective_n\n";
    for (const ProbeRow& row : report.rows) {
        out += format_double(row.t1) + "," + format_double(row.T1) + "," +
               format_double(row.t2) + "," + format_double(row.T2) + "," +
               format_double(row.target) + "," + format_double(row.estimate) + "," +
               format_double(row.std_error) + "," + format_double(row.z) + "," +
               format_double(row.effective_n) + "\n";
    }
    return out;
}

std::string mean_one_csv(const MeanOneReport& report) {
    std::string out = "checkpoint_years,estimate,se,z,effective_n\n";
    for (const MeanOneRow& row : report.rows) {
        out += format_double(row.t) + "," + format_double(row.estimate) + "," +
               format_double(row.std_error) + "," + format_double(row.z) + "," +
               format_double(row.effective_n) + "\n";
    }
    return out;
}

std::string conditions_json(const ConditionReport& report, const GridSpec& grid,
                            const std::string& eta_name, const std::string& kind_name) {
    nlohmann::ordered_json j;
    j["c1_integral"] = report.c1_integral;
    j["c2_integral"] = report.c2_integral;
    j["thm2_integral"] = report.thm2_integral;
    j["half_g_norm_sq"] = report.half_g_norm_sq;
    j["term1_norm_sq"] = report.term1_norm_sq;
    j["term2_norm_sq"] = report.term2_norm_sq;
    j["grid"] = {{"horizon_years", grid.horizon()},
                 {"time_steps", grid.n_time()},
                 {"maturity_cells", grid.n_maturity()},
                 {"min_maturity_years", grid.u_min()}};
    j["eta"] = eta_name;
    j["field_kind"] = kind_name;
    j["monte_carlo"] = report.monte_carlo;
    if (report.monte_carlo) {
        j["sample_paths"] = report.sample_paths;
        j["c1_integral_se"] = report.c1_integral_se;
        j["c2_integral_se"] = report.c2_integral_se;
        j["c1_exp_moment"] = report.c1_exp_moment;
        j["c1_exp_moment_se"] = report.c1_exp_moment_se;
        j["c2_exp_moment"] = report.c2_exp_moment;
        j["c2_exp_moment_se"] = report.c2_exp_moment_se;
    }
    return j.dump(2) + "\n";
}

std::string manifest_json(const ManifestInfo& info) {
    nlohmann::ordered_json j;
    j["tool"] = "rfts";
    j["version"] = "0.1.0";
    j["command"] = info.command;
    j["config_hash"] = info.config_hash;
    j["seed"] = info.seed;
    j["paths"] = info.paths;
    j["outputs"] = info.outputs;
    return j.dump(2) + "\n";
}

namespace {

nlohmann::ordered_json probe_rows_json(const std::vector<ProbeRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ProbeRow& row : rows) {
        arr.push_back({{"t1", row.t1},
                       {"T1", row.T1},
                       {"t2", row.t2},
                       {"T2", row.T2},
                       {"target", row.target},
                       {"estimate", row.estimate},
                       {"se", row.std_error},
                       {"z", row.z}});
    }
    return arr;
}

}  // namespace

std::string verify_report_json(const VerifySummary& summary) {
    nlohmann::ordered_json j;
    j["negative_control"] = summary.negative_control;
    if (summary.negative_control) {
        j["negative_control_detected"] = summary.negative_control_detected;
    }
    if (summary.martingale != nullptr) {
        const MartingaleReport& m = *summary.martingale;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const MartingaleRow& row : m.rows) {
            rows.push_back({{"t", row.t},
                            {"T", row.T},
                            {"estimate", row.estimate},
                            {"se", row.std_error},
                            {"ratio", row.ratio},
                            {"z", row.z},
                            {"pass", row.pass}});
        }
        j["martingale"] = {{"rows", rows},
                           {"max_abs_ratio_error", m.max_abs_ratio_error},
                           {"max_abs_z", m.max_abs_z},
                           {"min_effective_n", m.min_effective_n},
                           {"underpowered", m.underpowered},
                           {"drift_exceeds_5pct", m.drift_exceeds_5pct},
                           {"passed", m.passed}};
    }
    if (summary.sheet_law != nullptr) {
        const SheetLawReport& s = *summary.sheet_law;
        j["sheet_law"] = {{"rows", probe_rows_json(s.rows)},
                          {"max_abs_z", s.max_abs_z},
                          {"n_exceeding", s.n_exceeding},
                          {"bonferroni_expected", s.bonferroni_expected},
                          {"min_effective_n", s.min_effective_n},
                          {"underpowered", s.underpowered},
                          {"passed", s.passed}};
    }
    if (summary.mean_one != nullptr) {
        const MeanOneReport& m = *summary.mean_one;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const MeanOneRow& row : m.rows) {
            rows.push_back({{"t", row.t},
                            {"estimate", row.estimate},
                            {"se", row.std_error},
                            {"z", row.z}});
        }
        j["mean_one"] = {{"rows", rows}, {"max_abs_z", m.max_abs_z}, {"passed", m.passed}};
    }
    j["passed"] = summary.passed;
    return j.dump(2) + "\n";
}

}  // namespace rfts
