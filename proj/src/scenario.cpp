#include "rfts/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "rfts/ensemble.hpp"
#include "rfts/field.hpp"
#include "rfts/io.hpp"
#include "rfts/measure.hpp"
#include "rfts/mpr.hpp"
#include "rfts/stats.hpp"

namespace rfts {

namespace {

const std::set<std::string> kKnownKeys = {
    "grid.horizon_years",     "grid.time_steps",        "grid.maturity_cells",
    "grid.min_maturity_years","field.kind",             "field.warp",
    "field.warp_power",       "field.warp_table",       "eta.kind",
    "eta.value_per_year",     "eta.values_file",        "market.sigma_per_sqrt_year",
    "market.short_rate_per_year", "market.initial_curve", "market.initial_curve_file",
    "run.name",               "run.paths",              "run.seed",
    "run.workers",            "run.checkpoints_years",  "run.maturities_years",
    "run.probes",
};

struct RawConfig {
    std::map<std::string, std::string> values;
    std::string base_dir;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    std::string require(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) {
            throw ConfigError(key, "required key is missing");
        }
        return it->second;
    }

    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "'" + text + "' is not a finite number");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "'" + text + "' is not a nonnegative integer");
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string current;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!current.empty()) {
                items.push_back(current);
                current.clear();
            }
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        items.push_back(current);
    }
    return items;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : split_list(text)) {
        out.push_back(to_double(key, item));
    }
    return out;
}

RawConfig parse_raw(const std::string& text, const std::string& base_dir) {
    RawConfig raw;
    raw.base_dir = base_dir;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no),
                                  "malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("line " + std::to_string(line_no), "empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no),
                              "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no), "empty key");
        }
        if (section.empty()) {
            throw ConfigError(key, "key appears before any [section]");
        }
        const std::string full = section + "." + key;
        if (kKnownKeys.count(full) == 0) {
            throw ConfigError(full, "unknown key");
        }
        raw.values[full] = value;
    }
    return raw;
}

std::vector<double> read_numbers_file(const std::string& key, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(key, "cannot open file '" + path + "'");
    }
    std::vector<double> numbers;
    std::string token;
    std::string line;
    while (std::getline(in, line)) {
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        for (const std::string& item : split_list(line)) {
            numbers.push_back(to_double(key, item));
        }
    }
    return numbers;
}

Surface read_cell_table(const std::string& key, const std::string& path,
                        std::size_t rows, std::size_t cols) {
    const std::vector<double> numbers = read_numbers_file(key, path);
    if (numbers.size() != rows * cols) {
        throw ConfigError(key, "file '" + path + "' holds " + std::to_string(numbers.size()) +
                                   " values, expected " + std::to_string(rows) + "x" +
                                   std::to_string(cols));
    }
    Surface table(rows, cols);
    table.data() = numbers;
    return table;
}

std::string resolve_path(const RawConfig& raw, const std::string& file) {
    std::filesystem::path p(file);
    if (p.is_absolute() || raw.base_dir.empty()) {
        return file;
    }
    return (std::filesystem::path(raw.base_dir) / p).string();
}

FieldKind parse_field_kind(const RawConfig& raw) {
    const std::string kind = raw.get("field.kind", "normalized");
    if (kind == "normalized") {
        return FieldKind::normalized();
    }
    if (kind != "scaled") {
        throw ConfigError("field.kind", "'" + kind + "' is not normalized|scaled");
    }
    const std::string warp = raw.require("field.warp");
    if (warp == "sqrt") {
        return FieldKind::scaled(sqrt_warp());
    }
    if (warp == "linear") {
        return FieldKind::scaled(linear_warp());
    }
    if (warp == "power") {
        const double p = to_double("field.warp_power", raw.require("field.warp_power"));
        if (!(p > 0.0)) {
            throw ConfigError("field.warp_power", "must be positive");
        }
        return FieldKind::scaled(power_warp(p));
    }
    if (warp == "table") {
        std::vector<std::pair<double, double>> knots;
        for (const std::string& item : split_list(raw.require("field.warp_table"))) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw ConfigError("field.warp_table", "expected u:h, got '" + item + "'");
            }
            knots.emplace_back(to_double("field.warp_table", item.substr(0, colon)),
                               to_double("field.warp_table", item.substr(colon + 1)));
        }
        try {
            return FieldKind::scaled(table_warp(std::move(knots)));
        } catch (const std::invalid_argument& err) {
            throw ConfigError("field.warp_table", err.what());
        }
    }
    throw ConfigError("field.warp", "'" + warp + "' is not sqrt|linear|power|table");
}

EtaSpec parse_eta(const RawConfig& raw, const GridSpec& grid) {
    const std::string kind = raw.require("eta.kind");
    if (kind == "zero") {
        return EtaSpec::zero();
    }
    if (kind == "constant") {
        return EtaSpec::constant(
            to_double("eta.value_per_year", raw.require("eta.value_per_year")));
    }
    if (kind == "piecewise_constant") {
        const std::string file = resolve_path(raw, raw.require("eta.values_file"));
        return EtaSpec::piecewise_constant(
            read_cell_table("eta.values_file", file, grid.n_time(), grid.n_maturity()));
    }
    throw ConfigError("eta.kind", "'" + kind + "' is not zero|constant|piecewise_constant");
}

std::string canonical_text(const Scenario& s) {
    std::string out;
    out += "grid.horizon_years = " + format_double(s.grid.horizon()) + "\n";
    out += "grid.time_steps = " + std::to_string(s.grid.n_time()) + "\n";
    out += "grid.maturity_cells = " + std::to_string(s.grid.n_maturity()) + "\n";
    out += "grid.min_maturity_years = " + format_double(s.grid.u_min()) + "\n";
    out += "field.kind = " + s.kind.name() + "\n";
    out += "eta.kind = " + s.eta.kind_name() + "\n";
    out += "market.sigma_per_sqrt_year = " + format_double(s.sigma_per_sqrt_year) + "\n";
    out += "market.short_rate_per_year = " + format_double(s.short_rate_per_year) + "\n";
    std::string curve = "flat";
    if (!s.initial_curve.empty()) {
        std::string values;
        for (double v : s.initial_curve) {
            values += format_double(v) + ",";
        }
        curve = "values:" + fnv1a64_hex(values);
    }
    out += "market.initial_curve = " + curve + "\n";
    out += "run.paths = " + std::to_string(s.n_paths) + "\n";
    out += "run.seed = " + std::to_string(s.seed) + "\n";
    auto list = [](const std::vector<double>& xs) {
        std::string text;
        for (double x : xs) {
            text += format_double(x) + ",";
        }
        return text;
    };
    out += "run.checkpoints_years = " + list(s.checkpoints_years) + "\n";
    out += "run.maturities_years = " + list(s.maturities_years) + "\n";
    std::string probes;
    for (const auto& p : s.probes) {
        probes += format_double(p[0]) + ":" + format_double(p[1]) + ":" +
                  format_double(p[2]) + ":" + format_double(p[3]) + ",";
    }
    out += "run.probes = " + probes + "\n";
    return out;
}

Scenario build_scenario(const RawConfig& raw) {
    const double horizon = to_double("grid.horizon_years", raw.require("grid.horizon_years"));
    const std::uint64_t steps = to_u64("grid.time_steps", raw.require("grid.time_steps"));
    const std::uint64_t cells =
        to_u64("grid.maturity_cells", raw.require("grid.maturity_cells"));
    double u_min = horizon / static_cast<double>(std::max<std::uint64_t>(cells, 1));
    if (raw.has("grid.min_maturity_years")) {
        u_min = to_double("grid.min_maturity_years", raw.require("grid.min_maturity_years"));
    }
    GridSpec grid = [&] {
        try {
            return GridSpec(horizon, steps, cells, u_min);
        } catch (const std::invalid_argument& err) {
            throw ConfigError("grid", err.what());
        }
    }();

    FieldKind kind = parse_field_kind(raw);
    try {
        validate_warp_on_grid(kind.warp, grid);
    } catch (const std::invalid_argument& err) {
        throw ConfigError("field.warp", err.what());
    }
    EtaSpec eta = parse_eta(raw, grid);

    Scenario scenario(std::move(grid), std::move(kind), std::move(eta));
    scenario.name = raw.get("run.name", "scenario");
    scenario.sigma_per_sqrt_year = to_double("market.sigma_per_sqrt_year",
                                             raw.get("market.sigma_per_sqrt_year", "0.2"));
    scenario.short_rate_per_year = to_double("market.short_rate_per_year",
                                             raw.get("market.short_rate_per_year", "0.0"));
    if (!std::isfinite(scenario.sigma_per_sqrt_year)) {
        throw ConfigError("market.sigma_per_sqrt_year", "must be finite");
    }
    if (scenario.short_rate_per_year < 0.0) {
        throw ConfigError("market.short_rate_per_year", "must be nonnegative");
    }

    const std::string curve_kind = raw.get("market.initial_curve", "flat");
    if (curve_kind == "file") {
        const std::string file =
            resolve_path(raw, raw.require("market.initial_curve_file"));
        scenario.initial_curve = read_numbers_file("market.initial_curve_file", file);
    } else if (curve_kind != "flat") {
        throw ConfigError("market.initial_curve", "'" + curve_kind + "' is not flat|file");
    }

    const std::uint64_t paths = to_u64("run.paths", raw.get("run.paths", "1000"));
    if (paths < 1) {
        throw ConfigError("run.paths", "n_paths must be at least 1");
    }
    scenario.n_paths = paths;
    scenario.seed = to_u64("run.seed", raw.get("run.seed", "1"));
    scenario.workers =
        static_cast<int>(to_u64("run.workers", raw.get("run.workers", "0")));

    scenario.checkpoints_years = raw.has("run.checkpoints_years")
                                     ? to_doubles("run.checkpoints_years",
                                                  raw.require("run.checkpoints_years"))
                                     : std::vector<double>{scenario.grid.horizon()};
    scenario.maturities_years = raw.has("run.maturities_years")
                                    ? to_doubles("run.maturities_years",
                                                 raw.require("run.maturities_years"))
                                    : std::vector<double>{scenario.grid.horizon()};
    std::sort(scenario.checkpoints_years.begin(), scenario.checkpoints_years.end());
    scenario.checkpoints_years.erase(std::unique(scenario.checkpoints_years.begin(),
                                                 scenario.checkpoints_years.end()),
                                     scenario.checkpoints_years.end());
    std::sort(scenario.maturities_years.begin(), scenario.maturities_years.end());
    scenario.maturities_years.erase(std::unique(scenario.maturities_years.begin(),
                                                scenario.maturities_years.end()),
                                    scenario.maturities_years.end());

    if (raw.has("run.probes")) {
        for (const std::string& item : split_list(raw.require("run.probes"))) {
            std::array<double, 4> probe{};
            std::size_t part = 0;
            std::string token;
            std::istringstream stream(item);
            while (std::getline(stream, token, ':')) {
                if (part >= 4) {
                    break;
                }
                probe[part++] = to_double("run.probes", token);
            }
            if (part != 4) {
                throw ConfigError("run.probes", "expected t1:T1:t2:T2, got '" + item + "'");
            }
            scenario.probes.push_back(probe);
        }
    }

    // Snap-to-node validation with errors naming the key.
    auto snap_all = [&](const std::vector<double>& xs, bool is_time, const char* key) {
        for (double x : xs) {
            try {
                if (is_time) {
                    scenario.grid.time_row_at(x);
                } else {
                    scenario.grid.maturity_col_at(x);
                }
            } catch (const std::invalid_argument& err) {
                throw ConfigError(key, err.what());
            }
        }
    };
    snap_all(scenario.checkpoints_years, true, "run.checkpoints_years");
    snap_all(scenario.maturities_years, false, "run.maturities_years");
    for (const auto& probe : scenario.probes) {
        snap_all({probe[0], probe[2]}, true, "run.probes");
        snap_all({probe[1], probe[3]}, false, "run.probes");
    }

    try {
        resolve_initial_curve(scenario.market(), scenario.grid);
    } catch (const std::invalid_argument& err) {
        throw ConfigError("market.initial_curve_file", err.what());
    }

    scenario.canonical_config = canonical_text(scenario);
    scenario.config_hash = fnv1a64_hex(scenario.canonical_config);
    return scenario;
}

// Manifests list file names, not paths, so identical runs into different
// directories stay byte-identical.
std::vector<std::string> output_names(const std::vector<std::string>& files) {
    std::vector<std::string> names;
    names.reserve(files.size());
    for (const std::string& file : files) {
        names.push_back(std::filesystem::path(file).filename().string());
    }
    return names;
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content, std::vector<std::string>& files) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path full = dir / name;
    std::ofstream out(full, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + full.string());
    }
    out << content;
    files.push_back(full.string());
}

EnsembleInputs base_inputs(const Scenario& scenario) {
    EnsembleInputs inputs{scenario.grid, scenario.kind, scenario.eta};
    inputs.n_paths = scenario.n_paths;
    inputs.seed = scenario.seed;
    inputs.workers = scenario.workers;
    inputs.checkpoint_times = scenario.checkpoints_years;
    inputs.maturity_times = scenario.maturities_years;
    return inputs;
}

std::vector<std::array<double, 4>> default_probes(const Scenario& scenario) {
    std::vector<std::array<double, 4>> probes;
    const double t0 = scenario.grid.horizon();
    for (double T : scenario.maturities_years) {
        probes.push_back({t0, T, t0, T});
    }
    if (scenario.maturities_years.size() >= 2) {
        probes.push_back({t0, scenario.maturities_years.front(), t0,
                          scenario.maturities_years.back()});
    }
    return probes;
}

}  // namespace

MarketParams Scenario::market() const {
    MarketParams params = MarketParams::constants(sigma_per_sqrt_year, short_rate_per_year);
    params.initial_curve = initial_curve;
    return params;
}

Scenario parse_scenario_text(const std::string& text) {
    return build_scenario(parse_raw(text, ""));
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return build_scenario(
        parse_raw(buffer.str(), std::filesystem::path(path).parent_path().string()));
}

RunResult run_simulate(const Scenario& scenario, const std::string& out_dir,
                       bool dump_paths) {
    EnsembleInputs inputs = base_inputs(scenario);
    inputs.market = scenario.market();
    inputs.with_weights = true;
    const EnsembleData data = run_ensemble(inputs);
    const std::vector<double> curve =
        resolve_initial_curve(*inputs.market, scenario.grid);

    std::vector<BondSummaryRow> rows;
    std::vector<double> values(data.n_paths), weighted(data.n_paths), logw(data.n_paths);
    for (std::size_t c = 0; c < data.checkpoint_rows.size(); ++c) {
        for (std::size_t path = 0; path < data.n_paths; ++path) {
            logw[path] = data.log_weight[data.weight_index(path, c)];
        }
        for (std::size_t m = 0; m < data.maturity_cols.size(); ++m) {
            for (std::size_t path = 0; path < data.n_paths; ++path) {
                values[path] = data.discounted[data.discounted_index(path, c, m)];
                weighted[path] = values[path] * std::exp(logw[path]);
            }
            BondSummaryRow row;
            row.t = data.checkpoint_times[c];
            row.T = data.maturity_times[m];
            row.unweighted = sample_mean(values);
            row.weighted = sample_mean(weighted);
            const double p0 = curve.at(data.maturity_cols[m]);
            row.unweighted_ratio = row.unweighted.mean / p0;
            row.weighted_ratio = row.weighted.mean / p0;
            row.weighted_z = row.weighted.std_error > 0
                                 ? (row.weighted.mean - p0) / row.weighted.std_error
                                 : 0.0;
            double sw = 0.0, sww = 0.0;
            for (std::size_t path = 0; path < data.n_paths; ++path) {
                const double w = std::exp(logw[path]);
                sw += w;
                sww += w * w;
            }
            row.weighted.effective_n = sww > 0 ? sw * sw / sww : 0.0;
            rows.push_back(row);
        }
    }

    RunResult result;
    const std::filesystem::path dir(out_dir);
    write_file(dir, "bond_summary.csv", bond_summary_csv(rows), result.files);
    if (dump_paths) {
        std::string dump = "path,maturity_years,discounted,log_weight\n";
        const std::size_t last = data.checkpoint_rows.size() - 1;
        for (std::size_t path = 0; path < data.n_paths; ++path) {
            for (std::size_t m = 0; m < data.maturity_cols.size(); ++m) {
                dump += std::to_string(path) + "," +
                        format_double(data.maturity_times[m]) + "," +
                        format_double(data.discounted[data.discounted_index(path, last, m)]) +
                        "," + format_double(data.log_weight[data.weight_index(path, last)]) +
                        "\n";
            }
        }
        write_file(dir, "paths.csv", dump, result.files);
    }

    ManifestInfo manifest;
    manifest.command = "simulate";
    manifest.config_hash = scenario.config_hash.empty()
                               ? fnv1a64_hex(canonical_text(scenario))
                               : scenario.config_hash;
    manifest.seed = scenario.seed;
    manifest.paths = scenario.n_paths;
    manifest.outputs = output_names(result.files);
    write_file(dir, "manifest.json", manifest_json(manifest), result.files);

    std::cout << "simulate: " << scenario.name << ", " << scenario.n_paths << " paths, "
              << rows.size() << " checkpoint x maturity cells -> " << out_dir << "\n";
    result.exit_code = 0;
    return result;
}

RunResult run_verify(const Scenario& scenario, const std::string& out_dir,
                     bool negative_control) {
    EnsembleInputs inputs = base_inputs(scenario);
    inputs.market = scenario.market();
    inputs.with_weights = true;
    inputs.probes_on_shifted_field = true;
    inputs.probes = scenario.probes.empty() ? default_probes(scenario) : scenario.probes;
    // The sheet-law test weights with the full-square density, so the last
    // checkpoint must sit at the horizon.
    if (inputs.checkpoint_times.empty() ||
        inputs.checkpoint_times.back() < scenario.grid.horizon()) {
        inputs.checkpoint_times.push_back(scenario.grid.horizon());
    }
    const EnsembleData data = run_ensemble(inputs);
    const std::vector<double> curve =
        resolve_initial_curve(*inputs.market, scenario.grid);

    MartingaleOptions options;
    options.use_weights = !negative_control;
    const MartingaleReport martingale = risk_neutral_check(data, curve, options);
    const SheetLawReport sheet_law = weighted_sheet_test(data, scenario.kind);
    const MeanOneReport mean_one = mean_one_check(data);

    VerifySummary summary;
    summary.negative_control = negative_control;
    summary.negative_control_detected = negative_control && martingale.drift_exceeds_5pct;
    summary.martingale = &martingale;
    summary.sheet_law = &sheet_law;
    summary.mean_one = &mean_one;
    summary.passed = sheet_law.passed && mean_one.passed &&
                     (negative_control ? summary.negative_control_detected
                                       : martingale.passed);

    RunResult result;
    const std::filesystem::path dir(out_dir);
    write_file(dir, "martingale.csv", martingale_csv(martingale), result.files);
    write_file(dir, "sheet_law.csv", sheet_law_csv(sheet_law), result.files);
    write_file(dir, "mean_one.csv", mean_one_csv(mean_one), result.files);
    write_file(dir, "verify_report.json", verify_report_json(summary), result.files);

    ManifestInfo manifest;
    manifest.command = "verify";
    manifest.config_hash = scenario.config_hash;
    manifest.seed = scenario.seed;
    manifest.paths = scenario.n_paths;
    manifest.outputs = output_names(result.files);
    write_file(dir, "manifest.json", manifest_json(manifest), result.files);

    char line[160];
    std::snprintf(line, sizeof(line),
                  "martingale : max |ratio-1| = %.5f, max |z| = %.2f%s%s\n",
                  martingale.max_abs_ratio_error, martingale.max_abs_z,
                  negative_control ? "" : (martingale.passed ? "  [pass]" : "  [FAIL]"),
                  martingale.underpowered ? "  (underpowered)" : "");
    std::cout << "verify: " << scenario.name << ", " << scenario.n_paths << " paths\n"
              << line;
    if (negative_control) {
        std::cout << "negative control: unweighted drift "
                  << (summary.negative_control_detected ? "> 5% detected as expected  [pass]"
                                                        : "not detected  [FAIL]")
                  << "\n";
    }
    std::snprintf(line, sizeof(line), "sheet law  : max |z| = %.2f over %zu probes%s\n",
                  sheet_law.max_abs_z, sheet_law.rows.size(),
                  sheet_law.passed ? "  [pass]" : "  [FAIL]");
    std::cout << line;
    std::snprintf(line, sizeof(line), "mean one   : max |z| = %.2f%s\n", mean_one.max_abs_z,
                  mean_one.passed ? "  [pass]" : "  [FAIL]");
    std::cout << line;
    std::cout << (summary.passed ? "verification passed\n" : "verification FAILED\n");

    result.exit_code = summary.passed ? 0 : 1;
    return result;
}

RunResult run_conditions(const Scenario& scenario, const std::string& out_dir) {
    const ConditionReport report =
        evaluate_conditions(scenario.eta, scenario.grid, scenario.kind);
    RunResult result;
    const std::filesystem::path dir(out_dir);
    const std::string json = conditions_json(report, scenario.grid,
                                             scenario.eta.kind_name(), scenario.kind.name());
    write_file(dir, "conditions.json", json, result.files);

    ManifestInfo manifest;
    manifest.command = "conditions";
    manifest.config_hash = scenario.config_hash;
    manifest.seed = scenario.seed;
    manifest.paths = scenario.n_paths;
    manifest.outputs = output_names(result.files);
    write_file(dir, "manifest.json", manifest_json(manifest), result.files);

    std::cout << json;
    result.exit_code = 0;
    return result;
}

RunResult run_covariance(const Scenario& scenario, const std::string& out_dir) {
    EnsembleInputs inputs = base_inputs(scenario);
    inputs.with_weights = false;
    inputs.checkpoint_times.clear();
    inputs.maturity_times.clear();
    inputs.probes = scenario.probes.empty() ? default_probes(scenario) : scenario.probes;
    const EnsembleData data = run_ensemble(inputs);
    const CovarianceReport report = field_covariance_check(data, scenario.kind);

    RunResult result;
    const std::filesystem::path dir(out_dir);
    write_file(dir, "covariance.csv", covariance_csv(report), result.files);

    ManifestInfo manifest;
    manifest.command = "covariance";
    manifest.config_hash = scenario.config_hash;
    manifest.seed = scenario.seed;
    manifest.paths = scenario.n_paths;
    manifest.outputs = output_names(result.files);
    write_file(dir, "manifest.json", manifest_json(manifest), result.files);

    char line[160];
    std::snprintf(line, sizeof(line),
                  "covariance : max |z| = %.2f over %zu probes (%zu above 3, %.2f expected)%s\n",
                  report.max_abs_z, report.rows.size(), report.n_exceeding,
                  report.bonferroni_expected, report.passed ? "  [pass]" : "  [FAIL]");
    std::cout << "covariance: " << scenario.name << ", " << scenario.n_paths << " paths\n"
              << line;

    result.exit_code = report.passed ? 0 : 1;
    return result;
}

}  // namespace rfts
