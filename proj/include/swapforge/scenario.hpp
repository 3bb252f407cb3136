// Copyright 2026 The swapforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario configuration, single runs and parameter sweeps.
//
// A configuration is a JSON document:
//
//     {
//       "local_dim": 2,
//       "rounds": [
//         {"family": "noisy_bell", "lambda": 0.8},
//         {"family": "wire2_computational"}
//       ],
//       "branch_policy": "all",              // or {"select": [1, 2]}
//       "sweep": {"param": "lambda", "start": 0, "stop": 1, "steps": 21},
//       "outputs": {"csv_path": "sweep.csv", "report_path": "run.json"},
//       "tolerance_overrides": {"ppt_tol": 1e-10}
//     }
//
// Families: noisy_bell{lambda}, bell_projective{}, wire2_computational{},
// separable_product{elements: [{a: {theta, phi, tau1, tau2}, b: {...}}, ...]},
// file{path}. Relative paths resolve against the configuration's directory.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "swapforge/classifier.hpp"
#include "swapforge/error.hpp"
#include "swapforge/families.hpp"
#include "swapforge/io.hpp"
#include "swapforge/swap_engine.hpp"
#include "swapforge/tolerances.hpp"

namespace swapforge {

/// Sets one named field of `tol`. Unknown names and negative or non-finite
/// values raise `code`.
inline void apply_tolerance_override(Tolerances &tol, const std::string &key, double value,
                                     ErrorCode code = ErrorCode::ConfigParse) {
    if (!std::isfinite(value) || value < 0.0) {
        fail(code, "tolerance " + key + " must be a finite nonnegative number");
    }
    struct Field {
        const char *name;
        double Tolerances::*member;
    };
    static constexpr Field fields[] = {
        {"herm_tol", &Tolerances::herm_tol},
        {"psd_tol", &Tolerances::psd_tol},
        {"rank_rel_tol", &Tolerances::rank_rel_tol},
        {"ppt_tol", &Tolerances::ppt_tol},
        {"insep_tol", &Tolerances::insep_tol},
        {"prob_tol", &Tolerances::prob_tol},
        {"completeness_tol", &Tolerances::completeness_tol},
        {"branch_sum_tol", &Tolerances::branch_sum_tol},
    };
    for (const auto &f : fields) {
        if (key == f.name) {
            tol.*(f.member) = value;
            return;
        }
    }
    fail(code, "unknown tolerance '" + key + "'");
}

struct SweepSpec {
    std::string param;
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 2;

    /// Grid point k; the last point is exactly `stop`.
    double value(std::size_t k) const {
        if (k + 1 == steps) return stop;
        return start + (stop - start) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
};

struct ScenarioConfig {
    std::size_t local_dim = 2;
    io::Json rounds = io::Json::array(); // family specs as written
    BranchPolicy branch_policy;
    std::optional<SweepSpec> sweep;
    std::optional<std::filesystem::path> csv_path;
    std::optional<std::filesystem::path> report_path;
    Tolerances tolerances;
    std::filesystem::path base_dir = ".";

    std::filesystem::path resolve(const std::filesystem::path &p) const {
        return p.is_absolute() ? p : base_dir / p;
    }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string &what) {
    fail(ErrorCode::ConfigParse, what);
}

inline double number_field(const io::Json &j, const char *key, const std::string &where) {
    if (!j.contains(key)) config_error(where + ": missing '" + key + "'");
    if (!j[key].is_number()) config_error(where + ": '" + key + "' must be a number");
    return j[key].get<double>();
}

inline SingleQubitElementParams qubit_params(const io::Json &j, const std::string &where) {
    if (!j.is_object()) config_error(where + ": expected {theta, phi, tau1, tau2}");
    return {number_field(j, "theta", where), number_field(j, "phi", where),
            number_field(j, "tau1", where), number_field(j, "tau2", where)};
}

inline const std::vector<std::string> &known_families() {
    static const std::vector<std::string> names{"noisy_bell", "bell_projective",
                                                "wire2_computational", "separable_product",
                                                "file"};
    return names;
}

} // namespace detail

inline ScenarioConfig parse_config(const io::Json &j,
                                   const std::filesystem::path &base_dir = ".") {
    using detail::config_error;
    if (!j.is_object()) config_error("configuration must be an object");
    ScenarioConfig c;
    c.base_dir = base_dir;
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::vector<std::string> keys{"local_dim", "rounds", "branch_policy",
                                                   "sweep", "outputs", "tolerance_overrides"};
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
            config_error("unknown key '" + it.key() + "'");
        }
    }
    if (j.contains("local_dim")) {
        if (!j["local_dim"].is_number_integer() || j["local_dim"].get<long long>() < 2) {
            config_error("local_dim must be an integer >= 2");
        }
        c.local_dim = j["local_dim"].get<std::size_t>();
    }
    if (!j.contains("rounds") || !j["rounds"].is_array() || j["rounds"].empty()) {
        config_error("rounds must be a nonempty list");
    }
    for (std::size_t r = 0; r < j["rounds"].size(); ++r) {
        const auto &spec = j["rounds"][r];
        const std::string where = "round " + std::to_string(r + 1);
        if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string()) {
            config_error(where + ": expected an object with a 'family' name");
        }
        const auto family = spec["family"].get<std::string>();
        const auto &known = detail::known_families();
        if (std::find(known.begin(), known.end(), family) == known.end()) {
            config_error(where + ": unknown family '" + family + "'");
        }
        if (family != "file" && c.local_dim != 2) {
            config_error(where + ": family '" + family + "' is defined for local_dim 2 only");
        }
    }
    c.rounds = j["rounds"];

    if (j.contains("branch_policy")) {
        const auto &bp = j["branch_policy"];
        if (bp.is_string() && bp.get<std::string>() == "all") {
            c.branch_policy = BranchPolicy::all();
        } else if (bp.is_object() && bp.contains("select") && bp["select"].is_array()) {
            std::vector<std::size_t> idx;
            for (const auto &v : bp["select"]) {
                if (!v.is_number_integer() || v.get<long long>() < 1) {
                    config_error("branch_policy.select entries are 1-based outcome numbers");
                }
                idx.push_back(v.get<std::size_t>() - 1);
            }
            c.branch_policy = BranchPolicy::outcomes(std::move(idx));
        } else {
            config_error("branch_policy must be \"all\" or {\"select\": [...]}");
        }
    }

    if (j.contains("sweep")) {
        const auto &s = j["sweep"];
        if (!s.is_object()) config_error("sweep must be an object");
        if (!s.contains("param") || !s["param"].is_string()) {
            config_error("sweep.param must name a round parameter");
        }
        SweepSpec sw;
        sw.param = s["param"].get<std::string>();
        sw.start = detail::number_field(s, "start", "sweep");
        sw.stop = detail::number_field(s, "stop", "sweep");
        if (!s.contains("steps") || !s["steps"].is_number_integer() ||
            s["steps"].get<long long>() < 2) {
            config_error("sweep.steps must be an integer >= 2");
        }
        sw.steps = s["steps"].get<std::size_t>();
        if (!(sw.start <= sw.stop)) config_error("sweep.start must not exceed sweep.stop");
        std::size_t holders = 0;
        for (const auto &spec : c.rounds) {
            if (sw.param != "family" && spec.contains(sw.param) && spec[sw.param].is_number()) {
                ++holders;
            }
        }
        if (holders != 1) {
            config_error("sweep parameter '" + sw.param + "' must appear in exactly one round (found " +
                         std::to_string(holders) + ")");
        }
        c.sweep = sw;
    }

    if (j.contains("outputs")) {
        const auto &o = j["outputs"];
        if (!o.is_object()) config_error("outputs must be an object");
        for (auto it = o.begin(); it != o.end(); ++it) {
            if (!it.value().is_string()) config_error("outputs." + it.key() + " must be a path");
            if (it.key() == "csv_path") {
                c.csv_path = it.value().get<std::string>();
            } else if (it.key() == "report_path") {
                c.report_path = it.value().get<std::string>();
            } else {
                config_error("unknown output '" + it.key() + "'");
            }
        }
    }

    if (j.contains("tolerance_overrides")) {
        const auto &t = j["tolerance_overrides"];
        if (!t.is_object()) config_error("tolerance_overrides must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!it.value().is_number()) config_error("tolerance " + it.key() + " must be a number");
            apply_tolerance_override(c.tolerances, it.key(), it.value().get<double>());
        }
    }
    return c;
}

inline ScenarioConfig parse_config_text(const std::string &text,
                                        const std::filesystem::path &base_dir = ".") {
    io::Json j;
    try {
        j = io::Json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const io::Json::parse_error &e) {
        fail(ErrorCode::ConfigParse, e.what());
    }
    return parse_config(j, base_dir);
}

inline ScenarioConfig load_config(const std::filesystem::path &path) {
    return parse_config_text(io::read_text_file(path), path.parent_path().empty()
                                                           ? std::filesystem::path(".")
                                                           : path.parent_path());
}

/// Builds round r's measurement, with `param` replaced by `value` when given.
inline Povm build_round(const ScenarioConfig &c, std::size_t r,
                        const std::optional<std::pair<std::string, double>> &param = {}) {
    io::Json spec = c.rounds.at(r);
    if (param && spec.contains(param->first)) spec[param->first] = param->second;
    const std::string where = "round " + std::to_string(r + 1);
    const auto family = spec["family"].get<std::string>();
    if (family == "noisy_bell") {
        return noisy_bell_povm(detail::number_field(spec, "lambda", where));
    }
    if (family == "bell_projective") return bell_projective();
    if (family == "wire2_computational") return wire2_computational_povm();
    if (family == "separable_product") {
        if (!spec.contains("elements") || !spec["elements"].is_array()) {
            detail::config_error(where + ": separable_product needs 'elements'");
        }
        std::vector<ProductElementParams> ps;
        for (std::size_t k = 0; k < spec["elements"].size(); ++k) {
            const auto &e = spec["elements"][k];
            const std::string w = where + " element " + std::to_string(k + 1);
            if (!e.is_object() || !e.contains("a") || !e.contains("b")) {
                detail::config_error(w + ": expected {a: {...}, b: {...}}");
            }
            ps.push_back({detail::qubit_params(e["a"], w + ".a"),
                          detail::qubit_params(e["b"], w + ".b")});
        }
        return separable_product_povm(ps, c.tolerances).povm;
    }
    // file
    if (!spec.contains("path") || !spec["path"].is_string()) {
        detail::config_error(where + ": file family needs 'path'");
    }
    auto f = io::read_povm_file(c.resolve(spec["path"].get<std::string>()));
    if (f.local_dim != c.local_dim) {
        fail(ErrorCode::ShapeMismatch, where + ": file local_dim " + std::to_string(f.local_dim) +
                                           " differs from configuration local_dim " +
                                           std::to_string(c.local_dim));
    }
    return Povm(std::move(f.elements), f.local_dim, c.tolerances);
}

inline SwapScenario build_scenario(const ScenarioConfig &c,
                                   const std::optional<std::pair<std::string, double>> &param = {}) {
    SwapScenario s;
    s.local_dim = c.local_dim;
    s.branch_policy = c.branch_policy;
    for (std::size_t r = 0; r < c.rounds.size(); ++r) s.rounds.push_back(build_round(c, r, param));
    return s;
}

/// Reference curves for noisy_bell(lambda) followed by wire2_computational:
/// (3 lambda - 1)/2 after one round (unclamped) and
/// (lambda - 1 + sqrt(1 - 2 lambda + 5 lambda^2))/2 after two.
struct ReferenceCurves {
    double round1 = std::numeric_limits<double>::quiet_NaN();
    double round2 = std::numeric_limits<double>::quiet_NaN();
};

inline ReferenceCurves reference_curves(const ScenarioConfig &c,
                                        const std::optional<std::pair<std::string, double>> &param = {}) {
    ReferenceCurves out;
    if (c.rounds.empty() || c.rounds[0]["family"] != "noisy_bell") return out;
    io::Json first = c.rounds[0];
    if (param && first.contains(param->first)) first[param->first] = param->second;
    const double l = first["lambda"].get<double>();
    out.round1 = (3.0 * l - 1.0) / 2.0;
    if (c.rounds.size() >= 2 && c.rounds[1]["family"] == "wire2_computational") {
        out.round2 = (l - 1.0 + std::sqrt(1.0 - 2.0 * l + 5.0 * l * l)) / 2.0;
    }
    return out;
}

struct SweepRow {
    double param_value = 0.0;
    double avg_neg_round1 = 0.0;
    double avg_neg_round2 = std::numeric_limits<double>::quiet_NaN();
    double paper_formula_round1 = std::numeric_limits<double>::quiet_NaN();
    double paper_formula_round2 = std::numeric_limits<double>::quiet_NaN();
    double max_branch_negativity = 0.0;
};

inline SweepRow sweep_row(const ScenarioConfig &c, double value) {
    const std::pair<std::string, double> param{c.sweep->param, value};
    const auto result = chain(build_scenario(c, param), c.tolerances);
    SweepRow row;
    row.param_value = value;
    // A selected branch is not a complete sibling set; its averages stay nan.
    if (!c.branch_policy.select) {
        row.avg_neg_round1 = average_negativity(result.levels[0], c.tolerances);
        if (result.levels.size() >= 2) {
            row.avg_neg_round2 = average_negativity(result.levels[1], c.tolerances);
        }
    } else {
        row.avg_neg_round1 = std::numeric_limits<double>::quiet_NaN();
    }
    const auto ref = reference_curves(c, param);
    row.paper_formula_round1 = ref.round1;
    row.paper_formula_round2 = ref.round2;
    for (const auto &level : result.levels) {
        for (const auto &rec : level) {
            row.max_branch_negativity = std::max(row.max_branch_negativity, rec.negativity14);
        }
    }
    return row;
}

/// Worker count from SWAPFORGE_THREADS: unset or 0 means one per hardware
/// thread. BadParameter for anything that is not a nonnegative integer.
inline std::size_t thread_count_from_env() {
    const char *raw = std::getenv("SWAPFORGE_THREADS");
    std::size_t n = 0;
    if (raw && *raw) {
        char *end = nullptr;
        const long long v = std::strtoll(raw, &end, 10);
        if (*end != '\0' || v < 0) {
            fail(ErrorCode::BadParameter,
                 std::string("SWAPFORGE_THREADS must be a nonnegative integer, got '") + raw + "'");
        }
        n = static_cast<std::size_t>(v);
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

/// Evaluates every grid point, `threads` at a time. Rows come back in grid
/// order whatever the thread count; the first error (lowest grid index) is
/// rethrown.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig &c, std::size_t threads) {
    if (!c.sweep) fail(ErrorCode::ConfigParse, "configuration has no sweep block");
    const std::size_t n = c.sweep->steps;
    std::vector<SweepRow> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                rows[k] = sweep_row(c, c.sweep->value(k));
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto &t : pool) t.join();
    for (const auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

inline const char *csv_header() {
    return "param_value,avg_neg_round1,avg_neg_round2,paper_formula_round1,"
           "paper_formula_round2,max_branch_negativity\n";
}

inline std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out = csv_header();
    for (const auto &r : rows) {
        out += io::format_number(r.param_value) + ',' + io::format_number(r.avg_neg_round1) + ',' +
               io::format_number(r.avg_neg_round2) + ',' +
               io::format_number(r.paper_formula_round1) + ',' +
               io::format_number(r.paper_formula_round2) + ',' +
               io::format_number(r.max_branch_negativity) + '\n';
    }
    return out;
}

/// Per-branch report of a single run.
inline io::Json run_report(const ScenarioConfig &c, const SwapScenario &s,
                           const ChainResult &result) {
    io::Json j;
    j["local_dim"] = c.local_dim;
    io::Json rounds = io::Json::array();
    for (std::size_t r = 0; r < s.rounds.size(); ++r) {
        io::Json rj;
        rj["family_spec"] = c.rounds[r];
        rj["classification"] = io::classification_json(classify_measurement(s.rounds[r], c.tolerances));
        rounds.push_back(std::move(rj));
    }
    j["rounds"] = std::move(rounds);

    io::Json levels = io::Json::array();
    for (std::size_t r = 0; r < result.levels.size(); ++r) {
        io::Json lj;
        lj["round"] = r + 1;
        if (!s.branch_policy.select) {
            lj["average_negativity"] = average_negativity(result.levels[r], c.tolerances);
        }
        io::Json branches = io::Json::array();
        for (const auto &rec : result.levels[r]) {
            io::Json b;
            io::Json path = io::Json::array();
            for (auto n : rec.outcome_path) path.push_back(n + 1);
            b["outcome_path"] = std::move(path);
            b["probability"] = rec.probability;
            b["negativity14"] = rec.negativity14;
            b["c14vs23"] = rec.c14vs23;
            b["c12vs34"] = rec.c12vs34;
            const auto &el = s.rounds[r][rec.outcome_path[r]];
            const auto cls = classify_element(el, c.local_dim, c.tolerances);
            b["element_verdict"] = std::string(verdict_name(cls.verdict, c.local_dim));
            b["element_operation"] = std::string(operation_name(cls.operation_kind));
            b["target_pair_entangled"] = !is_ppt(rec.rho14, cuts::pair(), c.tolerances);
            branches.push_back(std::move(b));
        }
        lj["branches"] = std::move(branches);
        levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);

    const auto ref = reference_curves(c);
    if (!std::isnan(ref.round1)) {
        io::Json rj;
        rj["round1"] = ref.round1;
        rj["round2"] = ref.round2;
        j["reference_formulas"] = std::move(rj);
    }
    io::Json skipped = io::Json::array();
    for (const auto &sk : result.skipped) {
        io::Json sj;
        io::Json path = io::Json::array();
        for (auto n : sk.outcome_path) path.push_back(n + 1);
        sj["outcome_path"] = std::move(path);
        sj["probability"] = sk.probability;
        skipped.push_back(std::move(sj));
    }
    j["skipped_branches"] = std::move(skipped);
    return j;
}

} // namespace swapforge
