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

#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "swapforge/classifier.hpp"
#include "swapforge/error.hpp"
#include "swapforge/io.hpp"
#include "swapforge/scenario.hpp"
#include "swapforge/verification.hpp"

namespace swapforge::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInputError = 2, kIoError = 3 };

/// Writes `error_code=<name>` and the message to `err`, returns the exit code.
inline int report_failure(std::ostream &err, const std::string &name, const std::string &message,
                          int code) {
    err << "error_code=" << name << '\n' << "error: " << message << '\n';
    return code;
}

/// Runs `body`, mapping library errors to exit codes: IO errors give 3,
/// every other error gives 2.
inline int guarded(std::ostream &err, const std::function<int()> &body) {
    try {
        return body();
    } catch (const Error &e) {
        return report_failure(err, std::string(to_string(e.code())), e.what(),
                              e.code() == ErrorCode::IO ? kIoError : kInputError);
    } catch (const std::exception &e) {
        return report_failure(err, "Internal", e.what(), kInputError);
    }
}

inline void emit(const std::optional<std::filesystem::path> &target, const std::string &text,
                 std::ostream &out) {
    if (target) {
        io::write_text_file(*target, text);
    } else {
        out << text;
    }
}

/// Single pass over the configured rounds. The report goes to
/// outputs.report_path when set, otherwise to `out`.
inline int cmd_run(const std::filesystem::path &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto cfg = load_config(config);
        const auto scenario = build_scenario(cfg);
        const auto result = chain(scenario, cfg.tolerances);
        const auto text = io::to_text(run_report(cfg, scenario, result));
        std::optional<std::filesystem::path> target;
        if (cfg.report_path) target = cfg.resolve(*cfg.report_path);
        emit(target, text, out);
        return int(kOk);
    });
}

/// Grid sweep. CSV goes to outputs.csv_path when set, otherwise to `out`.
inline int cmd_sweep(const std::filesystem::path &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto cfg = load_config(config);
        if (!cfg.sweep) fail(ErrorCode::ConfigParse, "configuration has no sweep block");
        const auto csv = sweep_csv(run_sweep(cfg, thread_count_from_env()));
        std::optional<std::filesystem::path> target;
        if (cfg.csv_path) target = cfg.resolve(*cfg.csv_path);
        emit(target, csv, out);
        return int(kOk);
    });
}

inline int cmd_classify(const std::filesystem::path &povm_file, std::ostream &out,
                        std::ostream &err, const Tolerances &tol = {}) {
    return guarded(err, [&] {
        const auto povm = io::load_povm(povm_file, tol);
        out << io::to_text(io::classification_json(classify_measurement(povm, tol)));
        return int(kOk);
    });
}

/// Parses "key=value" overrides onto the default tolerances.
inline Tolerances tolerances_with(const std::vector<std::string> &overrides) {
    Tolerances tol;
    for (const auto &o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) {
            fail(ErrorCode::BadParameter, "tolerance override '" + o + "' is not key=value");
        }
        const std::string key = o.substr(0, eq);
        const std::string raw = o.substr(eq + 1);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(raw, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != raw.size()) {
            fail(ErrorCode::BadParameter, "tolerance override '" + o + "' has no numeric value");
        }
        apply_tolerance_override(tol, key, value, ErrorCode::BadParameter);
    }
    return tol;
}

inline int cmd_verify(const std::vector<std::string> &overrides,
                      const std::vector<std::string> &skip, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto results = verify::run_all(tolerances_with(overrides), skip);
        out << verify::table(results);
        if (!verify::all_passed(results)) {
            return report_failure(err, "VerificationFailed", "one or more criteria failed",
                                  kVerificationFailed);
        }
        return int(kOk);
    });
}

} // namespace swapforge::cli
