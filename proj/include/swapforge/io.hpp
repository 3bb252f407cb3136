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

// File formats.
//
// Measurement files are JSON documents
//
//     {"local_dim": 2,
//      "elements": [ [[ [re, im], ... ], ... ], ... ]}
//
// with one row-major D x D matrix (D = local_dim^2) per element. Writers use
// 17 significant digits so that a written file reads back bit-exactly.
// Reports are JSON with numbers at 15 significant digits; non-finite values
// are written as null.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "swapforge/classifier.hpp"
#include "swapforge/error.hpp"
#include "swapforge/states.hpp"
#include "swapforge/tensor.hpp"

namespace swapforge::io {

using Json = nlohmann::ordered_json;

inline constexpr int kReportDigits = 15;
inline constexpr int kPovmDigits = 17;

/// printf-style %.{digits}g; "nan" / "inf" / "-inf" for non-finite input.
inline std::string format_number(double v, int digits = kReportDigits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace detail {

inline void dump(const Json &j, std::string &out, int digits, int indent, int depth,
                 bool inline_arrays) {
    const auto pad = [&](int d) { out.append(static_cast<std::size_t>(d * indent), ' '); };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            pad(depth + 1);
            out += Json(it.key()).dump();
            out += ": ";
            dump(it.value(), out, digits, indent, depth + 1, inline_arrays);
            if (k + 1 < j.size()) out += ',';
            out += '\n';
        }
        pad(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        bool scalar_only = true;
        for (const auto &v : j) scalar_only &= !v.is_structured();
        bool numeric_pairs = !j.empty();
        for (const auto &v : j) {
            numeric_pairs &= v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
        }
        if (j.empty()) {
            out += "[]";
            return;
        }
        if (scalar_only || (inline_arrays && numeric_pairs)) {
            out += '[';
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ", ";
                dump(j[k], out, digits, indent, depth, inline_arrays);
            }
            out += ']';
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            pad(depth + 1);
            dump(j[k], out, digits, indent, depth + 1, inline_arrays);
            if (k + 1 < j.size()) out += ',';
            out += '\n';
        }
        pad(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_number(v, digits) : "null";
        return;
    }
    default: out += j.dump(); return;
    }
}

} // namespace detail

/// Pretty JSON with every floating-point value at `digits` significant digits.
inline std::string to_text(const Json &j, int digits = kReportDigits) {
    std::string out;
    detail::dump(j, out, digits, 2, 0, true);
    out += '\n';
    return out;
}

inline std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IO, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorCode::IO, "read error on " + path.string());
    return ss.str();
}

inline void write_text_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IO, "cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::IO, "write error on " + path.string());
}

struct PovmFile {
    std::size_t local_dim = 2;
    std::vector<ComplexMatrix> elements;
};

inline PovmFile povm_from_json(const Json &j, const std::string &origin) {
    const auto bad = [&](const std::string &what) -> void {
        fail(ErrorCode::FileFormat, origin + ": " + what);
    };
    if (!j.is_object()) bad("expected an object with local_dim and elements");
    if (!j.contains("local_dim") || !j["local_dim"].is_number_integer()) {
        bad("local_dim must be an integer");
    }
    const auto d = j["local_dim"].get<long long>();
    if (d < 2) bad("local_dim must be at least 2");
    if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty()) {
        bad("elements must be a nonempty list of matrices");
    }
    PovmFile f;
    f.local_dim = static_cast<std::size_t>(d);
    const auto dim = static_cast<std::size_t>(d * d);
    for (std::size_t n = 0; n < j["elements"].size(); ++n) {
        const auto &mj = j["elements"][n];
        const std::string where = "element " + std::to_string(n + 1);
        if (!mj.is_array() || mj.size() != dim) {
            bad(where + " must have " + std::to_string(dim) + " rows");
        }
        ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t r = 0; r < dim; ++r) {
            const auto &row = mj[r];
            if (!row.is_array() || row.size() != dim) {
                bad(where + " row " + std::to_string(r + 1) + " must have " +
                    std::to_string(dim) + " entries");
            }
            for (std::size_t c = 0; c < dim; ++c) {
                const auto &e = row[c];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                    bad(where + " entry (" + std::to_string(r + 1) + ", " +
                        std::to_string(c + 1) + ") must be [re, im]");
                }
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    Complex{e[0].get<double>(), e[1].get<double>()};
            }
        }
        f.elements.push_back(std::move(m));
    }
    return f;
}

inline PovmFile parse_povm(const std::string &text, const std::string &origin = "<input>") {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error &e) {
        fail(ErrorCode::FileFormat, origin + ": " + e.what());
    }
    return povm_from_json(j, origin);
}

inline PovmFile read_povm_file(const std::filesystem::path &path) {
    return parse_povm(read_text_file(path), path.string());
}

/// Reads and validates; InvalidPovm carries the validation diagnostics.
inline Povm load_povm(const std::filesystem::path &path, const Tolerances &tol = {}) {
    auto f = read_povm_file(path);
    return Povm(std::move(f.elements), f.local_dim, tol);
}

inline Json povm_to_json(const std::vector<ComplexMatrix> &elements, std::size_t local_dim) {
    Json j;
    j["local_dim"] = local_dim;
    Json els = Json::array();
    for (const auto &m : elements) {
        Json rows = Json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
            }
            rows.push_back(std::move(row));
        }
        els.push_back(std::move(rows));
    }
    j["elements"] = std::move(els);
    return j;
}

inline std::string povm_to_text(const std::vector<ComplexMatrix> &elements,
                                std::size_t local_dim) {
    return to_text(povm_to_json(elements, local_dim), kPovmDigits);
}

inline void write_povm_file(const std::filesystem::path &path, const Povm &povm) {
    write_text_file(path, povm_to_text(povm.matrices(), povm.local_dim()));
}

inline std::string outcome_set(const std::vector<std::size_t> &zero_based) {
    std::string s = "{";
    for (std::size_t k = 0; k < zero_based.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(zero_based[k] + 1);
    }
    return s + "}";
}

/// One-line reading of a report, e.g.
/// "unentangled, inseparable operation, lemma2 open on {1,2,3,4}".
inline std::string summary(const ClassificationReport &r) {
    std::string s = r.measurement_entangled ? "entangled"
                    : r.local_dim == 2      ? "unentangled"
                                            : "PPT";
    s += r.measurement_separable_operation ? ", separable operation" : ", inseparable operation";
    if (r.lemma1_blocked) s += ", lemma1 blocked";
    if (!r.lemma2_open_outcomes.empty()) {
        s += ", lemma2 open on " + outcome_set(r.lemma2_open_outcomes);
    }
    return s;
}

inline Json element_class_json(const ElementClass &c) {
    Json j;
    j["outcome"] = c.outcome + 1;
    j["verdict"] = std::string(verdict_name(c.verdict, c.local_dim));
    j["min_pt_eigenvalue"] = c.min_pt_eigenvalue;
    j["rank"] = c.rank;
    j["c14vs23"] = c.c14vs23;
    j["c12vs34"] = c.c12vs34;
    j["operation_kind"] = std::string(operation_name(c.operation_kind));
    return j;
}

/// Outcome numbers in reports are 1-based.
inline Json classification_json(const ClassificationReport &r) {
    Json j;
    j["local_dim"] = r.local_dim;
    j["summary"] = summary(r);
    j["measurement_entangled"] = r.measurement_entangled;
    j["measurement_separable_operation"] = r.measurement_separable_operation;
    j["lemma1_blocked"] = r.lemma1_blocked;
    Json open = Json::array();
    for (auto n : r.lemma2_open_outcomes) open.push_back(n + 1);
    j["lemma2_open_outcomes"] = std::move(open);
    Json skipped = Json::array();
    for (auto n : r.skipped_elements) skipped.push_back(n + 1);
    j["skipped_zero_elements"] = std::move(skipped);
    Json els = Json::array();
    for (const auto &c : r.per_element) els.push_back(element_class_json(c));
    j["elements"] = std::move(els);
    return j;
}

} // namespace swapforge::io
