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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "swapforge/error.hpp"
#include "swapforge/measures.hpp"
#include "swapforge/states.hpp"
#include "swapforge/tolerances.hpp"

namespace swapforge {

enum class Verdict { Entangled, Unentangled, UnentangledBoundary };
enum class OperationKind { SeparableOperation, InseparableOperation };

/// For local_dim > 2 a non-entangled verdict only certifies PPT.
constexpr std::string_view verdict_name(Verdict v, std::size_t local_dim) noexcept {
    switch (v) {
    case Verdict::Entangled: return "entangled";
    case Verdict::Unentangled: return local_dim == 2 ? "unentangled" : "PPT";
    case Verdict::UnentangledBoundary:
        return local_dim == 2 ? "unentangled-boundary" : "PPT-boundary";
    }
    return "unknown";
}

constexpr std::string_view operation_name(OperationKind k) noexcept {
    return k == OperationKind::SeparableOperation ? "separable operation"
                                                  : "inseparable operation";
}

struct ElementClass {
    std::size_t outcome = 0; // 0-based position in the measurement
    Verdict verdict = Verdict::Unentangled;
    double min_pt_eigenvalue = 0.0;
    std::size_t rank = 0;
    double c14vs23 = 0.0;
    double c12vs34 = 0.0;
    OperationKind operation_kind = OperationKind::SeparableOperation;
    std::size_t local_dim = 2;
};

struct ClassificationReport {
    std::size_t local_dim = 2;
    std::vector<ElementClass> per_element;
    std::vector<std::size_t> skipped_elements; // zero elements, 0-based
    bool measurement_entangled = false;
    bool measurement_separable_operation = true;
    bool lemma1_blocked = true;
    std::vector<std::size_t> lemma2_open_outcomes; // 0-based
};

/// Entanglement verdict of Pi / Tr(Pi) read as a state on [d, d], plus the
/// operational quantities of the post-measurement register.
///
/// A state is flagged as a boundary case when it is PPT but its partial
/// transpose has more null directions than the state itself: such a state
/// sits on the edge of the PPT set (e.g. the noisy Bell element at 1/3).
inline ElementClass classify_element(const PovmElement &el, std::size_t d,
                                     const Tolerances &tol = {}) {
    detail::require_positive_trace(el, "classify_element");
    if (el.dim() != d * d) {
        fail(ErrorCode::ShapeMismatch, "classify_element: element is not d^2 x d^2");
    }
    const SubsystemShape shape{d, d};
    const ComplexMatrix normalized = el.matrix() / el.trace();
    const auto pt_spec = hermitian_eig(partial_transpose(normalized, shape, 1), tol);
    const auto &pt = pt_spec.eigenvalues;

    ElementClass c;
    c.local_dim = d;
    c.min_pt_eigenvalue = pt(pt.size() - 1);
    c.rank = el.rank(tol.rank_rel_tol);
    c.c14vs23 = c14_vs_23(el);
    c.c12vs34 = c12_vs_34(el);
    c.operation_kind = c.c12vs34 > tol.insep_tol ? OperationKind::InseparableOperation
                                                 : OperationKind::SeparableOperation;
    if (c.min_pt_eigenvalue < -tol.ppt_tol) {
        c.verdict = Verdict::Entangled;
    } else {
        const auto &ev = el.spectral().eigenvalues;
        std::size_t pt_null = 0;
        std::size_t state_null = 0;
        for (Eigen::Index k = 0; k < pt.size(); ++k) {
            if (std::abs(pt(k)) <= tol.ppt_tol) ++pt_null;
            if (ev(k) / el.trace() <= tol.ppt_tol) ++state_null;
        }
        c.verdict = pt_null > state_null ? Verdict::UnentangledBoundary : Verdict::Unentangled;
    }
    return c;
}

/// Rank-1 elements leave the 14|23 cut in a product state, so no later
/// measurement on the middle pair can change the target pair.
inline bool lemma1_predicate(const PovmElement &el, const Tolerances &tol = {}) {
    return el.rank(tol.rank_rel_tol) <= 1;
}

/// Necessary condition for a later measurement to change the target pair.
inline bool lemma2_predicate(const PovmElement &el, const Tolerances &tol = {}) {
    detail::require_positive_trace(el, "lemma2_predicate");
    return el.rank(tol.rank_rel_tol) > 1 && c14_vs_23(el) > tol.insep_tol;
}

inline ClassificationReport classify_measurement(const Povm &povm,
                                                 const Tolerances &tol = {}) {
    ClassificationReport r;
    r.local_dim = povm.local_dim();
    for (std::size_t n = 0; n < povm.size(); ++n) {
        const auto &el = povm[n];
        if (el.degenerate()) {
            r.skipped_elements.push_back(n);
            continue;
        }
        auto c = classify_element(el, povm.local_dim(), tol);
        c.outcome = n;
        r.measurement_entangled |= c.verdict == Verdict::Entangled;
        r.measurement_separable_operation &=
            c.operation_kind == OperationKind::SeparableOperation;
        r.lemma1_blocked &= c.rank <= 1;
        if (c.rank > 1 && c.c14vs23 > tol.insep_tol) r.lemma2_open_outcomes.push_back(n);
        r.per_element.push_back(c);
    }
    return r;
}

} // namespace swapforge
