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

// Sequential measurement protocol on the four-wire register: every round
// applies sqrt(E) on wires (2, 3), branches by the Born rule and records
// the conditional states of the target pair (1, 4).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "swapforge/error.hpp"
#include "swapforge/four_wire.hpp"
#include "swapforge/measures.hpp"
#include "swapforge/states.hpp"
#include "swapforge/tolerances.hpp"

namespace swapforge {

struct OutcomeRecord {
    std::vector<std::size_t> outcome_path; // 0-based outcome per round
    double probability;                    // joint, product of conditionals
    double conditional_probability;        // last round only
    PureState full_state;                  // wires (1, 2, 3, 4)
    DensityMatrix rho14;
    std::optional<DensityMatrix> rho12; // first round only
    std::optional<DensityMatrix> rho34; // first round only
    double negativity14;                // unit scale
    double c14vs23;
    double c12vs34;
};

struct SkippedBranch {
    std::vector<std::size_t> outcome_path;
    double probability;
};

struct RoundResult {
    std::vector<OutcomeRecord> records;
    std::vector<SkippedBranch> skipped;
};

namespace detail {

inline std::size_t register_local_dim(const PureState &state) {
    const auto &shape = state.shape();
    if (shape.wires() != 4 || shape[0] != shape[1] || shape[1] != shape[2] ||
        shape[2] != shape[3]) {
        fail(ErrorCode::ShapeMismatch, "expected a four-wire register [d, d, d, d]");
    }
    return shape[0];
}

inline OutcomeRecord make_record(std::vector<std::size_t> path, double joint,
                                 double conditional, ComplexVector normalized, std::size_t d,
                                 bool with_pair_states, const Tolerances &tol) {
    const auto shape = four_wire_shape(d);
    PureState full(std::move(normalized), shape);
    const ComplexMatrix rho = full.density();
    DensityMatrix rho14(partial_trace(rho, shape, {wires::kAlice, wires::kCharlie}),
                        SubsystemShape{d, d}, tol);
    std::optional<DensityMatrix> rho12;
    std::optional<DensityMatrix> rho34;
    if (with_pair_states) {
        rho12.emplace(partial_trace(rho, shape, {wires::kAlice, wires::kBobLeft}),
                      SubsystemShape{d, d}, tol);
        rho34.emplace(partial_trace(rho, shape, {wires::kBobRight, wires::kCharlie}),
                      SubsystemShape{d, d}, tol);
    }
    const double neg = negativity(rho14, cuts::pair());
    const double c14 = i_concurrence(full, cuts::outer_vs_middle());
    const double c12 = i_concurrence(full, cuts::left_vs_right());
    return OutcomeRecord{std::move(path), joint,         conditional,     std::move(full),
                         std::move(rho14), std::move(rho12), std::move(rho34), neg,
                         c14,             c12};
}

inline RoundResult branch(const ComplexVector &state, std::size_t d, const Povm &povm,
                          const std::vector<std::size_t> &parent_path, double parent_prob,
                          bool with_pair_states, const Tolerances &tol) {
    if (povm.local_dim() != d) {
        fail(ErrorCode::ShapeMismatch, "measurement local_dim " +
                                           std::to_string(povm.local_dim()) +
                                           " does not match register local_dim " +
                                           std::to_string(d));
    }
    RoundResult out;
    for (std::size_t n = 0; n < povm.size(); ++n) {
        auto path = parent_path;
        path.push_back(n);
        ComplexVector v = apply_to_middle(povm[n].sqrt(), state, d);
        const double p = v.squaredNorm();
        if (p < tol.prob_tol) {
            out.skipped.push_back({std::move(path), parent_prob * p});
            continue;
        }
        v /= std::sqrt(p);
        out.records.push_back(make_record(std::move(path), parent_prob * p, p, std::move(v), d,
                                          with_pair_states, tol));
    }
    return out;
}

} // namespace detail

/// One measurement round on `state`. Records carry path {n}, the Born
/// probability and the pair states (1,4), (1,2), (3,4).
inline RoundResult apply_round(const PureState &state, const Povm &povm,
                               const Tolerances &tol = {}) {
    const std::size_t d = detail::register_local_dim(state);
    return detail::branch(state.amplitudes(), d, povm, {}, 1.0, true, tol);
}

/// Applies a further round to the state of `parent`.
inline RoundResult extend(const OutcomeRecord &parent, const Povm &povm,
                          const Tolerances &tol = {}) {
    const std::size_t d = detail::register_local_dim(parent.full_state);
    return detail::branch(parent.full_state.amplitudes(), d, povm, parent.outcome_path,
                          parent.probability, false, tol);
}

/// First-round pair states by partial trace, next to their closed forms:
/// rho14 = Pi^*/Tr Pi and the eigenbasis expansions of rho12, rho34.
struct RoundOneStates {
    ComplexMatrix rho14;
    ComplexMatrix rho12;
    ComplexMatrix rho34;
    ComplexMatrix rho14_formula;
    ComplexMatrix rho12_formula;
    ComplexMatrix rho34_formula;
    double max_deviation = 0.0;
};

inline RoundOneStates reduced_states_round1(const OutcomeRecord &rec, const PovmElement &el) {
    if (rec.outcome_path.size() != 1 || !rec.rho12 || !rec.rho34) {
        fail(ErrorCode::BadParameter, "reduced_states_round1: not a first-round record");
    }
    RoundOneStates s{rec.rho14.matrix(),
                     rec.rho12->matrix(),
                     rec.rho34->matrix(),
                     rho14_from_element(el),
                     rho12_from_spectrum(el),
                     rho34_from_spectrum(el)};
    s.max_deviation = std::max({max_abs(s.rho14 - s.rho14_formula),
                                max_abs(s.rho12 - s.rho12_formula),
                                max_abs(s.rho34 - s.rho34_formula)});
    return s;
}

struct SecondRoundProbability {
    double spectral = 0.0; // eigenbasis overlap sum
    double born = 0.0;     // <Phi_n| E (x) I |Phi_n>
    double deviation = 0.0;
};

inline SecondRoundProbability second_round_probability(const OutcomeRecord &rec,
                                                       const PovmElement &first,
                                                       const PovmElement &em) {
    const std::size_t d = detail::register_local_dim(rec.full_state);
    const auto &v = rec.full_state.amplitudes();
    SecondRoundProbability r;
    r.born = v.dot(apply_to_middle(em.matrix(), v, d)).real();
    r.spectral = second_round_probability_spectral(first, em);
    r.deviation = std::abs(r.born - r.spectral);
    return r;
}

/// AllBranches when `select` is empty; otherwise one outcome index per round.
struct BranchPolicy {
    std::optional<std::vector<std::size_t>> select;

    static BranchPolicy all() { return {}; }
    static BranchPolicy outcomes(std::vector<std::size_t> idx) { return {std::move(idx)}; }
};

struct SwapScenario {
    std::size_t local_dim = 2;
    std::vector<Povm> rounds;
    BranchPolicy branch_policy;
};

inline constexpr std::size_t kMaxBranches = 100000;

struct ChainResult {
    std::vector<std::vector<OutcomeRecord>> levels; // levels[r]: records after round r+1
    std::vector<SkippedBranch> skipped;

    const std::vector<OutcomeRecord> &leaves() const { return levels.back(); }
};

/// Expands every round in outcome order. Records at each level are sorted
/// lexicographically by outcome path.
inline ChainResult chain(const SwapScenario &scenario, const Tolerances &tol = {}) {
    if (scenario.rounds.empty()) fail(ErrorCode::BadParameter, "chain: no rounds");
    const auto &select = scenario.branch_policy.select;
    if (select && select->size() != scenario.rounds.size()) {
        fail(ErrorCode::BadIndex, "chain: selected outcome count does not match round count");
    }
    double branches = 1.0;
    double total = 0.0;
    for (std::size_t r = 0; r < scenario.rounds.size(); ++r) {
        const auto &povm = scenario.rounds[r];
        if (povm.local_dim() != scenario.local_dim) {
            fail(ErrorCode::ShapeMismatch, "chain: round " + std::to_string(r + 1) +
                                               " has local_dim " +
                                               std::to_string(povm.local_dim()));
        }
        if (select && (*select)[r] >= povm.size()) {
            fail(ErrorCode::BadIndex, "chain: selected outcome " +
                                          std::to_string((*select)[r] + 1) +
                                          " out of range in round " + std::to_string(r + 1));
        }
        branches *= select ? 1.0 : static_cast<double>(povm.size());
        total += branches;
    }
    if (total > static_cast<double>(kMaxBranches)) {
        fail(ErrorCode::TooManyBranches,
             "chain: scenario expands to more than " + std::to_string(kMaxBranches) + " branches");
    }

    const auto keep = [&](std::size_t round, RoundResult &rr) {
        if (!select) return;
        std::erase_if(rr.records, [&](const OutcomeRecord &rec) {
            return rec.outcome_path[round] != (*select)[round];
        });
    };

    ChainResult out;
    auto first = apply_round(initial_state(scenario.local_dim), scenario.rounds[0], tol);
    keep(0, first);
    out.skipped = std::move(first.skipped);
    out.levels.push_back(std::move(first.records));
    for (std::size_t r = 1; r < scenario.rounds.size(); ++r) {
        std::vector<OutcomeRecord> level;
        for (const auto &parent : out.levels.back()) {
            auto rr = extend(parent, scenario.rounds[r], tol);
            keep(r, rr);
            for (auto &rec : rr.records) level.push_back(std::move(rec));
            for (auto &sk : rr.skipped) out.skipped.push_back(std::move(sk));
        }
        out.levels.push_back(std::move(level));
    }
    return out;
}

/// Probability-weighted mean of the target-pair negativity over a complete
/// sibling set.
inline double average_negativity(const std::vector<OutcomeRecord> &records,
                                 const Tolerances &tol = {}) {
    double total = 0.0;
    double acc = 0.0;
    for (const auto &rec : records) {
        total += rec.probability;
        acc += rec.probability * rec.negativity14;
    }
    if (std::abs(total - 1.0) > tol.branch_sum_tol) {
        fail(ErrorCode::IncompleteBranchSet,
             "average_negativity: branch probabilities sum to " + std::to_string(total));
    }
    return acc;
}

struct DisturbanceReport {
    double max_trace_distance = 0.0;
    double max_negativity_change = 0.0;
    std::vector<double> trace_distances; // per surviving second outcome
    std::vector<double> negativity_changes;
};

/// How far a second measurement moves the target-pair state of `rec`.
inline DisturbanceReport disturbance_check(const OutcomeRecord &rec, const Povm &second,
                                           const Tolerances &tol = {}) {
    DisturbanceReport r;
    const auto children = extend(rec, second, tol);
    for (const auto &child : children.records) {
        const double dist =
            0.5 * trace_norm(child.rho14.matrix() - rec.rho14.matrix());
        const double dneg = std::abs(child.negativity14 - rec.negativity14);
        r.trace_distances.push_back(dist);
        r.negativity_changes.push_back(dneg);
        r.max_trace_distance = std::max(r.max_trace_distance, dist);
        r.max_negativity_change = std::max(r.max_negativity_change, dneg);
    }
    return r;
}

} // namespace swapforge
