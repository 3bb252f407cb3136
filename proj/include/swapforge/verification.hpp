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

// Self-check suite behind `swapforge verify`. Each criterion runs a fixed,
// seeded workload against independent routes and reports the worst
// deviation it saw. Library tolerances come from the caller so that
// corrupted settings show up as failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "swapforge/classifier.hpp"
#include "swapforge/families.hpp"
#include "swapforge/measures.hpp"
#include "swapforge/random.hpp"
#include "swapforge/scenario.hpp"
#include "swapforge/swap_engine.hpp"

namespace swapforge::verify {

enum class Status { Pass, Fail, Skip };

constexpr const char *status_name(Status s) noexcept {
    switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
    }
    return "?";
}

struct CriterionResult {
    int id = 0;
    std::string name;
    Status status = Status::Pass;
    double deviation = 0.0; // worst observed, in the units of the failing bound
    std::string detail;
};

/// Running record of one criterion: worst deviation and first violation.
class Tally {
  public:
    void near(double actual, double expected, double bound, const std::string &what) {
        within(std::abs(actual - expected), bound, what);
    }

    void within(double deviation, double bound, const std::string &what) {
        if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
        worst_ = std::max(worst_, deviation);
        if (deviation > bound) flag(what + ": deviation " + io::format_number(deviation, 3) +
                                    " > " + io::format_number(bound, 3));
    }

    void expect(bool ok, const std::string &what) {
        if (!ok) flag(what);
    }

    void note(const std::string &text) { notes_.push_back(text); }

    CriterionResult finish(int id, std::string name) const {
        CriterionResult r;
        r.id = id;
        r.name = std::move(name);
        r.status = failures_ == 0 ? Status::Pass : Status::Fail;
        r.deviation = worst_;
        if (failures_ > 0) {
            r.detail = std::to_string(failures_) + " violation(s); first: " + first_;
        }
        for (const auto &n : notes_) r.detail += (r.detail.empty() ? "" : "; ") + n;
        return r;
    }

  private:
    void flag(const std::string &what) {
        if (failures_++ == 0) first_ = what;
    }

    double worst_ = 0.0;
    std::size_t failures_ = 0;
    std::string first_;
    std::vector<std::string> notes_;
};

namespace detail {

inline std::vector<double> lambda_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 20; ++k) g.push_back(0.05 * k);
    return g;
}

inline double two_round_negativity(double l) {
    return (l - 1.0 + std::sqrt(1.0 - 2.0 * l + 5.0 * l * l)) / 2.0;
}

inline double c12_noisy_bell(double l) {
    const double a = std::sqrt(1.0 - l);
    const double b = std::sqrt(1.0 + 3.0 * l);
    return std::sqrt(std::max(0.0, 1.0 + l * l - a * b + l * a * b)) / std::sqrt(2.0);
}

inline std::string lam(double l) { return "lambda=" + io::format_number(l, 4); }

/// rho14 of each branch against conj(Pi)/Tr(Pi), and p_n against Tr(Pi)/d^2.
inline void swap_identity(Tally &t, std::size_t d, int povms, random::Engine &rng,
                          const Tolerances &tol) {
    for (int k = 0; k < povms; ++k) {
        const Povm povm(random::povm_matrices(d * d, 4, rng), d, tol);
        const auto r = apply_round(initial_state(d), povm, tol);
        for (const auto &rec : r.records) {
            const auto &el = povm[rec.outcome_path[0]];
            t.within(max_abs(rec.rho14.matrix() - el.matrix().conjugate() / el.trace()), 1e-10,
                     "d=" + std::to_string(d) + " rho14");
        }
    }
}

inline void born(Tally &t, const Povm &povm, const std::string &label, const Tolerances &tol) {
    const std::size_t d = povm.local_dim();
    const auto r = apply_round(initial_state(d), povm, tol);
    double total = 0.0;
    for (const auto &rec : r.records) {
        total += rec.probability;
        t.near(rec.probability, povm[rec.outcome_path[0]].trace() / static_cast<double>(d * d),
               1e-9, label + " p_n");
    }
    for (const auto &sk : r.skipped) total += sk.probability;
    t.near(total, 1.0, 1e-9, label + " sum");
}

inline ScenarioConfig two_round_sweep_config(std::size_t steps = 21) {
    return parse_config(io::Json::parse(R"({
        "rounds": [{"family": "noisy_bell", "lambda": 0.5}, {"family": "wire2_computational"}],
        "sweep": {"param": "lambda", "start": 0, "stop": 1, "steps": )" +
                                        std::to_string(steps) + "}}"));
}

} // namespace detail

inline CriterionResult swap_identity(const Tolerances &tol) {
    Tally t;
    random::Engine rng(1001);
    detail::swap_identity(t, 2, 125, rng, tol);
    detail::swap_identity(t, 3, 25, rng, tol);
    return t.finish(1, "swap-identity");
}

inline CriterionResult born_normalization(const Tolerances &tol) {
    Tally t;
    for (double l : detail::lambda_grid()) detail::born(t, noisy_bell_povm(l), "noisy_bell", tol);
    detail::born(t, bell_projective(), "bell_projective", tol);
    detail::born(t, wire2_computational_povm(), "wire2_computational", tol);
    detail::born(t, Povm({identity(4)}, 2, tol), "trivial", tol);
    random::Engine rng(1002);
    for (int k = 0; k < 200; ++k) {
        const std::size_t outcomes = 2 + k % 5;
        detail::born(t, Povm(random::povm_matrices(4, outcomes, rng), 2, tol), "random", tol);
    }
    return t.finish(2, "born-normalization");
}

inline CriterionResult noisy_bell_curve(const Tolerances &tol) {
    Tally t;
    for (double l : detail::lambda_grid()) {
        const auto povm = noisy_bell_povm(l);
        const auto r = apply_round(initial_state(2), povm, tol);
        t.expect(r.records.size() == 4, detail::lam(l) + ": expected four branches");
        for (const auto &rec : r.records) {
            t.near(rec.negativity14, std::max(0.0, (3.0 * l - 1.0) / 2.0), 1e-9, detail::lam(l));
        }
        const auto v = classify_element(povm[0], 2, tol).verdict;
        if (l > 1.0 / 3.0) {
            t.expect(v == Verdict::Entangled, detail::lam(l) + ": expected entangled");
        } else {
            t.expect(v == Verdict::Unentangled, detail::lam(l) + ": expected unentangled");
        }
    }
    const double third = 1.0 / 3.0;
    t.expect(classify_element(noisy_bell_povm(third)[0], 2, tol).verdict ==
                 Verdict::UnentangledBoundary,
             "lambda=1/3 not flagged as boundary");
    t.expect(classify_element(noisy_bell_povm(third + 1e-6)[0], 2, tol).verdict ==
                 Verdict::Entangled,
             "lambda=1/3+1e-6 not entangled");
    t.expect(classify_element(noisy_bell_povm(third - 1e-6)[0], 2, tol).verdict ==
                 Verdict::Unentangled,
             "lambda=1/3-1e-6 not unentangled");
    return t.finish(3, "noisy-bell-lambda-grid");
}

inline CriterionResult bipartition_closed_forms(const Tolerances &tol) {
    Tally t;
    for (double l : detail::lambda_grid()) {
        const auto povm = noisy_bell_povm(l);
        for (const auto &el : povm.elements()) {
            t.near(c14_vs_23(el), std::sqrt(1.0 - l * l), 1e-10, detail::lam(l) + " c14vs23");
            t.near(c12_vs_34(el), detail::c12_noisy_bell(l), 1e-9, detail::lam(l) + " c12vs34");
        }
    }
    (void)tol;
    return t.finish(4, "bipartition-closed-forms");
}

inline CriterionResult two_round_example(const Tolerances &tol) {
    Tally t;
    for (double l : detail::lambda_grid()) {
        SwapScenario s{2, {noisy_bell_povm(l), wire2_computational_povm()}, BranchPolicy::all()};
        const auto c = chain(s, tol);
        t.expect(c.leaves().size() == 8, detail::lam(l) + ": expected eight branches");
        for (const auto &rec : c.leaves()) {
            t.near(rec.conditional_probability, 0.5, 1e-12, detail::lam(l) + " s_nm");
            t.near(rec.probability, 0.125, 1e-12, detail::lam(l) + " joint probability");
            t.near(rec.negativity14, detail::two_round_negativity(l), 1e-9,
                   detail::lam(l) + " negativity");
        }
        if (c.leaves().empty()) continue;
        // The (1, 1) branch: (1+l)/2 |xi><xi| + (1-l)/2 |01><01|.
        const auto &r11 = c.leaves()[0];
        const double a = std::sqrt(1.0 + 3.0 * l);
        const double b = std::sqrt(1.0 - l);
        ComplexVector xi = ComplexVector::Zero(4);
        xi(0) = (a + b) / (2.0 * std::sqrt(1.0 + l));
        xi(3) = (a - b) / (2.0 * std::sqrt(1.0 + l));
        const ComplexMatrix expected =
            (1.0 + l) / 2.0 * projector(xi) + (1.0 - l) / 2.0 * projector(basis_vector(4, 1));
        t.within(max_abs(r11.rho14.matrix() - expected), 1e-10, detail::lam(l) + " rho14|11");
        const auto ev = hermitian_eig(r11.rho14.matrix(), tol).eigenvalues;
        t.near(ev(0), (1.0 + l) / 2.0, 1e-10, detail::lam(l) + " top eigenvalue");
        t.near(ev(1), (1.0 - l) / 2.0, 1e-10, detail::lam(l) + " second eigenvalue");
    }
    auto cfg = detail::two_round_sweep_config();
    cfg.tolerances = tol;
    for (const auto &row : run_sweep(cfg, 1)) {
        const std::string at = "sweep " + detail::lam(row.param_value);
        t.near(row.avg_neg_round1, std::max(0.0, row.paper_formula_round1), 1e-9,
               at + " round-1 curve");
        t.near(row.avg_neg_round2, row.paper_formula_round2, 1e-9, at + " round-2 curve");
    }
    return t.finish(5, "two-round-example");
}

/// Rank-1 first elements must leave rho14 untouched by any second round.
/// Near-rank-1 decoys (second eigenvalue a few percent of the first) are
/// mixed in; they only enter the check when the rank tolerance is loose
/// enough to call them rank 1, and then they do get disturbed.
inline CriterionResult lemma1_blocking(const Tolerances &tol) {
    Tally t;
    random::Engine rng(1006);
    std::size_t checked = 0;
    const auto run = [&](const ComplexMatrix &m) {
        const PovmElement el(m, tol);
        if (!lemma1_predicate(el, tol)) return;
        ++checked;
        const auto first = random::completed(m, 2);
        const auto r = apply_round(initial_state(2), first, tol);
        if (r.records.empty() || r.records[0].outcome_path[0] != 0) return;
        for (int s = 0; s < 50; ++s) {
            const Povm second(random::povm_matrices(4, 2 + s % 3, rng), 2, tol);
            const auto dist = disturbance_check(r.records[0], second, tol);
            t.within(dist.max_trace_distance, 1e-10, "trace distance");
            t.within(dist.max_negativity_change, 1e-10, "negativity change");
        }
    };
    std::uniform_real_distribution<double> small(0.02, 0.05);
    for (int k = 0; k < 200; ++k) {
        run(random::rank1_element(4, rng));
        if (k % 10 == 0) {
            const ComplexVector u = random::unit_vector(4, rng);
            ComplexVector v = random::unit_vector(4, rng);
            v -= u * u.dot(v);
            v.normalize();
            run(0.9 * (projector(u) + small(rng) * projector(v)));
        }
    }
    t.expect(checked >= 200, "only " + std::to_string(checked) + " elements passed the rank test");
    t.note(std::to_string(checked) + " rank-1 elements checked");
    return t.finish(6, "lemma1-blocking");
}

inline CriterionResult unentangled_zero_outer(const Tolerances &tol) {
    Tally t;
    random::Engine rng(1007);
    std::size_t premise = 0;
    for (int k = 0; k < 500; ++k) {
        const PovmElement el(random::separable_element(2, 1 + k % 4, rng), tol);
        const double c14 = c14_vs_23(el);
        if (c14 > 1e-9) continue;
        ++premise;
        t.within(c12_vs_34(el), 1e-9, "c12vs34 with vanishing c14vs23");
    }
    t.expect(premise > 0, "no element had vanishing c14vs23");
    t.note(std::to_string(premise) + " of 500 elements met the premise");
    return t.finish(7, "unentangled-zero-14-23");
}

inline CriterionResult residual_concurrence(const Tolerances &tol) {
    Tally t;
    random::Engine rng(1008);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_real_distribution<double> weight(0.01, 1.0);
    for (int k = 0; k < 100; ++k) {
        SingleQubitElementParams p{angle(rng), angle(rng), weight(rng), weight(rng)};
        const double closed = single_qubit_residual_concurrence(p);
        t.near(closed, single_qubit_residual_concurrence_by_state(p), 1e-10, "state route");
        SingleQubitElementParams rotated = p;
        rotated.theta = angle(rng);
        rotated.phi = angle(rng);
        t.near(closed, single_qubit_residual_concurrence_by_state(rotated), 1e-10,
               "angle invariance");
    }
    (void)tol;
    return t.finish(8, "residual-concurrence");
}

inline CriterionResult alternate_routes(const Tolerances &tol) {
    Tally t;
    random::Engine rng(1009);
    for (int k = 0; k < 200; ++k) {
        const PovmElement el(random::psd(4, rng, 1 + k % 4), tol);
        t.near(c12_vs_34_contraction(el), c12_vs_34(el), 1e-9, "contraction route");
    }
    double worst_closed_form = 0.0;
    for (int k = 0; k < 100; ++k) {
        const PovmElement first(random::psd(4, rng, 1 + k % 4), tol);
        const Povm second(random::povm_matrices(4, 3, rng), 2, tol);
        const auto c = two_round_coefficients(first, second[k % 3]);
        t.near(c.trace_u, c.u.trace().real(), 1e-9, "X");
        t.near(c.det_u, c.u.determinant().real(), 1e-9, "det U");
    }
    for (double l : detail::lambda_grid()) {
        const auto c =
            two_round_coefficients(noisy_bell_povm(l)[0], wire2_computational_povm()[0]);
        const auto cf = negativity_closed_form(DensityMatrix(c.rho14, SubsystemShape{2, 2}, tol));
        worst_closed_form = std::max(worst_closed_form, cf.deviation);
    }
    t.note("closed-form negativity deviation up to " + io::format_number(worst_closed_form, 6) +
           " (reported only)");
    return t.finish(9, "alternate-routes");
}

inline CriterionResult psd_sqrt_2x2(const Tolerances &tol) {
    Tally t;
    random::Engine rng(1010);
    for (int k = 0; k < 1000; ++k) {
        const ComplexMatrix m = random::psd(2, rng);
        t.within(max_abs(psd_sqrt_closed_2x2(m, tol) - psd_sqrt(m, tol)), 1e-12, "2x2 root");
    }
    return t.finish(10, "psd-sqrt-2x2");
}

inline CriterionResult qudit(const Tolerances &tol) {
    Tally t;
    random::Engine rng(1011);
    detail::swap_identity(t, 3, 25, rng, tol);
    for (int k = 0; k < 25; ++k) {
        detail::born(t, Povm(random::povm_matrices(9, 2 + k % 4, rng), 3, tol), "d=3 random", tol);
    }
    t.near(i_concurrence(max_entangled_state(3), cuts::pair()), 1.0, 1e-10, "1|2 cut");
    t.near(i_concurrence(initial_state(3), cuts::outer_vs_middle()), 1.0, 1e-10, "14|23 cut");
    return t.finish(11, "qudit");
}

inline CriterionResult determinism(const Tolerances &tol) {
    Tally t;
    auto cfg = detail::two_round_sweep_config();
    cfg.tolerances = tol;
    const auto a = sweep_csv(run_sweep(cfg, 1));
    const auto b = sweep_csv(run_sweep(cfg, 4));
    t.expect(a == b, "CSV differs between one and four worker threads");
    t.expect(a == sweep_csv(run_sweep(cfg, 1)), "CSV differs between identical runs");
    return t.finish(12, "determinism");
}

struct Criterion {
    int id;
    const char *name;
    std::function<CriterionResult(const Tolerances &)> run;
};

inline const std::vector<Criterion> &criteria() {
    static const std::vector<Criterion> all{
        {1, "swap-identity", swap_identity},
        {2, "born-normalization", born_normalization},
        {3, "noisy-bell-lambda-grid", noisy_bell_curve},
        {4, "bipartition-closed-forms", bipartition_closed_forms},
        {5, "two-round-example", two_round_example},
        {6, "lemma1-blocking", lemma1_blocking},
        {7, "unentangled-zero-14-23", unentangled_zero_outer},
        {8, "residual-concurrence", residual_concurrence},
        {9, "alternate-routes", alternate_routes},
        {10, "psd-sqrt-2x2", psd_sqrt_2x2},
        {11, "qudit", qudit},
        {12, "determinism", determinism},
    };
    return all;
}

/// Runs every criterion not named in `skip` (by number or name). A library
/// error inside a criterion counts as a failure of that criterion.
inline std::vector<CriterionResult> run_all(const Tolerances &tol,
                                            const std::vector<std::string> &skip = {}) {
    for (const auto &s : skip) {
        const bool known = std::any_of(criteria().begin(), criteria().end(), [&](const auto &c) {
            return s == c.name || s == std::to_string(c.id);
        });
        if (!known) fail(ErrorCode::BadParameter, "unknown criterion '" + s + "'");
    }
    std::vector<CriterionResult> out;
    for (const auto &c : criteria()) {
        const bool skipped = std::find_if(skip.begin(), skip.end(), [&](const std::string &s) {
                                 return s == c.name || s == std::to_string(c.id);
                             }) != skip.end();
        if (skipped) {
            out.push_back({c.id, c.name, Status::Skip, 0.0, "skipped on request"});
            continue;
        }
        try {
            out.push_back(c.run(tol));
        } catch (const std::exception &e) {
            out.push_back({c.id, c.name, Status::Fail, std::numeric_limits<double>::infinity(),
                           std::string("error: ") + e.what()});
        }
    }
    return out;
}

inline bool all_passed(const std::vector<CriterionResult> &results) {
    return std::none_of(results.begin(), results.end(),
                        [](const auto &r) { return r.status == Status::Fail; });
}

/// One line per criterion: "<id> <name> <PASS|FAIL|SKIP> deviation=<x> [detail]".
inline std::string table(const std::vector<CriterionResult> &results) {
    std::string out;
    for (const auto &r : results) {
        char head[160];
        std::snprintf(head, sizeof head, "%2d %-26s %s deviation=%s", r.id, r.name.c_str(),
                      status_name(r.status), io::format_number(r.deviation, 3).c_str());
        out += head;
        if (!r.detail.empty()) out += "  " + r.detail;
        out += '\n';
    }
    return out;
}

} // namespace swapforge::verify
