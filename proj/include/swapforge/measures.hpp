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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "swapforge/error.hpp"
#include "swapforge/four_wire.hpp"
#include "swapforge/states.hpp"
#include "swapforge/tensor.hpp"

namespace swapforge {

/// Two-sided split of a register's wires.
struct BipartiteCut {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;

    void validate(std::size_t wire_count) const {
        if (left.empty() || right.empty()) {
            fail(ErrorCode::ShapeMismatch, "cut: both sides must be nonempty");
        }
        std::vector<std::size_t> all(left);
        all.insert(all.end(), right.begin(), right.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expect(wire_count);
        std::iota(expect.begin(), expect.end(), std::size_t{0});
        if (all != expect) {
            fail(ErrorCode::ShapeMismatch,
                 "cut does not partition " + std::to_string(wire_count) + " wires");
        }
    }
};

namespace cuts {
inline BipartiteCut pair() { return {{0}, {1}}; }
inline BipartiteCut outer_vs_middle() { return {{0, 3}, {1, 2}}; } // 14|23
inline BipartiteCut left_vs_right() { return {{0, 1}, {2, 3}}; }   // 12|34
} // namespace cuts

/// Unit: ||rho^T||_1 - 1, a Bell state scores 1 (scale used for all protocol
/// reports). Half: (||rho^T||_1 - 1) / 2, a Bell state scores 1/2.
enum class NegativityScale { Unit, Half };

inline double negativity(const DensityMatrix &rho, const BipartiteCut &cut,
                         NegativityScale scale = NegativityScale::Unit) {
    cut.validate(rho.shape().wires());
    // For a unit-trace Hermitian X, ||X||_1 - 1 = 2 sum_{x_k < 0} |x_k|. The
    // negative-part sum avoids the cancellation in ||X||_1 - 1 and is exactly
    // zero for PPT input.
    const auto pt = hermitian_eig(partial_transpose(rho.matrix(), rho.shape(), cut.right));
    double negative = 0.0;
    for (auto x : pt.eigenvalues) negative += std::max(0.0, -x);
    return scale == NegativityScale::Unit ? 2.0 * negative : negative;
}

inline double min_pt_eigenvalue(const ComplexMatrix &m, const SubsystemShape &shape,
                                const BipartiteCut &cut, const Tolerances &tol = {}) {
    cut.validate(shape.wires());
    const auto pt = partial_transpose(m, shape, cut.right);
    const auto s = hermitian_eig(pt, tol);
    return s.eigenvalues(s.eigenvalues.size() - 1);
}

inline bool is_ppt(const DensityMatrix &rho, const BipartiteCut &cut,
                   const Tolerances &tol = {}) {
    return min_pt_eigenvalue(rho.matrix(), rho.shape(), cut, tol) >= -tol.ppt_tol;
}

/// sum over permutations s of sign(s) * prod_r m(r, s(r)), rows taken as
/// given. Exact expansion; only sensible for small matrices.
inline Complex levi_civita_determinant(const ComplexMatrix &m) {
    detail::require_square(m, "levi_civita_determinant");
    const auto n = static_cast<std::size_t>(m.rows());
    if (n > 8) fail(ErrorCode::ShapeMismatch, "levi_civita_determinant: n > 8");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Complex acc{0.0, 0.0};
    do {
        std::size_t inversions = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (perm[a] > perm[b]) ++inversions;
        Complex term = inversions % 2 ? Complex{-1.0, 0.0} : Complex{1.0, 0.0};
        for (std::size_t r = 0; r < n; ++r) term *= m(r, perm[r]);
        acc += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

struct ClosedFormResult {
    double value = 0.0;    // (X + 4 sqrt Y) / (2 sqrt(X + 2 sqrt Y)) - 1/2
    double trace_u = 0.0;  // X
    double det_u = 0.0;    // Y, Levi-Civita expansion over the rows of U
    double oracle = 0.0;   // eigenvalue route, half scale
    double deviation = 0.0;
};

/// Closed-form negativity of a two-qubit state from X = Tr U and
/// Y = det U with U = (rho^T)^dag rho^T. The expression is the trace of the
/// 2x2 square-root formula applied to U; it is not exact for general 4x4 U,
/// so the result carries its deviation from the eigenvalue route.
inline ClosedFormResult negativity_closed_form(const DensityMatrix &rho) {
    if (rho.shape() != SubsystemShape{2, 2}) {
        fail(ErrorCode::ShapeMismatch, "negativity_closed_form: expects a two-qubit state");
    }
    const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.shape(), 1);
    const ComplexMatrix u = pt.adjoint() * pt;
    ClosedFormResult r;
    r.trace_u = u.trace().real();
    r.det_u = std::max(0.0, levi_civita_determinant(u).real());
    const double root_y = std::sqrt(r.det_u);
    const double denom = r.trace_u + 2.0 * root_y;
    if (!(denom > 0.0)) {
        fail(ErrorCode::DegenerateDenominator, "negativity_closed_form: X + 2 sqrt(Y) = 0");
    }
    r.value = (r.trace_u + 4.0 * root_y) / (2.0 * std::sqrt(denom)) - 0.5;
    r.oracle = negativity(rho, cuts::pair(), NegativityScale::Half);
    r.deviation = std::abs(r.value - r.oracle);
    return r;
}

namespace detail {

/// sqrt(d/(d-1) (1 - sum w^2 / (sum w)^2)) for nonnegative weights w. The
/// linear entropy is summed as sum_{a != b} w_a w_b so that values near zero
/// keep full relative precision.
inline double concurrence_from_weights(const RealVector &w, double d) {
    double total = 0.0;
    for (auto x : w) total += std::max(0.0, x);
    if (!(total > 0.0)) return 0.0;
    double cross = 0.0;
    for (Eigen::Index a = 0; a < w.size(); ++a) {
        double others = 0.0;
        for (Eigen::Index b = 0; b < w.size(); ++b) {
            if (b != a) others += std::max(0.0, w(b));
        }
        cross += std::max(0.0, w(a)) * others;
    }
    return std::clamp(std::sqrt(d / (d - 1.0) * cross / (total * total)), 0.0, 1.0);
}

} // namespace detail

/// sqrt(d/(d-1) (1 - Tr rho_A^2)) with rho_A the reduced state on cut.left
/// and d its dimension. Evaluated from the Schmidt weights of psi.
inline double i_concurrence(const PureState &psi, const BipartiteCut &cut) {
    const auto &shape = psi.shape();
    cut.validate(shape.wires());
    std::vector<std::size_t> order(cut.left);
    order.insert(order.end(), cut.right.begin(), cut.right.end());
    const auto left_dim = static_cast<Eigen::Index>(shape.total(cut.left));
    const auto right_dim = static_cast<Eigen::Index>(shape.total(cut.right));
    // Row-major (left, right) coefficient matrix.
    const auto strides = shape.strides();
    ComplexMatrix coeff(left_dim, right_dim);
    std::vector<std::size_t> digit(order.size(), 0);
    for (Eigen::Index flat = 0; flat < left_dim * right_dim; ++flat) {
        std::size_t src = 0;
        for (std::size_t k = 0; k < order.size(); ++k) src += digit[k] * strides[order[k]];
        coeff(flat / right_dim, flat % right_dim) = psi.amplitudes()(static_cast<Eigen::Index>(src));
        for (std::size_t k = order.size(); k-- > 0;) {
            if (++digit[k] < shape[order[k]]) break;
            digit[k] = 0;
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(coeff);
    const RealVector weights = svd.singularValues().cwiseAbs2();
    return detail::concurrence_from_weights(weights, static_cast<double>(left_dim));
}

/// 14|23 concurrence of the post-measurement state from the element's
/// eigenvalues alone.
inline double c14_vs_23(const PovmElement &el) {
    detail::require_positive_trace(el, "c14_vs_23");
    return detail::concurrence_from_weights(el.spectral().eigenvalues,
                                            static_cast<double>(el.dim()));
}

/// 12|34 concurrence of the post-measurement state, via its Schmidt weights.
inline double c12_vs_34(const PovmElement &el) {
    detail::require_positive_trace(el, "c12_vs_34");
    return i_concurrence(post_measurement_state(el).state, cuts::left_vs_right());
}

/// Same quantity through the eigenbasis contraction: rho_12 is summed from
/// the coefficients a_{a|ij} and its spectrum gives the linear entropy.
inline double c12_vs_34_contraction(const PovmElement &el) {
    const ComplexMatrix rho12 = rho12_from_spectrum(el);
    RealVector w = hermitian_eig(rho12).eigenvalues;
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                         static_cast<double>(w.size()) * std::abs(w(0));
    for (auto &x : w) {
        if (x <= floor) x = 0.0;
    }
    return detail::concurrence_from_weights(w, static_cast<double>(el.dim()));
}

/// Trace and determinant of U for a two-round branch, evaluated from the
/// eigenbasis expansion of rho_14|nm with Y taken by the Levi-Civita sum
/// over the rows of U.
struct TwoRoundCoefficients {
    ComplexMatrix rho14;  // eigenbasis expansion (entrywise conjugate convention)
    ComplexMatrix u;
    double trace_u = 0.0;
    double det_u = 0.0;
};

inline TwoRoundCoefficients two_round_coefficients(const PovmElement &first,
                                                   const PovmElement &second) {
    if (first.dim() != 4 || second.dim() != 4) {
        fail(ErrorCode::BadDimension, "two_round_coefficients: two-qubit elements only");
    }
    TwoRoundCoefficients r;
    r.rho14 = rho14_two_round_spectral(first, second, /*conjugate_basis=*/false);
    const ComplexMatrix pt = partial_transpose(r.rho14, SubsystemShape{2, 2}, 1);
    r.u = pt.adjoint() * pt;
    for (Eigen::Index k = 0; k < 4; ++k) r.trace_u += r.u(k, k).real();
    r.det_u = levi_civita_determinant(r.u).real();
    return r;
}

} // namespace swapforge
