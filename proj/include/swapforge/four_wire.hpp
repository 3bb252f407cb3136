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

// Four-wire register shared by the swap protocol: wires (0, 1) hold the
// first maximally entangled pair, wires (2, 3) the second. Measurements act
// on the middle wires (1, 2); the target pair is (0, 3).
//
// Besides the state-vector route this header carries the eigenbasis
// expansions of the conditional states. With Pi = sum_a pi_a |phi_a><phi_a|
// and coefficients a_{a|ij} = <ij|phi_a>, each expansion is evaluated by
// explicit index sums and serves as an independent cross-check of the
// partial-trace route.

#include <cmath>
#include <cstddef>

#include "swapforge/error.hpp"
#include "swapforge/states.hpp"
#include "swapforge/tensor.hpp"

namespace swapforge {

namespace wires {
inline constexpr std::size_t kAlice = 0;   // wire 1
inline constexpr std::size_t kBobLeft = 1; // wire 2
inline constexpr std::size_t kBobRight = 2; // wire 3
inline constexpr std::size_t kCharlie = 3; // wire 4
} // namespace wires

inline SubsystemShape four_wire_shape(std::size_t d) {
    return SubsystemShape::uniform(d, 4);
}

/// Local dimension d of an operator acting on a d x d pair.
inline std::size_t pair_local_dim(std::size_t pair_dim) {
    const auto d = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(pair_dim))));
    if (d < 2 || d * d != pair_dim) {
        fail(ErrorCode::ShapeMismatch, "operator dimension " + std::to_string(pair_dim) +
                                           " is not d^2 for an integer d >= 2");
    }
    return d;
}

/// Product of two maximally entangled pairs, wire order (1, 2, 3, 4).
inline PureState initial_state(std::size_t d) {
    const auto pair = max_entangled_state(d);
    return PureState(kron(pair.amplitudes(), pair.amplitudes()), four_wire_shape(d));
}

/// Applies a d^2 x d^2 operator to wires (2, 3) of a four-wire vector.
inline ComplexVector apply_to_middle(const ComplexMatrix &op, const ComplexVector &v,
                                     std::size_t d) {
    const auto dd = static_cast<Eigen::Index>(d * d);
    const auto dl = static_cast<Eigen::Index>(d);
    if (op.rows() != dd || op.cols() != dd || v.size() != dd * dd) {
        fail(ErrorCode::ShapeMismatch, "apply_to_middle: operator/state size mismatch");
    }
    ComplexVector out = ComplexVector::Zero(v.size());
    // index = (i1 * d^2 + mid) * d + i4
    for (Eigen::Index i1 = 0; i1 < dl; ++i1) {
        for (Eigen::Index i4 = 0; i4 < dl; ++i4) {
            ComplexVector slice(dd);
            for (Eigen::Index k = 0; k < dd; ++k) slice(k) = v((i1 * dd + k) * dl + i4);
            const ComplexVector mapped = op * slice;
            for (Eigen::Index m = 0; m < dd; ++m) out((i1 * dd + m) * dl + i4) = mapped(m);
        }
    }
    return out;
}

namespace detail {

inline void require_positive_trace(const PovmElement &el, const char *who) {
    if (!(el.trace() > 0.0) || el.degenerate()) {
        fail(ErrorCode::ZeroTrace, std::string(who) + ": element has zero trace");
    }
}

} // namespace detail

/// Post-measurement state sqrt(Pi) (x) I |Phi> / sqrt(p) on the initial
/// register together with its probability p.
struct PostMeasurement {
    PureState state;
    double probability;
};

inline PostMeasurement post_measurement_state(const PovmElement &el) {
    detail::require_positive_trace(el, "post_measurement_state");
    const std::size_t d = pair_local_dim(el.dim());
    ComplexVector v = apply_to_middle(el.sqrt(), initial_state(d).amplitudes(), d);
    const double p = v.squaredNorm();
    v /= std::sqrt(p);
    return {PureState(std::move(v), four_wire_shape(d)), p};
}

/// rho_14 = Pi^* / Tr(Pi).
inline ComplexMatrix rho14_from_element(const PovmElement &el) {
    detail::require_positive_trace(el, "rho14_from_element");
    return conjugate_computational(el.matrix()) / el.trace();
}

/// Reduced state of wires (1, 2) from the eigenbasis expansion:
/// (1/Tr Pi) sum_{ab} sqrt(pi_a pi_b) a*_{a|ij} a_{a|kl} a_{b|i'j} a*_{b|k'l} |ik><i'k'|.
inline ComplexMatrix rho12_from_spectrum(const PovmElement &el) {
    detail::require_positive_trace(el, "rho12_from_spectrum");
    const std::size_t d = pair_local_dim(el.dim());
    const auto &s = el.spectral();
    const auto &A = s.eigenvectors;
    const auto rank = static_cast<std::size_t>(s.eigenvalues.size());
    const auto at = [&](std::size_t alpha, std::size_t i, std::size_t j) {
        return A(static_cast<Eigen::Index>(i * d + j), static_cast<Eigen::Index>(alpha));
    };
    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(d * d),
                                            static_cast<Eigen::Index>(d * d));
    for (std::size_t a = 0; a < rank; ++a) {
        for (std::size_t b = 0; b < rank; ++b) {
            const double w = std::sqrt(s.eigenvalues(a) * s.eigenvalues(b));
            if (w == 0.0) continue;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k)
                    for (std::size_t ip = 0; ip < d; ++ip)
                        for (std::size_t kp = 0; kp < d; ++kp) {
                            Complex acc{0.0, 0.0};
                            for (std::size_t j = 0; j < d; ++j)
                                for (std::size_t l = 0; l < d; ++l)
                                    acc += std::conj(at(a, i, j)) * at(a, k, l) *
                                           at(b, ip, j) * std::conj(at(b, kp, l));
                            rho(i * d + k, ip * d + kp) += w * acc;
                        }
        }
    }
    return rho / el.trace();
}

/// Reduced state of wires (3, 4) from the eigenbasis expansion:
/// (1/Tr Pi) sum_{ab} sqrt(pi_a pi_b) a*_{a|ij} a_{a|kl} a_{b|ij'} a*_{b|kl'} |lj><l'j'|.
inline ComplexMatrix rho34_from_spectrum(const PovmElement &el) {
    detail::require_positive_trace(el, "rho34_from_spectrum");
    const std::size_t d = pair_local_dim(el.dim());
    const auto &s = el.spectral();
    const auto &A = s.eigenvectors;
    const auto rank = static_cast<std::size_t>(s.eigenvalues.size());
    const auto at = [&](std::size_t alpha, std::size_t i, std::size_t j) {
        return A(static_cast<Eigen::Index>(i * d + j), static_cast<Eigen::Index>(alpha));
    };
    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(d * d),
                                            static_cast<Eigen::Index>(d * d));
    for (std::size_t a = 0; a < rank; ++a) {
        for (std::size_t b = 0; b < rank; ++b) {
            const double w = std::sqrt(s.eigenvalues(a) * s.eigenvalues(b));
            if (w == 0.0) continue;
            for (std::size_t l = 0; l < d; ++l)
                for (std::size_t j = 0; j < d; ++j)
                    for (std::size_t lp = 0; lp < d; ++lp)
                        for (std::size_t jp = 0; jp < d; ++jp) {
                            Complex acc{0.0, 0.0};
                            for (std::size_t i = 0; i < d; ++i)
                                for (std::size_t k = 0; k < d; ++k)
                                    acc += std::conj(at(a, i, j)) * at(a, k, l) *
                                           at(b, i, jp) * std::conj(at(b, k, lp));
                            rho(l * d + j, lp * d + jp) += w * acc;
                        }
        }
    }
    return rho / el.trace();
}

/// Probability of outcome `second` on the state left by `first`:
/// (1/Tr Pi) sum_{a,d} pi_a mu_d |<psi_d|phi_a>|^2.
inline double second_round_probability_spectral(const PovmElement &first,
                                                const PovmElement &second) {
    detail::require_positive_trace(first, "second_round_probability_spectral");
    const auto &f = first.spectral();
    const auto &g = second.spectral();
    double acc = 0.0;
    for (Eigen::Index a = 0; a < f.eigenvalues.size(); ++a) {
        for (Eigen::Index m = 0; m < g.eigenvalues.size(); ++m) {
            acc += f.eigenvalues(a) * g.eigenvalues(m) *
                   std::norm(g.eigenvectors.col(m).dot(f.eigenvectors.col(a)));
        }
    }
    return acc / first.trace();
}

/// Target-pair state after two outcomes, from the eigenbases of both
/// elements: (1/(d^2 p s)) sum_{a,b,m} mu_m sqrt(pi_a pi_b)
/// <phi_b|psi_m><psi_m|phi_a> |phi_a^*><phi_b^*|.
///
/// `conjugate_basis = false` drops the conjugation on the outer vectors and
/// swaps the overlap order; the result is the entrywise conjugate of the
/// physical state (same spectrum and negativity).
inline ComplexMatrix rho14_two_round_spectral(const PovmElement &first,
                                              const PovmElement &second,
                                              bool conjugate_basis = true) {
    detail::require_positive_trace(first, "rho14_two_round_spectral");
    const std::size_t d = pair_local_dim(first.dim());
    const auto &f = first.spectral();
    const auto &g = second.spectral();
    const double p = first.trace() / static_cast<double>(d * d);
    const double s = second_round_probability_spectral(first, second);
    if (!(s > 0.0)) {
        fail(ErrorCode::ZeroTrace, "rho14_two_round_spectral: zero-probability branch");
    }
    const auto n = f.eigenvalues.size();
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double w = std::sqrt(f.eigenvalues(a) * f.eigenvalues(b));
            if (w == 0.0) continue;
            Complex overlap{0.0, 0.0};
            for (Eigen::Index m = 0; m < g.eigenvalues.size(); ++m) {
                const ComplexVector psi = g.eigenvectors.col(m);
                // <phi_b|psi_m><psi_m|phi_a>
                overlap += g.eigenvalues(m) * f.eigenvectors.col(b).dot(psi) *
                           psi.dot(f.eigenvectors.col(a));
            }
            if (conjugate_basis) {
                rho += w * overlap *
                       (f.eigenvectors.col(a).conjugate() *
                        f.eigenvectors.col(b).conjugate().adjoint());
            } else {
                rho += w * std::conj(overlap) *
                       (f.eigenvectors.col(a) * f.eigenvectors.col(b).adjoint());
            }
        }
    }
    return rho / (static_cast<double>(d * d) * p * s);
}

} // namespace swapforge
