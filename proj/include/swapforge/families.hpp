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

// Parametric measurements on the middle pair.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "swapforge/error.hpp"
#include "swapforge/measures.hpp"
#include "swapforge/states.hpp"
#include "swapforge/tensor.hpp"

namespace swapforge {

/// Bell basis in the fixed order phi+, phi-, psi+, psi-.
inline ComplexVector bell_state(std::size_t k) {
    const double r = 1.0 / std::sqrt(2.0);
    ComplexVector v = ComplexVector::Zero(4);
    switch (k) {
    case 0: v << r, 0, 0, r; break;
    case 1: v << r, 0, 0, -r; break;
    case 2: v << 0, r, r, 0; break;
    case 3: v << 0, r, -r, 0; break;
    default: fail(ErrorCode::BadIndex, "bell_state: index " + std::to_string(k));
    }
    return v;
}

/// Pi_n = lambda |B_n><B_n| + (1 - lambda) I/4 over the Bell basis.
inline Povm noisy_bell_povm(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        fail(ErrorCode::BadParameter, "noisy_bell: lambda must lie in [0, 1]");
    }
    std::vector<ComplexMatrix> els;
    for (std::size_t k = 0; k < 4; ++k) {
        els.push_back(lambda * projector(bell_state(k)) + (1.0 - lambda) / 4.0 * identity(4));
    }
    return Povm(std::move(els), 2);
}

inline Povm bell_projective() {
    std::vector<ComplexMatrix> els;
    for (std::size_t k = 0; k < 4; ++k) els.push_back(projector(bell_state(k)));
    return Povm(std::move(els), 2);
}

/// Computational-basis measurement of wire 2 alone: |0><0| (x) I, |1><1| (x) I.
inline Povm wire2_computational_povm() {
    std::vector<ComplexMatrix> els;
    for (std::size_t k = 0; k < 2; ++k) {
        els.push_back(kron(projector(basis_vector(2, k)), identity(2)));
    }
    return Povm(std::move(els), 2);
}

/// A = tau1 |v1><v1| + tau2 |v2><v2| with
/// |v1> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> and |v2> orthogonal.
struct SingleQubitElementParams {
    double theta = 0.0;
    double phi = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
};

inline std::array<ComplexVector, 2> single_qubit_basis(const SingleQubitElementParams &p) {
    const Complex phase = std::polar(1.0, p.phi);
    const double c = std::cos(0.5 * p.theta);
    const double s = std::sin(0.5 * p.theta);
    ComplexVector v1(2);
    ComplexVector v2(2);
    v1 << c, phase * s;
    v2 << s, -phase * c;
    return {v1, v2};
}

inline ComplexMatrix single_qubit_element(const SingleQubitElementParams &p) {
    if (!(p.tau1 >= 0.0 && p.tau2 >= 0.0)) {
        fail(ErrorCode::BadParameter, "single-qubit element weights must be nonnegative");
    }
    const auto [v1, v2] = single_qubit_basis(p);
    return p.tau1 * projector(v1) + p.tau2 * projector(v2);
}

struct ProductElementParams {
    SingleQubitElementParams a; // acts on wire 2
    SingleQubitElementParams b; // acts on wire 3
};

/// Measurement whose elements are products A_n (x) B_n, with the factors kept.
struct ProductPovm {
    Povm povm;
    std::vector<std::pair<ComplexMatrix, ComplexMatrix>> factors;
};

/// The caller supplies a closing set of factors; no completion is attempted.
inline ProductPovm separable_product_povm(const std::vector<ProductElementParams> &params,
                                          const Tolerances &tol = {}) {
    if (params.empty()) fail(ErrorCode::IncompletePovm, "separable_product: no elements");
    std::vector<std::pair<ComplexMatrix, ComplexMatrix>> factors;
    std::vector<ComplexMatrix> els;
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    for (const auto &pr : params) {
        auto a = single_qubit_element(pr.a);
        auto b = single_qubit_element(pr.b);
        els.push_back(kron(a, b));
        sum += els.back();
        factors.emplace_back(std::move(a), std::move(b));
    }
    const double dev = max_abs(sum - identity(4));
    if (dev > tol.completeness_tol) {
        fail(ErrorCode::IncompletePovm,
             "separable_product: elements sum to identity only within " + std::to_string(dev));
    }
    return ProductPovm{Povm(std::move(els), 2, tol), std::move(factors)};
}

/// 2 sqrt(tau1 tau2) / (tau1 + tau2): entanglement left in a Bell pair after
/// the element acts on one of its qubits.
inline double single_qubit_residual_concurrence(const SingleQubitElementParams &p) {
    const double t = p.tau1 + p.tau2;
    if (!(t > 0.0)) fail(ErrorCode::ZeroTrace, "single-qubit element has zero trace");
    return 2.0 * std::sqrt(p.tau1 * p.tau2) / t;
}

/// Same quantity from the state (I (x) sqrt(A)) |phi+>, normalized.
inline double single_qubit_residual_concurrence_by_state(const SingleQubitElementParams &p) {
    const ComplexMatrix a = single_qubit_element(p);
    if (!(a.trace().real() > 0.0)) fail(ErrorCode::ZeroTrace, "single-qubit element has zero trace");
    const ComplexVector v = kron(identity(2), psd_sqrt(a)) * max_entangled_state(2).amplitudes();
    return i_concurrence(PureState::normalized(v, SubsystemShape{2, 2}), cuts::pair());
}

} // namespace swapforge
