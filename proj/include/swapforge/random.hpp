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

// Seeded generators for random states and measurements.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "swapforge/error.hpp"
#include "swapforge/states.hpp"
#include "swapforge/tensor.hpp"

namespace swapforge::random {

using Engine = std::mt19937_64;

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Engine &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex{g(rng), g(rng)};
    return m;
}

inline ComplexVector unit_vector(std::size_t n, Engine &rng) {
    ComplexVector v = ginibre(n, 1, rng).col(0);
    return v / v.norm();
}

/// Haar unitary: QR of a Ginibre matrix with the phases of R divided out.
inline ComplexMatrix unitary(std::size_t n, Engine &rng) {
    const ComplexMatrix z = ginibre(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const Complex d = r(k, k);
        const double a = std::abs(d);
        if (a > 0.0) q.col(k) *= d / a;
    }
    return q;
}

/// PSD matrix with `rank` eigenvalues uniform in (0, 1] in a Haar basis.
/// rank = 0 means full rank.
inline ComplexMatrix psd(std::size_t n, Engine &rng, std::size_t rank = 0) {
    if (rank == 0 || rank > n) rank = n;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const ComplexMatrix v = unitary(n, rng);
    RealVector ev = RealVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < rank; ++k) ev(static_cast<Eigen::Index>(k)) = u(rng);
    return v * ev.cast<Complex>().asDiagonal() * v.adjoint();
}

/// Rank-1 element w |v><v| with weight w in (0, 1].
inline ComplexMatrix rank1_element(std::size_t n, Engine &rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    return u(rng) * projector(unit_vector(n, rng));
}

/// Separable element on a d x d pair: sum of `terms` weighted product
/// projectors |a><a| (x) |b><b|.
inline ComplexMatrix separable_element(std::size_t d, std::size_t terms, Engine &rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d * d),
                                            static_cast<Eigen::Index>(d * d));
    for (std::size_t k = 0; k < terms; ++k) {
        out += u(rng) * kron(projector(unit_vector(d, rng)), projector(unit_vector(d, rng)));
    }
    return out;
}

inline ComplexMatrix density(std::size_t n, Engine &rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    const ComplexMatrix m = g * g.adjoint();
    return m / m.trace();
}

/// Element-wise mixed random POVM: Pi_k = S^{-1/2} G_k^dag G_k S^{-1/2}
/// with S = sum_k G_k^dag G_k. Each G_k has `rank` rows (0 = full); S is
/// invertible only when rank * outcomes >= n.
inline std::vector<ComplexMatrix> povm_matrices(std::size_t n, std::size_t outcomes,
                                                Engine &rng, std::size_t rank = 0) {
    if (rank == 0 || rank > n) rank = n;
    if (rank * outcomes < n) {
        fail(ErrorCode::BadParameter, "random povm: rank * outcomes must cover the space");
    }
    std::vector<ComplexMatrix> raw;
    ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < outcomes; ++k) {
        const ComplexMatrix g = ginibre(rank, n, rng);
        raw.push_back(g.adjoint() * g);
        s += raw.back();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
    const RealVector inv_root = es.eigenvalues().cwiseSqrt().cwiseInverse();
    const ComplexMatrix w =
        es.eigenvectors() * inv_root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    for (auto &m : raw) {
        m = w * m * w;
        m = ((m + m.adjoint()) * 0.5).eval();
    }
    return raw;
}

inline Povm povm(std::size_t d, std::size_t outcomes, Engine &rng, std::size_t rank = 0) {
    return Povm(povm_matrices(d * d, outcomes, rng, rank), d);
}

/// Two-outcome measurement {E, I - E} around a given element with spectrum in [0, 1].
inline Povm completed(const ComplexMatrix &element, std::size_t d) {
    ComplexMatrix rest = identity(d * d) - element;
    rest = ((rest + rest.adjoint()) * 0.5).eval();
    return Povm({element, rest}, d);
}

} // namespace swapforge::random
