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

// Dense complex linear algebra on multipartite systems. Wires are indexed
// from 0 and stored big-endian: the first wire is the most significant
// digit of a basis index.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swapforge/error.hpp"
#include "swapforge/tolerances.hpp"

namespace swapforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Local dimensions of an ordered list of wires.
class SubsystemShape {
  public:
    SubsystemShape() = default;

    SubsystemShape(std::initializer_list<std::size_t> dims)
        : SubsystemShape(std::vector<std::size_t>(dims)) {}

    explicit SubsystemShape(std::vector<std::size_t> dims)
        : dims_(std::move(dims)) {
        for (std::size_t d : dims_) {
            if (d < 2) {
                fail(ErrorCode::BadDimension,
                     "local dimension " + std::to_string(d) + " < 2");
            }
        }
    }

    /// Uniform shape: `wires` copies of dimension `d`.
    static SubsystemShape uniform(std::size_t d, std::size_t wires) {
        return SubsystemShape(std::vector<std::size_t>(wires, d));
    }

    std::size_t wires() const noexcept { return dims_.size(); }
    std::size_t operator[](std::size_t w) const { return dims_.at(w); }
    const std::vector<std::size_t> &dims() const noexcept { return dims_; }

    std::size_t total() const noexcept {
        return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                               std::multiplies<>{});
    }

    /// Product of the dimensions of the listed wires.
    std::size_t total(std::span<const std::size_t> wires) const {
        std::size_t p = 1;
        for (std::size_t w : wires) p *= dims_.at(w);
        return p;
    }

    SubsystemShape select(std::span<const std::size_t> wires) const {
        std::vector<std::size_t> out;
        out.reserve(wires.size());
        for (std::size_t w : wires) out.push_back(dims_.at(w));
        return SubsystemShape(std::move(out));
    }

    /// Basis-index stride of each wire.
    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> s(dims_.size(), 1);
        for (std::size_t w = dims_.size(); w-- > 1;) s[w - 1] = s[w] * dims_[w];
        return s;
    }

    bool operator==(const SubsystemShape &) const = default;

  private:
    std::vector<std::size_t> dims_;
};

struct HermitianSpectrum {
    RealVector eigenvalues;    // descending
    ComplexMatrix eigenvectors; // column k belongs to eigenvalues[k]

    ComplexMatrix reconstruct() const {
        return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
               eigenvectors.adjoint();
    }
};

inline double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_deviation(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(m - m.adjoint());
}

namespace detail {

inline double scaled(double tol, const ComplexMatrix &m) {
    return tol * std::max(1.0, max_abs(m));
}

inline void require_square(const ComplexMatrix &m, const char *who) {
    if (m.rows() != m.cols()) {
        fail(ErrorCode::ShapeMismatch,
             std::string(who) + ": matrix is " + std::to_string(m.rows()) +
                 "x" + std::to_string(m.cols()) + ", expected square");
    }
}

inline void require_shape(const ComplexMatrix &m, const SubsystemShape &shape,
                          const char *who) {
    require_square(m, who);
    if (static_cast<std::size_t>(m.rows()) != shape.total()) {
        fail(ErrorCode::ShapeMismatch,
             std::string(who) + ": subsystem dimensions multiply to " +
                 std::to_string(shape.total()) + " but matrix is " +
                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

inline void require_hermitian(const ComplexMatrix &m, double herm_tol,
                              const char *who) {
    require_square(m, who);
    const double dev = hermiticity_deviation(m);
    if (dev > scaled(herm_tol, m)) {
        fail(ErrorCode::NotHermitian, std::string(who) +
                                          ": max|M - M^dag| = " +
                                          std::to_string(dev));
    }
}

/// Offsets into the full basis of every multi-index over `wires`,
/// enumerated row-major in the order the wires are listed.
inline std::vector<std::size_t>
block_offsets(const SubsystemShape &shape, std::span<const std::size_t> wires) {
    const auto stride = shape.strides();
    std::vector<std::size_t> out{0};
    for (std::size_t w : wires) {
        std::vector<std::size_t> next;
        next.reserve(out.size() * shape[w]);
        for (std::size_t base : out) {
            for (std::size_t digit = 0; digit < shape[w]; ++digit) {
                next.push_back(base + digit * stride[w]);
            }
        }
        out = std::move(next);
    }
    return out;
}

inline void require_wire_set(std::span<const std::size_t> wires,
                             std::size_t count, const char *who) {
    std::vector<bool> seen(count, false);
    for (std::size_t w : wires) {
        if (w >= count) {
            fail(ErrorCode::BadIndex, std::string(who) + ": wire " +
                                          std::to_string(w) + " out of range");
        }
        if (seen[w]) {
            fail(ErrorCode::BadIndex, std::string(who) + ": wire " +
                                          std::to_string(w) + " repeated");
        }
        seen[w] = true;
    }
}

inline std::vector<std::size_t> complement(std::span<const std::size_t> wires,
                                           std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < count; ++w) {
        if (std::find(wires.begin(), wires.end(), w) == wires.end()) {
            out.push_back(w);
        }
    }
    return out;
}

} // namespace detail

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

/// Re-expresses `m` with wires reordered: new wire k is old wire perm[k].
inline ComplexMatrix permute_subsystems(const ComplexMatrix &m,
                                        const SubsystemShape &shape,
                                        std::span<const std::size_t> perm) {
    detail::require_shape(m, shape, "permute_subsystems");
    if (perm.size() != shape.wires()) {
        fail(ErrorCode::BadIndex, "permute_subsystems: permutation has " +
                                      std::to_string(perm.size()) +
                                      " entries for " +
                                      std::to_string(shape.wires()) + " wires");
    }
    detail::require_wire_set(perm, shape.wires(), "permute_subsystems");
    const auto offset = detail::block_offsets(shape, perm);
    const auto n = static_cast<Eigen::Index>(offset.size());
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = m(offset[i], offset[j]);
        }
    }
    return out;
}

/// Reduced operator on `keep`, ordered as listed.
inline ComplexMatrix partial_trace(const ComplexMatrix &m,
                                   const SubsystemShape &shape,
                                   std::span<const std::size_t> keep) {
    detail::require_shape(m, shape, "partial_trace");
    detail::require_wire_set(keep, shape.wires(), "partial_trace");
    const auto traced = detail::complement(keep, shape.wires());
    const auto kept_off = detail::block_offsets(shape, keep);
    const auto traced_off = detail::block_offsets(shape, traced);
    const auto n = static_cast<Eigen::Index>(kept_off.size());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t t : traced_off) {
                acc += m(kept_off[i] + t, kept_off[j] + t);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix &m,
                                   const SubsystemShape &shape,
                                   std::initializer_list<std::size_t> keep) {
    return partial_trace(m, shape, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Transposes the listed wires, leaving the others untouched.
inline ComplexMatrix partial_transpose(const ComplexMatrix &m,
                                       const SubsystemShape &shape,
                                       std::span<const std::size_t> subs) {
    detail::require_shape(m, shape, "partial_transpose");
    detail::require_wire_set(subs, shape.wires(), "partial_transpose");
    const auto stride = shape.strides();
    const auto n = m.rows();
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            auto ni = static_cast<std::size_t>(i);
            auto nj = static_cast<std::size_t>(j);
            for (std::size_t w : subs) {
                const std::size_t di = (ni / stride[w]) % shape[w];
                const std::size_t dj = (nj / stride[w]) % shape[w];
                ni = ni - di * stride[w] + dj * stride[w];
                nj = nj - dj * stride[w] + di * stride[w];
            }
            out(ni, nj) = m(i, j);
        }
    }
    return out;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix &m,
                                       const SubsystemShape &shape,
                                       std::size_t sub) {
    const std::size_t one[] = {sub};
    return partial_transpose(m, shape, one);
}

inline HermitianSpectrum hermitian_eig(const ComplexMatrix &m,
                                       const Tolerances &tol = {}) {
    detail::require_hermitian(m, tol.herm_tol, "hermitian_eig");
    const ComplexMatrix sym = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    const auto n = m.rows();
    HermitianSpectrum out{RealVector(n), ComplexMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return out;
}

namespace detail {

inline void require_psd(const HermitianSpectrum &s, const ComplexMatrix &m,
                        double psd_tol, const char *who) {
    if (s.eigenvalues.size() == 0) return;
    const double lo = s.eigenvalues.minCoeff();
    if (lo < -scaled(psd_tol, m)) {
        fail(ErrorCode::NotPsd, std::string(who) + ": min eigenvalue " +
                                    std::to_string(lo));
    }
}

} // namespace detail

/// Spectral PSD square root. Eigenvalues in [-psd_tol, 0) are clamped.
inline ComplexMatrix psd_sqrt(const ComplexMatrix &m, const Tolerances &tol = {}) {
    const auto s = hermitian_eig(m, tol);
    detail::require_psd(s, m, tol.psd_tol, "psd_sqrt");
    const RealVector root = s.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    return s.eigenvectors * root.cast<Complex>().asDiagonal() *
           s.eigenvectors.adjoint();
}

/// Closed-form square root of a 2x2 PSD matrix:
/// (M + sqrt(det M) I) / sqrt(Tr M + 2 sqrt(det M)).
inline ComplexMatrix psd_sqrt_closed_2x2(const ComplexMatrix &m,
                                         const Tolerances &tol = {}) {
    if (m.rows() != 2 || m.cols() != 2) {
        fail(ErrorCode::ShapeMismatch, "psd_sqrt_closed_2x2: expected 2x2, got " +
                                           std::to_string(m.rows()) + "x" +
                                           std::to_string(m.cols()));
    }
    detail::require_hermitian(m, tol.herm_tol, "psd_sqrt_closed_2x2");
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const double b2 = std::norm(m(0, 1));
    const double half_gap = std::sqrt(0.25 * (a - c) * (a - c) + b2);
    const double lo = 0.5 * (a + c) - half_gap;
    if (lo < -detail::scaled(tol.psd_tol, m)) {
        fail(ErrorCode::NotPsd,
             "psd_sqrt_closed_2x2: min eigenvalue " + std::to_string(lo));
    }
    const double det_root = std::sqrt(std::max(0.0, a * c - b2));
    const double denom_sq = a + c + 2.0 * det_root;
    if (denom_sq <= 0.0) {
        // Only the zero matrix reaches here.
        return ComplexMatrix::Zero(2, 2);
    }
    ComplexMatrix out = m;
    out(0, 0) += det_root;
    out(1, 1) += det_root;
    return out / std::sqrt(denom_sq);
}

/// Sum of singular values.
inline double trace_norm(const ComplexMatrix &m) {
    detail::require_square(m, "trace_norm");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().sum();
}

/// Number of eigenvalues above rel_tol times the largest one.
inline std::size_t matrix_rank(const ComplexMatrix &m, double rel_tol,
                               const Tolerances &tol = {}) {
    const auto s = hermitian_eig(m, tol);
    detail::require_psd(s, m, tol.psd_tol, "matrix_rank");
    if (s.eigenvalues.size() == 0) return 0;
    const double top = s.eigenvalues(0);
    if (top <= 0.0) return 0;
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
        if (s.eigenvalues(k) > rel_tol * top) ++rank;
    }
    return rank;
}

inline std::size_t matrix_rank(const ComplexMatrix &m, const Tolerances &tol = {}) {
    return matrix_rank(m, tol.rank_rel_tol, tol);
}

inline ComplexMatrix projector(const ComplexVector &v) { return v * v.adjoint(); }

inline ComplexMatrix identity(std::size_t n) {
    return ComplexMatrix::Identity(static_cast<Eigen::Index>(n),
                                   static_cast<Eigen::Index>(n));
}

inline ComplexVector basis_vector(std::size_t dim, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

} // namespace swapforge
