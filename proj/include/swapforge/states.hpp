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

#include <cmath>
#include <cstddef>
#include <span>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "swapforge/error.hpp"
#include "swapforge/tensor.hpp"
#include "swapforge/tolerances.hpp"

namespace swapforge {

/// Normalized state vector on a multipartite shape.
class PureState {
  public:
    PureState(ComplexVector amplitudes, SubsystemShape shape, double norm_tol = 1e-10)
        : amplitudes_(std::move(amplitudes)), shape_(std::move(shape)) {
        if (static_cast<std::size_t>(amplitudes_.size()) != shape_.total()) {
            fail(ErrorCode::ShapeMismatch,
                 "PureState: " + std::to_string(amplitudes_.size()) +
                     " amplitudes for total dimension " +
                     std::to_string(shape_.total()));
        }
        const double dev = std::abs(amplitudes_.squaredNorm() - 1.0);
        if (dev > norm_tol) {
            fail(ErrorCode::BadParameter,
                 "PureState: squared norm deviates from 1 by " + std::to_string(dev));
        }
    }

    /// Rescales `v` to unit norm. BadParameter if v is zero.
    static PureState normalized(ComplexVector v, SubsystemShape shape) {
        const double n = v.norm();
        if (!(n > 0.0)) fail(ErrorCode::BadParameter, "PureState: zero vector");
        v /= n;
        return PureState(std::move(v), std::move(shape));
    }

    const ComplexVector &amplitudes() const noexcept { return amplitudes_; }
    const SubsystemShape &shape() const noexcept { return shape_; }
    ComplexMatrix density() const { return amplitudes_ * amplitudes_.adjoint(); }

  private:
    ComplexVector amplitudes_;
    SubsystemShape shape_;
};

/// Unit-trace Hermitian PSD operator on a multipartite shape.
class DensityMatrix {
  public:
    DensityMatrix(ComplexMatrix matrix, SubsystemShape shape, const Tolerances &tol = {})
        : matrix_(std::move(matrix)), shape_(std::move(shape)) {
        detail::require_shape(matrix_, shape_, "DensityMatrix");
        const auto spectrum = hermitian_eig(matrix_, tol);
        detail::require_psd(spectrum, matrix_, tol.psd_tol, "DensityMatrix");
        const double tr_dev = std::abs(matrix_.trace() - Complex{1.0, 0.0});
        if (tr_dev > 1e-10) {
            fail(ErrorCode::BadParameter,
                 "DensityMatrix: trace deviates from 1 by " + std::to_string(tr_dev));
        }
    }

    static DensityMatrix from_pure(const PureState &psi) {
        return DensityMatrix(psi.density(), psi.shape());
    }

    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    const SubsystemShape &shape() const noexcept { return shape_; }

  private:
    ComplexMatrix matrix_;
    SubsystemShape shape_;
};

/// One POVM element with its spectral decomposition and square root,
/// both computed once at construction.
class PovmElement {
  public:
    explicit PovmElement(ComplexMatrix matrix, const Tolerances &tol = {})
        : matrix_(std::move(matrix)) {
        spectral_ = hermitian_eig(matrix_, tol);
        detail::require_psd(spectral_, matrix_, tol.psd_tol, "PovmElement");
        // Eigenvalues within the solver's rounding floor are exact zeros;
        // keeping them as +-1e-17 noise would leak into rank-sensitive
        // quantities such as concurrences.
        const double top = spectral_.eigenvalues.size() ? std::abs(spectral_.eigenvalues(0)) : 0.0;
        const double floor = 8.0 * std::numeric_limits<double>::epsilon() *
                             static_cast<double>(matrix_.rows()) * top;
        for (auto &ev : spectral_.eigenvalues) {
            if (ev <= floor) ev = 0.0;
        }
        const RealVector root = spectral_.eigenvalues.cwiseSqrt();
        sqrt_ = spectral_.eigenvectors * root.cast<Complex>().asDiagonal() *
                spectral_.eigenvectors.adjoint();
        trace_ = matrix_.trace().real();
        degenerate_ = spectral_.eigenvalues.size() == 0 ||
                      spectral_.eigenvalues(0) <= tol.psd_tol;
    }

    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    const HermitianSpectrum &spectral() const noexcept { return spectral_; }
    const ComplexMatrix &sqrt() const noexcept { return sqrt_; }
    double trace() const noexcept { return trace_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

    /// True for the zero element (a probability-0 branch).
    bool degenerate() const noexcept { return degenerate_; }

    std::size_t rank(double rel_tol) const {
        const double top = spectral_.eigenvalues.size() ? spectral_.eigenvalues(0) : 0.0;
        if (top <= 0.0) return 0;
        std::size_t r = 0;
        for (Eigen::Index k = 0; k < spectral_.eigenvalues.size(); ++k) {
            if (spectral_.eigenvalues(k) > rel_tol * top) ++r;
        }
        return r;
    }

  private:
    ComplexMatrix matrix_;
    HermitianSpectrum spectral_;
    ComplexMatrix sqrt_;
    double trace_ = 0.0;
    bool degenerate_ = false;
};

inline const HermitianSpectrum &element_spectral(const PovmElement &el) {
    return el.spectral();
}

struct ValidationReport {
    bool pass = false;
    double completeness_deviation = 0.0;
    std::vector<double> min_eigenvalues;
    std::vector<double> hermiticity_deviations;
    std::vector<std::size_t> zero_elements;
    std::vector<std::string> failures;

    std::string diagnostics() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < failures.size(); ++k) {
            if (k) os << "; ";
            os << failures[k];
        }
        return os.str();
    }
};

/// Checks element shapes, Hermiticity, positivity and completeness without
/// throwing; every problem found is listed in the report.
inline ValidationReport validate_povm(std::span<const ComplexMatrix> elements,
                                      std::size_t local_dim,
                                      const Tolerances &tol = {}) {
    ValidationReport r;
    const auto dim = static_cast<Eigen::Index>(local_dim * local_dim);
    if (local_dim < 2) r.failures.push_back("local_dim < 2");
    if (elements.empty()) r.failures.push_back("no elements");
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    bool shapes_ok = local_dim >= 2;
    for (std::size_t n = 0; n < elements.size(); ++n) {
        const auto &m = elements[n];
        if (m.rows() != dim || m.cols() != dim) {
            shapes_ok = false;
            r.min_eigenvalues.push_back(std::nan(""));
            r.hermiticity_deviations.push_back(std::nan(""));
            r.failures.push_back("element " + std::to_string(n + 1) + " is " +
                                 std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ", expected " +
                                 std::to_string(dim) + "x" + std::to_string(dim));
            continue;
        }
        const double herm = hermiticity_deviation(m);
        r.hermiticity_deviations.push_back(herm);
        if (herm > detail::scaled(tol.herm_tol, m)) {
            r.failures.push_back("element " + std::to_string(n + 1) +
                                 " not Hermitian: max|M - M^dag| = " + std::to_string(herm));
        }
        const ComplexMatrix sym = (m + m.adjoint()) * 0.5;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
        const double lo = solver.eigenvalues().minCoeff();
        const double hi = solver.eigenvalues().maxCoeff();
        r.min_eigenvalues.push_back(lo);
        if (lo < -detail::scaled(tol.psd_tol, m)) {
            std::ostringstream os;
            os.precision(6);
            os << "element " << n + 1 << " not PSD: min eigenvalue " << lo;
            r.failures.push_back(os.str());
        }
        if (hi <= tol.psd_tol) r.zero_elements.push_back(n);
        sum += m;
    }
    if (shapes_ok && !elements.empty()) {
        r.completeness_deviation = max_abs(sum - ComplexMatrix::Identity(dim, dim));
        if (r.completeness_deviation > tol.completeness_tol) {
            std::ostringstream os;
            os.precision(6);
            os << "elements do not sum to identity: max deviation "
               << r.completeness_deviation;
            r.failures.push_back(os.str());
        }
    } else {
        r.completeness_deviation = std::nan("");
    }
    r.pass = r.failures.empty();
    return r;
}

/// Complete measurement on a d x d system.
class Povm {
  public:
    /// Validates and decomposes raw matrices. InvalidPovm on any failure.
    Povm(std::vector<ComplexMatrix> matrices, std::size_t local_dim,
         const Tolerances &tol = {})
        : local_dim_(local_dim) {
        const auto report = validate_povm(matrices, local_dim, tol);
        if (!report.pass) fail(ErrorCode::InvalidPovm, report.diagnostics());
        elements_.reserve(matrices.size());
        for (auto &m : matrices) elements_.emplace_back(std::move(m), tol);
        completeness_deviation_ = report.completeness_deviation;
    }

    std::size_t local_dim() const noexcept { return local_dim_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const PovmElement &operator[](std::size_t n) const { return elements_.at(n); }
    const std::vector<PovmElement> &elements() const noexcept { return elements_; }
    double completeness_deviation() const noexcept { return completeness_deviation_; }

    std::vector<ComplexMatrix> matrices() const {
        std::vector<ComplexMatrix> out;
        out.reserve(elements_.size());
        for (const auto &e : elements_) out.push_back(e.matrix());
        return out;
    }

  private:
    std::vector<PovmElement> elements_;
    std::size_t local_dim_;
    double completeness_deviation_ = 0.0;
};

inline ValidationReport validate_povm(const Povm &povm, const Tolerances &tol = {}) {
    const auto m = povm.matrices();
    return validate_povm(m, povm.local_dim(), tol);
}

/// (1/sqrt(d)) sum_i |ii> on shape [d, d].
inline PureState max_entangled_state(std::size_t d) {
    if (d < 2) fail(ErrorCode::BadDimension, "max_entangled_state: d < 2");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i * d + i)) = amp;
    return PureState(std::move(v), SubsystemShape{d, d});
}

/// Entrywise complex conjugate in the computational basis.
inline ComplexMatrix conjugate_computational(const ComplexMatrix &m) {
    return m.conjugate();
}

} // namespace swapforge
