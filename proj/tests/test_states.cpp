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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "swapforge/families.hpp"
#include "swapforge/measures.hpp"
#include "swapforge/random.hpp"
#include "swapforge/states.hpp"

using namespace swapforge;

namespace {

template <class F>
ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no swapforge::Error thrown";
    return ErrorCode::IO;
}

} // namespace

TEST(MaxEntangledState, QubitAmplitudes) {
    const auto psi = max_entangled_state(2);
    const double r = 1.0 / std::sqrt(2.0);
    ComplexVector expect(4);
    expect << r, 0, 0, r;
    EXPECT_LE((psi.amplitudes() - expect).norm(), 1e-15);
    EXPECT_EQ(psi.shape(), (SubsystemShape{2, 2}));
}

TEST(MaxEntangledState, QutritAmplitudes) {
    const auto psi = max_entangled_state(3);
    for (Eigen::Index i = 0; i < 9; ++i) {
        const double expect = (i % 4 == 0) ? 1.0 / std::sqrt(3.0) : 0.0;
        EXPECT_NEAR(psi.amplitudes()(i).real(), expect, 1e-15);
        EXPECT_EQ(psi.amplitudes()(i).imag(), 0.0);
    }
}

TEST(MaxEntangledState, MarginalsMaximallyMixed) {
    for (std::size_t d : {2u, 3u, 4u}) {
        const auto psi = max_entangled_state(d);
        for (std::size_t w : {0u, 1u}) {
            const auto r = partial_trace(psi.density(), psi.shape(), {w});
            EXPECT_LE(max_abs(r - identity(d) / static_cast<double>(d)), 1e-15);
        }
    }
}

TEST(MaxEntangledState, UnitConcurrenceEveryDimension) {
    for (std::size_t d = 2; d <= 6; ++d) {
        const auto psi = max_entangled_state(d);
        EXPECT_NEAR(i_concurrence(psi, cuts::pair()), 1.0, 1e-12);
        EXPECT_NEAR(oracle::schmidt_concurrence(psi.amplitudes(), {d, d}, {0}), 1.0, 1e-12);
    }
}

TEST(MaxEntangledState, RejectsSmallDimension) {
    EXPECT_EQ(code_of([] { max_entangled_state(1); }), ErrorCode::BadDimension);
    EXPECT_EQ(code_of([] { max_entangled_state(0); }), ErrorCode::BadDimension);
}

TEST(PureState, Validation) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = 1.0;
    EXPECT_NO_THROW(PureState(v, SubsystemShape{2, 2}));
    EXPECT_EQ(code_of([&] { PureState(v, SubsystemShape{2, 3}); }), ErrorCode::ShapeMismatch);
    v(0) = 2.0;
    EXPECT_EQ(code_of([&] { PureState(v, SubsystemShape{2, 2}); }), ErrorCode::BadParameter);
    EXPECT_EQ(code_of([] { PureState::normalized(ComplexVector::Zero(4), SubsystemShape{2, 2}); }),
              ErrorCode::BadParameter);
}

TEST(DensityMatrix, Validation) {
    EXPECT_NO_THROW(DensityMatrix(identity(4) / 4.0, SubsystemShape{2, 2}));
    EXPECT_EQ(code_of([] { DensityMatrix(identity(4), SubsystemShape{2, 2}); }),
              ErrorCode::BadParameter);
    ComplexMatrix m = identity(2) / 2.0;
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_EQ(code_of([&] { DensityMatrix(m, SubsystemShape{2}); }), ErrorCode::NotPsd);
    m = identity(2) / 2.0;
    m(0, 1) = 0.1;
    EXPECT_EQ(code_of([&] { DensityMatrix(m, SubsystemShape{2}); }), ErrorCode::NotHermitian);
}

TEST(ValidatePovm, NoisyBellPassesAcrossLambda) {
    for (int k = 0; k <= 20; ++k) {
        const double lambda = 0.05 * k;
        const auto povm = noisy_bell_povm(lambda);
        const auto r = validate_povm(povm);
        EXPECT_TRUE(r.pass) << lambda << ": " << r.diagnostics();
        EXPECT_LE(r.completeness_deviation, 1e-12);
    }
}

TEST(ValidatePovm, IncompleteSetReportsDeviation) {
    const std::vector<ComplexMatrix> els{identity(4) / 2.0, identity(4) / 3.0};
    const auto r = validate_povm(els, 2);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.completeness_deviation, 1.0 / 6.0, 1e-15);
    EXPECT_EQ(r.min_eigenvalues.size(), 2u);
    EXPECT_EQ(code_of([&] { Povm(els, 2); }), ErrorCode::InvalidPovm);
}

TEST(ValidatePovm, SmallPerturbationCaught) {
    const auto p = projector(bell_state(0));
    ComplexMatrix x = ComplexMatrix::Zero(4, 4);
    x(0, 1) = x(1, 0) = 1.0;
    const std::vector<ComplexMatrix> els{p, identity(4) - p + 1e-6 * x};
    const auto r = validate_povm(els, 2);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.completeness_deviation, 1e-6, 1e-15);
}

TEST(ValidatePovm, ReportsNonPsdAndNonHermitian) {
    ComplexMatrix bad = ComplexMatrix::Zero(4, 4);
    bad(0, 0) = -0.5;
    bad(1, 1) = 0.5;
    ComplexMatrix rest = identity(4) - bad;
    const auto r = validate_povm(std::vector<ComplexMatrix>{bad, rest}, 2);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.min_eigenvalues[0], -0.5, 1e-14);
    EXPECT_NE(r.diagnostics().find("min eigenvalue"), std::string::npos);

    ComplexMatrix skew = identity(4) / 2.0;
    skew(0, 1) = 0.25;
    const auto h = validate_povm(std::vector<ComplexMatrix>{skew, identity(4) / 2.0}, 2);
    EXPECT_FALSE(h.pass);
    EXPECT_NEAR(h.hermiticity_deviations[0], 0.25, 1e-15);
}

TEST(ValidatePovm, WrongShapeAndEmpty) {
    EXPECT_FALSE(validate_povm(std::vector<ComplexMatrix>{identity(3)}, 2).pass);
    EXPECT_FALSE(validate_povm(std::vector<ComplexMatrix>{}, 2).pass);
}

TEST(ValidatePovm, ZeroElementFlaggedButLegal) {
    const std::vector<ComplexMatrix> els{identity(4), ComplexMatrix::Zero(4, 4)};
    const auto r = validate_povm(els, 2);
    EXPECT_TRUE(r.pass);
    ASSERT_EQ(r.zero_elements.size(), 1u);
    EXPECT_EQ(r.zero_elements[0], 1u);
    const Povm povm(els, 2);
    EXPECT_TRUE(povm[1].degenerate());
    EXPECT_FALSE(povm[0].degenerate());
}

TEST(ElementSpectral, NoisyBellEigenvalues) {
    for (double lambda : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        const auto povm = noisy_bell_povm(lambda);
        for (std::size_t n = 0; n < 4; ++n) {
            const auto &ev = element_spectral(povm[n]).eigenvalues;
            ASSERT_EQ(ev.size(), 4);
            EXPECT_NEAR(ev(0), (3 * lambda + 1) / 4, 1e-14);
            for (int k = 1; k < 4; ++k) EXPECT_NEAR(ev(k), (1 - lambda) / 4, 1e-14);
        }
    }
}

TEST(ElementSpectral, IdentityAndPadding) {
    const PovmElement id(identity(4));
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(id.spectral().eigenvalues(k), 1.0, 1e-15);
    const PovmElement p(projector(bell_state(2)));
    ASSERT_EQ(p.spectral().eigenvalues.size(), 4);
    EXPECT_NEAR(p.spectral().eigenvalues(0), 1.0, 1e-15);
    for (int k = 1; k < 4; ++k) EXPECT_EQ(p.spectral().eigenvalues(k), 0.0);
    EXPECT_EQ(p.rank(1e-10), 1u);
}

TEST(ElementSpectral, RandomReconstructionAndSum) {
    random::Engine rng(101);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = t % 2 ? 9 : 4;
        const PovmElement el(random::psd(n, rng, 1 + t % n));
        const auto &s = element_spectral(el);
        EXPECT_LE(max_abs(s.reconstruct() - el.matrix()), 1e-10);
        EXPECT_GE(s.eigenvalues.minCoeff(), 0.0);
        EXPECT_NEAR(s.eigenvalues.sum(), el.trace(), 1e-10);
        EXPECT_LE(max_abs(el.sqrt() * el.sqrt() - el.matrix()), 1e-10);
    }
}

TEST(ElementSpectral, RejectsNonPsd) {
    EXPECT_EQ(code_of([] { PovmElement(-identity(4)); }), ErrorCode::NotPsd);
}

TEST(Povm, TraceSumEqualsDimension) {
    random::Engine rng(103);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = t % 3 == 0 ? 3 : 2;
        const std::size_t outcomes = 2 + t % 5;
        const std::size_t rank = (d * d + outcomes - 1) / outcomes + t % 2;
        const auto povm = random::povm(d, outcomes, rng, rank);
        double total = 0.0;
        for (const auto &el : povm.elements()) total += el.trace();
        EXPECT_NEAR(total, static_cast<double>(d * d), 1e-9);
        EXPECT_TRUE(validate_povm(povm).pass);
    }
}

TEST(RandomPovm, RejectsUncoveredSpace) {
    random::Engine rng(1);
    EXPECT_EQ(code_of([&] { random::povm(2, 2, rng, 1); }), ErrorCode::BadParameter);
}

TEST(ConjugateComputational, Examples) {
    random::Engine rng(107);
    const ComplexMatrix real = random::ginibre(4, 4, rng).real().cast<Complex>();
    EXPECT_LE(max_abs(conjugate_computational(real) - real), 0.0);

    ComplexVector yp(2);
    ComplexVector ym(2);
    yp << 1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0));
    ym << 1.0 / std::sqrt(2.0), Complex(0.0, -1.0 / std::sqrt(2.0));
    EXPECT_LE(max_abs(conjugate_computational(projector(yp)) - projector(ym)), 1e-15);

    const auto m = random::ginibre(5, 5, rng);
    EXPECT_LE(max_abs(conjugate_computational(conjugate_computational(m)) - m), 0.0);
}

TEST(ConjugateComputational, PreservesHermitianSpectrum) {
    random::Engine rng(109);
    for (int t = 0; t < 100; ++t) {
        const auto m = random::psd(4, rng);
        const auto a = hermitian_eig(m).eigenvalues;
        const auto b = hermitian_eig(conjugate_computational(m)).eigenvalues;
        EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10);
    }
}
