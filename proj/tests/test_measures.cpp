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
#include "swapforge/four_wire.hpp"
#include "swapforge/measures.hpp"
#include "swapforge/random.hpp"
#include "swapforge/swap_engine.hpp"

using namespace swapforge;

namespace {

const SubsystemShape kQubits{2, 2};

DensityMatrix bell_density(std::size_t k = 0) {
    return DensityMatrix(projector(bell_state(k)), kQubits);
}

DensityMatrix werner(double p) {
    return DensityMatrix(p * projector(bell_state(0)) + (1.0 - p) / 4.0 * identity(4), kQubits);
}

double eq32(double l) {
    const double a = std::sqrt(1.0 - l);
    const double b = std::sqrt(1.0 + 3.0 * l);
    return std::sqrt(std::max(0.0, 1.0 + l * l - a * b + l * a * b)) / std::sqrt(2.0);
}

ComplexMatrix local_unitary(const std::vector<std::size_t> &dims,
                            const std::vector<std::size_t> &wires_to_rotate,
                            random::Engine &rng) {
    ComplexMatrix u = ComplexMatrix::Identity(1, 1);
    for (std::size_t w = 0; w < dims.size(); ++w) {
        bool rot = false;
        for (auto r : wires_to_rotate) rot |= r == w;
        u = kron(u, rot ? random::unitary(dims[w], rng) : identity(dims[w]));
    }
    return u;
}

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

TEST(Negativity, BellStateOnBothScales) {
    EXPECT_NEAR(negativity(bell_density(), cuts::pair(), NegativityScale::Half), 0.5, 1e-14);
    EXPECT_NEAR(negativity(bell_density(), cuts::pair()), 1.0, 1e-14);
}

TEST(Negativity, MaximallyMixedIsZero) {
    EXPECT_EQ(negativity(DensityMatrix(identity(4) / 4.0, kQubits), cuts::pair()), 0.0);
}

TEST(Negativity, NoisyBellTargetState) {
    // rho_14 for a noisy Bell outcome at lambda = 0.6 scores (3 * 0.6 - 1) / 2 = 0.4.
    const auto povm = noisy_bell_povm(0.6);
    const DensityMatrix rho(rho14_from_element(povm[0]), kQubits);
    EXPECT_NEAR(negativity(rho, cuts::pair()), 0.4, 1e-12);
    EXPECT_NEAR(negativity(rho, cuts::pair(), NegativityScale::Half), 0.2, 1e-12);
}

TEST(Negativity, MatchesSpectrumOracle) {
    random::Engine rng(201);
    for (int t = 0; t < 200; ++t) {
        const auto m = random::density(4, rng);
        EXPECT_NEAR(negativity(DensityMatrix(m, kQubits), cuts::pair()),
                    oracle::negativity_unit(m, 2, 2), 1e-10);
    }
    for (int t = 0; t < 50; ++t) {
        const auto m = random::density(6, rng);
        EXPECT_NEAR(negativity(DensityMatrix(m, SubsystemShape{2, 3}), cuts::pair()),
                    oracle::negativity_unit(m, 2, 3), 1e-10);
    }
}

TEST(Negativity, ZeroIffPptForQubitPairs) {
    random::Engine rng(203);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int entangled = 0;
    int separable = 0;
    for (int t = 0; t < 400; ++t) {
        // Mixtures of a random pure state with white noise cover both sides
        // of the PPT boundary.
        const auto psi = random::unit_vector(4, rng);
        const double w = u(rng);
        const DensityMatrix rho(w * projector(psi) + (1.0 - w) / 4.0 * identity(4), kQubits);
        const bool ppt = is_ppt(rho, cuts::pair());
        const double n = negativity(rho, cuts::pair());
        if (ppt) {
            ++separable;
            EXPECT_LE(n, 1e-9);
        } else {
            ++entangled;
            EXPECT_GT(n, 0.0);
        }
    }
    EXPECT_GT(entangled, 20);
    EXPECT_GT(separable, 20);
}

TEST(Negativity, InvalidCut) {
    const auto rho = bell_density();
    EXPECT_EQ(code_of([&] { negativity(rho, BipartiteCut{{0}, {0}}); }),
              ErrorCode::ShapeMismatch);
    EXPECT_EQ(code_of([&] { negativity(rho, BipartiteCut{{0, 1}, {}}); }),
              ErrorCode::ShapeMismatch);
    EXPECT_EQ(code_of([&] { negativity(rho, BipartiteCut{{0}, {2}}); }),
              ErrorCode::ShapeMismatch);
}

TEST(IsPpt, Examples) {
    EXPECT_TRUE(is_ppt(DensityMatrix(identity(4) / 4.0, kQubits), cuts::pair()));
    EXPECT_FALSE(is_ppt(bell_density(), cuts::pair()));
    EXPECT_NEAR(min_pt_eigenvalue(bell_density().matrix(), kQubits, cuts::pair()), -0.5, 1e-14);
    const auto povm = noisy_bell_povm(1.0 / 3.0);
    const DensityMatrix boundary(povm[0].matrix() / povm[0].trace(), kQubits);
    EXPECT_TRUE(is_ppt(boundary, cuts::pair()));
    EXPECT_NEAR(min_pt_eigenvalue(boundary.matrix(), kQubits, cuts::pair()), 0.0, 1e-15);
}

TEST(IsPpt, WernerThreshold) {
    for (int k = 0; k <= 20; ++k) {
        const double p = 0.05 * k;
        EXPECT_EQ(is_ppt(werner(p), cuts::pair()), p <= 1.0 / 3.0 + 1e-12) << p;
    }
}

TEST(LeviCivita, MatchesCofactorExpansion) {
    random::Engine rng(207);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int t = 0; t < 10; ++t) {
            const auto m = random::ginibre(n, n, rng);
            EXPECT_LE(std::abs(levi_civita_determinant(m) - oracle::cofactor_det(m)), 1e-10)
                << n;
        }
    }
    EXPECT_NEAR(levi_civita_determinant(identity(4)).real(), 1.0, 0.0);
    ComplexMatrix swap_rows = identity(3);
    swap_rows.row(0).swap(swap_rows.row(1));
    EXPECT_NEAR(levi_civita_determinant(swap_rows).real(), -1.0, 0.0);
}

TEST(ClosedForm, BellStateReportsDeviation) {
    const auto r = negativity_closed_form(bell_density());
    EXPECT_NEAR(r.trace_u, 1.0, 1e-14);
    EXPECT_NEAR(r.det_u, 1.0 / 256.0, 1e-16);
    const double expect = (1.0 + 4.0 / 16.0) / (2.0 * std::sqrt(1.0 + 1.0 / 8.0)) - 0.5;
    EXPECT_NEAR(r.value, expect, 1e-14);
    EXPECT_NEAR(r.oracle, 0.5, 1e-14);
    EXPECT_NEAR(r.deviation, std::abs(expect - 0.5), 1e-14);
}

TEST(ClosedForm, MaximallyMixedState) {
    const auto r = negativity_closed_form(DensityMatrix(identity(4) / 4.0, kQubits));
    EXPECT_NEAR(r.trace_u, 0.25, 1e-15);
    EXPECT_NEAR(r.det_u, 1.0 / 65536.0, 1e-18);
    EXPECT_EQ(r.oracle, 0.0);
    EXPECT_NEAR(r.deviation, std::abs(r.value), 0.0);
}

TEST(ClosedForm, ScalarTwoByTwoRootIsExact) {
    // The root formula behind the closed form, (M + sqrt(det M) I) /
    // sqrt(Tr M + 2 sqrt(det M)), is exact for every 2x2 PSD M, in particular
    // for scalar M = c I, where it gives sqrt(c) I.
    for (double c : {1e-4, 1.0 / 16.0, 0.25, 1.0, 7.5}) {
        const auto root = psd_sqrt_closed_2x2(c * identity(2));
        EXPECT_LE(max_abs(root - std::sqrt(c) * identity(2)), 1e-12) << c;
    }
}

TEST(ClosedForm, ScalarFourByFourTraceRootHasNoExactDensityCase) {
    // For U = c I on four dimensions the trace expression equals 4 sqrt(c)
    // only at c^2 = 3. Density matrices give c <= 1/4, so for states whose U
    // is scalar the closed form deviates by a computable amount.
    const auto trace_root = [](double c) {
        const double x = 4.0 * c;
        const double ry = c * c;
        return (x + 4.0 * ry) / std::sqrt(x + 2.0 * ry);
    };
    EXPECT_NEAR(trace_root(std::sqrt(3.0)), 4.0 * std::pow(3.0, 0.25), 1e-12);
    for (const auto &rho : {bell_density(0), bell_density(3),
                            DensityMatrix(identity(4) / 4.0, kQubits)}) {
        const auto r = negativity_closed_form(rho);
        const ComplexMatrix pt = partial_transpose(rho.matrix(), kQubits, 1);
        const ComplexMatrix u = pt.adjoint() * pt;
        const double c = u(0, 0).real();
        ASSERT_LE(max_abs(u - c * identity(4)), 1e-15);
        EXPECT_NEAR(r.value, 0.5 * trace_root(c) - 0.5, 1e-14);
        EXPECT_GT(r.deviation, 0.05);
    }
}

TEST(ClosedForm, DeviationIsReportedNotHidden) {
    random::Engine rng(211);
    for (int t = 0; t < 50; ++t) {
        const DensityMatrix rho(random::density(4, rng), kQubits);
        const auto r = negativity_closed_form(rho);
        EXPECT_NEAR(r.oracle, negativity(rho, cuts::pair(), NegativityScale::Half), 1e-15);
        EXPECT_NEAR(r.deviation, std::abs(r.value - r.oracle), 1e-15);
        EXPECT_TRUE(std::isfinite(r.value));
    }
}

TEST(ClosedForm, Errors) {
    EXPECT_EQ(code_of([] {
                  negativity_closed_form(DensityMatrix(identity(6) / 6.0, SubsystemShape{2, 3}));
              }),
              ErrorCode::ShapeMismatch);
}

TEST(IConcurrence, Examples) {
    EXPECT_NEAR(i_concurrence(max_entangled_state(2), cuts::pair()), 1.0, 1e-14);
    ComplexVector zero = ComplexVector::Zero(4);
    zero(0) = 1.0;
    EXPECT_NEAR(i_concurrence(PureState(zero, kQubits), cuts::pair()), 0.0, 1e-14);
    EXPECT_NEAR(i_concurrence(initial_state(2), cuts::outer_vs_middle()), 1.0, 1e-14);
    EXPECT_NEAR(i_concurrence(initial_state(2), cuts::left_vs_right()), 0.0, 1e-14);
    EXPECT_NEAR(i_concurrence(initial_state(3), cuts::outer_vs_middle()), 1.0, 1e-12);
}

TEST(IConcurrence, MatchesSchmidtOracle) {
    random::Engine rng(213);
    const std::vector<std::size_t> dims{2, 3, 2, 2};
    const SubsystemShape shape(dims);
    for (int t = 0; t < 100; ++t) {
        const PureState psi(random::unit_vector(shape.total(), rng), shape);
        for (const BipartiteCut &cut :
             {BipartiteCut{{0}, {1, 2, 3}}, BipartiteCut{{0, 3}, {1, 2}},
              BipartiteCut{{1, 2}, {0, 3}}, BipartiteCut{{0, 1}, {2, 3}}}) {
            EXPECT_NEAR(i_concurrence(psi, cut),
                        oracle::schmidt_concurrence(psi.amplitudes(), dims, cut.left), 1e-7);
        }
    }
}

TEST(IConcurrence, LocalUnitaryInvariance) {
    random::Engine rng(217);
    const std::vector<std::size_t> dims{2, 2, 2, 2};
    const SubsystemShape shape(dims);
    for (int t = 0; t < 100; ++t) {
        const PureState psi(random::unit_vector(16, rng), shape);
        const auto cut = t % 2 ? cuts::outer_vs_middle() : cuts::left_vs_right();
        const ComplexMatrix u = local_unitary(dims, cut.left, rng) * local_unitary(dims, cut.right, rng);
        const PureState moved(u * psi.amplitudes(), shape);
        EXPECT_NEAR(i_concurrence(psi, cut), i_concurrence(moved, cut), 1e-10);
    }
}

TEST(C14vs23, Examples) {
    random::Engine rng(219);
    EXPECT_NEAR(c14_vs_23(PovmElement(random::rank1_element(4, rng))), 0.0, 1e-12);
    EXPECT_NEAR(c14_vs_23(noisy_bell_povm(0.6)[2]), 0.8, 1e-12);
    EXPECT_NEAR(c14_vs_23(PovmElement(identity(4))), 1.0, 1e-14);
    EXPECT_EQ(code_of([] { c14_vs_23(PovmElement(ComplexMatrix::Zero(4, 4))); }),
              ErrorCode::ZeroTrace);
}

TEST(C14vs23, AgreesWithPostMeasurementState) {
    random::Engine rng(223);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = t % 5 == 0 ? 9 : 4;
        const PovmElement el(random::psd(n, rng, 1 + t % n));
        const auto post = post_measurement_state(el);
        EXPECT_NEAR(c14_vs_23(el), i_concurrence(post.state, cuts::outer_vs_middle()), 1e-10);
    }
}

TEST(C12vs34, Examples) {
    EXPECT_NEAR(c12_vs_34(noisy_bell_povm(1.0)[0]), 1.0, 1e-12);
    EXPECT_NEAR(c12_vs_34(noisy_bell_povm(0.0)[0]), 0.0, 1e-12);
    const PovmElement zz(projector(basis_vector(4, 0)));
    EXPECT_NEAR(c12_vs_34(zz), 0.0, 1e-14);
    EXPECT_EQ(code_of([] { c12_vs_34(PovmElement(ComplexMatrix::Zero(4, 4))); }),
              ErrorCode::ZeroTrace);
}

TEST(C12vs34, NoisyBellClosedForm) {
    for (int k = 0; k <= 20; ++k) {
        const double l = 0.05 * k;
        const auto povm = noisy_bell_povm(l);
        for (std::size_t n = 0; n < 4; ++n) {
            EXPECT_NEAR(c12_vs_34(povm[n]), eq32(l), 1e-9) << l;
            EXPECT_NEAR(c14_vs_23(povm[n]), std::sqrt(1.0 - l * l), 1e-10) << l;
        }
    }
}

TEST(C12vs34, ContractionPathAgrees) {
    random::Engine rng(227);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = t % 10 == 0 ? 9 : 4;
        const PovmElement el(random::psd(n, rng, 1 + t % n));
        EXPECT_NEAR(c12_vs_34(el), c12_vs_34_contraction(el), 1e-9);
    }
}

TEST(C12vs34, AgreesWithSchmidtOracle) {
    random::Engine rng(229);
    for (int t = 0; t < 100; ++t) {
        const PovmElement el(random::psd(4, rng, 2 + t % 3));
        const auto post = post_measurement_state(el);
        EXPECT_NEAR(c12_vs_34(el),
                    oracle::schmidt_concurrence(post.state.amplitudes(), {2, 2, 2, 2}, {0, 1}),
                    1e-9);
    }
}

TEST(TwoRoundCoefficients, TraceAndDeterminantMatchDirect) {
    random::Engine rng(231);
    for (int t = 0; t < 100; ++t) {
        const PovmElement first(random::psd(4, rng, 1 + t % 4));
        const auto second = random::povm(2, 3, rng);
        const auto c = two_round_coefficients(first, second[t % 3]);
        EXPECT_NEAR(c.trace_u, c.u.trace().real(), 1e-12);
        EXPECT_NEAR(c.det_u, oracle::cofactor_det(c.u).real(), 1e-9);
        EXPECT_NEAR(c.det_u, c.u.determinant().real(), 1e-9);
    }
}

TEST(TwoRoundCoefficients, WorkedExampleClosedFormDeviation) {
    // Noisy Bell then the wire-2 measurement: the first branch is rank 2
    // with eigenvalues (1 + l)/2 and (1 - l)/2.
    for (double l : {0.2, 0.5, 0.8}) {
        const auto c = two_round_coefficients(noisy_bell_povm(l)[0], wire2_computational_povm()[0]);
        const DensityMatrix rho(c.rho14, kQubits);
        const auto cf = negativity_closed_form(rho);
        EXPECT_NEAR(cf.trace_u, c.trace_u, 1e-12);
        EXPECT_NEAR(cf.det_u, c.det_u, 1e-12);
        EXPECT_NEAR(cf.oracle, (l - 1.0 + std::sqrt(1.0 - 2.0 * l + 5.0 * l * l)) / 4.0, 1e-10);
        EXPECT_TRUE(std::isfinite(cf.deviation));
    }
}

TEST(NegativityOfTargetPair, EqualsNegativityOfConjugatedElement) {
    random::Engine rng(233);
    for (int t = 0; t < 100; ++t) {
        const PovmElement el(random::psd(4, rng, 1 + t % 4));
        const auto post = post_measurement_state(el);
        const DensityMatrix rho14(partial_trace(post.state.density(), post.state.shape(), {0, 3}),
                                  kQubits);
        const DensityMatrix formula(conjugate_computational(el.matrix()) / el.trace(), kQubits);
        EXPECT_NEAR(negativity(rho14, cuts::pair()), negativity(formula, cuts::pair()), 1e-10);
    }
}
