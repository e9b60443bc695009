#include "potentia/collapse.hpp"

#include "test_support.hpp"

#include "gtest/gtest.h"

#include <random>

using namespace potentia;

namespace {

CollapsedElement b(BBlade blade, int s, double coeff = 1.0) { return CollapsedElement::basis(blade, s, 3, coeff); }

// |psi><psi| built straight from the amplitudes.
Matrix2 outer_product(Complex c1, Complex c2) {
    return Matrix2(c1 * std::conj(c1), c1 * std::conj(c2), c2 * std::conj(c1), c2 * std::conj(c2));
}

// Projector onto outcome s of sigma_3, written out by hand.
Matrix2 sigma3_projector(int s) { return s > 0 ? Matrix2(1.0, 0.0, 0.0, 0.0) : Matrix2(0.0, 0.0, 0.0, 1.0); }

} // namespace

TEST(BMul, PositiveOrientationRelations) {
    const int s = 1;
    const auto E1 = b(BBlade::First, s), E2 = b(BBlade::Second, s), I = b(BBlade::I, s), U = b(BBlade::Unit, s);
    EXPECT_EQ(b_mul(E1, E1), U);
    EXPECT_EQ(b_mul(E2, E2), U);
    EXPECT_EQ(b_mul(I, I), b_scale(-1.0, U));
    EXPECT_EQ(b_mul(E1, E2), I);
    EXPECT_EQ(b_mul(E2, E1), b_scale(-1.0, I));
    EXPECT_EQ(b_mul(E2, I), b_scale(-1.0, E1));
    EXPECT_EQ(b_mul(I, E2), E1);
    EXPECT_EQ(b_mul(E1, I), E2);
    EXPECT_EQ(b_mul(I, E1), b_scale(-1.0, E2));
}

TEST(BMul, NegativeOrientationRelations) {
    const int s = -1;
    const auto E1 = b(BBlade::First, s), E2 = b(BBlade::Second, s), I = b(BBlade::I, s), U = b(BBlade::Unit, s);
    EXPECT_EQ(b_mul(E1, E1), U);
    EXPECT_EQ(b_mul(E2, E2), U);
    EXPECT_EQ(b_mul(I, I), b_scale(-1.0, U));
    EXPECT_EQ(b_mul(E1, E2), b_scale(-1.0, I));
    EXPECT_EQ(b_mul(E2, E1), I);
    EXPECT_EQ(b_mul(E2, I), E1);
    EXPECT_EQ(b_mul(I, E2), b_scale(-1.0, E1));
    EXPECT_EQ(b_mul(E1, I), b_scale(-1.0, E2));
    EXPECT_EQ(b_mul(I, E1), E2);
}

TEST(BMul, AssociativeForBothOrientations) {
    for (int s : {1, -1}) {
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t y = 0; y < 4; ++y)
                for (std::size_t z = 0; z < 4; ++z) {
                    const auto X = b(static_cast<BBlade>(x), s);
                    const auto Y = b(static_cast<BBlade>(y), s);
                    const auto Z = b(static_cast<BBlade>(z), s);
                    ASSERT_EQ(b_mul(b_mul(X, Y), Z), b_mul(X, b_mul(Y, Z)));
                }
    }
}

TEST(BMul, RejectsMixedSubalgebras) {
    try {
        b_mul(b(BBlade::First, 1), b(BBlade::First, -1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IncompatibleSubalgebra);
    }
    EXPECT_THROW(b_mul(CollapsedElement::unit(1, 3), CollapsedElement::unit(1, 1)), Error);
    EXPECT_THROW(CollapsedElement::unit(0), std::invalid_argument);
}

TEST(Substitute, Examples) {
    EXPECT_EQ(substitute(e3(), 1), CollapsedElement::unit(1));
    EXPECT_EQ(substitute(psi1(), 1), CollapsedElement::unit(1));
    EXPECT_EQ(substitute(psi2(), 1), CollapsedElement({0, 0, 0, 0}, 1));
    // e123 = e12 e3 -> (-i)(-1) = i
    EXPECT_EQ(substitute(e123(), -1), b(BBlade::I, -1));
    EXPECT_EQ(substitute(mul(e12(), e3()), -1), b(BBlade::I, -1));
    // Under e3 -> -1 the second idempotent becomes +1.
    EXPECT_EQ(substitute(psi1(), -1), CollapsedElement({0, 0, 0, 0}, -1));
    EXPECT_EQ(substitute(psi2(), -1), CollapsedElement::unit(-1));
}

TEST(Substitute, BasisMap) {
    for (int s : {1, -1}) {
        const double sd = s;
        EXPECT_EQ(substitute(one(), s), CollapsedElement({1, 0, 0, 0}, s));
        EXPECT_EQ(substitute(e1(), s), CollapsedElement({0, 1, 0, 0}, s));
        EXPECT_EQ(substitute(e2(), s), CollapsedElement({0, 0, 1, 0}, s));
        EXPECT_EQ(substitute(e3(), s), CollapsedElement({sd, 0, 0, 0}, s));
        EXPECT_EQ(substitute(e12(), s), CollapsedElement({0, 0, 0, sd}, s));
        EXPECT_EQ(substitute(e23(), s), CollapsedElement({0, 0, sd, 0}, s));
        EXPECT_EQ(substitute(e31(), s), CollapsedElement({0, sd, 0, 0}, s));
        EXPECT_EQ(substitute(e123(), s), CollapsedElement({0, 0, 0, 1}, s));
    }
}

TEST(Substitute, LinearButMultiplicativeOnlyOnCorner) {
    std::mt19937_64 rng(17);
    for (int axis = 1; axis <= 3; ++axis) {
        for (int s : {1, -1}) {
            const Multivector p = projector(axis, s);
            for (int t = 0; t < 300; ++t) {
                const auto x = potentia::testing::random_multivector(rng);
                const auto y = potentia::testing::random_multivector(rng);
                EXPECT_TRUE(eq_tol(substitute(add(x, y), s, axis),
                                   b_add(substitute(x, s, axis), substitute(y, s, axis)), 1e-15));
                const Multivector cx = mul(mul(p, x), p);
                const Multivector cy = mul(mul(p, y), p);
                EXPECT_TRUE(eq_tol(substitute(mul(cx, cy), s, axis),
                                   b_mul(substitute(cx, s, axis), substitute(cy, s, axis)), 1e-12));
            }
        }
    }
    // Off the corner the map is not multiplicative: e2 e123 = e31 -> s e1, but e2 i = -s e1 in B.
    EXPECT_NE(substitute(mul(e2(), e123()), 1), b_mul(substitute(e2(), 1), substitute(e123(), 1)));
}

TEST(Density, FromAmplitudes) {
    const auto [up, up_el] = density_from_amplitudes(1.0, 0.0);
    EXPECT_EQ(up.a, 0.5);
    EXPECT_EQ(up.b, 0.0);
    EXPECT_EQ(up.c, 0.0);
    EXPECT_EQ(up.d, 0.5);
    EXPECT_EQ(up_el, psi1());

    const auto [plus, plus_el] = density_from_amplitudes(M_SQRT1_2, M_SQRT1_2);
    EXPECT_NEAR(plus.a, 0.5, 1e-15);
    EXPECT_NEAR(plus.b, 0.5, 1e-15);
    EXPECT_EQ(plus.c, 0.0);
    EXPECT_NEAR(plus.d, 0.0, 1e-15);

    // b = 0.6 * 0.8, d = (0.36 - 0.64) / 2
    const auto [r, r_el] = density_from_amplitudes(0.6, 0.8);
    EXPECT_NEAR(r.a, 0.5, 1e-15);
    EXPECT_NEAR(r.b, 0.48, 1e-15);
    EXPECT_EQ(r.c, 0.0);
    EXPECT_NEAR(r.d, -0.14, 1e-15);
}

TEST(Density, RepresentationIsOuterProduct) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 500; ++t) {
        const auto [c1, c2] = potentia::testing::random_amplitudes(rng);
        const auto [rho, element] = density_from_amplitudes(c1, c2);
        EXPECT_LE(max_abs_diff(rep(element), outer_product(c1, c2)), 1e-12);
    }
}

TEST(Density, RejectsUnnormalizedAmplitudes) {
    try {
        density_from_amplitudes(1.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Normalization);
    }
}

TEST(MeasureCollapse, Examples) {
    EXPECT_EQ(measure_collapse(density_from_amplitudes(1.0, 0.0).second, 1), CollapsedElement::unit(1));

    const auto half = measure_collapse(density_from_amplitudes(M_SQRT1_2, M_SQRT1_2).second, 1);
    EXPECT_TRUE(eq_tol(half, b(BBlade::Unit, 1, 0.5), 1e-15));

    const Complex c1 = 0.6, c2{0.0, 0.8};
    const Multivector rho = density_from_amplitudes(c1, c2).second;
    const auto down = measure_collapse(rho, -1);
    EXPECT_TRUE(eq_tol(down, b(BBlade::Unit, -1, 0.64), 1e-15));
    const Matrix2 oracle = sigma3_projector(-1) * outer_product(c1, c2) * sigma3_projector(-1);
    EXPECT_NEAR(oracle.trace().real(), 0.64, 1e-15);
    EXPECT_NEAR(down.scalar(), oracle.trace().real(), 1e-15);
}

TEST(MeasureCollapse, RandomPureStates) {
    std::mt19937_64 rng(500);
    for (int t = 0; t < 500; ++t) {
        const auto [c1, c2] = potentia::testing::random_amplitudes(rng);
        const Multivector rho = density_from_amplitudes(c1, c2).second;
        const auto up = measure_collapse(rho, 1);
        const auto down = measure_collapse(rho, -1);
        EXPECT_TRUE(eq_tol(up, b(BBlade::Unit, 1, std::norm(c1)), 1e-12));
        EXPECT_TRUE(eq_tol(down, b(BBlade::Unit, -1, std::norm(c2)), 1e-12));
        EXPECT_NEAR(up.scalar() + down.scalar(), 1.0, 1e-12);
        for (int s : {1, -1}) {
            const Matrix2 oracle = sigma3_projector(s) * outer_product(c1, c2) * sigma3_projector(s);
            const auto got = s > 0 ? up : down;
            EXPECT_NEAR(got.scalar(), oracle.trace().real(), 1e-12);
            // The sandwich itself matches the matrix oracle entrywise.
            const Multivector p = projector(3, s);
            EXPECT_LE(max_abs_diff(rep(mul(mul(p, rho), p)), oracle), 1e-12);
        }
    }
}

TEST(MeasureCollapse, TransverseAxisGivesOutcomeWeight) {
    std::mt19937_64 rng(99);
    const Complex i{0.0, 1.0};
    for (int t = 0; t < 200; ++t) {
        const auto [c1, c2] = potentia::testing::random_amplitudes(rng);
        const Multivector rho = density_from_amplitudes(c1, c2).second;
        for (int s : {1, -1}) {
            // Projectors onto sigma_x and sigma_y eigenstates.
            const Matrix2 px(0.5, 0.5 * s, 0.5 * s, 0.5);
            const Matrix2 py(0.5, -0.5 * i * double(s), 0.5 * i * double(s), 0.5);
            const auto cx = measure_collapse(rho, s, 1);
            const auto cy = measure_collapse(rho, s, 2);
            EXPECT_NEAR(cx.scalar(), (px * outer_product(c1, c2) * px).trace().real(), 1e-12);
            EXPECT_NEAR(cy.scalar(), (py * outer_product(c1, c2) * py).trace().real(), 1e-12);
            for (BBlade k : {BBlade::First, BBlade::Second, BBlade::I}) {
                EXPECT_NEAR(cx[k], 0.0, 1e-12);
                EXPECT_NEAR(cy[k], 0.0, 1e-12);
            }
        }
    }
}

TEST(MeasureCollapse, InterferenceTermsAnnihilate) {
    {
        const int s = 1;
        const auto E1 = b(BBlade::First, s), E2 = b(BBlade::Second, s), I = b(BBlade::I, s);
        EXPECT_TRUE(eq_tol(b_add(E1, b_mul(E2, I)), b_scale(0.0, E1), 0.0));
        EXPECT_TRUE(eq_tol(b_add(E1, b_scale(-1.0, b_mul(I, E2))), b_scale(0.0, E1), 0.0));
        // The other grouping does not vanish for this outcome.
        EXPECT_FALSE(eq_tol(b_add(E1, b_mul(I, E2)), b_scale(0.0, E1), 0.0));
    }
    {
        const int s = -1;
        const auto E1 = b(BBlade::First, s), E2 = b(BBlade::Second, s), I = b(BBlade::I, s);
        EXPECT_TRUE(eq_tol(b_add(E1, b_mul(I, E2)), b_scale(0.0, E1), 0.0));
        EXPECT_TRUE(eq_tol(b_add(E1, b_scale(-1.0, b_mul(E2, I))), b_scale(0.0, E1), 0.0));
        EXPECT_FALSE(eq_tol(b_add(E1, b_mul(E2, I)), b_scale(0.0, E1), 0.0));
    }
}

TEST(MeasureCollapse, Renormalize) {
    const auto half = measure_collapse(density_from_amplitudes(M_SQRT1_2, M_SQRT1_2).second, 1);
    EXPECT_TRUE(eq_tol(renormalized(half), CollapsedElement::unit(1), 1e-15));
    const auto none = measure_collapse(density_from_amplitudes(1.0, 0.0).second, -1);
    EXPECT_EQ(none.scalar(), 0.0);
    EXPECT_THROW(renormalized(none), Error);
    EXPECT_EQ(half.trace(), 2.0 * half.scalar());
}

TEST(Subalgebra, FromSolverBranches) {
    const auto sols = solve_structure_constants(make_signature(1, 1, -1));
    EXPECT_EQ(subalgebra_from_solution(sols[0]), b_table(1));
    EXPECT_EQ(subalgebra_from_solution(sols[1]), b_table(-1));
    EXPECT_EQ(orientation_of(subalgebra_from_solution(sols[0])), 1);
    EXPECT_EQ(orientation_of(subalgebra_from_solution(sols[1])), -1);
    try {
        subalgebra_from_solution(solve_structure_constants(make_signature(1, 1, 1))[0]);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IncompatibleSubalgebra);
    }
    EXPECT_THROW(subalgebra_from_solution(solve_structure_constants(make_signature(2, 3, 5))[0]), Error);
}

TEST(Subalgebra, TransverseAxesMatchSolverTables) {
    // For each measured axis, products of the lifted B generators inside the
    // corner must follow the (1, 1, -1) solver table of that orientation.
    const auto sols = solve_structure_constants(make_signature(1, 1, -1));
    for (int axis = 1; axis <= 3; ++axis) {
        const auto [a, bb] = transverse_axes(axis);
        for (int s : {1, -1}) {
            const BProductTable expected = subalgebra_from_solution(sols[s > 0 ? 0 : 1]);
            // Images of 1, e_a, e_b, e123 under e_k -> s, multiplied in B.
            const std::array<CollapsedElement, 4> images = {
                CollapsedElement::unit(s, axis), substitute(Multivector::generator(a), s, axis),
                substitute(Multivector::generator(bb), s, axis), substitute(e123(), s, axis)};
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = 0; j < 4; ++j) {
                    const auto prod = b_mul(images[i], images[j]);
                    const auto want = CollapsedElement::basis(static_cast<BBlade>(expected[i][j].blade), s, axis,
                                                              expected[i][j].sign);
                    EXPECT_EQ(prod, want) << "axis " << axis << " s " << s << " (" << i << "," << j << ")";
                }
            }
            // e_a e_b in A carries e_k -> s into s i.
            const auto ab = substitute(mul(Multivector::generator(a), Multivector::generator(bb)), s, axis);
            EXPECT_EQ(ab, b_scale(s, images[3]));
        }
    }
}
