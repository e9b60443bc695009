#include "potentia/derivation.hpp"

#include "gtest/gtest.h"

#include <algorithm>
#include <array>
#include <random>

using namespace potentia;

namespace {

// Leibniz expansion, independent of the cofactor formula in the library.
double leibniz_det(const Matrix3& m) {
    std::array<int, 3> p = {0, 1, 2};
    double det = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (p[i] > p[j]) ++inversions;
        const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
        det += sign * m[0][p[0]] * m[1][p[1]] * m[2][p[2]];
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

GeneratedElement gen(int k, Complex c = 1.0) {
    GeneratedElement e{};
    e[static_cast<std::size_t>(k)] = c;
    return e;
}

Signature random_signature(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.1, 10.0);
    std::bernoulli_distribution neg(0.5);
    auto k = [&] { return neg(rng) ? -mag(rng) : mag(rng); };
    return make_signature(k(), k(), k());
}

const Complex I{0.0, 1.0};

} // namespace

TEST(BuildSystem, UnitSignatureRows) {
    const Matrix3 m = build_system(make_signature(1, 1, 1));
    const Matrix3 expected{{{-1, 1, 0}, {0, 1, -1}, {1, 0, -1}}};
    EXPECT_EQ(m, expected);
    EXPECT_EQ(determinant(m), 0.0);
    EXPECT_EQ(leibniz_det(m), 0.0);
}

TEST(BuildSystem, DeterminantVanishesForGeneralSignature) {
    const Matrix3 m = build_system(make_signature(2, 3, 5));
    // k1 k2 k3 - k1 k2 k3 symbolically.
    EXPECT_EQ(leibniz_det(m), 0.0);
    EXPECT_NEAR(determinant(m), 0.0, 1e-12);
}

TEST(BuildSystem, DeterminantVanishesForRandomSignatures) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 1000; ++t) {
        const Matrix3 m = build_system(random_signature(rng));
        const double scale = std::pow(max_norm(m), 3);
        ASSERT_LE(std::abs(determinant(m)), 1e-10 * scale);
        ASSERT_LE(std::abs(leibniz_det(m)), 1e-10 * scale);
    }
}

TEST(BuildSystem, RejectsZeroEntries) {
    try {
        build_system(Signature{1, 0, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidSignature);
    }
    EXPECT_THROW(make_signature(1, 1, std::nan("")), Error);
}

TEST(Solve, UnitSignatureGivesImaginaryUnit) {
    const auto sols = solve_structure_constants(make_signature(1, 1, 1));
    EXPECT_EQ(sols[0].omega3, I);
    EXPECT_EQ(sols[0].lambda1, I);
    EXPECT_EQ(sols[0].gamma2, I);
    EXPECT_EQ(sols[1].omega3, -I);
    EXPECT_EQ(sols[1].lambda1, -I);
    EXPECT_EQ(sols[1].gamma2, -I);
    EXPECT_EQ(sols[0].residual(), 0.0);
}

TEST(Solve, MixedSignatureGivesRealBranches) {
    const auto sols = solve_structure_constants(make_signature(1, 1, -1));
    EXPECT_EQ(sols[0].omega3, Complex(1.0));
    EXPECT_EQ(sols[0].lambda1, Complex(-1.0));
    EXPECT_EQ(sols[0].gamma2, Complex(-1.0));
    EXPECT_EQ(sols[1].omega3, Complex(-1.0));
    EXPECT_EQ(sols[1].lambda1, Complex(1.0));
    EXPECT_EQ(sols[1].gamma2, Complex(1.0));
}

TEST(Solve, BranchesSatisfyProductRelations) {
    std::mt19937_64 rng(9);
    std::vector<Signature> sigs = {make_signature(2, 3, 5)};
    for (int t = 0; t < 500; ++t) sigs.push_back(random_signature(rng));
    for (const auto& sig : sigs) {
        const auto sols = solve_structure_constants(sig);
        for (const auto& s : sols) {
            EXPECT_LT(std::abs(sig.k1 + s.gamma2 * s.omega3), 1e-12 * std::max(1.0, std::abs(sig.k1)));
            EXPECT_LT(std::abs(sig.k2 + s.lambda1 * s.omega3), 1e-12 * std::max(1.0, std::abs(sig.k2)));
            EXPECT_LT(std::abs(sig.k3 + s.lambda1 * s.gamma2), 1e-12 * std::max(1.0, std::abs(sig.k3)));
        }
        EXPECT_EQ(sols[1].omega3, -sols[0].omega3);
        EXPECT_EQ(sols[1].lambda1, -sols[0].lambda1);
        EXPECT_EQ(sols[1].gamma2, -sols[0].gamma2);
    }
}

TEST(Solve, PrincipalRootConvention) {
    EXPECT_EQ(principal_sqrt(Complex(-4.0, 0.0)), Complex(0.0, 2.0));
    EXPECT_EQ(principal_sqrt(Complex(-4.0, -0.0)), Complex(0.0, 2.0));
    EXPECT_EQ(principal_sqrt(Complex(9.0, 0.0)), Complex(3.0, 0.0));
}

TEST(GenerateTable, PauliTable) {
    const GeneratedTable t = generate_table(solve_structure_constants(make_signature(1, 1, 1))[0]);
    EXPECT_EQ(t.product(1, 2), (TableCell{I, 3}));
    EXPECT_EQ(t.product(2, 1), (TableCell{-I, 3}));
    EXPECT_EQ(t.product(2, 3), (TableCell{I, 1}));
    EXPECT_EQ(t.product(3, 2), (TableCell{-I, 1}));
    EXPECT_EQ(t.product(3, 1), (TableCell{I, 2}));
    EXPECT_EQ(t.product(1, 3), (TableCell{-I, 2}));
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(t.product(k, k), (TableCell{1.0, 0}));
}

TEST(GenerateTable, ReproducesCoreAlgebra) {
    const GeneratedTable t = generate_table(solve_structure_constants(make_signature(1, 1, 1))[0]);
    for (std::size_t a = 0; a < 8; ++a) {
        for (std::size_t b = 0; b < 8; ++b) {
            const auto x = generated_basis(a);
            const auto y = generated_basis(b);
            EXPECT_EQ(embed_in_core(generated_mul(t, x, y)), mul(embed_in_core(x), embed_in_core(y)))
                << kGeneratedLabels[a] << " * " << kGeneratedLabels[b];
        }
    }
}

TEST(GenerateTable, PositiveOutcomeTable) {
    const GeneratedTable t = generate_table(solve_structure_constants(make_signature(1, 1, -1))[0]);
    // e3 plays the role of i: e1e2 = i, e2i = -e1, ie1 = -e2.
    EXPECT_EQ(t.product(1, 2), (TableCell{1.0, 3}));
    EXPECT_EQ(t.product(2, 1), (TableCell{-1.0, 3}));
    EXPECT_EQ(t.product(2, 3), (TableCell{-1.0, 1}));
    EXPECT_EQ(t.product(3, 2), (TableCell{1.0, 1}));
    EXPECT_EQ(t.product(3, 1), (TableCell{-1.0, 2}));
    EXPECT_EQ(t.product(1, 3), (TableCell{1.0, 2}));
    EXPECT_EQ(t.product(3, 3), (TableCell{-1.0, 0}));
}

TEST(GenerateTable, NegativeOutcomeTable) {
    const GeneratedTable t = generate_table(solve_structure_constants(make_signature(1, 1, -1))[1]);
    // e1e2 = -i, e2i = e1, ie2 = -e1, e1i = -e2, ie1 = e2.
    EXPECT_EQ(t.product(1, 2), (TableCell{-1.0, 3}));
    EXPECT_EQ(t.product(2, 3), (TableCell{1.0, 1}));
    EXPECT_EQ(t.product(3, 2), (TableCell{-1.0, 1}));
    EXPECT_EQ(t.product(1, 3), (TableCell{-1.0, 2}));
    EXPECT_EQ(t.product(3, 1), (TableCell{1.0, 2}));
}

TEST(GenerateTable, RejectsInconsistentSolution) {
    StructureSolution sol = solve_structure_constants(make_signature(1, 1, 1))[0];
    sol.omega3 += 0.1;
    try {
        generate_table(sol);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InconsistentSolution);
    }
}

TEST(VerifyAlternation, AcceptsSolverTables) {
    for (const auto& sig : {make_signature(1, 1, 1), make_signature(1, 1, -1)}) {
        for (const auto& sol : solve_structure_constants(sig)) EXPECT_TRUE(verify_alternation(generate_table(sol)));
    }
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        const auto sols = solve_structure_constants(random_signature(rng));
        EXPECT_TRUE(verify_alternation(generate_table(sols[0]), 1e-9));
    }
}

TEST(VerifyAlternation, RejectsPerturbedConstant) {
    const StructureSolution sol = solve_structure_constants(make_signature(1, 1, 1))[0];
    const GeneratedTable bad{sol.signature, sol.omega3 + 0.1, sol.lambda1, sol.gamma2};
    // Direct check: e1 (e1 e2) = omega3 e1 e3 = -omega3 gamma2 e2 no longer equals k1 e2.
    const auto lhs = generated_mul(bad, gen(1), generated_mul(bad, gen(1), gen(2)));
    const auto rhs = generated_mul(bad, generated_mul(bad, gen(1), gen(1)), gen(2));
    EXPECT_GT(max_abs_diff(lhs, rhs), 0.05);
    EXPECT_FALSE(verify_alternation(bad));
}
