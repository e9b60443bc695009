// derivation.hpp
// Structure constants of an algebra with three anticommuting generators of
// prescribed scalar squares (k1, k2, k3):
//
//   e1 e2 = omega3 e3,   e2 e3 = lambda1 e1,   e3 e1 = gamma2 e2,
//
// obtained from the homogeneous alternation system and checked by brute
// force associativity of the generated algebra.

#pragma once

#include "potentia/clifford.hpp"
#include "potentia/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

namespace potentia {

inline constexpr double kDerivationTolerance = 1e-12;

struct Signature {
    double k1 = 1.0;
    double k2 = 1.0;
    double k3 = 1.0;

    double operator[](int axis) const { return axis == 1 ? k1 : axis == 2 ? k2 : k3; }

    friend bool operator==(const Signature&, const Signature&) = default;
};

inline Signature make_signature(double k1, double k2, double k3) {
    for (double k : {k1, k2, k3}) {
        if (!std::isfinite(k) || k == 0.0) {
            throw Error(ErrorKind::InvalidSignature,
                        "signature entries must be finite and nonzero");
        }
    }
    return Signature{k1, k2, k3};
}

struct StructureSolution {
    Signature signature;
    Complex omega3;
    Complex lambda1;
    Complex gamma2;

    // Largest absolute residual of k1 = -g2 w3, k2 = -l1 w3, k3 = -l1 g2.
    double residual() const {
        const double r1 = std::abs(signature.k1 + gamma2 * omega3);
        const double r2 = std::abs(signature.k2 + lambda1 * omega3);
        const double r3 = std::abs(signature.k3 + lambda1 * gamma2);
        return std::max({r1, r2, r3});
    }
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Coefficient matrix of the homogeneous system in the unknowns
/// (lambda1, gamma2, omega3):
///   -k1 lambda1 + k2 gamma2            = 0
///                 k2 gamma2 - k3 omega3 = 0
///    k1 lambda1            - k3 omega3 = 0
inline Matrix3 build_system(const Signature& sig) {
    const Signature s = make_signature(sig.k1, sig.k2, sig.k3);
    return Matrix3{{{-s.k1, s.k2, 0.0}, {0.0, s.k2, -s.k3}, {s.k1, 0.0, -s.k3}}};
}

inline double determinant(const Matrix3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double max_norm(const Matrix3& m) {
    double n = 0.0;
    for (const auto& row : m)
        for (double v : row) n = std::max(n, std::abs(v));
    return n;
}

// Principal square root: nonnegative real part, and nonnegative imaginary
// part when the real part is zero.
inline Complex principal_sqrt(Complex z) {
    // Normalize -0 imaginary parts so std::sqrt stays on the upper branch.
    if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
    Complex r = std::sqrt(z);
    if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
    return r;
}

/// Both solution branches, principal root first. The second branch is the
/// negation of the first.
inline std::array<StructureSolution, 2> solve_structure_constants(const Signature& sig) {
    const Signature s = make_signature(sig.k1, sig.k2, sig.k3);
    const Complex omega = principal_sqrt(Complex(-s.k1 * s.k2 / s.k3, 0.0));
    auto branch = [&](Complex w) {
        return StructureSolution{s, w, -s.k2 / w, -s.k1 / w};
    };
    return {branch(omega), branch(-omega)};
}

// One cell of the generator table: e_i e_j = coeff * e_generator (0 = unit).
struct TableCell {
    Complex coeff;
    int generator;

    friend bool operator==(const TableCell&, const TableCell&) = default;
};

struct GeneratedTable {
    Signature signature;
    Complex omega3;
    Complex lambda1;
    Complex gamma2;

    // e_i e_j for i, j in {0, 1, 2, 3}.
    TableCell product(int i, int j) const {
        if (i == 0) return {1.0, j};
        if (j == 0) return {1.0, i};
        if (i == j) return {signature[i], 0};
        auto forward = [&](int a, int b) -> std::pair<bool, TableCell> {
            if (a == 1 && b == 2) return {true, {omega3, 3}};
            if (a == 2 && b == 3) return {true, {lambda1, 1}};
            if (a == 3 && b == 1) return {true, {gamma2, 2}};
            return {false, {}};
        };
        if (auto [ok, cell] = forward(i, j); ok) return cell;
        auto [ok, cell] = forward(j, i);
        (void)ok;
        return {-cell.coeff, cell.generator};
    }
};

/// Multiplication table built from a solution. Rejects solutions that do not
/// reproduce their signature.
inline GeneratedTable generate_table(const StructureSolution& sol) {
    for (const Complex& c : {sol.omega3, sol.lambda1, sol.gamma2}) {
        if (!is_finite(c)) throw Error(ErrorKind::NonFinite, "structure constants must be finite");
    }
    if (!(sol.residual() <= kDerivationTolerance)) {
        throw Error(ErrorKind::InconsistentSolution,
                    "structure constants do not reproduce the signature (residual " +
                        std::to_string(sol.residual()) + ")");
    }
    return GeneratedTable{sol.signature, sol.omega3, sol.lambda1, sol.gamma2};
}

// Element of the generated algebra: complex coefficients over {1, e1, e2, e3}.
using GeneratedElement = std::array<Complex, 4>;

inline GeneratedElement generated_mul(const GeneratedTable& table, const GeneratedElement& x,
                                      const GeneratedElement& y) {
    GeneratedElement out{};
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0.0) continue;
        for (int j = 0; j < 4; ++j) {
            if (y[j] == 0.0) continue;
            const TableCell cell = table.product(i, j);
            out[cell.generator] += cell.coeff * x[i] * y[j];
        }
    }
    return out;
}

inline double max_abs_diff(const GeneratedElement& a, const GeneratedElement& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < 4; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

// Real basis of the generated algebra: {1, e1, e2, e3, i, i e1, i e2, i e3}.
inline constexpr std::array<std::string_view, 8> kGeneratedLabels = {
    "1", "e1", "e2", "e3", "i", "i*e1", "i*e2", "i*e3"};

inline GeneratedElement generated_basis(std::size_t index) {
    GeneratedElement e{};
    e[index % 4] = index < 4 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    return e;
}

using GeneratedProductTable = std::array<std::array<GeneratedElement, 8>, 8>;

inline GeneratedProductTable full_product_table(const GeneratedTable& table) {
    GeneratedProductTable out{};
    for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = 0; b < 8; ++b)
            out[a][b] = generated_mul(table, generated_basis(a), generated_basis(b));
    return out;
}

/// Checks the six left/right alternation identities (e1 e1) e2 = e1 (e1 e2),
/// e1 (e2 e2) = (e1 e2) e2, ... and associativity over every triple of the
/// eight real basis elements, all within 1e-12.
inline bool verify_alternation(const GeneratedTable& table, double tol = kDerivationTolerance) {
    auto gen = [](int k) { return generated_basis(static_cast<std::size_t>(k)); };
    auto m = [&](const GeneratedElement& x, const GeneratedElement& y) {
        return generated_mul(table, x, y);
    };
    constexpr std::array<std::pair<int, int>, 3> pairs = {{{1, 2}, {2, 3}, {3, 1}}};
    for (auto [a, b] : pairs) {
        // (e_a e_a) e_b = e_a (e_a e_b)
        if (!(max_abs_diff(m(m(gen(a), gen(a)), gen(b)), m(gen(a), m(gen(a), gen(b)))) <= tol)) return false;
        // e_a (e_b e_b) = (e_a e_b) e_b
        if (!(max_abs_diff(m(gen(a), m(gen(b), gen(b))), m(m(gen(a), gen(b)), gen(b))) <= tol)) return false;
    }
    for (std::size_t a = 0; a < 8; ++a) {
        for (std::size_t b = 0; b < 8; ++b) {
            for (std::size_t c = 0; c < 8; ++c) {
                const auto x = generated_basis(a);
                const auto y = generated_basis(b);
                const auto z = generated_basis(c);
                if (!(max_abs_diff(m(m(x, y), z), m(x, m(y, z))) <= tol)) return false;
            }
        }
    }
    return true;
}

// Embeds an element of a generated algebra into the core algebra, reading the
// complex unit as e123. Meaningful for the Pauli table only.
inline Multivector embed_in_core(const GeneratedElement& x) {
    Multivector acc;
    for (int k = 0; k < 4; ++k) {
        const Multivector g = Multivector::generator(k);
        acc = acc + scale(x[k].real(), g) + scale(x[k].imag(), mul(e123(), g));
    }
    return acc;
}

} // namespace potentia
