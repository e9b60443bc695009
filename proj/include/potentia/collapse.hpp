// collapse.hpp
// The four-dimensional algebra B = span{1, e_a, e_b, i} left over once the
// measured generator e_k has been given the value s = +1 or -1, the linear
// substitution A -> B, and the projector-sandwich collapse of a density
// element.
//
// (a, b, k) is always a cyclic permutation of (1, 2, 3), so for the default
// axis k = 3 the B generators are e1 and e2.

#pragma once

#include "potentia/clifford.hpp"
#include "potentia/derivation.hpp"
#include "potentia/error.hpp"
#include "potentia/potentiality.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace potentia {

inline constexpr double kCollapseTolerance = 1e-12;

// B basis slots.
enum class BBlade : std::size_t { Unit = 0, First = 1, Second = 2, I = 3 };

// Generators (a, b) paired with a measured axis k.
inline std::pair<int, int> transverse_axes(int axis) {
    switch (axis) {
    case 1: return {2, 3};
    case 2: return {3, 1};
    case 3: return {1, 2};
    default: throw std::out_of_range("measured axis must be 1, 2 or 3");
    }
}

inline int check_orientation(int s) {
    if (s != 1 && s != -1) throw std::invalid_argument("orientation must be +1 or -1");
    return s;
}

class CollapsedElement {
public:
    using Coeffs = std::array<double, 4>;

    CollapsedElement(const Coeffs& coeffs, int orientation, int axis = 3)
        : coeffs_(coeffs), orientation_(check_orientation(orientation)), axis_(axis) {
        transverse_axes(axis_);
        for (double c : coeffs_) {
            if (!std::isfinite(c)) throw Error(ErrorKind::NonFinite, "B coefficients must be finite");
        }
    }

    static CollapsedElement basis(BBlade blade, int orientation, int axis = 3, double coeff = 1.0) {
        Coeffs c{};
        c[static_cast<std::size_t>(blade)] = coeff;
        return CollapsedElement(c, orientation, axis);
    }

    static CollapsedElement unit(int orientation, int axis = 3) {
        return basis(BBlade::Unit, orientation, axis);
    }

    const Coeffs& coeffs() const noexcept { return coeffs_; }
    double operator[](BBlade blade) const { return coeffs_[static_cast<std::size_t>(blade)]; }
    double scalar() const { return coeffs_[0]; }
    int orientation() const noexcept { return orientation_; }
    int axis() const noexcept { return axis_; }

    // Trace of the 2x2 representative; e_a, e_b and i are traceless.
    double trace() const { return 2.0 * coeffs_[0]; }

    bool compatible_with(const CollapsedElement& other) const {
        return orientation_ == other.orientation_ && axis_ == other.axis_;
    }

    friend bool operator==(const CollapsedElement&, const CollapsedElement&) = default;

private:
    Coeffs coeffs_;
    int orientation_;
    int axis_;
};

struct BTableEntry {
    std::size_t blade;
    int sign;

    friend bool operator==(const BTableEntry&, const BTableEntry&) = default;
};

using BProductTable = std::array<std::array<BTableEntry, 4>, 4>;

/// Product table of B for orientation s:
///   e1^2 = e2^2 = 1, i^2 = -1,
///   e1 e2 = s i,   e2 i = -s e1,   e1 i = s e2,
/// with every reversed product of distinct generators negated.
inline BProductTable b_table(int s) {
    check_orientation(s);
    BProductTable t{};
    for (std::size_t j = 0; j < 4; ++j) {
        t[0][j] = {j, 1};
        t[j][0] = {j, 1};
    }
    t[1][1] = {0, 1};
    t[2][2] = {0, 1};
    t[3][3] = {0, -1};
    t[1][2] = {3, s};
    t[2][1] = {3, -s};
    t[2][3] = {1, -s};
    t[3][2] = {1, s};
    t[1][3] = {2, s};
    t[3][1] = {2, -s};
    return t;
}

inline CollapsedElement b_mul(const CollapsedElement& x, const CollapsedElement& y) {
    if (!x.compatible_with(y)) {
        throw Error(ErrorKind::IncompatibleSubalgebra,
                    "cannot combine elements of subalgebras with different orientation or axis");
    }
    const BProductTable t = b_table(x.orientation());
    CollapsedElement::Coeffs out{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (x.coeffs()[i] == 0.0) continue;
        for (std::size_t j = 0; j < 4; ++j) {
            if (y.coeffs()[j] == 0.0) continue;
            out[t[i][j].blade] += t[i][j].sign * (x.coeffs()[i] * y.coeffs()[j]);
        }
    }
    for (double v : out) {
        if (!std::isfinite(v)) throw Error(ErrorKind::Overflow, "B arithmetic overflowed");
    }
    return CollapsedElement(out, x.orientation(), x.axis());
}

inline CollapsedElement b_add(const CollapsedElement& x, const CollapsedElement& y) {
    if (!x.compatible_with(y)) {
        throw Error(ErrorKind::IncompatibleSubalgebra,
                    "cannot combine elements of subalgebras with different orientation or axis");
    }
    CollapsedElement::Coeffs out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = x.coeffs()[i] + y.coeffs()[i];
    return CollapsedElement(out, x.orientation(), x.axis());
}

inline CollapsedElement b_scale(double a, const CollapsedElement& x) {
    CollapsedElement::Coeffs out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = a * x.coeffs()[i];
    return CollapsedElement(out, x.orientation(), x.axis());
}

inline bool eq_tol(const CollapsedElement& x, const CollapsedElement& y, double tol) {
    if (!x.compatible_with(y)) return false;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!(std::abs(x.coeffs()[i] - y.coeffs()[i]) <= tol)) return false;
    }
    return true;
}

namespace detail {

// Canonical blade of e_p e_q for a cyclic pair (p, q).
inline Blade cyclic_blade(int p, int q) {
    if (p == 1 && q == 2) return Blade::E12;
    if (p == 2 && q == 3) return Blade::E23;
    if (p == 3 && q == 1) return Blade::E31;
    throw std::logic_error("not a cyclic pair");
}

} // namespace detail

/// Linear substitution e_k -> s. With (a, b, k) cyclic:
///   1 -> 1,  e_a -> e_a,  e_b -> e_b,  e_k -> s,
///   e_a e_b -> s i,  e_b e_k -> s e_b,  e_k e_a -> s e_a,  e123 -> i.
/// Multiplicative only on the corner P x P, P the s-projector of e_k.
inline CollapsedElement substitute(const Multivector& x, int s, int axis = 3) {
    check_orientation(s);
    const auto [a, b] = transverse_axes(axis);
    const double sd = static_cast<double>(s);
    CollapsedElement::Coeffs c{};
    c[0] = x[Blade::Scalar] + sd * x[static_cast<Blade>(axis)];
    c[1] = x[static_cast<Blade>(a)] + sd * x[detail::cyclic_blade(axis, a)];
    c[2] = x[static_cast<Blade>(b)] + sd * x[detail::cyclic_blade(b, axis)];
    c[3] = x[Blade::E123] + sd * x[detail::cyclic_blade(a, b)];
    return CollapsedElement(c, s, axis);
}

/// Density coefficients and density element for psi = c1 phi1 + c2 phi2:
///   a = (|c1|^2 + |c2|^2)/2,  b = Re(c1* c2),  c = Im(c1* c2),
///   d = (|c1|^2 - |c2|^2)/2.
inline std::pair<DensityCoefficients, Multivector> density_from_amplitudes(Complex c1, Complex c2) {
    if (!is_finite(c1) || !is_finite(c2)) {
        throw Error(ErrorKind::NonFinite, "amplitudes must be finite");
    }
    const double n1 = std::norm(c1);
    const double n2 = std::norm(c2);
    if (!(std::abs(n1 + n2 - 1.0) <= kProbabilityTolerance)) {
        throw Error(ErrorKind::Normalization, "amplitudes must satisfy |c1|^2 + |c2|^2 = 1");
    }
    const Complex cross = std::conj(c1) * c2;
    const DensityCoefficients rho{(n1 + n2) / 2.0, cross.real(), cross.imag(), (n1 - n2) / 2.0};
    const Multivector element({rho.a, rho.b, rho.c, rho.d, 0.0, 0.0, 0.0, 0.0});
    return {rho, element};
}

/// Collapse of rho on outcome s of e_axis: substitute(P rho P, s) with P the
/// idempotent on which e_axis equals s. For a normalized pure state and
/// axis 3 the result is |c1|^2 (s = +1) or |c2|^2 (s = -1) times 1_B.
inline CollapsedElement measure_collapse(const Multivector& rho, int s, int axis = 3) {
    const Multivector p = projector(axis, check_orientation(s));
    return substitute(mul(mul(p, rho), p), s, axis);
}

// Collapsed state rescaled to unit scalar part.
inline CollapsedElement renormalized(const CollapsedElement& x) {
    if (!(std::abs(x.scalar()) > 0.0)) {
        throw Error(ErrorKind::Normalization, "cannot renormalize an outcome of zero weight");
    }
    return b_scale(1.0 / x.scalar(), x);
}

/// Identifies the B table reached by a (1, 1, -1) solver branch: the third
/// generator plays the role of i, and the sign of omega3 is the orientation.
inline BProductTable subalgebra_from_solution(const StructureSolution& sol) {
    const Signature& sig = sol.signature;
    if (sig.k1 != 1.0 || sig.k2 != 1.0 || sig.k3 != -1.0) {
        throw Error(ErrorKind::IncompatibleSubalgebra, "B tables arise only from the (1, 1, -1) signature");
    }
    const GeneratedTable table = generate_table(sol);
    BProductTable out{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const TableCell cell = table.product(i, j);
            if (std::abs(cell.coeff.imag()) > kCollapseTolerance ||
                std::abs(std::abs(cell.coeff.real()) - 1.0) > kCollapseTolerance) {
                throw Error(ErrorKind::IncompatibleSubalgebra, "solution branch does not yield a +/-1 table");
            }
            out[i][j] = {static_cast<std::size_t>(cell.generator), cell.coeff.real() > 0.0 ? 1 : -1};
        }
    }
    const int s = out[1][2].sign;
    if (out != b_table(s)) {
        throw Error(ErrorKind::IncompatibleSubalgebra, "solution branch does not match a B table");
    }
    return out;
}

// Orientation of the B table produced by a solution branch.
inline int orientation_of(const BProductTable& table) { return table[1][2].sign; }

} // namespace potentia
