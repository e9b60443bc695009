// clifford.hpp
// The real 8-dimensional algebra generated by three anticommuting unit
// elements e1, e2, e3, with the pseudoscalar e123 standing in for i.
// Includes the e_k eigen-idempotents and the 2x2 Pauli representation.

#pragma once

#include "potentia/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

namespace potentia {

using Complex = std::complex<double>;

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Canonical basis order; fixed for printing and serialization.
enum class Blade : std::size_t { Scalar = 0, E1, E2, E3, E12, E23, E31, E123 };

inline constexpr std::size_t kBladeCount = 8;

inline constexpr std::array<std::string_view, kBladeCount> kBladeNames = {
    "1", "e1", "e2", "e3", "e12", "e23", "e31", "e123"};

namespace detail {

// Generator bitmask of each canonical blade (bit 0 = e1, bit 1 = e2, bit 2 = e3).
inline constexpr std::array<unsigned, kBladeCount> kBladeMask = {0, 1, 2, 4, 3, 6, 5, 7};

// Canonical blade = orientation * (ascending product of its generators).
// Only e31 = e3 e1 = -e1 e3 is stored against ascending order.
inline constexpr std::array<int, kBladeCount> kBladeOrientation = {1, 1, 1, 1, 1, 1, -1, 1};

constexpr std::size_t blade_of_mask(unsigned mask) {
    for (std::size_t i = 0; i < kBladeCount; ++i) {
        if (kBladeMask[i] == mask) return i;
    }
    return kBladeCount;
}

// Sign from sorting the concatenation of two ascending generator words,
// with every generator squaring to +1.
constexpr int reorder_sign(unsigned a, unsigned b) {
    int swaps = 0;
    for (unsigned shifted = a >> 1; shifted != 0; shifted >>= 1) {
        swaps += std::popcount(shifted & b);
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

struct TableEntry {
    std::size_t blade;
    int sign;
};

using ProductTable = std::array<std::array<TableEntry, kBladeCount>, kBladeCount>;

constexpr ProductTable make_product_table() {
    ProductTable table{};
    for (std::size_t i = 0; i < kBladeCount; ++i) {
        for (std::size_t j = 0; j < kBladeCount; ++j) {
            const unsigned ma = kBladeMask[i];
            const unsigned mb = kBladeMask[j];
            const std::size_t k = blade_of_mask(ma ^ mb);
            const int sign = reorder_sign(ma, mb) * kBladeOrientation[i] *
                             kBladeOrientation[j] * kBladeOrientation[k];
            table[i][j] = TableEntry{k, sign};
        }
    }
    return table;
}

inline constexpr ProductTable kProductTable = make_product_table();

} // namespace detail

// Structure table of the algebra: basis(i) * basis(j) = sign * basis(blade).
inline constexpr const detail::ProductTable& product_table() { return detail::kProductTable; }

class Multivector {
public:
    using Coeffs = std::array<double, kBladeCount>;

    Multivector() : coeffs_{} {}

    explicit Multivector(const Coeffs& coeffs) : coeffs_(coeffs) {
        if (!std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); })) {
            throw Error(ErrorKind::NonFinite, "multivector coefficients must be finite");
        }
    }

    static Multivector scalar(double value) {
        Coeffs c{};
        c[0] = value;
        return Multivector(c);
    }

    static Multivector basis(Blade blade, double coeff = 1.0) {
        Coeffs c{};
        c[static_cast<std::size_t>(blade)] = coeff;
        return Multivector(c);
    }

    // The generator e_axis for axis in {1, 2, 3}; axis 0 gives the unit.
    static Multivector generator(int axis) {
        if (axis < 0 || axis > 3) {
            throw std::out_of_range("generator axis must be 0..3");
        }
        return basis(static_cast<Blade>(axis));
    }

    // a + b*e123, i.e. a complex number with i mapped to the pseudoscalar.
    static Multivector complex(const Complex& z) {
        Coeffs c{};
        c[0] = z.real();
        c[7] = z.imag();
        return Multivector(c);
    }

    const Coeffs& coeffs() const noexcept { return coeffs_; }
    double operator[](Blade blade) const { return coeffs_[static_cast<std::size_t>(blade)]; }
    double operator[](std::size_t i) const { return coeffs_[i]; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
    }

    double max_norm() const {
        double m = 0.0;
        for (double c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    friend bool operator==(const Multivector&, const Multivector&) = default;

private:
    Coeffs coeffs_;
};

namespace detail {

inline Multivector checked(const Multivector::Coeffs& c) {
    for (double v : c) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::Overflow, "multivector arithmetic overflowed");
        }
    }
    return Multivector(c);
}

} // namespace detail

inline Multivector add(const Multivector& x, const Multivector& y) {
    Multivector::Coeffs c{};
    for (std::size_t i = 0; i < kBladeCount; ++i) c[i] = x[i] + y[i];
    return detail::checked(c);
}

inline Multivector sub(const Multivector& x, const Multivector& y) {
    Multivector::Coeffs c{};
    for (std::size_t i = 0; i < kBladeCount; ++i) c[i] = x[i] - y[i];
    return detail::checked(c);
}

inline Multivector scale(double a, const Multivector& x) {
    if (!std::isfinite(a)) {
        throw Error(ErrorKind::NonFinite, "scale factor must be finite");
    }
    Multivector::Coeffs c{};
    for (std::size_t i = 0; i < kBladeCount; ++i) c[i] = a * x[i];
    return detail::checked(c);
}

inline Multivector mul(const Multivector& x, const Multivector& y) {
    const auto& table = product_table();
    Multivector::Coeffs c{};
    for (std::size_t i = 0; i < kBladeCount; ++i) {
        if (x[i] == 0.0) continue;
        for (std::size_t j = 0; j < kBladeCount; ++j) {
            if (y[j] == 0.0) continue;
            const auto& entry = table[i][j];
            c[entry.blade] += entry.sign * (x[i] * y[j]);
        }
    }
    return detail::checked(c);
}

inline Multivector operator+(const Multivector& x, const Multivector& y) { return add(x, y); }
inline Multivector operator-(const Multivector& x, const Multivector& y) { return sub(x, y); }
inline Multivector operator-(const Multivector& x) { return scale(-1.0, x); }
inline Multivector operator*(const Multivector& x, const Multivector& y) { return mul(x, y); }
inline Multivector operator*(double a, const Multivector& x) { return scale(a, x); }

// Max-norm comparison; tol = 0 demands exact equality.
inline bool eq_tol(const Multivector& x, const Multivector& y, double tol) {
    for (std::size_t i = 0; i < kBladeCount; ++i) {
        if (!(std::abs(x[i] - y[i]) <= tol)) return false;
    }
    return true;
}

inline Multivector one() { return Multivector::scalar(1.0); }
inline Multivector e1() { return Multivector::basis(Blade::E1); }
inline Multivector e2() { return Multivector::basis(Blade::E2); }
inline Multivector e3() { return Multivector::basis(Blade::E3); }
inline Multivector e12() { return Multivector::basis(Blade::E12); }
inline Multivector e23() { return Multivector::basis(Blade::E23); }
inline Multivector e31() { return Multivector::basis(Blade::E31); }
inline Multivector e123() { return Multivector::basis(Blade::E123); }

/// The pair ((1 + e_axis)/2, (1 - e_axis)/2): e_axis acts as +1 on the first
/// and as -1 on the second.
inline std::pair<Multivector, Multivector> idempotents_for(int axis) {
    if (axis < 1 || axis > 3) {
        throw std::out_of_range("idempotent axis must be 1, 2 or 3");
    }
    const Multivector g = Multivector::generator(axis);
    return {scale(0.5, one() + g), scale(0.5, one() - g)};
}

inline Multivector psi1() { return idempotents_for(3).first; }
inline Multivector psi2() { return idempotents_for(3).second; }

// Idempotent on which e_axis takes the value s (s = +1 or -1).
inline Multivector projector(int axis, int s) {
    auto [plus, minus] = idempotents_for(axis);
    return s > 0 ? plus : minus;
}

// Row-major 2x2 complex matrix.
class Matrix2 {
public:
    using Entries = std::array<Complex, 4>;

    Matrix2() : m_{} {}

    explicit Matrix2(const Entries& entries) : m_(entries) {
        for (const auto& z : m_) {
            if (!is_finite(z)) throw Error(ErrorKind::NonFinite, "matrix entries must be finite");
        }
    }

    Matrix2(Complex a, Complex b, Complex c, Complex d) : Matrix2(Entries{a, b, c, d}) {}

    static Matrix2 identity() { return Matrix2(1.0, 0.0, 0.0, 1.0); }

    const Complex& operator()(std::size_t row, std::size_t col) const { return m_[2 * row + col]; }
    const Entries& entries() const noexcept { return m_; }

    Complex trace() const { return m_[0] + m_[3]; }

    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        return Matrix2(a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                       a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1));
    }

    friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
        return Matrix2(a.m_[0] + b.m_[0], a.m_[1] + b.m_[1], a.m_[2] + b.m_[2], a.m_[3] + b.m_[3]);
    }

    friend Matrix2 operator*(Complex s, const Matrix2& a) {
        return Matrix2(s * a.m_[0], s * a.m_[1], s * a.m_[2], s * a.m_[3]);
    }

    friend bool operator==(const Matrix2&, const Matrix2&) = default;

private:
    Entries m_;
};

inline double max_abs_diff(const Matrix2& a, const Matrix2& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < 4; ++k) m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    return m;
}

namespace detail {

inline const std::array<Matrix2, kBladeCount>& blade_matrices() {
    static const std::array<Matrix2, kBladeCount> mats = [] {
        const Complex i{0.0, 1.0};
        const Matrix2 s0 = Matrix2::identity();
        const Matrix2 s1(0.0, 1.0, 1.0, 0.0);
        const Matrix2 s2(0.0, -i, i, 0.0);
        const Matrix2 s3(1.0, 0.0, 0.0, -1.0);
        return std::array<Matrix2, kBladeCount>{s0, s1, s2, s3, s1 * s2, s2 * s3, s3 * s1, s1 * s2 * s3};
    }();
    return mats;
}

} // namespace detail

/// Pauli representation: e1, e2, e3 map to sigma_x, sigma_y, sigma_z and the
/// remaining blades to the corresponding matrix products.
inline Matrix2 rep(const Multivector& x) {
    const auto& mats = detail::blade_matrices();
    Matrix2::Entries acc{};
    for (std::size_t b = 0; b < kBladeCount; ++b) {
        if (x[b] == 0.0) continue;
        for (std::size_t k = 0; k < 4; ++k) acc[k] += x[b] * mats[b].entries()[k];
    }
    return Matrix2(acc);
}

} // namespace potentia
