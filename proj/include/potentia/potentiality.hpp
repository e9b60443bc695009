// potentiality.hpp
// Bernoulli value assignments to the generators, their mean values, and the
// unit-ball feasibility bound on the mean vector.

#pragma once

#include "potentia/error.hpp"

#include <array>
#include <cmath>

namespace potentia {

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kFeasibilityTolerance = 1e-12;

// Probabilities of reading +1 / -1 for one generator.
struct AxisProbabilities {
    double p_plus = 0.5;
    double p_minus = 0.5;
};

class PotentialityAssignment {
public:
    explicit PotentialityAssignment(const std::array<AxisProbabilities, 3>& axes) : axes_(axes) {
        for (const auto& a : axes_) {
            const bool in_range = a.p_plus >= 0.0 && a.p_plus <= 1.0 && a.p_minus >= 0.0 && a.p_minus <= 1.0;
            if (!in_range || !(std::abs(a.p_plus + a.p_minus - 1.0) <= kProbabilityTolerance)) {
                throw Error(ErrorKind::InvalidAssignment,
                            "each axis needs probabilities in [0, 1] summing to 1");
            }
        }
    }

    // Assignment from the +1 probabilities alone.
    static PotentialityAssignment from_plus(double p1, double p2, double p3) {
        return PotentialityAssignment({AxisProbabilities{p1, 1.0 - p1}, AxisProbabilities{p2, 1.0 - p2},
                                       AxisProbabilities{p3, 1.0 - p3}});
    }

    static PotentialityAssignment uniform() { return from_plus(0.5, 0.5, 0.5); }

    const AxisProbabilities& axis(int k) const { return axes_.at(static_cast<std::size_t>(k - 1)); }

private:
    std::array<AxisProbabilities, 3> axes_;
};

struct MeanVector {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;

    double norm_sq() const { return m1 * m1 + m2 * m2 + m3 * m3; }
};

inline MeanVector make_mean_vector(double m1, double m2, double m3) {
    for (double m : {m1, m2, m3}) {
        if (!std::isfinite(m) || std::abs(m) > 1.0) {
            throw Error(ErrorKind::InvalidAssignment, "mean values must lie in [-1, 1]");
        }
    }
    return MeanVector{m1, m2, m3};
}

// <e_k> = (+1) p_k(+1) + (-1) p_k(-1)
inline MeanVector means(const PotentialityAssignment& pa) {
    auto mean = [&](int k) { return pa.axis(k).p_plus - pa.axis(k).p_minus; };
    return MeanVector{mean(1), mean(2), mean(3)};
}

inline bool is_feasible(const MeanVector& m) { return m.norm_sq() <= 1.0 + kFeasibilityTolerance; }

// Coefficients of rho = a + b e1 + c e2 + d e3.
struct DensityCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

/// Expectations of e1, e2, e3 in a normalized state rho (a = 1/2).
inline MeanVector means_from_density(const DensityCoefficients& rho) {
    if (!(std::abs(rho.a - 0.5) <= kProbabilityTolerance)) {
        throw Error(ErrorKind::Normalization, "density scalar part must be 1/2");
    }
    return MeanVector{2.0 * rho.b, 2.0 * rho.c, 2.0 * rho.d};
}

} // namespace potentia
