// dynamics.hpp
// Actual/potential evolution by squaring,
//
//   psi' + phi' X = (psi + phi X)^2 = psi^2 + phi^2 + 2 psi phi X,   X^2 = 1,
//
// with a random actualization event assigning X = +1 or -1, and Monte Carlo
// ensembles over such events. The branch values psi + phi and psi - phi each
// square per step, which gives the closed form used as an oracle.

#pragma once

#include "potentia/clifford.hpp"
#include "potentia/collapse.hpp"
#include "potentia/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace potentia {

struct ActualPotentialState {
    double psi_a = 0.0;
    double phi_p = 0.0;

    // Both branch values stay bounded under iteration.
    bool in_stability_domain() const {
        return std::abs(psi_a + phi_p) <= 1.0 && std::abs(psi_a - phi_p) <= 1.0;
    }

    // psi + phi e_axis in the core algebra.
    Multivector as_multivector(int axis) const {
        return add(Multivector::scalar(psi_a), scale(phi_p, Multivector::generator(axis)));
    }

    friend bool operator==(const ActualPotentialState&, const ActualPotentialState&) = default;
};

inline ActualPotentialState make_state(double psi_a, double phi_p) {
    if (!std::isfinite(psi_a) || !std::isfinite(phi_p)) {
        throw Error(ErrorKind::NonFinite, "state components must be finite");
    }
    return ActualPotentialState{psi_a, phi_p};
}

// (psi, phi) -> (psi^2 + phi^2, 2 psi phi); step_index labels a divergence.
inline ActualPotentialState step(const ActualPotentialState& s, std::size_t step_index = 1) {
    const ActualPotentialState next{s.psi_a * s.psi_a + s.phi_p * s.phi_p, 2.0 * s.psi_a * s.phi_p};
    if (!std::isfinite(next.psi_a) || !std::isfinite(next.phi_p)) {
        throw DivergenceError(step_index);
    }
    return next;
}

inline ActualPotentialState iterate(ActualPotentialState s, std::size_t n) {
    for (std::size_t k = 1; k <= n; ++k) s = step(s, k);
    return s;
}

/// State after n steps from the branch values a = psi + phi, b = psi - phi:
/// ((a^(2^n) + b^(2^n))/2, (a^(2^n) - b^(2^n))/2).
inline ActualPotentialState closed_form(const ActualPotentialState& s0, std::size_t n) {
    if (n == 0) return s0; // recombining a and b would round
    const double a = s0.psi_a + s0.phi_p;
    const double b = s0.psi_a - s0.phi_p;
    const double exponent = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(n, 2048)));
    const double an = std::pow(a, exponent);
    const double bn = std::pow(b, exponent);
    const ActualPotentialState out{(an + bn) / 2.0, (an - bn) / 2.0};
    if (!std::isfinite(out.psi_a) || !std::isfinite(out.phi_p)) {
        throw DivergenceError(n);
    }
    return out;
}

// Value reached when X takes the value sign.
inline double actualize(const ActualPotentialState& s, int sign) {
    check_orientation(sign);
    return s.psi_a + sign * s.phi_p;
}

struct ActualizationEvent {
    std::size_t step = 0;
    int sign = 1;
};

enum class ActualizationLaw { Geometric, Fixed };

struct EnsembleConfig {
    ActualPotentialState initial{};
    std::size_t horizon = 1;
    ActualizationLaw law = ActualizationLaw::Geometric;
    double p_act = 0.1;
    std::size_t fixed_step = 0;
    double q = 0.5;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    // Stop a trial at its actualization step instead of squaring on.
    bool halt_on_actualize = false;
    bool record_trajectories = false;
    unsigned threads = 1;
};

inline void validate(const EnsembleConfig& cfg) {
    if (!std::isfinite(cfg.initial.psi_a) || !std::isfinite(cfg.initial.phi_p))
        throw std::invalid_argument("initial state must be finite");
    if (cfg.horizon == 0) throw std::invalid_argument("horizon must be positive");
    if (cfg.trials == 0) throw std::invalid_argument("trial count must be positive");
    if (cfg.law == ActualizationLaw::Geometric && !(cfg.p_act > 0.0 && cfg.p_act <= 1.0))
        throw std::invalid_argument("actualization probability must lie in (0, 1]");
    if (!(cfg.q >= 0.0 && cfg.q <= 1.0)) throw std::invalid_argument("sign probability must lie in [0, 1]");
    if (cfg.threads == 0) throw std::invalid_argument("thread count must be positive");
}

struct TrajectoryRow {
    std::size_t trial = 0;
    std::size_t step = 0;
    double psi_a = 0.0;
    double phi_p = 0.0;
    bool actualized = false;
    double value = 0.0;
};

struct TrialResult {
    std::size_t trial = 0;
    ActualizationEvent event{};
    std::optional<double> final_value;
    // First step whose state was non-finite.
    std::optional<std::size_t> divergence_step;
    std::vector<TrajectoryRow> trajectory;
};

struct EnsembleResult {
    std::vector<TrialResult> trials;
    std::size_t converged = 0;
    std::size_t diverged = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased; 0 for fewer than two values
    bool stability_warning = false;
};

// Substream of trial t depends on (seed, t) only.
inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

inline ActualizationEvent draw_event(const EnsembleConfig& cfg, std::mt19937_64& rng) {
    ActualizationEvent ev;
    if (cfg.law == ActualizationLaw::Fixed) {
        ev.step = cfg.fixed_step;
    } else if (cfg.p_act >= 1.0) {
        ev.step = 0;
    } else {
        std::geometric_distribution<std::uint64_t> geo(cfg.p_act);
        ev.step = static_cast<std::size_t>(geo(rng));
    }
    ev.step = std::min(ev.step, cfg.horizon);
    std::bernoulli_distribution plus(cfg.q);
    ev.sign = plus(rng) ? 1 : -1;
    return ev;
}

inline TrialResult run_trial(const EnsembleConfig& cfg, std::size_t trial) {
    auto rng = trial_engine(cfg.seed, trial);
    TrialResult out;
    out.trial = trial;
    out.event = draw_event(cfg, rng);

    ActualPotentialState state = cfg.initial;
    bool actualized = false;
    double value = 0.0;
    for (std::size_t k = 0;; ++k) {
        if (!actualized && k == out.event.step) {
            value = actualize(state, out.event.sign);
            state = ActualPotentialState{value, 0.0};
            actualized = true;
        }
        if (cfg.record_trajectories) {
            out.trajectory.push_back(
                TrajectoryRow{trial, k, state.psi_a, state.phi_p, actualized, actualized ? value : state.psi_a});
        }
        if (k == cfg.horizon || (actualized && cfg.halt_on_actualize)) break;
        if (actualized) {
            value = value * value;
            if (!std::isfinite(value)) {
                out.divergence_step = k + 1;
                return out;
            }
            state = ActualPotentialState{value, 0.0};
        } else {
            try {
                state = step(state, k + 1);
            } catch (const DivergenceError& e) {
                out.divergence_step = e.step();
                return out;
            }
        }
    }
    out.final_value = value;
    return out;
}

/// Runs every trial; results are ordered by trial index and do not depend on
/// the thread count.
inline EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
    validate(cfg);
    EnsembleResult res;
    res.trials.resize(cfg.trials);
    res.stability_warning = !cfg.initial.in_stability_domain();

    const std::size_t workers = std::min<std::size_t>(cfg.threads, cfg.trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < cfg.trials; ++t) res.trials[t] = run_trial(cfg, t);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&res, &cfg, w, workers] {
                for (std::size_t t = w; t < cfg.trials; t += workers) res.trials[t] = run_trial(cfg, t);
            });
        }
    }

    std::vector<double> finals;
    finals.reserve(cfg.trials);
    for (const auto& tr : res.trials) {
        if (tr.final_value) finals.push_back(*tr.final_value);
    }
    res.converged = finals.size();
    res.diverged = cfg.trials - finals.size();
    if (!finals.empty()) {
        double sum = 0.0;
        for (double v : finals) sum += v;
        res.mean = sum / static_cast<double>(finals.size());
    }
    if (finals.size() > 1) {
        double ss = 0.0;
        for (double v : finals) ss += (v - res.mean) * (v - res.mean);
        res.variance = ss / static_cast<double>(finals.size() - 1);
    }
    return res;
}

// Squaring of an arbitrary state of the core algebra.
inline Multivector mv_step(const Multivector& z) { return mul(z, z); }

// Actualization of e_axis = s inside a multivector state.
inline CollapsedElement mv_actualize(const Multivector& z, int s, int axis = 3) {
    return measure_collapse(z, s, axis);
}

// Squaring after actualization happens inside B.
inline CollapsedElement b_step(const CollapsedElement& x) { return b_mul(x, x); }

} // namespace potentia
