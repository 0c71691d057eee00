#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "ves/dynamics.hpp"
#include "ves/powerlaw.hpp"
#include "ves/rng.hpp"

// Shared test utilities: relative comparison with a deep-underflow floor,
// and deterministic random inputs for property-style checks.

namespace testutil {

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 1e-290) return 0.0;  // both effectively zero
    return std::abs(a - b) / scale;
}

// Uniform in [lo, hi); deterministic in (seed, stream, counter).
inline double uniform_in(double lo, double hi, std::uint64_t seed,
                         std::uint64_t stream, std::uint64_t counter) {
    return lo + (hi - lo) * ves::rng::uniform01(seed, stream, counter);
}

// Random but sane exponential-regime scenario.
inline ves::Scenario random_scenario(std::uint64_t seed, std::uint64_t stream) {
    const double alpha = uniform_in(1e-4, 0.9, seed, stream, 0);
    const double price0 = uniform_in(0.05, 0.95, seed, stream, 1);
    const double g = uniform_in(0.1, 2.0, seed, stream, 2);
    const double d = uniform_in(0.1, 1.5, seed, stream, 3);
    const double delta = uniform_in(0.01, 0.3, seed, stream, 4);
    return ves::Scenario(alpha, price0, g, d, delta);
}

// Random generalized scenario with sigma0 < 1 (feasible crossing).
inline ves::GenScenario random_gen_scenario(std::uint64_t seed, std::uint64_t stream) {
    const double alpha = uniform_in(1e-4, 0.9, seed, stream, 0);
    const double price0 = uniform_in(0.05, 0.95, seed, stream, 1);
    const double d = uniform_in(0.1, 1.5, seed, stream, 2);
    const double xi = uniform_in(0.3, 1.0, seed, stream, 3);
    const double sigma0 = uniform_in(0.0, 0.95, seed, stream, 4);
    const double phi = uniform_in(0.02, 0.5, seed, stream, 5);
    const double k = uniform_in(0.3, 1.0, seed, stream, 6);
    return ves::GenScenario(alpha, price0, d, xi, sigma0, phi, k);
}

}  // namespace testutil
