#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

// Counter-based random number generation.
//
// Every variate is a pure function of (seed, stream, counter), so draws can
// be evaluated in any order, on any number of threads, and still reproduce
// bit for bit. Streams index independent random sequences (one or two per
// Monte Carlo draw); the counter walks within a stream, e.g. for the extra
// uniforms a sampler may need.
//
// The generator id below is part of the output contract: results are only
// comparable across runs that report the same id.

namespace ves::rng {

inline constexpr std::string_view id = "splitmix64-ctr/1";

namespace detail {

inline constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// 64 random bits for (seed, stream, counter). Each level is the SplitMix64
/// sequence indexed at an arbitrary offset.
inline constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t counter) noexcept {
    std::uint64_t h = detail::mix64(seed + detail::golden);
    h = detail::mix64(h + stream * detail::golden);
    return detail::mix64(h + counter * detail::golden);
}

/// Uniform draw strictly inside (0,1); safe to pass to log or the normal
/// inverse CDF.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) noexcept {
    return (static_cast<double>(bits(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

inline double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

/// Inverse standard normal CDF: Acklam's rational approximation refined by
/// one Halley step against erfc, accurate to a few ulp over (0,1).
inline double normal_icdf(double p) noexcept {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement; skipped in the far tails where erfc saturates.
    const double err = normal_cdf(x) - p;
    if (std::abs(x) < 37.0) {
        const double u = err * 2.5066282746310002 * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

}  // namespace ves::rng
