#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ves/ces.hpp"

// Exponential-regime dynamics: sigma(t) = phi*t, price p(t) = p0*exp(-d*t),
// and the resulting quadratic-logit share path. All quantities are closed
// form; trajectory sampling is presentational.

namespace ves {

/// Full dynamic parameter set. phi is derived (delta * growth_g) and
/// recomputed on construction.
struct Scenario {
    double alpha;     // preference weight, in (0,1)
    double price0;    // initial price ratio p(0), in (0,1)
    double growth_g;  // compute growth rate per year, > 0
    double decay_d;   // price decay rate per year, > 0
    double delta;     // scaling-law sensitivity, > 0
    double phi;       // compound rate per year, = delta * growth_g

    Scenario(double alpha_, double price0_, double growth_g_, double decay_d_, double delta_)
        : alpha(alpha_),
          price0(price0_),
          growth_g(growth_g_),
          decay_d(decay_d_),
          delta(delta_),
          phi(delta_ * growth_g_) {
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw std::invalid_argument("Scenario: alpha must lie in (0,1)");
        if (!(price0 > 0.0) || !(price0 < 1.0))
            throw std::invalid_argument("Scenario: price0 must lie in (0,1)");
        if (!(growth_g > 0.0) || !(decay_d > 0.0) || !(delta > 0.0))
            throw std::invalid_argument("Scenario: rates must be > 0");
    }

    /// Convenience for cases where only the compound rate matters
    /// (growth_g = phi, delta = 1).
    static Scenario from_phi(double alpha_, double price0_, double phi_, double decay_d_) {
        return Scenario(alpha_, price0_, phi_, decay_d_, 1.0);
    }
};

/// Coefficients of the share exponent X(t) = a + b*t + c*t^2.
/// c = -d*phi is strictly negative for every valid Scenario.
struct QuadCoeffs {
    double a;  // intercept
    double b;  // per year
    double c;  // per year^2
};

inline double sigma_at(double phi, double t) noexcept { return phi * t; }

inline double price_at(double price0, double decay_d, double t) noexcept {
    return price0 * std::exp(-decay_d * t);
}

inline QuadCoeffs quad_coeffs(const Scenario& s) noexcept {
    const double log_price0 = std::log(s.price0);
    return QuadCoeffs{
        std::log((1.0 - s.alpha) / s.alpha) - log_price0,
        s.decay_d + s.phi * log_price0,
        -s.decay_d * s.phi,
    };
}

/// X(t) = a + b*t + c*t^2, evaluated in Horner form.
inline double exponent_at(const QuadCoeffs& q, double t) noexcept {
    return q.a + t * (q.b + t * q.c);
}

/// Share along the dynamic path; identical (up to rounding) to
/// revenue_share at (alpha, price_at(t), sigma_at(t)).
inline Share share_at(const Scenario& s, double t) {
    return Share(logistic(-exponent_at(quad_coeffs(s), t)));
}

/// Time at which sigma crosses 1.
inline double t_star(double phi) {
    if (!(phi > 0.0)) throw std::domain_error("t_star: phi must be > 0");
    return 1.0 / phi;
}

/// Adoption regime labels, ordered as the market progresses.
enum class Phase : int {
    complements = 1,    // sigma < 1
    knife_edge = 2,     // sigma == 1 within tolerance
    jevons = 3,         // 1 < sigma < 2
    strong_jevons = 4,  // sigma >= 2
    saturated = 5,      // share >= 1 - epsilon
};

/// Classification shared by the exponential and power-law paths.
/// Saturation takes precedence once reached.
inline Phase classify_phase(double sigma, double share, double epsilon,
                            double sigma_tol = 1e-9) {
    if (!(epsilon > 0.0) || !(epsilon < 0.5))
        throw std::invalid_argument("classify_phase: epsilon must lie in (0,0.5)");
    if (share >= 1.0 - epsilon) return Phase::saturated;
    if (std::abs(sigma - 1.0) <= sigma_tol) return Phase::knife_edge;
    if (sigma < 1.0) return Phase::complements;
    if (sigma < 2.0) return Phase::jevons;
    return Phase::strong_jevons;
}

inline Phase phase_at(const Scenario& s, double t, double epsilon,
                      double sigma_tol = 1e-9) {
    return classify_phase(sigma_at(s.phi, t), share_at(s, t).value, epsilon, sigma_tol);
}

/// Sampled time series of the closed-form quantities on a uniform grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> sigma;
    std::vector<double> price;
    std::vector<double> exponent;     // X(t)
    std::vector<double> share;
    std::vector<double> logit_share;  // -X(t)
};

inline Trajectory trajectory(const Scenario& s, double t_end, int steps) {
    if (!(t_end > 0.0)) throw std::invalid_argument("trajectory: t_end must be > 0");
    if (steps < 2) throw std::invalid_argument("trajectory: steps must be >= 2");

    const QuadCoeffs q = quad_coeffs(s);
    Trajectory tr;
    tr.times.reserve(steps);
    tr.sigma.reserve(steps);
    tr.price.reserve(steps);
    tr.exponent.reserve(steps);
    tr.share.reserve(steps);
    tr.logit_share.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(steps - 1);
        const double x = exponent_at(q, t);
        tr.times.push_back(t);
        tr.sigma.push_back(sigma_at(s.phi, t));
        tr.price.push_back(price_at(s.price0, s.decay_d, t));
        tr.exponent.push_back(x);
        tr.share.push_back(logistic(-x));
        tr.logit_share.push_back(-x);
    }
    return tr;
}

/// Phase-boundary times. t_2star == 2 * t_star in this regime; saturation
/// is the first grid time with share >= 1 - epsilon, absent if the horizon
/// ends first.
struct PhaseTimeline {
    double t_star;
    double t_2star;
    std::optional<double> t_saturation;
    double epsilon;
};

inline PhaseTimeline phase_timeline(const Scenario& s, double t_end, int steps,
                                    double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 0.5))
        throw std::invalid_argument("phase_timeline: epsilon must lie in (0,0.5)");
    const double ts = t_star(s.phi);
    PhaseTimeline timeline{ts, 2.0 * ts, std::nullopt, epsilon};
    const Trajectory tr = trajectory(s, t_end, steps);
    for (int i = 0; i < steps; ++i) {
        if (tr.share[static_cast<std::size_t>(i)] >= 1.0 - epsilon) {
            timeline.t_saturation = tr.times[static_cast<std::size_t>(i)];
            break;
        }
    }
    return timeline;
}

}  // namespace ves
