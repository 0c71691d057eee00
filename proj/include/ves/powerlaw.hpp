#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "ves/ces.hpp"
#include "ves/dynamics.hpp"

// Power-law generalization: sigma(t) = sigma0 + phi*t^k and
// p(t) = p0*exp(-d*t^xi). The share exponent decomposes affinely in
// (sigma0, phi), which is what makes the analytic moments and the
// cross-task differencing below possible.

namespace ves {

/// Generalized dynamic parameter set. beta0 = ln(price0) is derived;
/// price0 < 1 keeps beta0 < 0 and hence Upsilon(t) < 0 for all t >= 0.
struct GenScenario {
    double alpha;    // in (0,1)
    double price0;   // in (0,1)
    double beta0;    // = ln(price0), < 0
    double decay_d;  // > 0
    double xi;       // price-decline exponent, in (0,1]
    double sigma0;   // baseline elasticity, >= 0
    double phi;      // quality-growth coefficient, > 0
    double k;        // quality exponent, in (0,1]

    GenScenario(double alpha_, double price0_, double decay_d_, double xi_,
                double sigma0_, double phi_, double k_)
        : alpha(alpha_),
          price0(price0_),
          beta0(std::log(price0_)),
          decay_d(decay_d_),
          xi(xi_),
          sigma0(sigma0_),
          phi(phi_),
          k(k_) {
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw std::invalid_argument("GenScenario: alpha must lie in (0,1)");
        if (!(price0 > 0.0) || !(price0 < 1.0))
            throw std::invalid_argument("GenScenario: price0 must lie in (0,1)");
        if (!(decay_d > 0.0))
            throw std::invalid_argument("GenScenario: decay_d must be > 0");
        if (!(xi > 0.0) || !(xi <= 1.0))
            throw std::invalid_argument("GenScenario: xi must lie in (0,1]");
        if (!(sigma0 >= 0.0))
            throw std::invalid_argument("GenScenario: sigma0 must be >= 0");
        if (!(phi > 0.0))
            throw std::invalid_argument("GenScenario: phi must be > 0");
        if (!(k > 0.0) || !(k <= 1.0))
            throw std::invalid_argument("GenScenario: k must lie in (0,1]");
    }

    /// k = xi = 1, sigma0 = 0 reduces exactly to the exponential regime.
    static GenScenario from_scenario(const Scenario& s) {
        return GenScenario(s.alpha, s.price0, s.decay_d, 1.0, 0.0, s.phi, 1.0);
    }
};

/// Affine decomposition of the share exponent:
/// X(t) = Theta(t) + Upsilon(t)*sigma0 + Xi(t)*phi.
struct AffineX {
    double theta;
    double upsilon;    // beta0 - d*t^xi, < 0 for all t >= 0
    double xi_weight;  // t^k * upsilon
    double value;      // X(t)
};

namespace detail {

// Core evaluation without scenario validation; the Monte Carlo layer calls
// this with sampled (sigma0, phi) pairs that may sit on domain boundaries
// (e.g. phi == 0 from a point mass).
inline AffineX affine_eval(double alpha, double beta0, double decay_d, double xi,
                           double k, double sigma0, double phi, double t) noexcept {
    const double upsilon = beta0 - decay_d * std::pow(t, xi);
    const double theta = std::log((1.0 - alpha) / alpha) - upsilon;
    const double xi_weight = std::pow(t, k) * upsilon;
    return AffineX{theta, upsilon, xi_weight, theta + upsilon * sigma0 + xi_weight * phi};
}

}  // namespace detail

inline double sigma_pl(const GenScenario& gs, double t) noexcept {
    return gs.sigma0 + gs.phi * std::pow(t, gs.k);
}

inline double price_pl(const GenScenario& gs, double t) noexcept {
    return gs.price0 * std::exp(-gs.decay_d * std::pow(t, gs.xi));
}

inline AffineX affine_x(const GenScenario& gs, double t) noexcept {
    return detail::affine_eval(gs.alpha, gs.beta0, gs.decay_d, gs.xi, gs.k,
                               gs.sigma0, gs.phi, t);
}

inline Share share_pl(const GenScenario& gs, double t) {
    return Share(logistic(-affine_x(gs, t).value));
}

/// Time at which sigma first reaches 1: ((1-sigma0)/phi)^(1/k).
/// nullopt marks sigma0 >= 1, i.e. the threshold is crossed from t = 0.
inline std::optional<double> t_star_general(const GenScenario& gs) {
    if (gs.sigma0 >= 1.0) return std::nullopt;
    return std::pow((1.0 - gs.sigma0) / gs.phi, 1.0 / gs.k);
}

/// E[X(t)] for random (sigma0, phi); linear in the individual expectations.
inline double mean_x(const GenScenario& gs, double t, double mean_sigma0,
                     double mean_phi) noexcept {
    const AffineX ax = affine_x(gs, t);
    return ax.theta + ax.upsilon * mean_sigma0 + ax.xi_weight * mean_phi;
}

/// Var[X(t)] when phi is common across tasks and only sigma0 is random.
inline double var_x(const GenScenario& gs, double t, double var_sigma0) noexcept {
    const double upsilon = affine_x(gs, t).upsilon;
    return upsilon * upsilon * var_sigma0;
}

/// Log-odds gap between two tasks differing only in baseline elasticity:
/// Upsilon(t) * (sigma0_task1 - sigma0_task2). Theta and the phi term
/// cancel, so the result involves neither alpha nor phi.
inline double delta_x(const GenScenario& gs, double t, double sigma0_task1,
                      double sigma0_task2) noexcept {
    const double upsilon = gs.beta0 - gs.decay_d * std::pow(t, gs.xi);
    return upsilon * (sigma0_task1 - sigma0_task2);
}

}  // namespace ves
