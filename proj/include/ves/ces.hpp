#pragma once

#include <cmath>
#include <stdexcept>

// Static two-good CES quantities: utility, revenue share, and the
// share-price elasticity, plus the sigma = 2 closed forms. Human price
// is normalized to 1 throughout; price_ai is the relative AI price.

namespace ves {

/// Numerically stable logistic 1 / (1 + exp(-x)).
///
/// Evaluated as exp(-|x|) / (1 + exp(-|x|)) on the appropriate branch so
/// the exponential argument is never positive; finite for every finite x.
inline double logistic(double x) noexcept {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// One static CES evaluation context: preference weight for the AI good,
/// relative AI price (human price == 1), and elasticity of substitution.
struct CesPoint {
    double alpha;     // in (0,1)
    double price_ai;  // in (0,1]; the permissive factory lifts the upper bound
    double sigma;     // >= 0

    CesPoint(double alpha_, double price_ai_, double sigma_)
        : alpha(alpha_), price_ai(price_ai_), sigma(sigma_) {
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw std::invalid_argument("CesPoint: alpha must lie in (0,1)");
        if (!(price_ai > 0.0) || !(price_ai <= 1.0))
            throw std::invalid_argument("CesPoint: price_ai must lie in (0,1]");
        if (!(sigma >= 0.0))
            throw std::invalid_argument("CesPoint: sigma must be >= 0");
    }

    /// Variant that accepts price_ai > 1. Only calibration residual
    /// evaluation needs prices above the normalized human price; regular
    /// model paths should use the checked constructor.
    static CesPoint permissive(double alpha_, double price_ai_, double sigma_) {
        if (!(price_ai_ > 0.0))
            throw std::invalid_argument("CesPoint: price_ai must be > 0");
        CesPoint p(alpha_, std::min(price_ai_, 1.0), sigma_);
        p.price_ai = price_ai_;
        return p;
    }
};

/// Revenue (expenditure) share of the AI good, dimensionless in [0,1].
struct Share {
    double value;

    explicit Share(double v) : value(v) {
        if (!(v >= 0.0) || !(v <= 1.0))
            throw std::invalid_argument("Share: value must lie in [0,1]");
    }
};

/// CES utility ((1-a)*H^rho + a*A^rho)^(1/rho) with rho = (sigma-1)/sigma.
///
/// sigma near 1 (|sigma-1| < 1e-12) routes to the Cobb-Douglas limit
/// H^(1-a) * A^a; sigma = 0 is rejected (the share formula still covers it,
/// see revenue_share).
inline double ces_utility(double h_quantity, double a_quantity, const CesPoint& point) {
    if (!(h_quantity >= 0.0) || !(a_quantity >= 0.0))
        throw std::domain_error("ces_utility: quantities must be >= 0");
    if (!(point.sigma > 0.0))
        throw std::domain_error("ces_utility: sigma must be > 0");
    if (point.sigma <= 1.0 && h_quantity == 0.0 && a_quantity == 0.0)
        throw std::domain_error("ces_utility: both quantities zero with sigma <= 1");

    const double alpha = point.alpha;
    if (std::abs(point.sigma - 1.0) < 1e-12) {
        return std::pow(h_quantity, 1.0 - alpha) * std::pow(a_quantity, alpha);
    }
    const double rho = (point.sigma - 1.0) / point.sigma;
    if (rho < 0.0 && (h_quantity == 0.0 || a_quantity == 0.0)) {
        // Complements: a missing input drives the aggregate to zero.
        return 0.0;
    }
    const double inner = (1.0 - alpha) * std::pow(h_quantity, rho) +
                         alpha * std::pow(a_quantity, rho);
    return std::pow(inner, 1.0 / rho);
}

/// Log odds against the AI good: X = ln((1-a)/a) + (sigma-1)*ln p.
/// The share is logistic(-X); keeping X explicit avoids overflow in the
/// direct price-power form when sigma grows with time.
inline double share_log_odds_against(double alpha, double price_ai, double sigma) noexcept {
    return std::log((1.0 - alpha) / alpha) + (sigma - 1.0) * std::log(price_ai);
}

/// Revenue share r = 1 / (1 + ((1-a)/a) * p^(sigma-1)), computed in log
/// space; finite and inside [0,1] for every valid point.
inline Share revenue_share(const CesPoint& point) {
    const double x = share_log_odds_against(point.alpha, point.price_ai, point.sigma);
    return Share(logistic(-x));
}

/// Elasticity of the revenue share with respect to the AI price:
/// -(sigma - 1) * (1 - r).
inline double share_elasticity(double sigma, Share share) noexcept {
    return -(sigma - 1.0) * (1.0 - share.value);
}

/// sigma = 2 closed form of the revenue share: a / ((1-a)*p + a).
inline Share share_sigma2(double alpha, double price_ai) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("share_sigma2: alpha must lie in (0,1)");
    if (!(price_ai > 0.0) || !(price_ai <= 1.0))
        throw std::invalid_argument("share_sigma2: price_ai must lie in (0,1]");
    return Share(alpha / ((1.0 - alpha) * price_ai + alpha));
}

/// Exact inverse of share_sigma2: p = (a/(1-a)) * ((1-r)/r).
inline double price_for_share_sigma2(double alpha, Share share) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("price_for_share_sigma2: alpha must lie in (0,1)");
    if (!(share.value > 0.0) || !(share.value < 1.0))
        throw std::domain_error("price_for_share_sigma2: share must lie strictly in (0,1)");
    return (alpha / (1.0 - alpha)) * ((1.0 - share.value) / share.value);
}

}  // namespace ves
