#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ves/ces.hpp"
#include "ves/dynamics.hpp"

// Inverse problem: fit the quadratic-logit coefficients from observed
// (time, share) pairs, then recover the structural parameters
// (alpha, decay, compound rate) given a known initial price.
//
// The fit is ordinary least squares on the logit scale, where the model is
// exactly linear in (a, b, c). Times are centered and scaled to [-1, 1]
// before solving: the raw t and t^2 columns are nearly collinear on short
// horizons. The solve is a column-pivoted Householder QR, never the normal
// equations.

namespace ves {

struct Observation {
    double t;      // years, >= 0
    double share;  // observed share, strictly inside (0,1)
};

/// Thrown when a coefficient set is inconsistent with the dynamic model
/// (c >= 0, or no positive decay root).
struct InfeasibleRecovery : std::domain_error {
    using std::domain_error::domain_error;
};

struct QuadFit {
    QuadCoeffs coeffs;
    double rss;  // residual sum of squares on the logit scale
    std::size_t n_obs;
};

namespace detail {

// Least-squares solution of an m x 3 system via Householder QR with column
// pivoting. Returns the coefficient vector in original column order.
inline std::array<double, 3> qr3_solve(std::vector<std::array<double, 3>> m,
                                       std::vector<double> y) {
    const std::size_t rows = m.size();
    std::array<std::size_t, 3> perm{0, 1, 2};

    for (std::size_t col = 0; col < 3; ++col) {
        // Pivot: bring the column with the largest remaining norm forward.
        double best = -1.0;
        std::size_t best_col = col;
        for (std::size_t j = col; j < 3; ++j) {
            double norm2 = 0.0;
            for (std::size_t i = col; i < rows; ++i) norm2 += m[i][j] * m[i][j];
            if (norm2 > best) {
                best = norm2;
                best_col = j;
            }
        }
        if (best_col != col) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][col], m[i][best_col]);
            std::swap(perm[col], perm[best_col]);
        }

        double norm = std::sqrt(best);
        if (norm == 0.0) throw std::domain_error("qr3_solve: rank-deficient design");

        // Householder reflector for column col.
        if (m[col][col] > 0.0) norm = -norm;
        std::vector<double> v(rows - col);
        v[0] = m[col][col] - norm;
        for (std::size_t i = col + 1; i < rows; ++i) v[i - col] = m[i][col];
        double vnorm2 = 0.0;
        for (double vi : v) vnorm2 += vi * vi;
        if (vnorm2 == 0.0) continue;  // column already triangular

        m[col][col] = norm;
        for (std::size_t i = col + 1; i < rows; ++i) m[i][col] = 0.0;
        for (std::size_t j = col + 1; j < 3; ++j) {
            double dot = 0.0;
            for (std::size_t i = col; i < rows; ++i) dot += v[i - col] * m[i][j];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = col; i < rows; ++i) m[i][j] -= f * v[i - col];
        }
        double dot = 0.0;
        for (std::size_t i = col; i < rows; ++i) dot += v[i - col] * y[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = col; i < rows; ++i) y[i] -= f * v[i - col];
    }

    std::array<double, 3> beta_pivoted{};
    for (std::size_t col = 3; col-- > 0;) {
        double s = y[col];
        for (std::size_t j = col + 1; j < 3; ++j) s -= m[col][j] * beta_pivoted[j];
        beta_pivoted[col] = s / m[col][col];
    }
    std::array<double, 3> beta{};
    for (std::size_t j = 0; j < 3; ++j) beta[perm[j]] = beta_pivoted[j];
    return beta;
}

}  // namespace detail

/// OLS of -logit(share) on [1, t, t^2]. Requires at least 3 distinct
/// observation times; with exactly 3 distinct points the fit interpolates.
inline QuadFit fit_quadratic_logit(std::span<const Observation> observations) {
    for (const Observation& o : observations) {
        if (!(o.t >= 0.0))
            throw std::invalid_argument("fit_quadratic_logit: times must be >= 0");
        if (!(o.share > 0.0) || !(o.share < 1.0))
            throw std::invalid_argument(
                "fit_quadratic_logit: shares must lie strictly in (0,1)");
    }
    std::vector<double> distinct;
    distinct.reserve(observations.size());
    for (const Observation& o : observations) distinct.push_back(o.t);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw std::domain_error(
            "fit_quadratic_logit: need at least 3 distinct observation times");

    const double t_min = distinct.front();
    const double t_max = distinct.back();
    const double center = 0.5 * (t_min + t_max);
    const double half_span = 0.5 * (t_max - t_min);

    const std::size_t n = observations.size();
    std::vector<std::array<double, 3>> design(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = (observations[i].t - center) / half_span;
        design[i] = {1.0, s, s * s};
        y[i] = std::log((1.0 - observations[i].share) / observations[i].share);
    }
    const std::array<double, 3> beta = detail::qr3_solve(design, y);

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = (observations[i].t - center) / half_span;
        const double fitted = beta[0] + beta[1] * s + beta[2] * s * s;
        const double r = y[i] - fitted;
        rss += r * r;
    }

    // Undo the time rescaling: X = A + B*(t-tc)/th + C*((t-tc)/th)^2.
    const double inv = 1.0 / half_span;
    const double c = beta[2] * inv * inv;
    const double b = beta[1] * inv - 2.0 * beta[2] * center * inv * inv;
    const double a = beta[0] - beta[1] * center * inv + beta[2] * center * center * inv * inv;
    return QuadFit{QuadCoeffs{a, b, c}, rss, n};
}

struct StructuralParams {
    double alpha;
    double decay_d;
    double phi;
};

/// Invert the coefficient system given a known initial price: decay_d is
/// the unique positive root of d^2 - b*d - c*beta0 = 0 (the roots have
/// opposite signs since -c*beta0 < 0), phi = -c/d, and alpha comes from the
/// intercept.
inline StructuralParams recover_structural(const QuadCoeffs& coeffs, double price0) {
    if (!(price0 > 0.0) || !(price0 < 1.0))
        throw std::invalid_argument("recover_structural: price0 must lie in (0,1)");
    if (!(coeffs.c < 0.0))
        throw InfeasibleRecovery(
            "recover_structural: quadratic coefficient must be negative");
    const double beta0 = std::log(price0);
    const double disc = coeffs.b * coeffs.b + 4.0 * coeffs.c * beta0;
    if (!(disc >= 0.0))
        throw InfeasibleRecovery("recover_structural: negative discriminant");
    const double d = 0.5 * (coeffs.b + std::sqrt(disc));
    if (!(d > 0.0))
        throw InfeasibleRecovery("recover_structural: no positive decay root");
    const double phi = -coeffs.c / d;
    const double alpha = logistic(-(coeffs.a + beta0));
    return StructuralParams{alpha, d, phi};
}

/// Fit plus recovery. An infeasible recovery is reported, not thrown: the
/// data simply contradicts the dynamic model, which is diagnostic signal.
struct FitResult {
    QuadCoeffs coeffs;
    double rss;
    std::size_t n_obs;
    std::optional<StructuralParams> structural;
    std::string infeasible_reason;  // empty when structural is present
};

inline FitResult fit_scenario(std::span<const Observation> observations, double price0) {
    const QuadFit fit = fit_quadratic_logit(observations);
    FitResult out{fit.coeffs, fit.rss, fit.n_obs, std::nullopt, {}};
    try {
        out.structural = recover_structural(fit.coeffs, price0);
    } catch (const InfeasibleRecovery& e) {
        out.infeasible_reason = e.what();
    }
    return out;
}

}  // namespace ves
