#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ves/powerlaw.hpp"
#include "ves/rng.hpp"

// Sampling-based propagation of uncertainty in (sigma0, phi) through the
// power-law share model. Draw i reads rng streams 2i (sigma0) and 2i+1
// (phi), so results are independent of evaluation order and thread count;
// aggregation always walks draws in index order.

namespace ves {

enum class DistFamily { point, exponential, lognormal, truncated_normal };

/// Distribution of a nonnegative model parameter. Construct through the
/// named factories; the two slots are family-specific.
struct DistributionSpec {
    DistFamily family;
    double p1;  // point: value; exponential: rate; lognormal: location; trunc-normal: mean
    double p2;  // lognormal: scale; trunc-normal: sd

    static DistributionSpec point(double value) {
        if (!(value >= 0.0))
            throw std::invalid_argument("DistributionSpec: point value must be >= 0");
        return {DistFamily::point, value, 0.0};
    }
    static DistributionSpec exponential(double rate) {
        if (!(rate > 0.0))
            throw std::invalid_argument("DistributionSpec: exponential rate must be > 0");
        return {DistFamily::exponential, rate, 0.0};
    }
    static DistributionSpec lognormal(double location, double scale) {
        if (!(scale > 0.0))
            throw std::invalid_argument("DistributionSpec: lognormal scale must be > 0");
        return {DistFamily::lognormal, location, scale};
    }
    /// Normal(mean, sd) conditioned on being >= 0, sampled by inverse CDF.
    static DistributionSpec truncated_normal(double mean, double sd) {
        if (!(sd > 0.0))
            throw std::invalid_argument("DistributionSpec: truncated_normal sd must be > 0");
        return {DistFamily::truncated_normal, mean, sd};
    }
};

/// One variate from `spec` on the given rng stream. Deterministic in
/// (seed, stream); always >= 0.
inline double draw(const DistributionSpec& spec, std::uint64_t seed,
                   std::uint64_t stream) noexcept {
    switch (spec.family) {
        case DistFamily::point:
            return spec.p1;
        case DistFamily::exponential:
            return -std::log(rng::uniform01(seed, stream, 0)) / spec.p1;
        case DistFamily::lognormal:
            return std::exp(spec.p1 + spec.p2 * rng::normal_icdf(rng::uniform01(seed, stream, 0)));
        case DistFamily::truncated_normal: {
            const double mass_below = rng::normal_cdf((0.0 - spec.p1) / spec.p2);
            double u = mass_below + rng::uniform01(seed, stream, 0) * (1.0 - mass_below);
            u = std::min(u, 1.0 - 0x1.0p-53);
            const double x = spec.p1 + spec.p2 * rng::normal_icdf(u);
            return x < 0.0 ? 0.0 : x;
        }
    }
    return 0.0;  // unreachable
}

/// n i.i.d. draws; draw i uses stream i.
inline std::vector<double> sample(const DistributionSpec& spec, std::size_t n,
                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = draw(spec, seed, i);
    return out;
}

/// Nearest-rank quantile of an already sorted vector.
inline double quantile_nearest_rank(const std::vector<double>& sorted, double prob) {
    if (sorted.empty())
        throw std::invalid_argument("quantile_nearest_rank: empty sample");
    const double n = static_cast<double>(sorted.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(prob * n));
    if (rank < 1) rank = 1;
    if (rank > sorted.size()) rank = sorted.size();
    return sorted[rank - 1];
}

/// Aggregated propagation result. Identical (seed, n, specs, grid) inputs
/// reproduce this struct bit for bit.
struct McResult {
    std::vector<double> times;
    std::vector<double> share_mean;
    std::vector<double> quantile_probs;
    std::vector<std::vector<double>> share_quantiles;  // [prob][time]
    std::vector<double> x_mean;
    std::vector<double> x_var;          // unbiased, per time
    std::vector<double> tstar_samples;  // finite generalized crossing times, draw order
    std::size_t already_crossed = 0;    // draws with sigma0 >= 1
    std::size_t never_crossed = 0;      // draws with phi == 0 and sigma0 < 1
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

namespace detail {

inline std::size_t resolve_threads(std::size_t threads) {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Fill draws [begin, end): per-draw (sigma0, phi), per-time share and X.
inline void fill_draws(const GenScenario& gs, const DistributionSpec& sigma0_spec,
                       const DistributionSpec& phi_spec, const std::vector<double>& grid,
                       std::uint64_t seed, std::size_t begin, std::size_t end,
                       std::vector<double>& shares, std::vector<double>& xs,
                       std::vector<double>& sigma0s, std::vector<double>& phis) {
    const std::size_t n_times = grid.size();
    for (std::size_t i = begin; i < end; ++i) {
        const double s0 = draw(sigma0_spec, seed, 2 * i);
        const double ph = draw(phi_spec, seed, 2 * i + 1);
        sigma0s[i] = s0;
        phis[i] = ph;
        for (std::size_t j = 0; j < n_times; ++j) {
            const AffineX ax = affine_eval(gs.alpha, gs.beta0, gs.decay_d, gs.xi,
                                           gs.k, s0, ph, grid[j]);
            xs[i * n_times + j] = ax.value;
            shares[i * n_times + j] = logistic(-ax.value);
        }
    }
}

}  // namespace detail

/// Propagate (sigma0, phi) uncertainty over a time grid. Work is split into
/// fixed-size chunks of draws; the thread count only decides who computes a
/// chunk, never what is computed, so output is thread-count invariant.
inline McResult propagate(const GenScenario& gs, const DistributionSpec& sigma0_spec,
                          const DistributionSpec& phi_spec, const std::vector<double>& grid,
                          std::size_t n, std::uint64_t seed, std::size_t threads = 1,
                          std::vector<double> quantile_probs = {0.05, 0.5, 0.95}) {
    if (grid.empty()) throw std::invalid_argument("propagate: grid must be nonempty");
    if (n < 1) throw std::invalid_argument("propagate: n must be >= 1");
    for (double p : quantile_probs)
        if (!(p >= 0.0) || !(p <= 1.0))
            throw std::invalid_argument("propagate: quantile probs must lie in [0,1]");
    std::sort(quantile_probs.begin(), quantile_probs.end());

    const std::size_t n_times = grid.size();
    std::vector<double> shares(n * n_times);
    std::vector<double> xs(n * n_times);
    std::vector<double> sigma0s(n);
    std::vector<double> phis(n);

    const std::size_t n_threads = detail::resolve_threads(threads);
    if (n_threads <= 1 || n < 2) {
        detail::fill_draws(gs, sigma0_spec, phi_spec, grid, seed, 0, n,
                           shares, xs, sigma0s, phis);
    } else {
        constexpr std::size_t chunk = 4096;
        const std::size_t n_chunks = (n + chunk - 1) / chunk;
        std::vector<std::thread> pool;
        const std::size_t workers = std::min(n_threads, n_chunks);
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < n_chunks; c += workers) {
                    const std::size_t lo = c * chunk;
                    const std::size_t hi = std::min(lo + chunk, n);
                    detail::fill_draws(gs, sigma0_spec, phi_spec, grid, seed, lo, hi,
                                       shares, xs, sigma0s, phis);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    McResult res;
    res.times = grid;
    res.quantile_probs = quantile_probs;
    res.seed = seed;
    res.n = n;
    res.share_mean.resize(n_times);
    res.x_mean.resize(n_times);
    res.x_var.resize(n_times);
    res.share_quantiles.assign(quantile_probs.size(), std::vector<double>(n_times));

    std::vector<double> column(n);
    for (std::size_t j = 0; j < n_times; ++j) {
        double share_sum = 0.0;
        double x_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            share_sum += shares[i * n_times + j];
            x_sum += xs[i * n_times + j];
        }
        const double x_mean = x_sum / static_cast<double>(n);
        double x_ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = xs[i * n_times + j] - x_mean;
            x_ss += dev * dev;
        }
        res.share_mean[j] = share_sum / static_cast<double>(n);
        res.x_mean[j] = x_mean;
        res.x_var[j] = n > 1 ? x_ss / static_cast<double>(n - 1) : 0.0;

        for (std::size_t i = 0; i < n; ++i) column[i] = shares[i * n_times + j];
        std::sort(column.begin(), column.end());
        for (std::size_t q = 0; q < quantile_probs.size(); ++q)
            res.share_quantiles[q][j] = quantile_nearest_rank(column, quantile_probs[q]);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (sigma0s[i] >= 1.0) {
            ++res.already_crossed;
        } else if (!(phis[i] > 0.0)) {
            ++res.never_crossed;
        } else {
            res.tstar_samples.push_back(
                std::pow((1.0 - sigma0s[i]) / phis[i], 1.0 / gs.k));
        }
    }
    return res;
}

/// Distribution of the generalized sigma = 1 crossing time under random
/// (sigma0, phi). Draws with sigma0 >= 1 are counted separately and kept
/// out of the order statistics.
struct TstarSummary {
    std::vector<double> samples;  // finite crossing times, draw order
    std::size_t already_crossed = 0;
    std::size_t never_crossed = 0;
    // median / interquartile range of the finite samples; meaningless when
    // has_quantiles is false (no finite sample).
    bool has_quantiles = false;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

inline TstarSummary tstar_distribution(const DistributionSpec& sigma0_spec,
                                       const DistributionSpec& phi_spec, double k,
                                       std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("tstar_distribution: n must be >= 1");
    if (!(k > 0.0) || !(k <= 1.0))
        throw std::invalid_argument("tstar_distribution: k must lie in (0,1]");

    TstarSummary out;
    out.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s0 = draw(sigma0_spec, seed, 2 * i);
        const double ph = draw(phi_spec, seed, 2 * i + 1);
        if (s0 >= 1.0) {
            ++out.already_crossed;
        } else if (!(ph > 0.0)) {
            ++out.never_crossed;
        } else {
            out.samples.push_back(std::pow((1.0 - s0) / ph, 1.0 / k));
        }
    }
    if (!out.samples.empty()) {
        std::vector<double> sorted = out.samples;
        std::sort(sorted.begin(), sorted.end());
        out.has_quantiles = true;
        out.median = quantile_nearest_rank(sorted, 0.5);
        out.q25 = quantile_nearest_rank(sorted, 0.25);
        out.q75 = quantile_nearest_rank(sorted, 0.75);
    }
    return out;
}

}  // namespace ves
