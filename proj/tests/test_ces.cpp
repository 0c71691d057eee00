#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "ves/ces.hpp"

using namespace ves;
using testutil::rel_diff;
using testutil::uniform_in;

TEST_CASE("ces_utility closed-form values") {
    // U(1,1) = 1 by homogeneity of degree one.
    CHECK(ces_utility(1.0, 1.0, CesPoint(0.3, 0.5, 2.0)) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(ces_utility(2.0, 2.0, CesPoint(0.3, 0.5, 0.5)) == Catch::Approx(2.0).epsilon(1e-14));
    // rho = 0.5, U = (0.7 * 1)^2.
    CHECK(ces_utility(1.0, 0.0, CesPoint(0.3, 0.5, 2.0)) == Catch::Approx(0.49).epsilon(1e-14));
}

TEST_CASE("ces_utility limits and domain") {
    // Cobb-Douglas branch at sigma = 1.
    CHECK(ces_utility(2.0, 3.0, CesPoint(0.3, 0.5, 1.0)) ==
          Catch::Approx(std::pow(2.0, 0.7) * std::pow(3.0, 0.3)).epsilon(1e-13));
    // Complements: a missing input yields zero output.
    CHECK(ces_utility(1.0, 0.0, CesPoint(0.3, 0.5, 0.5)) == 0.0);
    CHECK(ces_utility(0.0, 1.0, CesPoint(0.3, 0.5, 0.5)) == 0.0);

    CHECK_THROWS_AS(ces_utility(-1.0, 1.0, CesPoint(0.3, 0.5, 2.0)), std::domain_error);
    CHECK_THROWS_AS(ces_utility(1.0, 1.0, CesPoint(0.3, 0.5, 0.0)), std::domain_error);
    CHECK_THROWS_AS(ces_utility(0.0, 0.0, CesPoint(0.3, 0.5, 0.5)), std::domain_error);
}

TEST_CASE("ces_utility homogeneity of degree one") {
    for (std::uint64_t i = 0; i < 50; ++i) {
        const double h = uniform_in(0.1, 10.0, 11, i, 0);
        const double a = uniform_in(0.1, 10.0, 11, i, 1);
        const double lam = uniform_in(0.1, 10.0, 11, i, 2);
        const double alpha = uniform_in(0.05, 0.95, 11, i, 3);
        const double sigma = uniform_in(0.2, 5.0, 11, i, 4);
        const CesPoint p(alpha, 0.5, sigma);
        CAPTURE(h, a, lam, alpha, sigma);
        CHECK(rel_diff(ces_utility(lam * h, lam * a, p), lam * ces_utility(h, a, p)) < 1e-12);
    }
}

TEST_CASE("revenue_share fixed points") {
    // sigma = 1: share equals alpha regardless of price.
    CHECK(revenue_share(CesPoint(0.001, 0.5, 1.0)).value ==
          Catch::Approx(0.001).epsilon(1e-14));
    // price = 1: the price term drops out.
    CHECK(revenue_share(CesPoint(0.3, 1.0, 7.0)).value == Catch::Approx(0.3).epsilon(1e-14));
    // Direct evaluation, sigma = 2: r = 0.5*2/(0.5 + 0.5*2) = 2/3.
    CHECK(revenue_share(CesPoint(0.5, 0.5, 2.0)).value ==
          Catch::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("revenue_share monotonicity and limits in price") {
    auto share = [](double alpha, double p, double sigma) {
        return revenue_share(CesPoint(alpha, p, sigma)).value;
    };
    const double grid[] = {1e-6, 1e-3, 0.1, 0.3, 0.6, 1.0};

    // sigma > 1: strictly decreasing in price; sigma < 1: strictly increasing.
    for (std::size_t i = 1; i < std::size(grid); ++i) {
        CHECK(share(0.2, grid[i], 3.0) < share(0.2, grid[i - 1], 3.0));
        CHECK(share(0.2, grid[i], 0.4) > share(0.2, grid[i - 1], 0.4));
        CHECK(share(0.2, grid[i], 1.0) == Catch::Approx(0.2).epsilon(1e-14));
    }

    CHECK(share(0.3, 1e-30, 2.0) > 1.0 - 1e-9);   // substitutes: share -> 1
    CHECK(share(0.3, 1e-30, 0.5) < 1e-9);         // complements: share -> 0
    CHECK(share(0.3, 1e-300, 5.0) == 1.0);        // survives extreme exponents
}

TEST_CASE("share_elasticity sign and values") {
    CHECK(share_elasticity(1.0, Share(0.4)) == 0.0);
    CHECK(share_elasticity(2.0, Share(0.0)) == -1.0);
    // Strong-Jevons elasticity at the reference-table printed share.
    CHECK(share_elasticity(2.0, Share(0.552229)) ==
          Catch::Approx(-0.447771).epsilon(1e-12));

    CHECK(share_elasticity(3.0, Share(0.2)) < 0.0);
    CHECK(share_elasticity(0.5, Share(0.2)) > 0.0);
}

TEST_CASE("share_elasticity matches central finite difference of the share") {
    // d ln r / d ln p approximated at step 1e-6 in log-price.
    const double h = 1e-6;
    for (std::uint64_t i = 0; i < 30; ++i) {
        const double alpha = uniform_in(0.05, 0.95, 22, i, 0);
        const double p = uniform_in(0.05, 0.9, 22, i, 1);
        const double sigma = uniform_in(0.0, 4.0, 22, i, 2);
        const double up = revenue_share(CesPoint(alpha, p * std::exp(h), sigma)).value;
        const double dn = revenue_share(CesPoint(alpha, p * std::exp(-h), sigma)).value;
        const double numeric = (std::log(up) - std::log(dn)) / (2.0 * h);
        const double r = revenue_share(CesPoint(alpha, p, sigma)).value;
        CAPTURE(alpha, p, sigma);
        CHECK(std::abs(numeric - share_elasticity(sigma, Share(r))) < 1e-6);
    }
}

TEST_CASE("share_sigma2 agrees with revenue_share at sigma = 2") {
    const double alphas[] = {0.001, 0.1, 0.25, 0.5, 0.75, 0.9, 0.999};
    const double prices[] = {1e-6, 1e-3, 0.01, 0.1, 0.5, 0.9, 1.0};
    for (double alpha : alphas) {
        for (double p : prices) {
            CAPTURE(alpha, p);
            CHECK(rel_diff(share_sigma2(alpha, p).value,
                           revenue_share(CesPoint(alpha, p, 2.0)).value) < 1e-14);
        }
    }
}

TEST_CASE("share_sigma2 values") {
    CHECK(share_sigma2(0.5, 0.5).value == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(share_sigma2(0.001, 1.0).value == Catch::Approx(0.001).epsilon(1e-14));
    // 0.001 / (0.999*0.001 + 0.001)
    CHECK(share_sigma2(0.001, 0.001).value ==
          Catch::Approx(0.5002501250625313).epsilon(1e-14));
}

TEST_CASE("price_for_share_sigma2 inverts share_sigma2") {
    CHECK(price_for_share_sigma2(0.5, Share(2.0 / 3.0)) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(price_for_share_sigma2(0.5, Share(0.5)) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(price_for_share_sigma2(0.001, share_sigma2(0.001, 0.001)) ==
          Catch::Approx(0.001).epsilon(1e-12));

    CHECK_THROWS_AS(price_for_share_sigma2(0.5, Share(0.0)), std::domain_error);
    CHECK_THROWS_AS(price_for_share_sigma2(0.5, Share(1.0)), std::domain_error);
}

TEST_CASE("sigma = 2 round trip over random feasible pairs") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const double alpha = uniform_in(0.01, 0.99, 33, i, 0);
        // Prices <= 1 correspond to shares >= alpha.
        const double r = uniform_in(alpha, 1.0 - 1e-6, 33, i, 1);
        const double p = price_for_share_sigma2(alpha, Share(r));
        CAPTURE(alpha, r, p);
        CHECK(rel_diff(share_sigma2(alpha, p).value, r) < 1e-12);
    }
}

TEST_CASE("construction rejects out-of-domain parameters") {
    CHECK_THROWS_AS(CesPoint(0.0, 0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(CesPoint(1.0, 0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(CesPoint(0.5, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(CesPoint(0.5, 1.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(CesPoint(0.5, 0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Share(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(Share(1.1), std::invalid_argument);

    // The permissive factory lifts only the price upper bound.
    const CesPoint p = CesPoint::permissive(0.5, 1.5, 2.0);
    CHECK(p.price_ai == 1.5);
    CHECK_THROWS_AS(CesPoint::permissive(0.5, -1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(CesPoint::permissive(1.5, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("revenue_share accepts sigma = 0") {
    // r = 1/(1 + ((1-a)/a) / p): perfect-complements pricing.
    const double r = revenue_share(CesPoint(0.5, 0.5, 0.0)).value;
    CHECK(r == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
}
