#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "ves/ces.hpp"
#include "ves/dynamics.hpp"

using namespace ves;
using testutil::rel_diff;
using testutil::uniform_in;

namespace {

// The canonical eight-scenario grid: alpha = 0.001, p0 = 0.5,
// g x d x delta = {0.5,1.5} x {0.5,1.5} x {0.05,0.15}.
struct GridRow {
    double g, d, delta;
    double share10, share30;  // full-precision values, independently derived
};

constexpr GridRow kGrid[] = {
    {0.5, 0.5, 0.05, 1.39975371496905e-05, 1.97953921038294e-05},
    {0.5, 0.5, 0.15, 2.41103873554528e-04, 9.99996978273553e-01},
    {0.5, 1.5, 0.05, 7.74192732603624e-09, 1.09487385882768e-08},
    {0.5, 1.5, 0.15, 1.97953921038294e-05, 1.0},
    {1.5, 0.5, 0.05, 2.41103873554528e-04, 9.99996978273553e-01},
    {1.5, 0.5, 0.15, 5.52228585261277e-01, 1.0},
    {1.5, 1.5, 0.05, 1.97953921038294e-05, 1.0},
    {1.5, 1.5, 0.15, 9.99996978273553e-01, 1.0},
};

Scenario grid_scenario(const GridRow& row) {
    return Scenario(0.001, 0.5, row.g, row.d, row.delta);
}

}  // namespace

TEST_CASE("Scenario derives the compound rate") {
    const Scenario s(0.001, 0.5, 1.5, 0.5, 0.15);
    CHECK(s.phi == Catch::Approx(0.225).epsilon(1e-15));
    const Scenario f = Scenario::from_phi(0.001, 0.5, 0.075, 0.5);
    CHECK(f.phi == 0.075);

    CHECK_THROWS_AS(Scenario(0.0, 0.5, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Scenario(0.5, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Scenario(0.5, 0.5, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Scenario(0.5, 0.5, 1.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sigma_at is linear in time") {
    CHECK(sigma_at(0.225, 40.0 / 9.0) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(sigma_at(0.075, 0.0) == 0.0);
    CHECK(sigma_at(0.025, 80.0) == Catch::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("price_at decays exponentially") {
    CHECK(price_at(0.5, 0.5, 0.0) == 0.5);
    CHECK(price_at(0.5, 1.5, 1.0) == Catch::Approx(0.11156508007421491).epsilon(1e-14));
    // One half-life halves the price.
    CHECK(price_at(0.5, 0.5, std::log(2.0) / 0.5) == Catch::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("quad_coeffs values") {
    // Independent recomputation: a = ln(999) + ln 2, b = 0.5 + 0.075*ln 0.5.
    const QuadCoeffs q = quad_coeffs(Scenario::from_phi(0.001, 0.5, 0.075, 0.5));
    CHECK(q.a == Catch::Approx(7.599901959208499).epsilon(1e-14));
    CHECK(q.b == Catch::Approx(0.4480139614580041).epsilon(1e-13));
    CHECK(q.c == Catch::Approx(-0.0375).epsilon(1e-15));

    const QuadCoeffs q2 = quad_coeffs(Scenario::from_phi(0.5, 0.5, 1.0, 1.0));
    CHECK(q2.a == Catch::Approx(0.6931471805599453).epsilon(1e-14));
    CHECK(q2.b == Catch::Approx(0.3068528194400547).epsilon(1e-13));
    CHECK(q2.c == Catch::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("quadratic coefficient is negative for every scenario") {
    for (std::uint64_t i = 0; i < 100; ++i) {
        CHECK(quad_coeffs(testutil::random_scenario(44, i)).c < 0.0);
    }
}

TEST_CASE("share_at reproduces the reference grid") {
    for (const GridRow& row : kGrid) {
        const Scenario s = grid_scenario(row);
        CAPTURE(row.g, row.d, row.delta);
        CHECK(rel_diff(share_at(s, 10.0).value, row.share10) < 1e-12);
        CHECK(rel_diff(share_at(s, 30.0).value, row.share30) < 1e-12);
    }
}

TEST_CASE("share equals alpha at the sigma = 1 crossing") {
    // Price-independent: sigma(t*) = 1 annihilates the price term.
    for (std::uint64_t i = 0; i < 100; ++i) {
        const Scenario s = testutil::random_scenario(55, i);
        CAPTURE(s.alpha, s.price0, s.phi, s.decay_d);
        CHECK(rel_diff(share_at(s, t_star(s.phi)).value, s.alpha) < 1e-12);
    }
}

TEST_CASE("share_at and the static share agree along the path") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Scenario s = testutil::random_scenario(66, i);
        const double t = uniform_in(0.0, 100.0, 66, i, 10);
        const double via_quad = share_at(s, t).value;
        const double p = price_at(s.price0, s.decay_d, t);
        if (p == 0.0) continue;  // price underflowed; CesPoint needs p > 0
        const double via_static =
            revenue_share(CesPoint(s.alpha, p, sigma_at(s.phi, t))).value;
        CAPTURE(s.alpha, s.price0, s.phi, s.decay_d, t);
        CHECK(rel_diff(via_quad, via_static) < 1e-12);
    }
}

TEST_CASE("t_star") {
    CHECK(t_star(0.225) == Catch::Approx(40.0 / 9.0).epsilon(1e-15));
    CHECK(t_star(0.075) == Catch::Approx(40.0 / 3.0).epsilon(1e-15));
    CHECK(t_star(0.025) == Catch::Approx(40.0).epsilon(1e-15));
    CHECK_THROWS_AS(t_star(0.0), std::domain_error);
    CHECK_THROWS_AS(t_star(-0.1), std::domain_error);
}

TEST_CASE("phase classification") {
    const Scenario fast = Scenario::from_phi(0.001, 0.5, 0.225, 0.5);
    CHECK(phase_at(fast, 2.0, 1e-6) == Phase::complements);  // sigma = 0.45
    CHECK(phase_at(fast, t_star(0.225), 1e-6) == Phase::knife_edge);
    CHECK(phase_at(fast, 6.0, 1e-6) == Phase::jevons);         // sigma = 1.35
    CHECK(phase_at(fast, 10.0, 1e-6) == Phase::strong_jevons); // sigma = 2.25, share 0.55
    CHECK(phase_at(fast, 30.0, 1e-6) == Phase::saturated);

    // Saturation at t = 30 for phi = 0.075, d = 1.5.
    const Scenario s4 = Scenario(0.001, 0.5, 0.5, 1.5, 0.15);
    CHECK(phase_at(s4, 30.0, 1e-6) == Phase::saturated);

    CHECK_THROWS_AS(phase_at(fast, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(phase_at(fast, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("phase index is nondecreasing in time") {
    for (std::uint64_t i = 0; i < 25; ++i) {
        const Scenario s = testutil::random_scenario(77, i);
        int prev = 0;
        for (double t = 0.0; t <= 120.0; t += 0.25) {
            const int phase = static_cast<int>(phase_at(s, t, 1e-6));
            CAPTURE(s.phi, s.decay_d, t);
            if (phase == 2) continue;  // knife-edge is a point event
            CHECK(phase >= prev);
            prev = phase;
        }
    }
}

TEST_CASE("trajectory grid and fields") {
    const Scenario row8 = Scenario(0.001, 0.5, 1.5, 1.5, 0.15);
    const Trajectory tr = trajectory(row8, 30.0, 301);
    REQUIRE(tr.times.size() == 301);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 30.0);
    // t = 10 sits exactly on the grid at index 100.
    CHECK(tr.times[100] == 10.0);
    CHECK(rel_diff(tr.share[100], 9.99996978273553e-01) < 1e-12);

    const Trajectory two = trajectory(row8, 7.5, 2);
    REQUIRE(two.times.size() == 2);
    CHECK(two.times[0] == 0.0);
    CHECK(two.times[1] == 7.5);

    CHECK_THROWS_AS(trajectory(row8, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(trajectory(row8, 10.0, 1), std::invalid_argument);
}

TEST_CASE("trajectory internal consistency") {
    const Scenario s = Scenario(0.001, 0.5, 0.5, 0.5, 0.15);
    const Trajectory tr = trajectory(s, 30.0, 121);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(tr.logit_share[i] == -tr.exponent[i]);
        if (i > 0) {
            CHECK(tr.times[i] > tr.times[i - 1]);
            CHECK(tr.sigma[i] > tr.sigma[i - 1]);
            CHECK(tr.price[i] < tr.price[i - 1]);
        }
        // logit matches ln(r/(1-r)) where the share is comfortably interior.
        if (tr.share[i] > 1e-12 && tr.share[i] < 1.0 - 1e-9) {
            CHECK(std::abs(tr.logit_share[i] -
                           std::log(tr.share[i] / (1.0 - tr.share[i]))) < 1e-9);
        }
    }
}

TEST_CASE("quadratic fit through exact logit samples recovers the coefficients") {
    const Scenario s = Scenario(0.001, 0.5, 1.5, 0.5, 0.15);
    const QuadCoeffs q = quad_coeffs(s);
    // Three exact samples pin the parabola.
    const double t0 = 2.0, t1 = 7.0, t2 = 12.0;
    const double x0 = exponent_at(q, t0), x1 = exponent_at(q, t1), x2 = exponent_at(q, t2);
    // Solve the 3x3 Vandermonde system directly (divided differences).
    const double d01 = (x1 - x0) / (t1 - t0);
    const double d12 = (x2 - x1) / (t2 - t1);
    const double c = (d12 - d01) / (t2 - t0);
    const double b = d01 - c * (t0 + t1);
    const double a = x0 - t0 * (b + c * t0);
    CHECK(std::abs(a - q.a) < 1e-9);
    CHECK(std::abs(b - q.b) < 1e-9);
    CHECK(std::abs(c - q.c) < 1e-9);
}

TEST_CASE("phase timeline") {
    const Scenario fast = Scenario(0.001, 0.5, 1.5, 0.5, 0.15);
    const PhaseTimeline pt = phase_timeline(fast, 30.0, 301, 1e-6);
    CHECK(pt.t_star == Catch::Approx(40.0 / 9.0).epsilon(1e-15));
    CHECK(pt.t_2star == 2.0 * pt.t_star);
    REQUIRE(pt.t_saturation.has_value());
    CHECK(*pt.t_saturation > pt.t_2star);
    CHECK(share_at(fast, *pt.t_saturation).value >= 1.0 - 1e-6);

    // Slow scenario never saturates within the horizon.
    const Scenario slow = Scenario(0.001, 0.5, 0.5, 0.5, 0.05);
    CHECK_FALSE(phase_timeline(slow, 30.0, 301, 1e-6).t_saturation.has_value());
}

TEST_CASE("scenarios sharing phi share phase boundaries regardless of decay") {
    for (std::uint64_t i = 0; i < 40; ++i) {
        const double phi = uniform_in(0.02, 0.5, 88, i, 0);
        const Scenario a = Scenario::from_phi(0.001, 0.5, phi, 0.25);
        const Scenario b = Scenario::from_phi(0.001, 0.5, phi, 1.5);
        const PhaseTimeline pa = phase_timeline(a, 30.0, 61, 1e-6);
        const PhaseTimeline pb = phase_timeline(b, 30.0, 61, 1e-6);
        CHECK(pa.t_star == pb.t_star);
        CHECK(pa.t_2star == pb.t_2star);
    }
}

TEST_CASE("long-horizon evaluation stays finite") {
    for (const GridRow& row : kGrid) {
        const Scenario s = grid_scenario(row);
        const Trajectory tr = trajectory(s, 1e4, 501);
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            CAPTURE(row.g, row.d, row.delta, tr.times[i]);
            REQUIRE(std::isfinite(tr.sigma[i]));
            REQUIRE(std::isfinite(tr.price[i]));
            REQUIRE(std::isfinite(tr.exponent[i]));
            REQUIRE(std::isfinite(tr.share[i]));
            REQUIRE(std::isfinite(tr.logit_share[i]));
            REQUIRE(tr.share[i] >= 0.0);
            REQUIRE(tr.share[i] <= 1.0);
        }
        // Far beyond t*, the market has tipped completely.
        if (s.phi >= 0.075) {
            CHECK(share_at(s, 10.0 * t_star(s.phi)).value > 0.999);
        }
    }
}

TEST_CASE("doubling the compound rate halves the crossing time") {
    CHECK(t_star(0.15) == Catch::Approx(0.5 * t_star(0.075)).epsilon(1e-15));
}
