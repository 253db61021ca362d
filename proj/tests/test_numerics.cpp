#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "urllc/errors.hpp"
#include "urllc/numerics.hpp"

using namespace urllc;

TEST_CASE("q_function basics") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_function(40.0) < 1e-300);
    CHECK(q_function(-40.0) == doctest::Approx(1.0).epsilon(1e-15));
    // Pinned against an independent normal-tail evaluation.
    CHECK(q_function(4.7534) == doctest::Approx(1.0001202950935643e-06).epsilon(1e-9));
    double prev = 1.0;
    for (double x = -6.0; x <= 6.0; x += 0.25) {
        const double v = q_function(x);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("q_inverse round-trips and domain") {
    CHECK(q_inverse(0.5) == doctest::Approx(0.0).epsilon(1e-11));
    CHECK(q_inverse(1e-6) == doctest::Approx(4.753424308822899).epsilon(1e-10));
    for (double x = -6.0; x <= 6.0; x += 0.5) {
        CHECK(q_inverse(q_function(x)) == doctest::Approx(x).epsilon(1e-9));
    }
    for (double p : {1e-9, 1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999}) {
        CHECK(q_function(q_inverse(p)) == doctest::Approx(p).epsilon(1e-10));
        CHECK(q_inverse(p) == doctest::Approx(oracles::q_inv(p)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(q_inverse(0.0), std::domain_error);
    CHECK_THROWS_AS(q_inverse(1.0), std::domain_error);
    CHECK_THROWS_AS(q_inverse(-0.3), std::domain_error);
}

TEST_CASE("gamma_lower_regularized against series oracle") {
    for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(gamma_lower_regularized(1.0, x) ==
              doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
    }
    CHECK(gamma_lower_regularized(3.7, 0.0) == 0.0);
    // Spec point for two-branch MRC, with its stated series form.
    const double x = 0.168;
    CHECK(gamma_lower_regularized(2.0, x) ==
          doctest::Approx(1.0 - std::exp(-x) * (1.0 + x)).epsilon(1e-12));
    for (double shape : {0.5, 1.0, 2.0, 5.0, 16.0, 64.0}) {
        for (double xx : {0.05, 0.5, 2.0, 10.0, 40.0, 120.0}) {
            const double ref = static_cast<double>(
                oracles::gamma_p_series_1e6(static_cast<long double>(shape),
                                            static_cast<long double>(xx)));
            CHECK(gamma_lower_regularized(shape, xx) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
    // Monotone in x.
    double prev = -1.0;
    for (double xx = 0.0; xx < 10.0; xx += 0.1) {
        const double v = gamma_lower_regularized(2.5, xx);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK_THROWS_AS(gamma_lower_regularized(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(gamma_lower_regularized(2.0, -1.0), std::domain_error);
}

TEST_CASE("channel dispersion") {
    const double log2e2 = std::pow(std::log2(std::exp(1.0)), 2);
    CHECK(channel_dispersion(0.0) == 0.0);
    CHECK(channel_dispersion(10.0) == doctest::Approx((1.0 - 1.0 / 121.0) * log2e2).epsilon(1e-14));
    CHECK(channel_dispersion(10.0) == doctest::Approx(2.0641675844683713).epsilon(1e-12));
    CHECK(channel_dispersion(1e9) == doctest::Approx(log2e2).epsilon(1e-9));
    double prev = -1.0;
    for (double rho = 0.0; rho < 50.0; rho += 0.5) {
        const double v = channel_dispersion(rho);
        CHECK(v > prev);
        CHECK(v < log2e2);
        prev = v;
    }
}

TEST_CASE("fbl_rate spec points") {
    // eps = 0.5 collapses the penalty: Shannon rate exactly.
    for (double rho : {0.5, 10.0, 100.0}) {
        const double r = fbl_rate({rho, 1e-3, 200e3, 0.5});
        CHECK(r == doctest::Approx(200e3 * std::log2(1.0 + rho)).epsilon(1e-9));
    }
    // Zero SNR kills both terms.
    CHECK(fbl_rate({0.0, 1e-3, 200e3, 1e-6}) == 0.0);
    // Penalty at n = 1e6 stays within 0.3% of Shannon.
    const double b = 180e3;
    const double r = fbl_rate({10.0, 1e6 / b, b, 1e-6});
    const double shannon = b * std::log2(11.0);
    CHECK(r < shannon);
    CHECK((shannon - r) / shannon < 0.003);
    CHECK(r == doctest::Approx(621468.4092349614).epsilon(1e-9));
    // Negative region exists at harsh reliability and tiny blocklength.
    CHECK(fbl_rate({1.0, 1e-4, 200e3, 1e-9}) < 0.0);
    CHECK_THROWS_AS(fbl_rate({1.0, 1e-9, 200e3, 0.5}), std::domain_error);   // n < 1
    CHECK_THROWS_AS(fbl_rate({1.0, 1e-3, 200e3, 0.0}), std::domain_error);
    CHECK_THROWS_AS(fbl_rate({-1.0, 1e-3, 200e3, 0.5}), std::domain_error);
}

TEST_CASE("fbl_rate monotonicity") {
    // Increasing in rho (moderate SNR region), increasing in L, increasing
    // in eps (the Qinv penalty relaxes), bounded by Shannon for eps < 0.5.
    double prev = -1e18;
    for (double rho = 0.1; rho < 1000.0; rho *= 1.3) {
        const double r = fbl_rate({rho, 0.05, 200e3, 1e-6});
        CHECK(r > prev);
        CHECK(r <= 200e3 * std::log2(1.0 + rho));
        prev = r;
    }
    prev = -1e18;
    for (double latency = 1e-4; latency < 1.0; latency *= 1.5) {
        const double r = fbl_rate({10.0, latency, 200e3, 1e-6});
        CHECK(r > prev);
        prev = r;
    }
    prev = -1e18;
    for (double eps = 1e-9; eps < 0.5; eps *= 10.0) {
        const double r = fbl_rate({10.0, 1e-3, 200e3, eps});
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("fbl_rate_expectation point mass and mixture") {
    const FblQuery q{10.0, 1e-3, 200e3, 1e-6};
    const std::vector<double> one{10.0};
    CHECK(fbl_rate_expectation(one, q.latency_s, q.bandwidth_hz, q.error_prob) ==
          doctest::Approx(fbl_rate(q)).epsilon(1e-15));
    const std::vector<double> two{5.0, 15.0};
    const double avg = 0.5 * (fbl_rate({5.0, q.latency_s, q.bandwidth_hz, q.error_prob}) +
                              fbl_rate({15.0, q.latency_s, q.bandwidth_hz, q.error_prob}));
    CHECK(fbl_rate_expectation(two, q.latency_s, q.bandwidth_hz, q.error_prob) ==
          doctest::Approx(avg).epsilon(1e-15));
    CHECK_THROWS_AS(fbl_rate_expectation({}, 1e-3, 200e3, 1e-6), std::domain_error);
}

TEST_CASE("fbl_required_snr") {
    // Shannon inversion at eps = 0.5.
    const double rate = 150e3, b = 200e3;
    CHECK(fbl_required_snr(rate, 1e-3, b, 0.5) ==
          doctest::Approx(std::exp2(rate / b) - 1.0).epsilon(1e-8));
    // Round-trips with the forward map.
    for (double rho : {0.5, 3.0, 40.0}) {
        const FblQuery q{rho, 2e-3, b, 1e-6};
        const double fwd = fbl_rate(q);
        REQUIRE(fwd > 0.0);
        CHECK(fbl_required_snr(fwd, q.latency_s, q.bandwidth_hz, q.error_prob) ==
              doctest::Approx(rho).epsilon(1e-8));
    }
    // Grid-scan oracle at the spec operating point.
    const double got = fbl_required_snr(100e3, 1e-3, 200e3, 1e-6);
    CHECK(got == doctest::Approx(oracles::grid_min_snr(100e3, 1e-3, 200e3, 1e-6)).epsilon(1e-8));
    CHECK(got == doctest::Approx(0.8798426086092936).epsilon(1e-7));
    CHECK_THROWS_AS(fbl_required_snr(1e30, 1e-3, 200e3, 1e-6), infeasible_error);
    CHECK_THROWS_AS(fbl_required_snr(-5.0, 1e-3, 200e3, 1e-6), std::domain_error);
}

TEST_CASE("fbl_min_latency") {
    LatencyWindow window;
    // eps = 0.5: every latency works, the floor comes back.
    CHECK(fbl_min_latency(10e3, 10.0, 200e3, 0.5, window) ==
          doctest::Approx(std::max(window.floor_s, 1.0 / 200e3)));
    // Near-Shannon rates diverge past the cap.
    const double shannon = 200e3 * std::log2(30.0);
    CHECK_THROWS_AS(fbl_min_latency(shannon * 0.9999999, 29.0, 200e3, 1e-6, window),
                    infeasible_error);
    CHECK_THROWS_AS(fbl_min_latency(shannon * 1.01, 29.0, 200e3, 1e-6, window), infeasible_error);
    // Spec operating point against the grid-scan and algebraic oracles.
    const double got = fbl_min_latency(100e3, 29.0, 200e3, 1e-6, window);
    CHECK(got == doctest::Approx(oracles::grid_min_latency(100e3, 29.0, 200e3, 1e-6))
                     .epsilon(1e-6));
    CHECK(got ==
          doctest::Approx(oracles::closed_form_min_latency(100e3, 29.0, 200e3, 1e-6)).epsilon(1e-6));
    CHECK(got == doctest::Approx(1.2094415713565281e-05).epsilon(1e-6));
    // Forward map meets the rate at the solution.
    CHECK(fbl_rate({29.0, got, 200e3, 1e-6}) >= 100e3 * (1.0 - 1e-9));
}
