#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cellplan/radio_math.hpp"

using namespace cellplan;

TEST_CASE("dB conversions") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == 10.0);
    CHECK(db_to_linear(3.0) == doctest::Approx(1.9953).epsilon(1e-4));
    CHECK_THROWS_AS((void)linear_to_db(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)linear_to_db(-2.0), std::invalid_argument);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> db(-120.0, 120.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = db(rng);
        CHECK(linear_to_db(db_to_linear(v)) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("wavelength at trial frequencies") {
    CHECK(wavelength_m(3500.0) == doctest::Approx(0.08571).epsilon(1e-4));
    CHECK(wavelength_m(300.0) == 1.0);
    CHECK(wavelength_m(700.0) == doctest::Approx(0.4286).epsilon(1e-4));
    CHECK_THROWS_AS((void)wavelength_m(0.0), std::invalid_argument);
}

TEST_CASE("thermal noise") {
    CHECK(thermal_noise_dbm(1e-6, 0.0) == doctest::Approx(-174.0).epsilon(1e-12));
    CHECK(thermal_noise_dbm(60.0, 0.0) == doctest::Approx(-96.22).epsilon(1e-4));
    CHECK(thermal_noise_dbm(60.0, 7.0) == doctest::Approx(-89.22).epsilon(1e-4));
    CHECK_THROWS_AS((void)thermal_noise_dbm(0.0, 3.0), std::invalid_argument);
}

TEST_CASE("thermal noise is exactly additive in noise figure") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> bw(0.1, 400.0);
    std::uniform_real_distribution<double> nf(0.0, 12.0);
    for (int i = 0; i < 200; ++i) {
        const double b = bw(rng);
        const double f = nf(rng);
        CHECK(thermal_noise_dbm(b, f) == thermal_noise_dbm(b, 0.0) + f);
    }
}

TEST_CASE("SINR from NRSRQ, worked points") {
    CHECK(sinr_from_nrsrq(1.0 / 24.0, 12, {0.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sinr_from_nrsrq(1.0 / 24.0, 12, {1.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("x = 0 degenerates to n * NRSRQ exactly") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> q(1e-6, 0.08);
    std::uniform_int_distribution<int> n(1, 3300);
    for (int i = 0; i < 1000; ++i) {
        const double nrsrq = q(rng);
        const int sc = n(rng);
        CHECK(sinr_from_nrsrq(nrsrq, sc, {0.0}) == sc * nrsrq);
    }
}

TEST_CASE("SINR domain error when NRSRQ is inconsistent with x") {
    // n*q = 2 -> 1/(n*q) = 0.5 < x
    CHECK_THROWS_AS((void)sinr_from_nrsrq(2.0 / 12.0, 12, {1.0}), std::domain_error);
    CHECK_THROWS_AS((void)sinr_from_nrsrq(0.0, 12, {0.5}), std::domain_error);
}

TEST_CASE("NRSRQ/SINR inversion, worked points") {
    CHECK(nrsrq_from_sinr(0.5, 12, {0.0}) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    CHECK(nrsrq_from_sinr(1.0, 12, {1.0}) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("NRSRQ/SINR round trip under 1e-9 relative error") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> x_dist(0.0, 1.0);
    std::uniform_real_distribution<double> log_sinr(-3.0, 3.0);
    std::uniform_int_distribution<int> n(1, 3300);
    for (int i = 0; i < 5000; ++i) {
        const int sc = n(rng);
        const ActivityFactor x{x_dist(rng)};
        const double sinr = std::pow(10.0, log_sinr(rng));
        const double q = nrsrq_from_sinr(sinr, sc, x);
        const double back = sinr_from_nrsrq(q, sc, x);
        CHECK(std::abs(back - sinr) / sinr < 1e-9);
        const double q2 = nrsrq_from_sinr(back, sc, x);
        CHECK(std::abs(q2 - q) / q < 1e-9);
    }
}

TEST_CASE("SINR is strictly increasing in NRSRQ") {
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> x_dist(0.0, 1.0);
    std::uniform_int_distribution<int> n(1, 600);
    for (int i = 0; i < 1000; ++i) {
        const int sc = n(rng);
        const ActivityFactor x{x_dist(rng)};
        // stay inside the valid domain: n*q < 1/x
        const double q_cap = x.x > 0.0 ? 0.999 / (sc * x.x) : 1.0 / sc;
        std::uniform_real_distribution<double> q_dist(q_cap * 1e-6, q_cap);
        double q1 = q_dist(rng);
        double q2 = q_dist(rng);
        if (q1 == q2) continue;
        if (q1 > q2) std::swap(q1, q2);
        CHECK(sinr_from_nrsrq(q1, sc, x) < sinr_from_nrsrq(q2, sc, x));
    }
}

TEST_CASE("SINR sensitivity grows towards the NRSRQ asymptote") {
    // For x > 0 the curve steepens near 1/(n*x): the numeric derivative
    // at high NRSRQ dominates the one at low NRSRQ.
    const int n = 12;
    const ActivityFactor x{0.5};
    const double cap = 1.0 / (n * x.x);
    const auto slope = [&](double q) {
        const double h = cap * 1e-7;
        return (sinr_from_nrsrq(q + h, n, x) - sinr_from_nrsrq(q - h, n, x)) / (2.0 * h);
    };
    CHECK(slope(0.95 * cap) > 10.0 * slope(0.05 * cap));
}

TEST_CASE("required SINR for throughput") {
    // throughput equal to layers*bandwidth*efficiency is 1 bps/Hz/layer.
    CHECK(required_sinr_db_for_throughput(90.0, 60.0, 2, 0.75) == 0.0);
    CHECK(required_sinr_db_for_throughput(200.0, 60.0, 2, 0.75) ==
          doctest::Approx(5.64).epsilon(0.01));
    CHECK_THROWS_AS((void)required_sinr_db_for_throughput(0.0, 60.0, 2, 0.75),
                    std::invalid_argument);
}

TEST_CASE("required SINR is strictly monotonic in throughput") {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> tp(1.0, 2000.0);
    for (int i = 0; i < 500; ++i) {
        double t1 = tp(rng);
        double t2 = tp(rng);
        if (t1 == t2) continue;
        if (t1 > t2) std::swap(t1, t2);
        CHECK(required_sinr_db_for_throughput(t1, 60.0, 2, 0.75) <
              required_sinr_db_for_throughput(t2, 60.0, 2, 0.75));
    }
}

TEST_CASE("carrier and activity factor validation") {
    CarrierConfig c;
    c.bandwidth_mhz = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    ActivityFactor x{1.5};
    CHECK_THROWS_AS(x.validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)duplex_from_string("half"), std::invalid_argument);
}
