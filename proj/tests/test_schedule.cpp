#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ltail/errors.hpp"
#include "ltail/schedule.hpp"

using namespace ltail;

TEST_CASE("desk schedule at X=1e6, alpha=0.25") {
    auto s = build_schedule(1e6, 0.25, EffectiveConstants::desk());
    REQUIRE(s.R == 3);
    CHECK(s.l[1] == 14);
    CHECK(s.l[2] == 10);
    CHECK(s.l[3] == 4);
    CHECK(s.l[4] == 2);
    CHECK(s.Xj[1] == doctest::Approx(2.6827).epsilon(1e-4));
    CHECK(s.Xj[2] == doctest::Approx(3.9811).epsilon(1e-4));
    CHECK(s.Xj[3] == doctest::Approx(31.6228).epsilon(1e-4));
    CHECK(s.V == doctest::Approx(0.25 * std::log(std::log(1e6))));
    CHECK(s.kappa == doctest::Approx(0.25));
    CHECK(s.s_param == 2);
    // L_1, U_1 = kappa n_1 -+ s log 14 with n_1 = 0 (X_1 < e)
    auto [L1, U1] = barriers(s, 1);
    CHECK(L1 == doctest::Approx(-2 * std::log(14.0)));
    CHECK(U1 == doctest::Approx(2 * std::log(14.0)));
    CHECK(truncation_degree(s, 1) == 12);
    CHECK(truncation_degree(s, 3) == 12);
    CHECK(omega_bound(s, 2) == 8);
    CHECK(length_bound(s) == doctest::Approx(1000));
    CHECK(s.l[0] == doctest::Approx(14 + std::pow(14.0, 1e-5)));
}

TEST_CASE("sigma^2 consistency wherever X_r >= e") {
    for (double X : {1e5, 1e6, 1e8, 1e12}) {
        for (double a : {0.1, 0.25, 0.4}) {
            auto s = build_schedule(X, a, EffectiveConstants::desk());
            for (int r = 1; r <= s.R; ++r) {
                if (s.Xj[r] < std::numbers::e) {
                    // clamped: loglog X_r would be negative
                    CHECK(s.n[r] == 0);
                    continue;
                }
                CHECK(std::abs(std::log(s.l[r]) - (std::log(std::log(X)) - s.n[r])) < 1e-6);
                CHECK(s.sigma2[r] == doctest::Approx(std::log(s.l[r])));
            }
            for (int r = 1; r < s.R; ++r) {
                CHECK(s.l[r] > s.l[r + 1]);
                CHECK(s.Xj[r] < s.Xj[r + 1]);
            }
        }
    }
}

TEST_CASE("l_1 at loglog X = 4") {
    double X = std::exp(std::exp(4.0));
    auto s = build_schedule(X, 0.25, EffectiveConstants::desk());
    CHECK(s.l[1] == 32);
    CHECK(s.Xj[1] == doctest::Approx(std::pow(X, 1.0 / 32)));
    CHECK(s.n[1] == doctest::Approx(4 - std::log(32.0)));
}

TEST_CASE("paper constants degenerate at every computable X") {
    auto k = EffectiveConstants::paper();
    CHECK(k.s_for(0.25) == doctest::Approx(2e5));
    for (double X : {1e3, 1e6, 1e20, 1e50, 1e100, 1e300}) CHECK_THROWS_AS(build_schedule(X, 0.25, k), Error);
    try {
        build_schedule(1e6, 0.25, k);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateSchedule);
    }
}

TEST_CASE("contracts") {
    auto k = EffectiveConstants::desk();
    for (double a : {0.0, 0.5, -0.1, 0.7}) {
        try {
            build_schedule(1e6, a, k);
            FAIL("accepted alpha " << a);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::AlphaOutOfRange);
        }
    }
    CHECK_THROWS_AS(build_schedule(10, 0.25, k), Error);
    auto s = build_schedule(1e6, 0.25, k);
    CHECK_THROWS_AS(prime_interval(s, 0), Error);
    CHECK_THROWS_AS(prime_interval(s, 4), Error);
    CHECK_THROWS_AS(barriers(s, 4), Error);
    CHECK(prime_interval(s, 1).first == 1.0);
    CHECK(prime_interval(s, 2).first == s.Xj[1]);
}

TEST_CASE("kappa = 0 gives symmetric barriers") {
    auto k = EffectiveConstants::desk();
    k.kappa = 0.0;
    auto s = build_schedule(1e8, 0.3, k);
    for (int r = 1; r <= s.R; ++r) {
        auto [L, U] = barriers(s, r);
        CHECK(L == -U);
    }
}

TEST_CASE("overrides reach the schedule and the description") {
    auto k = EffectiveConstants::desk();
    k.s_param = 2.3;
    k.V = 1.5;
    auto s = build_schedule(1e6, 0.25, k);
    CHECK(s.s_param == 2.3);
    CHECK(s.V == 1.5);
    auto text = k.describe(0.25);
    CHECK(text.find("s=2.3") != std::string::npos);
    CHECK(text.find("V=1.5") != std::string::npos);
    CHECK(text.find(',') == std::string::npos);
}

TEST_CASE("markov exponent") {
    CHECK(markov_exponent(1.0, 2.0, 1.0) == 1);
    CHECK(markov_exponent(1.4, 2.0, 1.0) == 1);
    std::uint64_t prev = 0;
    for (double v = 0; v < 20; v += 0.25) {
        auto q = markov_exponent(v, 1.5, 1.0);
        CHECK(q >= prev);
        prev = q;
    }
    CHECK_THROWS_AS(markov_exponent(1.0, 1.0, 1.0), Error);
}

TEST_CASE("iterated logs") {
    CHECK(iterated_log(16, 1, 2) == doctest::Approx(4));
    CHECK(iterated_log(16, 2, 2) == doctest::Approx(2));
    CHECK(iterated_log(std::exp(std::exp(1.0)), 2, std::numbers::e) == doctest::Approx(1));
    CHECK(std::isinf(iterated_log(0.5, 3, 2)));
}
