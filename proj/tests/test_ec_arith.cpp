#include <doctest.h>

#include <cmath>

#include "ltail/ec_arith.hpp"
#include "ltail/errors.hpp"
#include "ltail/primes.hpp"

using namespace ltail;

namespace {

std::int64_t md(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

// #E(F_p) by walking every (x, y), plus the point at infinity
std::int64_t exhaustive_count(const EllipticCurve& c, std::int64_t p) {
    std::int64_t n = 1;
    for (std::int64_t x = 0; x < p; ++x) {
        std::int64_t rhs = md(md(md(x * x, p) * x, p) + md(c.a2, p) * md(x * x, p) + md(c.a4, p) * x + md(c.a6, p), p);
        for (std::int64_t y = 0; y < p; ++y) {
            std::int64_t lhs = md(y * y + md(c.a1, p) * x % p * y + md(c.a3, p) * y, p);
            if (lhs == rhs) ++n;
        }
    }
    return n;
}

}  // namespace

TEST_CASE("a(p) fixtures for 11a1") {
    auto c = registry_curve("11a1");
    CHECK(trace_good(c, 3) == -1);
    CHECK(trace_good(c, 5) == 1);
    CHECK(ap_good(c, 3) == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(ap_good(c, 5) == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(ap_bad(c, 11) == doctest::Approx(1 / std::sqrt(11.0)));
    CHECK_THROWS_AS(ap_good(c, 11), Error);
    CHECK_THROWS_AS(ap_bad(c, 7), Error);
}

TEST_CASE("37a1 at 37 is non-split: the exhaustive count gives 39 points") {
    auto c = registry_curve("37a1");
    CHECK(exhaustive_count(c, 37) == 39);
    CHECK(ap_bad(c, 37) == doctest::Approx(-1 / std::sqrt(37.0)));
    CHECK(c.reduction_at(37) == Reduction::NonSplit);
}

TEST_CASE("Hecke table agrees with the exhaustive oracle for p <= 2000") {
    for (const char* label : {"11a1", "37a1"}) {
        auto c = registry_curve(label);
        auto t = HeckeTable::build(c, 2000);
        int mism = 0;
        for (auto p : t.primes()) {
            std::int64_t A = static_cast<std::int64_t>(p) + 1 - exhaustive_count(c, p);
            if (A != t.trace(p)) ++mism;
            CHECK(std::abs(t.ap(p)) <= 2.0);
        }
        CHECK_MESSAGE(mism == 0, label);
    }
}

TEST_CASE("BSGS and naive counting agree past the dispatch threshold") {
    auto c = registry_curve("11a1");
    for (auto p : primes_up_to(6000)) {
        if (p < kBsgsThreshold || p == 11) continue;
        REQUIRE(trace_bsgs(c, p) == static_cast<std::int64_t>(p) + 1 - count_points_naive(c, p));
    }
}

TEST_CASE("hecke_an recursion and multiplicativity") {
    auto c = registry_curve("11a1");
    auto t = HeckeTable::build(c, 1000);
    CHECK(hecke_an(t, 1) == 1.0);
    // analytic normalization: a(9) = a(3)^2 - 1 = 1/3 - 1
    CHECK(hecke_an(t, 9) == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK(t.an_unnormalized(9) == -2);
    CHECK(hecke_an(t, 15) == doctest::Approx(-1 / std::sqrt(15.0)).epsilon(1e-14));
    // bad prime powers: a(11^k) = a(11)^k
    CHECK(hecke_an(t, 121) == doctest::Approx(1.0 / 11).epsilon(1e-14));
    CHECK(t.an_unnormalized(121) == 1);
    // A(p^2) = A(p)^2 - p for good p
    for (std::uint64_t p : {2, 3, 5, 7, 13}) CHECK(t.an_unnormalized(p * p) == t.trace(p) * t.trace(p) - (std::int64_t)p);
    CHECK_THROWS_AS(hecke_an(t, 0), Error);
}

TEST_CASE("Hasse bound over p <= 1e5 and serial build equality") {
    auto c = registry_curve("11a1");
    auto t = HeckeTable::build(c, 100000);
    auto s = HeckeTable::build_serial(c, 100000);
    int violations = 0;
    for (auto p : t.primes()) {
        if (std::abs(t.ap(p)) > 2) ++violations;
        REQUIRE(t.trace(p) == s.trace(p));
    }
    CHECK(violations == 0);
}

TEST_CASE("additive reduction gives a(p) = 0") {
    // y^2 = x^3 + 1, conductor 36
    auto c = EllipticCurve::make("36a1", {0, 0, 0, 0, 1}, 36, 1, {{2, Reduction::Additive}, {3, Reduction::Additive}});
    CHECK(ap_bad(c, 2) == 0.0);
    CHECK(ap_bad(c, 3) == 0.0);
    CHECK_THROWS_AS(EllipticCurve::make("x", {0, 0, 0, 0, 1}, 36, 1, {{2, Reduction::Additive}}), Error);
}

TEST_CASE("registry round trip") {
    for (auto& c : builtin_registry()) {
        auto d = parse_registry_line(format_registry_line(c));
        CHECK(d.label == c.label);
        CHECK(d.N == c.N);
        CHECK(d.discriminant() == c.discriminant());
        CHECK(d.bad == c.bad);
    }
    CHECK(registry_curve("11a1").discriminant() == -161051);
    CHECK(registry_curve("37a1").discriminant() == 37);
    CHECK_THROWS_AS(registry_curve("nope"), Error);
}

TEST_CASE("series coefficients are A_n / n") {
    auto c = registry_curve("11a1");
    auto t = HeckeTable::build(c, 500);
    SeriesCoefficients b(t, 500);
    for (std::uint64_t n = 1; n <= 500; ++n)
        REQUIRE(b[n] == doctest::Approx(static_cast<double>(t.an_unnormalized(n)) / static_cast<double>(n)).epsilon(1e-14));
}
