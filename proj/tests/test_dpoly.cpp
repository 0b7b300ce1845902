#include <doctest.h>

#include <cmath>
#include <random>

#include "ltail/dpoly.hpp"
#include "ltail/errors.hpp"
#include "ltail/family.hpp"
#include "ltail/primes.hpp"

using namespace ltail;

namespace {

// coefficient of n = prod p^e in exp(-P): prod (-c_p)^e / e!
Rational exp_coefficient(const RationalPoly& P, std::uint64_t n) {
    Rational out = 1;
    for (auto& [p, e] : factorize(n)) {
        Rational c = -P.at(p), pw = 1;
        std::uint64_t f = 1;
        for (int i = 1; i <= e; ++i) {
            pw *= c;
            f *= static_cast<std::uint64_t>(i);
        }
        out *= pw / Rational(f);
    }
    return out;
}

const HeckeTable& table() {
    static HeckeTable t = HeckeTable::build(registry_curve("11a1"), 5000);
    return t;
}

}  // namespace

TEST_CASE("truncated_exp fixtures") {
    RationalPoly P;
    P.coeffs[3] = 2;
    auto zero = truncated_exp(P, 0);
    CHECK(zero.coeffs.size() == 1);
    CHECK(zero.at(1) == 1);
    auto two = truncated_exp(P, 2);
    CHECK(two.coeffs.size() == 3);
    CHECK(two.at(1) == 1);
    CHECK(two.at(3) == -2);
    CHECK(two.at(9) == 2);
    RationalPoly composite;
    composite.coeffs[6] = 1;
    CHECK_THROWS_AS(truncated_exp(composite, 2), Error);
}

TEST_CASE("truncated_exp equals the multinomial oracle, three primes") {
    RationalPoly P;
    P.coeffs[2] = Rational(1, 3);
    P.coeffs[5] = Rational(-2, 7);
    P.coeffs[11] = Rational(5, 4);
    for (std::uint64_t K = 0; K <= 7; ++K) {
        auto A = truncated_exp(P, K);
        std::size_t expected = 0;
        for (int a = 0; a <= (int)K; ++a)
            for (int b = 0; a + b <= (int)K; ++b)
                for (int c = 0; a + b + c <= (int)K; ++c) {
                    std::uint64_t n = 1;
                    for (int i = 0; i < a; ++i) n *= 2;
                    for (int i = 0; i < b; ++i) n *= 5;
                    for (int i = 0; i < c; ++i) n *= 11;
                    REQUIRE(A.at(n) == exp_coefficient(P, n));
                    ++expected;
                }
        CHECK(A.coeffs.size() == expected);
    }
}

TEST_CASE("exp/product identity in rational mode") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        RationalPoly A, B;
        A.coeffs[3] = Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 6));
        B.coeffs[7] = Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 6));
        if (rng() & 1) B.coeffs[13] = Rational(1, 1 + static_cast<long>(rng() % 6));
        for (std::uint64_t K = 1; K <= 6; ++K) {
            auto lhs = truncated_exp(add(A, B), K);
            auto rhs = restrict_omega(multiply(truncated_exp(A, K), truncated_exp(B, K)), K);
            REQUIRE(dump_csv(lhs) == dump_csv(rhs));
        }
    }
}

TEST_CASE("even truncations are positive and within the remainder bound") {
    auto& t = table();
    auto fam = enumerate_union(t.curve(), 1, 5000);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(0.1, 4.0);
    int negative = 0, premise = 0;
    for (int i = 0; i < 1000; ++i) {
        double lo = static_cast<double>(rng() % 20), hi = lo + 5 + static_cast<double>(rng() % 60);
        auto P = prime_sum_poly(t, lo, hi);
        double sc = scale(rng);
        for (auto& [n, c] : P.coeffs) c *= sc;
        std::uint64_t K = 2 * (1 + rng() % 6);
        auto d = fam.discriminants[rng() % fam.size()];
        double x = evaluate(P, d);
        double a = taylor_exp(-x, K);
        if (!(a > 0)) ++negative;
        if (std::abs(x) <= static_cast<double>(K) / 4) {
            ++premise;
            auto tc = taylor_check(-x, K);
            INFO("x=", -x, " K=", K, " gap=", tc.gap, " rem=", tc.remainder);
            CHECK(tc.exact_ok);
            CHECK(tc.double_ok);
        }
    }
    CHECK(negative == 0);
    CHECK(premise > 100);
    // the polynomial expansion agrees pointwise
    auto P = prime_sum_poly(t, 1, 8);
    auto A = truncated_exp(P, 6);
    for (std::size_t i = 0; i < fam.size(); i += 101)
        CHECK(evaluate(A, fam.discriminants[i]) == doctest::Approx(taylor_exp(-evaluate(P, fam.discriminants[i]), 6)));
}

TEST_CASE("taylor remainder fixtures") {
    // K = 2, x = 1: e - 2.5 = 0.21828 <= e/6 = 0.45305
    auto a = taylor_check(1, 2);
    CHECK(a.exact_ok);
    CHECK(a.gap == doctest::Approx(std::exp(1.0) - 2.5));
    CHECK(a.remainder == doctest::Approx(std::exp(1.0) / 6));
    // K = 12, x = 0.1: the remainder is ~2e-22, below double resolution; only the rounding term covers the gap
    auto b = taylor_check(0.1, 12);
    CHECK(b.exact_ok);
    CHECK(b.remainder < 1e-20);
    CHECK(b.rounding > 1e-16);
    CHECK(b.rounding < 1e-14);
    CHECK(b.double_ok);
    // x = -3: remainder 3^13/13!, no exponential factor
    CHECK(taylor_check(-3, 12).remainder == doctest::Approx(std::pow(3.0, 13) / 6227020800.0));
    CHECK(taylor_check(-3, 12).exact_ok);
}

TEST_CASE("prime sums and evaluation") {
    auto& t = table();
    CHECK(prime_sum_poly(t, 3.5, 4.5).coeffs.empty());
    auto P = prime_sum_poly(t, 2.5, 3.5);
    REQUIRE(P.coeffs.size() == 1);
    CHECK(P.at(3) == doctest::Approx(-1 / std::sqrt(3.0)));
    // d = 5: chi_5(3) = -1, value a(3) chi(3) / sqrt 3 = +1/3
    CHECK(evaluate(P, 5) == doctest::Approx(1.0 / 3.0));
    DirichletPoly z;
    CHECK(evaluate(z, 5) == 0.0);
    DirichletPoly seven;
    seven.coeffs[1] = 7;
    CHECK(evaluate(seven, 5) == 7.0);
}

TEST_CASE("well-factorable twists") {
    auto s = build_schedule(1e6, 0.25, EffectiveConstants::desk());
    DirichletPoly one;
    one.coeffs[1] = 1;
    auto q = well_factorable(s, {one, one, one});
    CHECK(q.coeffs.size() == 1);
    CHECK(q.at(1) == 1.0);
    DirichletPoly g;
    g.coeffs[2] = 0.5;
    CHECK(well_factorable(s, {g}).coeffs == g.coeffs);
    DirichletPoly h;
    h.coeffs[3] = 2;
    DirichletPoly big;
    big.coeffs[29 * 31] = 1;
    CHECK_THROWS_AS(well_factorable(s, {g, h, big}), Error);  // 2 * 3 * 899 > 1000
    auto paper_len = EffectiveConstants::desk();
    paper_len.length_exp = 1e-3;
    auto sp = build_schedule(1e6, 0.25, paper_len);
    try {
        well_factorable(sp, {g, h});
        FAIL("length bound not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::LengthExceeded);
    }
    DirichletPoly wrong;
    wrong.coeffs[5] = 1;  // 5 is in P_3, not P_1
    try {
        well_factorable(s, {wrong});
        FAIL("support not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SupportViolation);
    }
    DirichletPoly heavy;
    heavy.coeffs[512] = 1;  // Omega = 9 > 8
    try {
        well_factorable(s, {heavy});
        FAIL("Omega bound not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OmegaViolation);
    }
}

TEST_CASE("square-free parts and diagonal detection") {
    auto a = squarefree_decomp(1);
    CHECK(a.sf == 1);
    CHECK(a.sq == 1);
    auto b = squarefree_decomp(12);
    CHECK(b.sf == 3);
    CHECK(b.sq == 2);
    auto c = squarefree_decomp(360);
    CHECK(c.sf == 10);
    CHECK(c.sq == 6);
    CHECK(c.parities.at(2) == 1);
    CHECK(c.parities.at(3) == 0);
    CHECK_THROWS_AS(squarefree_decomp(0), Error);
    auto square = [](std::uint64_t n) {
        auto r = isqrt(n);
        return r * r == n;
    };
    for (std::uint64_t n1 = 1; n1 <= 400; ++n1)
        for (std::uint64_t n2 = 1; n2 <= 400; ++n2)
            REQUIRE((squarefree_part(n1) == squarefree_part(n2)) == square(n1 * n2));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100000; ++i) {
        std::uint64_t n1 = 1 + rng() % 10000, n2 = 1 + rng() % 10000;
        REQUIRE((squarefree_part(n1) == squarefree_part(n2)) == square(n1 * n2));
    }
}

TEST_CASE("dump format") {
    RationalPoly R;
    R.coeffs[9] = Rational(-1, 3);
    R.coeffs[1] = 1;
    CHECK(dump_csv(R) == "n,c(n)\n1,1\n9,-1/3\n");
    DirichletPoly D;
    D.coeffs[2] = 0.5;
    CHECK(dump_csv(D) == "n,c(n)\n2,0.5\n");
    CHECK(to_rational(D).at(2) == Rational(1, 2));
}

TEST_CASE("mollifier pointwise value equals its expansion") {
    auto& t = table();
    auto s = build_schedule(1e6, 0.25, EffectiveConstants::desk());
    auto M = build_mollifier(t, s, 2);
    CHECK(M.K == std::vector<std::uint64_t>{12, 12});
    auto E = M.expand();
    auto fam = enumerate_union(t.curve(), 1, 2000);
    for (auto d : fam.discriminants) REQUIRE(evaluate(E, d) == doctest::Approx(M.evaluate(d)).epsilon(1e-12));
    CHECK_THROWS_AS(build_mollifier(t, s, 4), Error);
}
