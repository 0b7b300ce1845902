#include <doctest.h>

#include <numeric>
#include <set>

#include "ltail/errors.hpp"
#include "ltail/family.hpp"
#include "ltail/primes.hpp"

using namespace ltail;

namespace {

// Kronecker symbol from the factorization of n: Euler's criterion at odd p, the 2-rule at 2
int kronecker_oracle(std::int64_t d, std::int64_t n) {
    if (n == 0) return std::llabs(d) == 1 ? 1 : 0;
    int s = 1;
    if (n < 0) {
        n = -n;
        if (d < 0) s = -s;
    }
    for (auto& [p, e] : factorize(static_cast<std::uint64_t>(n))) {
        int v;
        if (p == 2) {
            if (d % 2 == 0) return 0;
            std::int64_t r = ((d % 8) + 8) % 8;
            v = (r == 1 || r == 7) ? 1 : -1;
        } else {
            std::int64_t a = ((d % (std::int64_t)p) + (std::int64_t)p) % (std::int64_t)p;
            if (a == 0) return 0;
            v = powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
        }
        if (e % 2) s *= v;
    }
    return s;
}

bool squarefree_oracle(std::uint64_t m) {
    for (std::uint64_t q = 2; q * q <= m; ++q)
        if (m % (q * q) == 0) return false;
    return true;
}

bool admissible(const EllipticCurve& c, std::int64_t d) {
    std::uint64_t m = static_cast<std::uint64_t>(std::llabs(d));
    if (m == 0 || ((d % 4) + 4) % 4 != 1 || std::gcd(m, 2 * c.N) != 1 || !squarefree_oracle(m)) return false;
    return c.eps_global * kronecker_oracle(d, -static_cast<std::int64_t>(c.N)) == 1;
}

}  // namespace

TEST_CASE("kronecker fixtures and oracle sweep") {
    CHECK(kronecker(12345, 1) == 1);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(5, 5) == 0);
    for (std::int64_t d = -200; d <= 200; ++d)
        for (std::int64_t n = 1; n <= 300; ++n) REQUIRE(kronecker(d, n) == kronecker_oracle(d, n));
}

TEST_CASE("fundamental discriminants in the odd convention") {
    CHECK(is_fundamental(5));
    CHECK_FALSE(is_fundamental(9));
    CHECK(is_fundamental(-15));
    CHECK(is_fundamental(1));
    CHECK_FALSE(is_fundamental(3));
    CHECK_FALSE(is_fundamental(-3 * 3 * 7));
}

TEST_CASE("root numbers") {
    auto c = registry_curve("11a1");
    CHECK(root_number(c, 1) == c.eps_global);
    CHECK(root_number(c, 13) == kronecker_oracle(13, -11));
    auto e = registry_curve("37a1");
    CHECK(root_number(e, 1) == -1);
    CHECK_THROWS_AS(root_number(c, 33), Error);
    CHECK_THROWS_AS(root_number(c, 9), Error);
}

TEST_CASE("class enumeration matches the brute-force filter") {
    auto c = registry_curve("11a1");
    FamilyConstraints fc{1, 1, 1, 500};
    auto fam = enumerate(c, fc);
    std::vector<std::int64_t> brute;
    for (std::int64_t d = 1; d <= 500; ++d)
        if (d % 88 == 1 && admissible(c, d)) brute.push_back(d);
    CHECK(fam.discriminants == brute);
    CHECK(enumerate(c, FamilyConstraints{1, 1, 1, 0.5}).empty());
    CHECK_THROWS_AS(enumerate(c, FamilyConstraints{1, 2, 1, 500}), Error);
    CHECK_THROWS_AS(enumerate(c, FamilyConstraints{0, 1, 1, 500}), Error);
}

TEST_CASE("union family against brute force, both curves") {
    for (const char* label : {"11a1", "37a1"}) {
        auto c = registry_curve(label);
        const std::int64_t X = 6000;
        auto fam = enumerate_union(c, 1, static_cast<double>(X));
        std::set<std::int64_t> got(fam.discriminants.begin(), fam.discriminants.end());
        std::set<std::int64_t> brute;
        for (std::int64_t d = -X; d <= X; ++d)
            if (admissible(c, d)) brute.insert(d);
        CHECK(got == brute);
        std::size_t total = 0;
        for (auto& k : admissible_classes(c, 1, static_cast<double>(X))) {
            CHECK(k.class_root_number(c) == 1);
            for (auto d : enumerate(c, k).discriminants) {
                REQUIRE(got.count(d) == 1);
                ++total;
            }
        }
        CHECK(total == got.size());
    }
}

TEST_CASE("divisor constraint") {
    auto c = registry_curve("11a1");
    auto fam = enumerate_union(c, 3, 5000);
    for (auto d : fam.discriminants) CHECK(std::llabs(d) % 3 == 0);
    CHECK_THROWS_AS(enumerate_union(c, 4, 5000), Error);
    CHECK_THROWS_AS(enumerate_union(c, 11, 5000), Error);
}

TEST_CASE("desk family size is frozen") {
    auto c = registry_curve("11a1");
    CHECK(enumerate_union(c, 1, 1e5).size() == 18557);
}

TEST_CASE("character tables equal the Kronecker symbol") {
    for (std::int64_t d : {1LL, 5LL, -3LL, -7LL, 13LL, -15LL, 1365LL, -2015LL}) {
        if (!is_fundamental(d)) continue;
        CharacterTable t(d, 64);
        for (std::uint64_t n = 0; n < 3 * t.period() + 5; ++n)
            REQUIRE(t(n) == kronecker(d, static_cast<std::int64_t>(n)));
    }
}
