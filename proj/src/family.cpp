#include "ltail/family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <sstream>

#include "ltail/errors.hpp"
#include "ltail/primes.hpp"

namespace ltail {

namespace {

const int kTab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};

std::uint64_t mod_pos(std::int64_t a, std::uint64_t m) {
    std::int64_t r = a % static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

}  // namespace

int kronecker(std::int64_t a, std::int64_t b) {
    if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (b & 1) == 0) return 0;
    int v = 0;
    while ((b & 1) == 0) {
        b /= 2;
        ++v;
    }
    int k = (v & 1) ? kTab2[a & 7] : 1;
    if (b < 0) {
        b = -b;
        if (a < 0) k = -k;
    }
    // b odd and positive
    while (true) {
        if (a == 0) return b == 1 ? k : 0;
        v = 0;
        while ((a & 1) == 0) {
            a /= 2;
            ++v;
        }
        if (v & 1) k *= kTab2[b & 7];
        if (a & b & 2) k = -k;
        std::int64_t r = a < 0 ? -a : a;
        a = b % r;
        b = r;
    }
}

bool is_fundamental(std::int64_t d) {
    if (d == 0) fail(Errc::ZeroInput, "is_fundamental(0)");
    std::uint64_t r = mod_pos(d, 4);
    if (r == 1) return is_squarefree(static_cast<std::uint64_t>(std::llabs(d)));
    if (r == 0) {
        std::int64_t m = d / 4;
        std::uint64_t rm = mod_pos(m, 4);
        return (rm == 2 || rm == 3) && is_squarefree(static_cast<std::uint64_t>(std::llabs(m)));
    }
    return false;
}

int root_number(const EllipticCurve& c, std::int64_t d) {
    if (std::gcd(static_cast<std::uint64_t>(std::llabs(d)), 2 * c.N) != 1)
        fail(Errc::NotCoprime, "gcd(d, 2N) > 1 for d=" + std::to_string(d));
    if (!is_fundamental(d)) fail(Errc::NonFundamental, "d=" + std::to_string(d));
    return c.eps_global * kronecker(d, -static_cast<std::int64_t>(c.N));
}

int FamilyConstraints::class_root_number(const EllipticCurve& c) const {
    return c.eps_global * sign * kronecker(static_cast<std::int64_t>(residue % c.N0), static_cast<std::int64_t>(c.N));
}

void FamilyConstraints::validate(const EllipticCurve& c) const {
    auto bad = [](const std::string& why) { fail(Errc::InvalidConstraints, why); };
    if (sign != 1 && sign != -1) bad("sign must be +1 or -1");
    std::uint64_t a = residue % c.N0;
    if (std::gcd(a, c.N0) != 1) bad("gcd(a, N0) != 1");
    if (a % 4 != 1) bad("a != 1 mod 4");
    if (divisor == 0 || !is_squarefree(divisor)) bad("v must be squarefree");
    if (std::gcd(divisor, c.N0) != 1) bad("gcd(v, N0) != 1");
    if (!(X > 0)) bad("X must be positive");
    if (class_root_number(c) != 1) bad("eps_E(a) = -1 for this sign/residue");
}

std::string FamilyKey::describe() const {
    std::ostringstream o;
    o << "sign=" << (sign == 0 ? std::string("all") : (sign > 0 ? "+1" : "-1"))
      << " residue=" << (residue == 0 ? std::string("all") : std::to_string(residue)) << " divisor=" << divisor
      << " X=" << static_cast<std::uint64_t>(X);
    return o.str();
}

std::string FamilyKey::file_tag() const {
    std::ostringstream o;
    o << "s" << (sign == 0 ? std::string("all") : (sign > 0 ? "p" : "m")) << "_a"
      << (residue == 0 ? std::string("all") : std::to_string(residue)) << "_v" << divisor << "_X"
      << static_cast<std::uint64_t>(X);
    return o.str();
}

namespace {

bool abs_order(std::int64_t x, std::int64_t y) {
    std::int64_t ax = std::llabs(x), ay = std::llabs(y);
    return ax != ay ? ax < ay : x < y;
}

struct SquarefreeOracle {
    std::vector<std::uint8_t> table;
    explicit SquarefreeOracle(std::uint64_t X) {
        if (X <= 200000000ULL) table = squarefree_table(X);
    }
    bool operator()(std::uint64_t n) const { return n < table.size() ? table[n] != 0 : is_squarefree(n); }
};

}  // namespace

TwistFamily enumerate(const EllipticCurve& c, const FamilyConstraints& fc) {
    fc.validate(c);
    TwistFamily fam;
    fam.key = {fc.sign, fc.residue % c.N0, fc.divisor, fc.X};
    auto Xi = static_cast<std::uint64_t>(std::floor(fc.X));
    SquarefreeOracle sf(Xi);
    std::uint64_t a = fc.residue % c.N0;
    // |d| ranges over a residue class mod N0: a for d > 0, N0 - a for d < 0
    std::uint64_t start = fc.sign > 0 ? a : c.N0 - a;
    for (std::uint64_t m = start; m <= Xi; m += c.N0) {
        if (m % fc.divisor != 0 || !sf(m)) continue;
        std::int64_t d = fc.sign * static_cast<std::int64_t>(m);
        if (root_number(c, d) != 1) continue;
        fam.discriminants.push_back(d);
    }
    if (fam.empty()) std::cerr << "warning: EmptyFamily " << fam.key.describe() << "\n";
    return fam;
}

std::vector<FamilyConstraints> admissible_classes(const EllipticCurve& c, std::uint64_t divisor, double X) {
    std::vector<FamilyConstraints> out;
    for (int sign : {1, -1})
        for (std::uint64_t a = 1; a < c.N0; a += 4) {
            FamilyConstraints fc{sign, a, divisor, X};
            if (std::gcd(a, c.N0) != 1 || fc.class_root_number(c) != 1) continue;
            fc.validate(c);
            out.push_back(fc);
        }
    return out;
}

TwistFamily enumerate_union(const EllipticCurve& c, std::uint64_t divisor, double X, int sign) {
    if (divisor == 0 || !is_squarefree(divisor) || std::gcd(divisor, c.N0) != 1)
        fail(Errc::InvalidConstraints, "bad divisor");
    TwistFamily fam;
    fam.key = {sign, 0, divisor, X};
    auto Xi = static_cast<std::uint64_t>(std::floor(X));
    SquarefreeOracle sf(Xi);
    for (std::uint64_t m = 1; m <= Xi; m += 2) {
        if (m % divisor != 0 || std::gcd(m, 2 * c.N) != 1 || !sf(m)) continue;
        for (int s : {-1, 1}) {
            if (sign != 0 && s != sign) continue;
            std::int64_t d = s * static_cast<std::int64_t>(m);
            if (mod_pos(d, 4) != 1) continue;
            if (root_number(c, d) != 1) continue;
            fam.discriminants.push_back(d);
        }
    }
    std::sort(fam.discriminants.begin(), fam.discriminants.end(), abs_order);
    if (fam.empty()) std::cerr << "warning: EmptyFamily " << fam.key.describe() << "\n";
    return fam;
}

TwistFamily enumerate_key(const EllipticCurve& c, const FamilyKey& key) {
    if (key.residue == 0) return enumerate_union(c, key.divisor, key.X, key.sign);
    if (key.sign == 0) {
        TwistFamily fam;
        fam.key = key;
        for (int s : {1, -1}) {
            FamilyConstraints fc{s, key.residue, key.divisor, key.X};
            if (fc.class_root_number(c) != 1) continue;
            auto part = enumerate(c, fc);
            fam.discriminants.insert(fam.discriminants.end(), part.discriminants.begin(), part.discriminants.end());
        }
        std::sort(fam.discriminants.begin(), fam.discriminants.end(), abs_order);
        return fam;
    }
    return enumerate(c, FamilyConstraints{key.sign, key.residue, key.divisor, key.X});
}

}  // namespace ltail
