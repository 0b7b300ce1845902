#include <algorithm>
#include <cstdlib>

#include "ltail/errors.hpp"
#include "ltail/family.hpp"
#include "ltail/primes.hpp"

namespace ltail {

namespace {

// quadratic residues mod an odd prime, marked by walking the squares
void legendre_table(std::uint64_t p, std::int8_t* leg) {
    std::fill(leg, leg + p, std::int8_t{-1});
    leg[0] = 0;
    std::uint64_t s = 0;
    for (std::uint64_t i = 1; 2 * i < p; ++i) {
        s += 2 * i - 1;
        if (s >= p) s -= p;
        leg[s] = 1;
    }
}

// z[i] = x[i mod L] * y[i mod p] for i < L p
void tile_product(const std::int8_t* x, std::uint64_t L, const std::int8_t* y, std::uint64_t p, std::int8_t* z) {
    std::uint64_t i = 0, ia = 0, ib = 0, total = L * p;
    while (i < total) {
        std::uint64_t len = std::min(L - ia, p - ib);
        for (std::uint64_t k = 0; k < len; ++k) z[i + k] = static_cast<std::int8_t>(x[ia + k] * y[ib + k]);
        i += len;
        ia += len;
        ib += len;
        if (ia == L) ia = 0;
        if (ib == p) ib = 0;
    }
}

}  // namespace

void fill_character_table(std::int64_t d, std::size_t pad, std::vector<std::int8_t>& out) {
    std::uint64_t D = static_cast<std::uint64_t>(std::llabs(d));
    if (D == 0 || ((d % 4) + 4) % 4 != 1) fail(Errc::NonFundamental, "character table needs d = 1 mod 4");
    out.resize(D + pad);
    auto fac = factorize(D);
    for (auto& f : fac)
        if (f.second != 1) fail(Errc::NonFundamental, "d not squarefree");
    if (fac.empty()) {
        std::fill(out.begin(), out.end(), std::int8_t{1});
        return;
    }
    if (fac.size() == 1) {
        legendre_table(D, out.data());
    } else {
        thread_local std::vector<std::int8_t> leg, cur, next;
        // smallest primes first so the running product stays short until the last step
        std::uint64_t L = fac[0].first;
        cur.resize(L);
        legendre_table(L, cur.data());
        for (std::size_t j = 1; j < fac.size(); ++j) {
            std::uint64_t p = fac[j].first;
            leg.resize(p);
            legendre_table(p, leg.data());
            bool last = j + 1 == fac.size();
            std::int8_t* z;
            if (last) {
                z = out.data();
            } else {
                next.resize(L * p);
                z = next.data();
            }
            tile_product(cur.data(), L, leg.data(), p, z);
            L *= p;
            if (!last) std::swap(cur, next);
        }
    }
    for (std::uint64_t i = D; i < D + pad; ++i) out[i] = out[i - D];
}

CharacterTable::CharacterTable(std::int64_t d, std::size_t pad) : d_(d) {
    fill_character_table(d, pad, table_);
    period_ = static_cast<std::uint64_t>(std::llabs(d));
}

}  // namespace ltail
