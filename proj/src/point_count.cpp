#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "ltail/ec_arith.hpp"
#include "ltail/errors.hpp"
#include "ltail/primes.hpp"

namespace ltail {

namespace {

std::uint64_t reduce(std::int64_t v, std::uint64_t p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

}  // namespace

std::int64_t count_points_naive(const EllipticCurve& c, std::uint64_t p) {
    if (!is_prime(p)) fail(Errc::NotPrime, std::to_string(p));
    if (p > 100000000ULL) fail(Errc::OverBound, "naive count at p=" + std::to_string(p));
    std::uint64_t a1 = reduce(c.a1, p), a2 = reduce(c.a2, p), a3 = reduce(c.a3, p), a4 = reduce(c.a4, p),
                  a6 = reduce(c.a6, p);
    std::int64_t count = 1;
    if (p == 2) {
        for (std::uint64_t x = 0; x < 2; ++x)
            for (std::uint64_t y = 0; y < 2; ++y) {
                std::uint64_t lhs = (y * y + a1 * x * y + a3 * y) % 2;
                std::uint64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                if (lhs == rhs) ++count;
            }
        return count;
    }
    std::vector<std::int8_t> leg(p, -1);
    leg[0] = 0;
    for (std::uint64_t i = 1; i <= p / 2; ++i) leg[i * i % p] = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t lin = (a1 * x + a3) % p;
        std::uint64_t cub = (((x + a2) % p * x + a4) % p * x + a6) % p;
        std::uint64_t disc = (lin * lin + 4 * cub) % p;
        count += 1 + leg[disc];
    }
    return count;
}

namespace {

struct Pt {
    std::uint64_t x = 0, y = 0;
    bool inf = true;
};

struct Weier {
    std::uint64_t p, A, B;

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }

    std::uint64_t inv(std::uint64_t a) const {
        std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
        while (nr) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
    }

    Pt add(const Pt& P, const Pt& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        std::uint64_t lam;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return {};
            lam = mul((3 * mul(P.x, P.x) + A) % p, inv(2 * P.y % p));
        } else {
            lam = mul(sub(Q.y, P.y), inv(sub(Q.x, P.x)));
        }
        Pt R;
        R.inf = false;
        R.x = sub(sub(mul(lam, lam), P.x), Q.x);
        R.y = sub(mul(lam, sub(P.x, R.x)), P.y);
        return R;
    }

    Pt times(std::uint64_t k, Pt P) const {
        Pt R;
        while (k) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }

    std::uint64_t rhs(std::uint64_t x) const { return (mul(mul(x, x), x) + mul(A, x) + B) % p; }
};

int legendre(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (legendre(z, p) != -1) ++z;
    std::uint64_t m = static_cast<std::uint64_t>(s);
    std::uint64_t c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

// some positive multiple of ord(P) that is <= hi + sqrt(hi - lo) + 1
std::uint64_t find_multiple(const Weier& E, const Pt& P, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t s = isqrt(hi - lo) + 1;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> baby;
    baby.reserve(s);
    std::vector<Pt> pts;
    pts.reserve(s + 1);
    pts.push_back({});
    Pt R = P;
    for (std::uint64_t j = 1; j <= s; ++j) {
        if (R.inf) return j;
        baby.emplace_back(R.x, static_cast<std::uint32_t>(j));
        pts.push_back(R);
        R = E.add(R, P);
    }
    std::sort(baby.begin(), baby.end());
    Pt G = E.times(s, P);
    Pt T = E.times(lo, P);
    for (std::uint64_t m0 = lo; m0 <= hi + s; m0 += s) {
        if (T.inf) return m0;
        auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(T.x, std::uint32_t{0}));
        if (it != baby.end() && it->first == T.x) {
            std::uint32_t j = it->second;
            if (pts[j].y == T.y) return m0 - j;
            return m0 + j;
        }
        T = E.add(T, G);
    }
    return 0;
}

std::uint64_t order_from_multiple(const Weier& E, const Pt& P, std::uint64_t m) {
    for (auto& [q, e] : factorize(m)) {
        for (int k = 0; k < e; ++k) {
            if (E.times(m / q, P).inf)
                m /= q;
            else
                break;
        }
    }
    return m;
}

}  // namespace

std::int64_t trace_bsgs(const EllipticCurve& c, std::uint64_t p) {
    if (p < 5) fail(Errc::OverBound, "BSGS needs p >= 5");
    if (p > kMaxPointCountPrime) fail(Errc::OverBound, "p=" + std::to_string(p));
    Weier E{p, reduce(-27 * c.c4(), p), reduce(-54 * c.c6(), p)};
    std::uint64_t g = 2;
    while (legendre(g, p) != -1) ++g;
    Weier T{p, E.mul(E.A, E.mul(g, g)), E.mul(E.B, E.mul(E.mul(g, g), g))};
    std::uint64_t w = isqrt(4 * p);
    std::uint64_t lo = p + 1 - w, hi = p + 1 + w;
    std::uint64_t L = 1, L2 = 1;
    std::mt19937_64 rng(p);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::uint64_t x = rng() % p;
        std::uint64_t f = E.rhs(x);
        if (f == 0) {
            L = std::lcm(L, std::uint64_t{2});
            L2 = std::lcm(L2, std::uint64_t{2});
        } else if (legendre(f, p) == 1) {
            Pt P{x, sqrt_mod(f, p), false};
            std::uint64_t m = find_multiple(E, P, lo, hi);
            if (m == 0) continue;
            L = std::lcm(L, order_from_multiple(E, P, m));
        } else {
            std::uint64_t gf = E.mul(g, f);
            Pt P{E.mul(g, x), E.mul(g, sqrt_mod(gf, p)), false};
            std::uint64_t m = find_multiple(T, P, lo, hi);
            if (m == 0) continue;
            L2 = std::lcm(L2, order_from_multiple(T, P, m));
        }
        if (L < 3 && L2 < 3) continue;
        int found = 0;
        std::uint64_t cand = 0;
        if (L >= L2) {
            for (std::uint64_t n = (lo + L - 1) / L * L; n <= hi && found < 2; n += L)
                if ((2 * p + 2 - n) % L2 == 0) {
                    ++found;
                    cand = n;
                }
        } else {
            for (std::uint64_t n2 = (lo + L2 - 1) / L2 * L2; n2 <= hi && found < 2; n2 += L2)
                if ((2 * p + 2 - n2) % L == 0) {
                    ++found;
                    cand = 2 * p + 2 - n2;
                }
        }
        if (found == 1) return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(cand);
    }
    return static_cast<std::int64_t>(p + 1) - count_points_naive(c, p);
}

std::int64_t trace_good(const EllipticCurve& c, std::uint64_t p) {
    if (p < kBsgsThreshold) return static_cast<std::int64_t>(p + 1) - count_points_naive(c, p);
    return trace_bsgs(c, p);
}

}  // namespace ltail
