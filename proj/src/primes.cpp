#include "ltail/primes.hpp"

#include <cmath>

#include "ltail/errors.hpp"

namespace ltail {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    std::vector<std::uint8_t> composite(n + 1, 0);
    for (std::uint64_t i = 2; i * i <= n; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = 1;
    }
    out.reserve(static_cast<std::size_t>(1.1 * n / std::log(double(n) + 2.0)) + 16);
    for (std::uint64_t i = 2; i <= n; ++i)
        if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    if (n == 0) fail(Errc::ZeroInput, "factorize(0)");
    if (n > kMaxTrialFactor) fail(Errc::TooLargeToFactor, "n = " + std::to_string(n));
    std::vector<std::pair<std::uint64_t, int>> f;
    auto take = [&](std::uint64_t p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.emplace_back(p, e);
    };
    take(2);
    take(3);
    for (std::uint64_t p = 5; p * p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    for (auto& [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

std::vector<std::uint8_t> squarefree_table(std::uint64_t n) {
    std::vector<std::uint8_t> sf(n + 1, 1);
    sf[0] = 0;
    for (std::uint64_t i = 2; i * i <= n; ++i)
        for (std::uint64_t j = i * i; j <= n; j += i * i) sf[j] = 0;
    return sf;
}

}  // namespace ltail
