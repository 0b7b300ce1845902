#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ltail {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

bool is_prime(std::uint64_t n);

std::uint64_t isqrt(std::uint64_t n);

bool is_squarefree(std::uint64_t n);

// prime factorization by trial division; n must be <= kMaxTrialFactor
constexpr std::uint64_t kMaxTrialFactor = 1000000000000ULL;
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// 0/1 table of squarefree integers in [0, n]
std::vector<std::uint8_t> squarefree_table(std::uint64_t n);

}  // namespace ltail
