#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltail/ec_arith.hpp"
#include "ltail/schedule.hpp"

namespace ltail {

using Rational = boost::multiprecision::cpp_rational;

// Sum_n c(n) chi_d(n) / sqrt(n); the 1/sqrt(n) is implicit
template <class T>
struct BasicDirichletPoly {
    std::map<std::uint64_t, T> coeffs;
    std::optional<std::pair<double, double>> support;  // (low, high] on primes
    std::optional<std::uint64_t> omega_bound;

    // SupportViolation / OmegaViolation
    void validate() const;
    bool prime_supported() const;
    T at(std::uint64_t n) const;
    std::size_t size() const { return coeffs.size(); }
    std::uint64_t max_index() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
};

using DirichletPoly = BasicDirichletPoly<double>;
using RationalPoly = BasicDirichletPoly<Rational>;

struct PrimePower {
    std::uint64_t p;
    int e;
};
// factorization of n over primes <= hi (trial division); nullopt if a larger factor remains
std::optional<std::vector<PrimePower>> factor_small(std::uint64_t n, std::uint64_t hi);
int big_omega(const std::vector<PrimePower>& f);

// c(p) = a(p) for primes in (lo, hi]
DirichletPoly prime_sum_poly(const HeckeTable& t, double lo, double hi);

// Sum_{r <= K} (-P)^r / r!, P prime-supported
template <class T>
BasicDirichletPoly<T> truncated_exp(const BasicDirichletPoly<T>& P, std::uint64_t K);

// Dirichlet convolution
template <class T>
BasicDirichletPoly<T> multiply(const BasicDirichletPoly<T>& A, const BasicDirichletPoly<T>& B);

template <class T>
BasicDirichletPoly<T> add(const BasicDirichletPoly<T>& A, const BasicDirichletPoly<T>& B);

// keep n with Omega(n) <= K
template <class T>
BasicDirichletPoly<T> restrict_omega(const BasicDirichletPoly<T>& A, std::uint64_t K);

double evaluate(const DirichletPoly& P, std::int64_t d);
double evaluate(const RationalPoly& P, std::int64_t d);

// Sum_{r <= K} x^r / r!; equals evaluate(truncated_exp(P, K), d) at x = -evaluate(P, d)
double taylor_exp(double x, std::uint64_t K);
// |e^x - taylor_exp(x, K)| <= |x|^{K+1}/(K+1)! e^{max(0, x)}
double taylor_remainder_bound(double x, std::uint64_t K);
// forward error of the double evaluation of taylor_exp(x, K) and of std::exp(x): gamma_{3K+2} (T_K(|x|) + e^x)
double taylor_rounding_bound(double x, std::uint64_t K);

struct TaylorCheck {
    bool exact_ok = false;   // 50-digit |e^x - T_K(x)| <= remainder, no slack
    bool double_ok = false;  // |exp(x) - taylor_exp(x, K)| <= remainder + rounding
    double gap = 0;          // double-precision gap
    double remainder = 0;
    double rounding = 0;
};
TaylorCheck taylor_check(double x, std::uint64_t K);

// product over j of factors[j-1], each on P_j with its Omega bound; raises on support, Omega, or length
DirichletPoly well_factorable(const WalkSchedule& s, const std::vector<DirichletPoly>& factors);

struct SquarefreeDecomp {
    std::uint64_t n = 1;
    std::uint64_t sf = 1;
    std::uint64_t sq = 1;
    std::map<std::uint64_t, int> parities;  // xi_p(n) for p | n
};
SquarefreeDecomp squarefree_decomp(std::uint64_t n);
std::uint64_t squarefree_part(std::uint64_t n);

// CSV "n,c(n)" sorted by n; rationals rendered exactly as p/q
std::string dump_csv(const DirichletPoly& P);
std::string dump_csv(const RationalPoly& P);

RationalPoly to_rational(const DirichletPoly& P);

// M_r = prod_{j <= r} A_j with A_j = truncated_exp(P_j, K_j). Pointwise values use
// A_j(d) = taylor_exp(-P_j(d), K_j), which is exact because chi_d(n)/sqrt(n) is completely multiplicative.
struct Mollifier {
    std::vector<DirichletPoly> P;
    std::vector<std::uint64_t> K;

    double evaluate(std::int64_t d) const;
    // full coefficient expansion; only for small supports
    DirichletPoly expand() const;
};
Mollifier build_mollifier(const HeckeTable& t, const WalkSchedule& s, int r);

extern template struct BasicDirichletPoly<double>;
extern template struct BasicDirichletPoly<Rational>;
extern template DirichletPoly truncated_exp(const DirichletPoly&, std::uint64_t);
extern template RationalPoly truncated_exp(const RationalPoly&, std::uint64_t);
extern template DirichletPoly multiply(const DirichletPoly&, const DirichletPoly&);
extern template RationalPoly multiply(const RationalPoly&, const RationalPoly&);
extern template DirichletPoly add(const DirichletPoly&, const DirichletPoly&);
extern template RationalPoly add(const RationalPoly&, const RationalPoly&);
extern template DirichletPoly restrict_omega(const DirichletPoly&, std::uint64_t);
extern template RationalPoly restrict_omega(const RationalPoly&, std::uint64_t);

}  // namespace ltail
