#include "ltail/dpoly.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <sstream>

#include "ltail/errors.hpp"
#include "ltail/family.hpp"
#include "ltail/primes.hpp"

namespace ltail {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
    if (x > std::numeric_limits<std::uint64_t>::max()) fail(Errc::OverBound, "Dirichlet index exceeds 2^64");
    return static_cast<std::uint64_t>(x);
}

template <class T>
bool is_zero(const T& x) {
    return x == T(0);
}

double to_double(double x) { return x; }
double to_double(const Rational& x) { return x.convert_to<double>(); }

std::vector<PrimePower> factor_any(std::uint64_t n) {
    std::vector<PrimePower> out;
    for (auto& [p, e] : factorize(n)) out.push_back({p, e});
    return out;
}

}  // namespace

std::optional<std::vector<PrimePower>> factor_small(std::uint64_t n, std::uint64_t hi) {
    std::vector<PrimePower> out;
    if (n == 0) fail(Errc::ZeroInput, "factor_small(0)");
    for (std::uint64_t p = 2; p <= hi && n > 1; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n != 1) return std::nullopt;
    return out;
}

int big_omega(const std::vector<PrimePower>& f) {
    int s = 0;
    for (auto& x : f) s += x.e;
    return s;
}

template <class T>
void BasicDirichletPoly<T>::validate() const {
    for (auto& [n, c] : coeffs) {
        if (n == 0) fail(Errc::ZeroInput, "Dirichlet index 0");
        std::vector<PrimePower> f;
        if (support) {
            double hi = support->second;
            auto fs = factor_small(n, hi < 1 ? 0 : static_cast<std::uint64_t>(std::floor(hi)));
            if (!fs) fail(Errc::SupportViolation, fmt::format("n={} has a prime factor above {:g}", n, hi));
            for (auto& x : *fs)
                if (static_cast<double>(x.p) <= support->first)
                    fail(Errc::SupportViolation, fmt::format("n={} has prime factor {} <= {:g}", n, x.p, support->first));
            f = std::move(*fs);
        } else if (omega_bound) {
            f = factor_any(n);
        }
        if (omega_bound && static_cast<std::uint64_t>(big_omega(f)) > *omega_bound)
            fail(Errc::OmegaViolation, fmt::format("Omega({}) = {} > {}", n, big_omega(f), *omega_bound));
    }
}

template <class T>
bool BasicDirichletPoly<T>::prime_supported() const {
    for (auto& [n, c] : coeffs)
        if (!is_prime(n)) return false;
    return true;
}

template <class T>
T BasicDirichletPoly<T>::at(std::uint64_t n) const {
    auto it = coeffs.find(n);
    return it == coeffs.end() ? T(0) : it->second;
}

DirichletPoly prime_sum_poly(const HeckeTable& t, double lo, double hi) {
    DirichletPoly P;
    P.support = std::make_pair(lo, hi);
    P.omega_bound = 1;
    if (hi >= 2 && static_cast<double>(t.bound()) < std::floor(hi))
        fail(Errc::TableTooSmall, fmt::format("interval up to {:g}, table bound {}", hi, t.bound()));
    for (auto p : t.primes()) {
        double x = static_cast<double>(p);
        if (x > hi) break;
        if (x > lo) P.coeffs[p] = t.ap(p);
    }
    return P;
}

template <class T>
BasicDirichletPoly<T> truncated_exp(const BasicDirichletPoly<T>& P, std::uint64_t K) {
    if (!P.prime_supported()) fail(Errc::NotPrimeSupported, "truncated_exp needs a polynomial on primes");
    std::vector<std::uint64_t> ps;
    std::vector<T> neg;
    for (auto& [p, c] : P.coeffs)
        if (!is_zero(c)) {
            ps.push_back(p);
            neg.push_back(-c);
        }
    BasicDirichletPoly<T> out;
    out.support = P.support;
    out.omega_bound = K;
    // depth-first over exponent vectors with total degree <= K
    struct Frame {
        std::size_t i;
        std::uint64_t n;
        std::uint64_t deg;
        T c;
    };
    std::vector<Frame> stack{{0, 1, 0, T(1)}};
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.i == ps.size()) {
            out.coeffs[f.n] += f.c;
            continue;
        }
        T c = f.c;
        std::uint64_t n = f.n;
        stack.push_back({f.i + 1, n, f.deg, c});
        for (std::uint64_t e = 1; f.deg + e <= K; ++e) {
            unsigned __int128 nx = static_cast<unsigned __int128>(n) * ps[f.i];
            if (nx > std::numeric_limits<std::uint64_t>::max()) fail(Errc::OverBound, "truncated_exp index exceeds 2^64");
            n = static_cast<std::uint64_t>(nx);
            c = c * neg[f.i] / T(static_cast<long long>(e));
            stack.push_back({f.i + 1, n, f.deg + e, c});
        }
    }
    return out;
}

template <class T>
BasicDirichletPoly<T> multiply(const BasicDirichletPoly<T>& A, const BasicDirichletPoly<T>& B) {
    BasicDirichletPoly<T> out;
    for (auto& [a, ca] : A.coeffs) {
        if (is_zero(ca)) continue;
        for (auto& [b, cb] : B.coeffs) {
            if (is_zero(cb)) continue;
            out.coeffs[checked_mul(a, b)] += ca * cb;
        }
    }
    if (A.support && B.support)
        out.support = std::make_pair(std::min(A.support->first, B.support->first),
                                     std::max(A.support->second, B.support->second));
    if (A.omega_bound && B.omega_bound) out.omega_bound = *A.omega_bound + *B.omega_bound;
    return out;
}

template <class T>
BasicDirichletPoly<T> add(const BasicDirichletPoly<T>& A, const BasicDirichletPoly<T>& B) {
    BasicDirichletPoly<T> out = A;
    for (auto& [n, c] : B.coeffs) out.coeffs[n] += c;
    if (A.support && B.support)
        out.support = std::make_pair(std::min(A.support->first, B.support->first),
                                     std::max(A.support->second, B.support->second));
    else
        out.support.reset();
    if (A.omega_bound && B.omega_bound)
        out.omega_bound = std::max(*A.omega_bound, *B.omega_bound);
    else
        out.omega_bound.reset();
    return out;
}

template <class T>
BasicDirichletPoly<T> restrict_omega(const BasicDirichletPoly<T>& A, std::uint64_t K) {
    BasicDirichletPoly<T> out;
    out.support = A.support;
    out.omega_bound = K;
    for (auto& [n, c] : A.coeffs)
        if (static_cast<std::uint64_t>(big_omega(factor_any(n))) <= K) out.coeffs[n] = c;
    return out;
}

namespace {

template <class T>
double evaluate_impl(const BasicDirichletPoly<T>& P, std::int64_t d) {
    double s = 0;
    for (auto& [n, c] : P.coeffs) {
        int x = kronecker(d, static_cast<std::int64_t>(n));
        if (x == 0) continue;
        s += x * to_double(c) / std::sqrt(static_cast<double>(n));
    }
    return s;
}

}  // namespace

double evaluate(const DirichletPoly& P, std::int64_t d) { return evaluate_impl(P, d); }
double evaluate(const RationalPoly& P, std::int64_t d) { return evaluate_impl(P, d); }

double taylor_exp(double x, std::uint64_t K) {
    // Horner from the top term keeps the sum stable for moderate x
    double s = 1;
    for (std::uint64_t r = K; r >= 1; --r) s = 1 + s * x / static_cast<double>(r);
    return s;
}

double taylor_remainder_bound(double x, std::uint64_t K) {
    double lg = (static_cast<double>(K) + 1) * std::log(std::abs(x)) - std::lgamma(static_cast<double>(K) + 2);
    return std::exp(lg + std::max(0.0, x));
}

double taylor_rounding_bound(double x, std::uint64_t K) {
    // each Horner step is a divide, a multiply and an add
    double n = 3 * static_cast<double>(K) + 2;
    double u = std::numeric_limits<double>::epsilon() / 2;
    double gamma = n * u / (1 - n * u);
    return gamma * (taylor_exp(std::abs(x), K) + std::exp(x));
}

TaylorCheck taylor_check(double x, std::uint64_t K) {
    using big = boost::multiprecision::cpp_bin_float_50;
    // e^x - T_K(x) summed as its own tail, so tiny remainders keep full relative precision
    big bx = x, term = 1;
    for (std::uint64_t r = 1; r <= K + 1; ++r) term *= bx / r;
    big first = term, tail = 0;
    for (std::uint64_t r = K + 2; r < K + 400 && term != 0; ++r) {
        tail += term;
        if (abs(term) < abs(first) * 1e-45) break;
        term *= bx / r;
    }
    big rem = abs(first) * exp(bx > 0 ? bx : big(0));
    TaylorCheck c;
    c.exact_ok = abs(tail) <= rem;
    c.gap = std::abs(taylor_exp(x, K) - std::exp(x));
    c.remainder = taylor_remainder_bound(x, K);
    c.rounding = taylor_rounding_bound(x, K);
    c.double_ok = c.gap <= c.remainder + c.rounding;
    return c;
}

DirichletPoly well_factorable(const WalkSchedule& s, const std::vector<DirichletPoly>& factors) {
    if (static_cast<int>(factors.size()) > s.R)
        fail(Errc::IndexOutOfRange, fmt::format("{} factors for R={}", factors.size(), s.R));
    long double length = 1;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        DirichletPoly f = factors[j];
        f.support = prime_interval(s, static_cast<int>(j + 1));
        f.omega_bound = omega_bound(s, static_cast<int>(j + 1));
        f.validate();
        length *= static_cast<long double>(std::max<std::uint64_t>(1, f.max_index()));
    }
    double cap = length_bound(s);
    if (length > static_cast<long double>(cap))
        fail(Errc::LengthExceeded,
             fmt::format("twist length {:g} exceeds X^{:g} = {:g}", static_cast<double>(length), s.constants.length_exp, cap));
    DirichletPoly out;
    out.coeffs[1] = 1;
    out.omega_bound = 0;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        DirichletPoly f = factors[j];
        f.support = prime_interval(s, static_cast<int>(j + 1));
        f.omega_bound = omega_bound(s, static_cast<int>(j + 1));
        out = multiply(out, f);
        out.support = std::make_pair(1.0, s.Xj[j + 1]);
    }
    if (factors.empty()) out.omega_bound.reset();
    return out;
}

SquarefreeDecomp squarefree_decomp(std::uint64_t n) {
    if (n == 0) fail(Errc::ZeroInput, "squarefree_decomp(0)");
    SquarefreeDecomp out;
    out.n = n;
    for (auto& [p, e] : factorize(n)) {
        out.parities[p] = e & 1;
        if (e & 1) out.sf *= p;
        for (int i = 0; i < e / 2; ++i) out.sq *= p;
    }
    return out;
}

std::uint64_t squarefree_part(std::uint64_t n) { return squarefree_decomp(n).sf; }

std::string dump_csv(const DirichletPoly& P) {
    std::string out = "n,c(n)\n";
    for (auto& [n, c] : P.coeffs) out += fmt::format("{},{:.17g}\n", n, c);
    return out;
}

std::string dump_csv(const RationalPoly& P) {
    std::string out = "n,c(n)\n";
    for (auto& [n, c] : P.coeffs) out += fmt::format("{},{}\n", n, c.str());
    return out;
}

RationalPoly to_rational(const DirichletPoly& P) {
    RationalPoly out;
    out.support = P.support;
    out.omega_bound = P.omega_bound;
    // exact binary value of each double
    for (auto& [n, c] : P.coeffs) out.coeffs[n] = Rational(c);
    return out;
}

double Mollifier::evaluate(std::int64_t d) const {
    double m = 1;
    for (std::size_t j = 0; j < P.size(); ++j) m *= taylor_exp(-ltail::evaluate(P[j], d), K[j]);
    return m;
}

DirichletPoly Mollifier::expand() const {
    DirichletPoly out;
    out.coeffs[1] = 1;
    for (std::size_t j = 0; j < P.size(); ++j) out = multiply(out, truncated_exp(P[j], K[j]));
    return out;
}

Mollifier build_mollifier(const HeckeTable& t, const WalkSchedule& s, int r) {
    if (r < 1 || r > s.R) fail(Errc::IndexOutOfRange, fmt::format("mollifier length {} outside 1..{}", r, s.R));
    Mollifier m;
    for (int j = 1; j <= r; ++j) {
        auto [lo, hi] = prime_interval(s, j);
        m.P.push_back(prime_sum_poly(t, lo, hi));
        m.K.push_back(truncation_degree(s, j));
    }
    return m;
}

template struct BasicDirichletPoly<double>;
template struct BasicDirichletPoly<Rational>;
template DirichletPoly truncated_exp(const DirichletPoly&, std::uint64_t);
template RationalPoly truncated_exp(const RationalPoly&, std::uint64_t);
template DirichletPoly multiply(const DirichletPoly&, const DirichletPoly&);
template RationalPoly multiply(const RationalPoly&, const RationalPoly&);
template DirichletPoly add(const DirichletPoly&, const DirichletPoly&);
template RationalPoly add(const RationalPoly&, const RationalPoly&);
template DirichletPoly restrict_omega(const DirichletPoly&, std::uint64_t);
template RationalPoly restrict_omega(const RationalPoly&, std::uint64_t);

}  // namespace ltail
