#include "ltail/ec_arith.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "ltail/errors.hpp"
#include "ltail/primes.hpp"

namespace ltail {

const char* reduction_name(Reduction r) {
    switch (r) {
        case Reduction::Good: return "good";
        case Reduction::Split: return "split";
        case Reduction::NonSplit: return "nonsplit";
        case Reduction::Additive: return "additive";
    }
    return "?";
}

Reduction parse_reduction(const std::string& s) {
    if (s == "split") return Reduction::Split;
    if (s == "nonsplit") return Reduction::NonSplit;
    if (s == "additive") return Reduction::Additive;
    fail(Errc::ParseError, "unknown reduction type '" + s + "'");
}

std::int64_t EllipticCurve::b8() const {
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}

std::int64_t EllipticCurve::c4() const { return b2() * b2() - 24 * b4(); }

std::int64_t EllipticCurve::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }

std::int64_t EllipticCurve::discriminant() const {
    std::int64_t B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

Reduction EllipticCurve::reduction_at(std::uint64_t p) const {
    auto it = bad.find(p);
    return it == bad.end() ? Reduction::Good : it->second;
}

EllipticCurve EllipticCurve::make(std::string label, std::array<std::int64_t, 5> a, std::uint64_t N, int eps,
                                  std::map<std::uint64_t, Reduction> bad) {
    EllipticCurve c;
    c.label = std::move(label);
    c.a1 = a[0];
    c.a2 = a[1];
    c.a3 = a[2];
    c.a4 = a[3];
    c.a6 = a[4];
    if (N == 0) fail(Errc::ZeroInput, "conductor must be positive");
    if (eps != 1 && eps != -1) fail(Errc::ParseError, "root number must be +1 or -1");
    c.N = N;
    c.N0 = std::lcm(N, std::uint64_t{8});
    c.eps_global = eps;
    c.bad = std::move(bad);
    std::int64_t disc = c.discriminant();
    if (disc == 0) fail(Errc::ParseError, c.label + ": singular model");
    for (auto& [p, e] : factorize(N)) {
        auto it = c.bad.find(p);
        if (it == c.bad.end()) fail(Errc::ParseError, c.label + ": missing reduction type at " + std::to_string(p));
        if (e == 1 && it->second == Reduction::Additive)
            fail(Errc::ParseError, c.label + ": additive reduction needs p^2 | N");
        if (e > 1 && it->second != Reduction::Additive)
            fail(Errc::ParseError, c.label + ": multiplicative reduction needs p || N");
    }
    for (auto& [p, r] : c.bad) {
        if (!is_prime(p) || N % p != 0) fail(Errc::ParseError, c.label + ": bad prime not dividing N");
        if (r == Reduction::Good) fail(Errc::ParseError, c.label + ": 'good' listed as bad reduction");
    }
    std::uint64_t ad = static_cast<std::uint64_t>(std::llabs(disc));
    if (ad <= kMaxTrialFactor) {
        for (auto& [p, e] : factorize(ad))
            if (N % p != 0) fail(Errc::ParseError, c.label + ": model not minimal at " + std::to_string(p));
    }
    return c;
}

double ap_good(const EllipticCurve& c, std::uint64_t p) {
    if (!is_prime(p)) fail(Errc::NotPrime, std::to_string(p));
    if (c.N % p == 0) fail(Errc::BadReduction, "p=" + std::to_string(p) + " divides N; use ap_bad");
    if (p > kMaxPointCountPrime) fail(Errc::OverBound, "p=" + std::to_string(p));
    return static_cast<double>(trace_good(c, p)) / std::sqrt(static_cast<double>(p));
}

static int bad_trace(Reduction r) {
    switch (r) {
        case Reduction::Split: return 1;
        case Reduction::NonSplit: return -1;
        default: return 0;
    }
}

double ap_bad(const EllipticCurve& c, std::uint64_t p) {
    Reduction r = c.reduction_at(p);
    if (r == Reduction::Good) fail(Errc::GoodReduction, "p=" + std::to_string(p) + " is good; use ap_good");
    return bad_trace(r) / std::sqrt(static_cast<double>(p));
}

namespace {

void build_impl(const EllipticCurve& c, std::uint64_t bound, bool parallel, std::vector<std::uint32_t>& primes,
                std::vector<std::int32_t>& trace) {
    if (bound > kMaxPointCountPrime) fail(Errc::OverBound, "table bound " + std::to_string(bound));
    primes = primes_up_to(bound);
    trace.assign(bound + 1, 0);
    const std::int64_t np = static_cast<std::int64_t>(primes.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 256)
        for (std::int64_t i = 0; i < np; ++i) {
            std::uint64_t p = primes[i];
            Reduction r = c.reduction_at(p);
            trace[p] = r == Reduction::Good ? static_cast<std::int32_t>(trace_good(c, p)) : bad_trace(r);
        }
    } else {
        for (std::int64_t i = 0; i < np; ++i) {
            std::uint64_t p = primes[i];
            Reduction r = c.reduction_at(p);
            trace[p] = r == Reduction::Good ? static_cast<std::int32_t>(trace_good(c, p)) : bad_trace(r);
        }
    }
}

}  // namespace

HeckeTable HeckeTable::build(const EllipticCurve& c, std::uint64_t bound) {
    HeckeTable t;
    t.curve_ = c;
    t.bound_ = bound;
    build_impl(c, bound, true, t.primes_, t.trace_);
    return t;
}

HeckeTable HeckeTable::build_serial(const EllipticCurve& c, std::uint64_t bound) {
    HeckeTable t;
    t.curve_ = c;
    t.bound_ = bound;
    build_impl(c, bound, false, t.primes_, t.trace_);
    return t;
}

std::int32_t HeckeTable::trace(std::uint64_t p) const {
    if (p > bound_) fail(Errc::OverBound, "p=" + std::to_string(p) + " > table bound " + std::to_string(bound_));
    return trace_[p];
}

double HeckeTable::ap(std::uint64_t p) const { return trace(p) / std::sqrt(static_cast<double>(p)); }

std::int64_t HeckeTable::an_unnormalized(std::uint64_t n) const {
    if (n == 0) fail(Errc::ZeroInput, "a(0)");
    std::int64_t out = 1;
    for (auto& [p, e] : factorize(n)) {
        std::int64_t A = trace(p);
        std::int64_t cur;
        if (curve_.reduction_at(p) != Reduction::Good) {
            cur = 1;
            for (int k = 0; k < e; ++k) cur *= A;
        } else {
            std::int64_t prev = 1;
            cur = A;
            for (int k = 1; k < e; ++k) {
                std::int64_t next = A * cur - static_cast<std::int64_t>(p) * prev;
                prev = cur;
                cur = next;
            }
        }
        out *= cur;
    }
    return out;
}

double HeckeTable::an(std::uint64_t n) const {
    return static_cast<double>(an_unnormalized(n)) / std::sqrt(static_cast<double>(n));
}

double hecke_an(const HeckeTable& t, std::uint64_t n) { return t.an(n); }

SeriesCoefficients::SeriesCoefficients(const HeckeTable& t, std::uint64_t limit) : curve_(t.curve()) {
    if (limit > t.bound())
        fail(Errc::TableTooSmall, "coefficients up to " + std::to_string(limit) + " need primes beyond table bound " +
                                      std::to_string(t.bound()));
    b_.assign(limit + 1, 0.0);
    if (limit == 0) return;
    std::vector<std::uint32_t> lp(limit + 1, 0), pk(limit + 1, 0);
    std::vector<std::uint32_t> plist;
    plist.reserve(t.primes().size());
    b_[1] = 1.0;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (lp[i] == 0) {
            lp[i] = static_cast<std::uint32_t>(i);
            pk[i] = static_cast<std::uint32_t>(i);
            plist.push_back(static_cast<std::uint32_t>(i));
            b_[i] = t.trace(i);
        } else if (pk[i] != i) {
            b_[i] = b_[pk[i]] * b_[i / pk[i]];
        } else {
            std::uint64_t p = lp[i];
            double A = b_[p];
            if (curve_.reduction_at(p) == Reduction::Good)
                b_[i] = A * b_[i / p] - static_cast<double>(p) * b_[i / p / p];
            else
                b_[i] = A * b_[i / p];
        }
        for (std::uint32_t p : plist) {
            std::uint64_t ip = i * p;
            if (p > lp[i] || ip > limit) break;
            lp[ip] = p;
            pk[ip] = (p == lp[i]) ? pk[i] * p : p;
        }
    }
    for (std::uint64_t n = 2; n <= limit; ++n) b_[n] /= static_cast<double>(n);
}

}  // namespace ltail
