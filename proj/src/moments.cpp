#include "ltail/moments.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <functional>
#include <numbers>
#include <numeric>

#include "ltail/errors.hpp"
#include "ltail/primes.hpp"

namespace ltail {

double SmoothingWeight::operator()(double u) const {
    if (kind == Kind::Sharp) return (u >= 0 && u <= 1) ? 1.0 : 0.0;
    double t = 4 * u - 3;
    if (!(t > -1 && t < 1)) return 0.0;
    return std::exp(1.0 - 1.0 / (1 - t * t));
}

SmoothingWeight SmoothingWeight::sharp() { return SmoothingWeight{Kind::Sharp, 1.0}; }

SmoothingWeight SmoothingWeight::bump() {
    SmoothingWeight w{Kind::Bump, 0};
    boost::math::quadrature::tanh_sinh<double> q;
    w.integral = q.integrate([&](double u) { return w(u); }, 0.5, 1.0, 1e-14);
    return w;
}

double first_twisted_moment(const EllipticCurve& c, const TwistFamily& fam, const CentralValueCache& cache,
                            std::uint64_t n, const SmoothingWeight& w) {
    std::uint64_t v = fam.key.divisor;
    if (n == 0 || std::gcd(n, v) != 1 || std::gcd(n * v, c.N0) != 1)
        fail(Errc::ConstraintViolation, fmt::format("S(X;n,v) needs gcd(n,v) = gcd(nv,N0) = 1, n={} v={}", n, v));
    double X = fam.key.X;
    double s = 0;
    for (auto d : fam.discriminants) {
        int x = kronecker(d, static_cast<std::int64_t>(n));
        if (x == 0) continue;
        double phi = w(static_cast<double>(std::llabs(d)) / X);
        if (phi == 0) continue;
        s += cache.value(d) * x * phi;
    }
    return s;
}

namespace {

bool is_square(std::uint64_t n) {
    std::uint64_t r = isqrt(n);
    return r * r == n;
}

}  // namespace

LeadingTermFit leading_term_fit(const EllipticCurve& c, const TwistFamily& fam, const CentralValueCache& cache,
                                const std::vector<std::uint64_t>& squares, const SmoothingWeight& w) {
    if (squares.empty()) fail(Errc::InsufficientData, "leading_term_fit needs at least one square");
    LeadingTermFit fit;
    std::vector<std::vector<std::uint64_t>> primes_of;
    for (auto n : squares) {
        if (!is_square(n)) fail(Errc::ConstraintViolation, fmt::format("{} is not a square", n));
        fit.n.push_back(n);
        fit.S.push_back(first_twisted_moment(c, fam, cache, n, w));
        std::vector<std::uint64_t> ps;
        for (auto& [p, e] : factorize(n)) {
            ps.push_back(p);
            fit.g.emplace(p, 1.0);
        }
        primes_of.push_back(ps);
    }
    auto model = [&](std::size_t i) {
        double m = 1;
        for (auto p : primes_of[i]) m *= fit.g[p];
        return m;
    };
    // alternate the closed-form c step with clamped per-prime steps
    for (int it = 0; it < 500; ++it) {
        double num = 0, den = 0;
        for (std::size_t i = 0; i < fit.n.size(); ++i) {
            double m = model(i);
            num += fit.S[i] * m;
            den += m * m;
        }
        fit.c = den > 0 ? num / den : 0;
        for (auto& [p, g] : fit.g) {
            double nu = 0, de = 0;
            for (std::size_t i = 0; i < fit.n.size(); ++i) {
                bool has = false;
                for (auto q : primes_of[i]) has |= q == p;
                if (!has) continue;
                double rest = fit.c * model(i) / g;
                nu += fit.S[i] * rest;
                de += rest * rest;
            }
            double pd = static_cast<double>(p);
            if (de > 0) g = std::clamp(nu / de, 1 - 5 / pd, 1 + 5 / pd);
        }
    }
    for (std::size_t i = 0; i < fit.n.size(); ++i)
        fit.residuals.push_back(fit.c != 0 ? (fit.S[i] - fit.c * model(i)) / fit.c : 0.0);
    return fit;
}

namespace {

struct Cell {
    std::uint64_t n;
    double c;
    std::vector<std::uint64_t> primes;
};

std::map<std::uint64_t, std::vector<Cell>> cells_by_squarefree(const DirichletPoly& Q) {
    std::map<std::uint64_t, std::vector<Cell>> cells;
    for (auto& [n, c] : Q.coeffs) {
        if (c == 0) continue;
        auto dec = squarefree_decomp(n);
        Cell cell{n, c, {}};
        for (auto& [p, xi] : dec.parities) cell.primes.push_back(p);
        cells[dec.sf].push_back(std::move(cell));
    }
    return cells;
}

// prod over the union of prime divisors of u1 and u2
template <class F>
double union_product(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b, F f) {
    double m = 1;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        std::uint64_t p;
        if (j == b.size() || (i < a.size() && a[i] < b[j])) p = a[i++];
        else if (i == a.size() || b[j] < a[i]) p = b[j++];
        else {
            p = a[i];
            ++i;
            ++j;
        }
        m *= f(static_cast<double>(p));
    }
    return m;
}

}  // namespace

double twisted_mean_rhs(const WalkSchedule& s, const DirichletPoly& Q, int r) {
    if (r < 1 || r > s.R) fail(Errc::NotWellFactorable, fmt::format("degree {} outside 1..{}", r, s.R));
    double hi = s.Xj[r];
    for (auto& [n, c] : Q.coeffs)
        if (!factor_small(n, static_cast<std::uint64_t>(std::floor(hi))))
            fail(Errc::NotWellFactorable, fmt::format("index {} has a prime factor above X_{} = {:g}", n, r, hi));
    double total = 0;
    for (auto& [q, cell] : cells_by_squarefree(Q)) {
        double inner = 0;
        for (auto& u1 : cell)
            for (auto& u2 : cell)
                inner += u1.c * u2.c / std::sqrt(static_cast<double>(u1.n) * static_cast<double>(u2.n)) *
                         union_product(u1.primes, u2.primes, [](double p) { return 1 - 1 / p; });
        total += std::abs(inner);
    }
    return total / std::sqrt(std::log(hi));
}

double empirical_lhs(const TwistFamily& fam, const CentralValueCache& cache, const Mollifier& M,
                     const DirichletPoly& Q) {
    if (fam.empty()) fail(Errc::EmptyFamily, "empirical_lhs over an empty family");
    std::vector<double> term(fam.size());
    const auto n = static_cast<std::int64_t>(fam.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t d = fam.discriminants[i];
        double q = evaluate(Q, d);
        term[i] = cache.value(d) * M.evaluate(d) * q * q;
    }
    return mean(term);
}

double diagonal_prediction(const DirichletPoly& Q, bool absolute) {
    double total = 0;
    for (auto& [q, cell] : cells_by_squarefree(Q))
        for (auto& u1 : cell)
            for (auto& u2 : cell) {
                double cc = u1.c * u2.c;
                if (absolute) cc = std::abs(cc);
                total += cc / std::sqrt(static_cast<double>(u1.n) * static_cast<double>(u2.n)) *
                         union_product(u1.primes, u2.primes, [](double p) { return p / (p + 1); });
            }
    return total;
}

double empirical_square_mean(const TwistFamily& fam, const DirichletPoly& Q) {
    if (fam.empty()) fail(Errc::EmptyFamily, "empty family");
    std::vector<double> term(fam.size());
    const auto n = static_cast<std::int64_t>(fam.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        double q = evaluate(Q, fam.discriminants[i]);
        term[i] = q * q;
    }
    return mean(term);
}

double walk_moment_bound(const WalkSchedule& s, int j, int k, int r) {
    if (j < 1 || k > s.R || j >= k) fail(Errc::IndexOutOfRange, fmt::format("need 1 <= j < k <= R, got {} {}", j, k));
    if (r < 0 || static_cast<double>(r) > 100 * s.l[k] * s.l[k])
        fail(Errc::ROutOfRange, fmt::format("r={} outside [0, 100 l_k^2]", r));
    // (2r)!/(2^r r!) = (2r-1)!!
    double dfact = 1;
    for (int i = 1; i <= r; ++i) dfact *= 2 * i - 1;
    double scale = s.n[k] - s.n[j] + s.constants.slack / std::log(s.Xj[j]);
    return dfact * std::pow(scale, r);
}

double walk_moment_empirical(const std::vector<WalkTrace>& traces, int j, int k, int r) {
    if (traces.empty()) fail(Errc::EmptyFamily, "no traces");
    std::vector<double> term(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& S = traces[i].partials;
        if (j < 0 || k < 0 || static_cast<std::size_t>(std::max(j, k)) >= S.size())
            fail(Errc::IndexOutOfRange, "walk index outside the trace");
        term[i] = std::pow(std::abs(S[k] - S[j]), 2 * r);
    }
    return mean(term);
}

ConditionalMoment conditional_moment_check(const WalkSchedule& s, const TwistFamily& fam,
                                           const std::vector<WalkTrace>& traces, const DirichletPoly& Q, int r,
                                           double w, double width) {
    if (r < 1 || r >= s.R) fail(Errc::IndexOutOfRange, fmt::format("need 1 <= r < R, got {}", r));
    if (fam.size() != traces.size()) fail(Errc::DimMismatch, "traces do not match the family");
    DirichletPoly q = Q;
    q.support = prime_interval(s, r + 1);
    q.validate();
    if (!(s.n[r] > 0))
        fail(Errc::ConstraintViolation, fmt::format("n_{} = 0 (X_{} < e); the Gaussian shape is undefined", r, r));
    std::vector<double> all(fam.size()), hit(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        double v = evaluate(Q, fam.discriminants[i]);
        all[i] = v * v;
        double S = traces[i].partials[r];
        hit[i] = (S >= w && S < w + width) ? all[i] : 0.0;
    }
    ConditionalMoment out;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        double S = traces[i].partials[r];
        if (S >= w && S < w + width) ++out.in_bucket;
    }
    out.lhs = mean(hit);
    out.rhs_shape = mean(all) * std::exp(-w * w / (2 * s.n[r])) / std::sqrt(s.n[r]);
    return out;
}

Theta Theta::defaults(std::uint64_t p, bool diagonal) {
    double q = 1 - 1 / static_cast<double>(p);
    Theta th;
    th.t1 = 1;
    th.t2 = q;
    th.t4 = q;
    th.t3 = diagonal ? th.t1 : th.t4;
    th.t5 = q;
    return th;
}

void Theta::validate() const {
    auto bad = [](const char* why) { fail(Errc::BadTheta, why); };
    if (!(t1 >= t2 && t2 > 0)) bad("need t1 >= t2 > 0");
    if (!(t3 >= t4 && t4 > 0)) bad("need t3 >= t4 > 0");
    if (!(t1 - t2 >= t3 - t4)) bad("need t1 - t2 >= t3 - t4");
    if (!(t2 >= t4)) bad("need t2 >= t4");
    if (!std::isfinite(t5)) bad("t5 not finite");
}

double beta_at(double a, std::uint64_t p, int k, const Theta& th, int terms) {
    th.validate();
    if (terms < 3) fail(Errc::ConstraintViolation, "beta series needs at least 3 terms");
    if (k < 0) fail(Errc::ConstraintViolation, "negative exponent");
    int xi = k & 1;
    bool base = k < 2;
    double pd = static_cast<double>(p);
    double top = xi ? th.t3 : th.t1;
    double rest = xi ? th.t4 : th.t2;
    double first = 0, second = 0;
    // a^{2i+xi} / (p^{i+xi/2} (2i)!)
    double x = a / std::sqrt(pd);
    double term = xi ? x : 1.0;
    for (int i = 0; i < terms; ++i) {
        if (i > 0) term *= x * x / ((2.0 * i - 1) * (2.0 * i));
        first += term * ((i == 0 && base) ? top : rest);
    }
    // a^{2i-xi} / (p^{i-xi/2} (2i-1)!), i >= 1
    term = xi ? x : x * x;
    for (int i = 1; i <= terms; ++i) {
        if (i > 1) term *= x * x / ((2.0 * i - 2) * (2.0 * i - 1));
        second += term;
    }
    return first - th.t5 * second;
}

double beta_factor(const HeckeTable& t, std::uint64_t p, int parity, const Theta& th, int terms) {
    if (parity != 0 && parity != 1) fail(Errc::ConstraintViolation, "parity must be 0 or 1");
    return beta_at(t.ap(p), p, parity, th, terms);
}

BetaFactors beta_factors(const HeckeTable& t, std::uint64_t p, int terms) {
    BetaFactors b;
    b.p = p;
    b.theta = Theta::defaults(p);
    double a = t.ap(p);
    b.beta_even = beta_at(a, p, 0, Theta::defaults(p, true), terms);
    b.beta_even_tail = beta_at(a, p, 2, Theta::defaults(p, true), terms);
    b.beta_odd = beta_at(a, p, 1, b.theta, terms);
    return b;
}

namespace {

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::uint64_t multinom(const std::vector<int>& f) {
    int total = 0;
    std::uint64_t den = 1;
    for (int x : f) {
        total += x;
        den *= factorial(x);
    }
    return factorial(total) / den;
}

// all vectors of `parts` nonnegative entries summing to `total`
void compositions(int total, int parts, std::vector<int>& cur, const std::function<void()>& visit) {
    if (static_cast<int>(cur.size()) == parts - 1) {
        cur.push_back(total);
        visit();
        cur.pop_back();
        return;
    }
    for (int x = 0; x <= total; ++x) {
        cur.push_back(x);
        compositions(total - x, parts, cur, visit);
        cur.pop_back();
    }
}

}  // namespace

std::uint64_t multinomial_identity_failures(int rmax, int tmax, std::uint64_t* checked) {
    std::uint64_t bad = 0, cases = 0;
    for (int r = 0; r <= rmax; ++r)
        for (int t = 1; t <= tmax; ++t) {
            std::vector<int> f;
            compositions(2 * r, 2 * t, f, [&] {
                std::uint64_t rhs = 0;
                std::vector<int> c;
                compositions(r, 2 * t, c, [&] {
                    std::vector<int> rest(f.size());
                    for (std::size_t i = 0; i < f.size(); ++i) {
                        if (c[i] > f[i]) return;
                        rest[i] = f[i] - c[i];
                    }
                    rhs += multinom(c) * multinom(rest);
                });
                ++cases;
                if (rhs != multinom(f)) ++bad;
            });
        }
    if (checked) *checked = cases;
    return bad;
}

double mean(const std::vector<double>& x) {
    if (x.empty()) return 0;
    // fixed-order pairwise sum
    std::vector<double> buf(x);
    std::size_t n = buf.size();
    while (n > 1) {
        std::size_t h = n / 2;
        for (std::size_t i = 0; i < h; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
        if (n & 1) buf[h] = buf[n - 1];
        n = h + (n & 1);
    }
    return buf[0] / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
    double m = mean(x);
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - m) * (x[i] - m);
    return mean(sq);
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty()) fail(Errc::DimMismatch, "correlation needs equal nonempty samples");
    double mx = mean(x), my = mean(y);
    std::vector<double> xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xy[i] = (x[i] - mx) * (y[i] - my);
    double vx = variance(x), vy = variance(y);
    if (vx == 0 || vy == 0) return 0;
    return mean(xy) / std::sqrt(vx * vy);
}

}  // namespace ltail
