#include "ltail/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>

#include "ltail/errors.hpp"
#include "ltail/primes.hpp"

namespace ltail {

Workspace prepare(const EllipticCurve& c, const FamilyKey& key, std::uint64_t min_hecke, bool use_disk) {
    Workspace w;
    w.curve = c;
    w.family = enumerate_key(c, key);
    if (w.family.empty()) fail(Errc::EmptyFamily, "no twists for " + key.describe());
    std::uint64_t need = required_coefficients(c, w.family, kDefaultRelTol);
    std::uint64_t small = std::max<std::uint64_t>(min_hecke, 100000);

    // a warm cache only needs the short table used by walks and mollifiers
    std::string path = cache_path(c.label, w.family.key);
    if (use_disk && std::filesystem::exists(path)) {
        auto cached = CentralValueCache::read_csv(path);
        if (cached.covers(w.family)) {
            w.cache = std::move(cached);
            w.hecke = HeckeTable::build(c, std::min(small, std::max(need, min_hecke)));
            return w;
        }
    }
    w.hecke = HeckeTable::build(c, std::max(need, min_hecke));
    w.coeffs = SeriesCoefficients(w.hecke, need);
    w.cache = load_or_compute(w.coeffs, w.family, kDefaultRelTol, use_disk);
    return w;
}

double tail_V(double X, double alpha, const EffectiveConstants& k) {
    return k.V ? *k.V : alpha * std::log(std::log(X));
}

double fractional_moment(const Workspace& w, double alpha) {
    if (!(alpha > 0)) fail(Errc::AlphaOutOfRange, fmt::format("alpha={} must be positive", alpha));
    std::vector<double> t;
    t.reserve(w.family.size());
    for (auto d : w.family.discriminants) t.push_back(std::pow(std::max(w.value(d), 0.0), alpha));
    return mean(t);
}

TailReport tail_report(const Workspace& w, double alpha, const EffectiveConstants& k, bool h_uses_d) {
    if (!(alpha > 0 && alpha < 0.5)) fail(Errc::AlphaOutOfRange, fmt::format("alpha={} outside (0, 1/2)", alpha));
    TailReport r;
    r.X = w.family.key.X;
    r.alpha = alpha;
    r.family = w.family.key.describe();
    r.family_size = w.family.size();
    double llX = std::log(std::log(r.X));
    r.V = tail_V(r.X, alpha, k);
    for (auto d : w.family.discriminants) {
        double L = w.value(d);
        double logL = log_central(L);
        if (std::isinf(logL)) ++r.vanishing;
        double lld = std::log(std::log(std::max<double>(static_cast<double>(std::llabs(d)), std::numbers::e)));
        double threshold = r.V - (h_uses_d ? lld : llX) / 2;
        if (logL >= threshold) ++r.count_H;
    }
    r.empirical_prob = static_cast<double>(r.count_H) / static_cast<double>(r.family_size);
    r.gaussian_rhs = gaussian_tail(r.V, llX);
    // the Gaussian tail underflows for huge V; an empty H is ratio 0, not 0/0
    r.ratio = r.count_H == 0 ? 0.0 : r.empirical_prob / r.gaussian_rhs;
    r.logpow_rhs = std::pow(std::log(r.X), -alpha * alpha / 2);
    r.logpow_ratio = r.count_H == 0 ? 0.0 : r.empirical_prob / r.logpow_rhs;
    r.frac_moment = fractional_moment(w, alpha);
    r.frac_shape = std::pow(std::log(r.X), (alpha * alpha - alpha) / 2);
    r.frac_ratio = r.frac_moment / r.frac_shape;
    return r;
}

BarrierRun barrier_run(const Workspace& w, double alpha, const EffectiveConstants& k, bool h_uses_d) {
    BarrierRun b;
    b.schedule = build_schedule(w.family.key.X, alpha, k);
    b.traces = trace_family(w.hecke, b.schedule, w.family);
    b.flags.reserve(b.traces.size());
    for (auto& tr : b.traces) b.flags.push_back(classify(tr, b.schedule, log_central(w.value(tr.d)), h_uses_d));
    b.report = empirical_decomposition(b.schedule, b.flags);
    if (!b.report.exact()) fail(Errc::ConstraintViolation, "decomposition does not sum to |H|");
    return b;
}

std::vector<MomentRow> walk_moment_rows(const WalkSchedule& s, const std::vector<WalkTrace>& traces, int rmax) {
    std::vector<MomentRow> rows;
    for (int j = 1; j <= s.R; ++j)
        for (int k = j + 1; k <= s.R; ++k)
            for (int r = 1; r <= rmax; ++r) {
                MomentRow m;
                m.quantity = "walk_moment";
                m.params = fmt::format("j={} k={} r={}", j, k, r);
                m.empirical = walk_moment_empirical(traces, j, k, r);
                m.reference = walk_moment_bound(s, j, k, r);
                m.ratio = m.empirical / m.reference;
                rows.push_back(m);
            }
    return rows;
}

namespace {

std::vector<std::uint64_t> interval_prime_list(const WalkSchedule& s, int j) {
    auto [lo, hi] = prime_interval(s, j);
    std::vector<std::uint64_t> out;
    for (auto p : primes_up_to(static_cast<std::uint64_t>(std::floor(hi))))
        if (static_cast<double>(p) > lo) out.push_back(p);
    return out;
}

}  // namespace

DirichletPoly random_well_factorable(const WalkSchedule& s, int r, std::mt19937_64& rng) {
    if (r < 1 || r > s.R) fail(Errc::IndexOutOfRange, fmt::format("r={} outside 1..{}", r, s.R));
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<DirichletPoly> factors;
        for (int j = 1; j <= r; ++j) {
            auto P = interval_prime_list(s, j);
            DirichletPoly f;
            int terms = 1 + static_cast<int>(rng() % 3);
            int omax = static_cast<int>(std::min<std::uint64_t>(3, omega_bound(s, j)));
            for (int t = 0; t < terms; ++t) {
                std::uint64_t n = 1;
                int e = P.empty() ? 0 : static_cast<int>(rng() % (omax + 1));
                for (int i = 0; i < e; ++i) n *= P[rng() % P.size()];
                f.coeffs[n] += coef(rng);
            }
            factors.push_back(f);
        }
        try {
            return well_factorable(s, factors);
        } catch (const Error& e) {
            if (e.code() != Errc::LengthExceeded) throw;
        }
    }
    fail(Errc::LengthExceeded, "no twist within the length bound after 1000 draws");
}

std::vector<TwistedMeanInstance> twisted_mean_instances(const Workspace& w, const WalkSchedule& s, int count,
                                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<TwistedMeanInstance> out;
    for (int i = 0; i < count; ++i) {
        TwistedMeanInstance inst;
        inst.r = 1 + static_cast<int>(rng() % s.R);
        inst.Q = random_well_factorable(s, inst.r, rng);
        Mollifier M = build_mollifier(w.hecke, s, inst.r);
        inst.lhs = empirical_lhs(w.family, w.cache, M, inst.Q);
        inst.rhs = twisted_mean_rhs(s, inst.Q, inst.r);
        out.push_back(std::move(inst));
    }
    return out;
}

CancellationPair cancellation_pair(const Workspace& w, const WalkSchedule& s) {
    auto P = interval_prime_list(s, s.R);
    if (P.size() < 2) fail(Errc::InsufficientData, "P_R holds fewer than two primes");
    CancellationPair c;
    c.p = P[P.size() - 2];
    c.q = P.back();
    DirichletPoly Q;
    Q.coeffs[c.p * c.p] = 1;
    Q.coeffs[c.q * c.q] = -1;
    c.square_mean = empirical_square_mean(w.family, Q);
    c.diagonal_abs = diagonal_prediction(Q, true);
    return c;
}

MollificationEffect mollification_effect(const Workspace& w, const WalkSchedule& s, int r) {
    Mollifier M = build_mollifier(w.hecke, s, r);
    MollificationEffect out;
    std::vector<double> logL, logLM, S, negLogM;
    for (auto d : w.family.discriminants) {
        double L = w.value(d);
        double lg = log_central(L);
        if (std::isinf(lg)) {
            ++out.vanishing;
            continue;
        }
        double m = M.evaluate(d);
        if (!(m > 0)) fail(Errc::ConstraintViolation, fmt::format("M_{}({}) = {} not positive", r, d, m));
        auto tr = trace(w.hecke, s, d);
        logL.push_back(lg);
        logLM.push_back(lg + std::log(m));
        S.push_back(tr.partials[r]);
        negLogM.push_back(-std::log(m));
    }
    out.used = logL.size();
    out.var_log_L = variance(logL);
    out.var_log_LM = variance(logLM);
    out.corr_S_logM = correlation(S, negLogM);
    return out;
}

BetaSweep beta_sweep(const HeckeTable& t, std::uint64_t lo, std::uint64_t hi, int terms) {
    BetaSweep b;
    b.p_lo = lo;
    b.p_hi = hi;
    b.min_gap = std::numeric_limits<double>::infinity();
    for (auto p : primes_up_to(hi)) {
        if (p < lo) continue;
        auto f = beta_factors(t, p, terms);
        double scaled = std::abs(f.beta_odd / f.beta_even_tail) * std::pow(static_cast<double>(p), 1.5);
        if (scaled > b.max_scaled_ratio) {
            b.max_scaled_ratio = scaled;
            b.argmax = p;
        }
        double gap = std::min(f.beta_even - f.beta_even_tail, f.beta_even_tail);
        b.min_gap = std::min(b.min_gap, gap);
        if (gap < 0) ++b.order_violations;
    }
    return b;
}

}  // namespace ltail
