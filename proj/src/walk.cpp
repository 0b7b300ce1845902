#include "ltail/walk.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <numbers>

#include "ltail/errors.hpp"

namespace ltail {

std::vector<IntervalPrimes> interval_primes(const HeckeTable& t, const WalkSchedule& s) {
    std::vector<IntervalPrimes> out(s.R);
    if (s.R == 0) return out;
    double top = s.Xj[s.R];
    if (top >= 2 && static_cast<double>(t.bound()) < std::floor(top))
        fail(Errc::TableTooSmall, fmt::format("walk needs primes up to {:g}, table bound {}", top, t.bound()));
    for (auto p : t.primes()) {
        double x = static_cast<double>(p);
        if (x > top) break;
        int j = 1;
        while (x > s.Xj[j]) ++j;
        out[j - 1].p.push_back(p);
        out[j - 1].weight.push_back(t.ap(p) / std::sqrt(x));
    }
    return out;
}

namespace {

WalkTrace trace_with(const std::vector<IntervalPrimes>& ip, std::int64_t d) {
    WalkTrace tr;
    tr.d = d;
    std::size_t R = ip.size();
    tr.increments.assign(R, 0);
    tr.partials.assign(R + 1, 0);
    for (std::size_t j = 0; j < R; ++j) {
        double acc = 0;
        for (std::size_t i = 0; i < ip[j].p.size(); ++i) acc += kronecker(d, ip[j].p[i]) * ip[j].weight[i];
        tr.increments[j] = acc;
        tr.partials[j + 1] = tr.partials[j] + acc;
    }
    return tr;
}

}  // namespace

WalkTrace trace(const HeckeTable& t, const WalkSchedule& s, std::int64_t d) { return trace_with(interval_primes(t, s), d); }

std::vector<WalkTrace> trace_family(const HeckeTable& t, const WalkSchedule& s, const TwistFamily& fam) {
    auto ip = interval_primes(t, s);
    std::vector<WalkTrace> out(fam.size());
    const auto n = static_cast<std::int64_t>(fam.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = trace_with(ip, fam.discriminants[i]);
    return out;
}

std::vector<WalkTrace> trace_family_serial(const HeckeTable& t, const WalkSchedule& s, const TwistFamily& fam) {
    std::vector<WalkTrace> out;
    out.reserve(fam.size());
    for (auto d : fam.discriminants) out.push_back(trace(t, s, d));
    return out;
}

double h_threshold(const WalkSchedule& s, std::int64_t d, bool h_uses_d) {
    if (!h_uses_d) return s.V - s.loglogX() / 2;
    double ad = static_cast<double>(std::llabs(d));
    return s.V - std::log(std::log(std::max(ad, std::numbers::e))) / 2;
}

EventFlags classify(const WalkTrace& tr, const WalkSchedule& s, double logL, bool h_uses_d) {
    EventFlags f;
    f.in_H = logL >= h_threshold(s, tr.d, h_uses_d);
    int R = s.R;
    f.A.assign(R + 1, true);
    f.B.assign(R + 1, true);
    f.G.assign(R + 1, true);
    for (int r = 1; r <= R; ++r) {
        f.A[r] = f.A[r - 1] && tr.partials[r] < s.Ubar[r];
        f.B[r] = f.B[r - 1] && tr.partials[r] > s.Lbar[r];
        f.G[r] = f.A[r] && f.B[r];
        if (!f.G[r] && !f.first_exit) f.first_exit = r;
    }
    return f;
}

bool DecompositionReport::exact() const {
    std::uint64_t sum = 0;
    for (auto& row : rows) sum += row.count;
    return sum == count_H;
}

DecompositionReport empirical_decomposition(const WalkSchedule& s, const std::vector<EventFlags>& flags) {
    if (flags.empty()) fail(Errc::EmptyFamily, "decomposition over an empty family");
    DecompositionReport rep;
    int R = s.R;
    rep.family_size = flags.size();
    rep.rows.resize(R + 1);
    for (auto& f : flags) {
        if (!f.in_H) continue;
        ++rep.count_H;
        for (int r = 0; r < R; ++r)
            if (f.G[r] && !f.G[r + 1]) ++rep.rows[r].count;
        if (f.G[R]) ++rep.rows[R].count;
    }
    double llx = s.loglogX();
    double base = std::exp(-s.V * s.V / llx) / (s.alpha * std::sqrt(llx));
    double size = static_cast<double>(rep.family_size);
    rep.prob_H = static_cast<double>(rep.count_H) / size;
    for (int r = 0; r <= R; ++r) {
        auto& row = rep.rows[r];
        row.r = r;
        row.probability = static_cast<double>(row.count) / size;
        row.asymptotic_bound_rhs =
            r < R ? base * std::exp(-s.constants.delta * s.kappa * s.s_param * s.sigma2[r + 1]) : base;
    }
    return rep;
}

double gaussian_tail(double V, double variance) {
    if (!(variance > 0) || !std::isfinite(variance)) fail(Errc::BadVariance, fmt::format("variance={}", variance));
    return std::sqrt(std::numbers::pi / 2) * boost::math::erfc(V / std::sqrt(2 * variance));
}

}  // namespace ltail
