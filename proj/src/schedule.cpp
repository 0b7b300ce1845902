#include "ltail/schedule.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "ltail/errors.hpp"

namespace ltail {

EffectiveConstants EffectiveConstants::paper() { return EffectiveConstants{}; }

EffectiveConstants EffectiveConstants::desk() {
    EffectiveConstants k;
    k.s_param = 2;
    k.log_base = 2;
    k.r_const = -1.5;
    k.trunc_exp = 1;
    k.omega_exp = 1;
    k.a1_trunc = 12;
    k.trunc_k = 12;
    k.omega_bound = 8;
    k.length_exp = 0.5;
    return k;
}

double EffectiveConstants::s_for(double alpha) const { return s_param > 0 ? s_param : 1e5 / (1 - 2 * alpha); }

std::string EffectiveConstants::describe(double alpha) const {
    std::string out = fmt::format("s={:g} log_base={:g} r_const={:g} trunc_exp={:g} omega_exp={:g} a1_trunc={} "
                                  "trunc_k={} omega_bound={} length_exp={:g} delta={:g} slack={:g}",
                                  s_for(alpha), log_base > 0 ? log_base : std::numbers::e, r_const, trunc_exp,
                                  omega_exp, a1_trunc, trunc_k, omega_bound, length_exp, delta, slack);
    if (V) out += fmt::format(" V={:g}", *V);
    if (kappa) out += fmt::format(" kappa={:g}", *kappa);
    return out;
}

double WalkSchedule::loglogX() const { return std::log(std::log(X)); }

double iterated_log(double x, int k, double base) {
    double lb = std::log(base);
    for (int i = 0; i < k; ++i) {
        if (!(x > 0)) return -std::numeric_limits<double>::infinity();
        x = std::log(x) / lb;
    }
    return x;
}

WalkSchedule build_schedule(double X, double alpha, const EffectiveConstants& k) {
    if (!(alpha > 0 && alpha < 0.5)) fail(Errc::AlphaOutOfRange, fmt::format("alpha={} not in (0, 1/2)", alpha));
    if (!(X >= std::exp(std::numbers::e))) fail(Errc::DegenerateSchedule, fmt::format("X={} below e^e", X));
    WalkSchedule s;
    s.X = X;
    s.alpha = alpha;
    s.constants = k;
    s.s_param = k.s_for(alpha);
    double llx = std::log(std::log(X));
    s.V = k.V ? *k.V : alpha * llx;
    s.kappa = k.kappa ? *k.kappa : s.V / llx;

    double base = k.log_base > 0 ? k.log_base : std::numbers::e;
    double threshold = std::max(0.0, k.r_const - std::log(alpha));
    int R = 0;
    // log_{R+2} X is decreasing in R; stop once it fails
    while (R < 64 && iterated_log(X, R + 3, base) > threshold) ++R;
    if (R < 1)
        fail(Errc::DegenerateSchedule,
             fmt::format("no R >= 1 with log_(R+2) X > {} at X={:g}; use desk overrides", threshold, X));

    s.R = R;
    s.l.assign(R + 2, 0);
    double l1 = 2 * std::ceil(llx * llx);
    s.l[1] = l1;
    for (int j = 2; j <= R + 1; ++j) s.l[j] = 2 * std::ceil(std::pow(iterated_log(X, j + 1, base), s.s_param));
    s.l[0] = std::pow(l1, 1e-5) + l1;
    for (int j = 1; j <= R; ++j)
        if (!(s.l[j] > s.l[j + 1]))
            fail(Errc::DegenerateSchedule, fmt::format("l_{}={} does not exceed l_{}={}", j, s.l[j], j + 1, s.l[j + 1]));

    double logX = std::log(X);
    s.Xj.assign(R + 1, 0);
    s.n.assign(R + 1, 0);
    s.sigma2.assign(R + 1, 0);
    s.Lbar.assign(R + 1, 0);
    s.Ubar.assign(R + 1, 0);
    for (int r = 1; r <= R; ++r) {
        s.Xj[r] = std::exp(logX / s.l[r]);
        s.n[r] = std::log(std::log(std::max(s.Xj[r], std::numbers::e)));
        s.sigma2[r] = std::log(s.l[r]);
        s.Lbar[r] = s.kappa * s.n[r] - s.s_param * s.sigma2[r];
        s.Ubar[r] = s.kappa * s.n[r] + s.s_param * s.sigma2[r];
    }
    return s;
}

std::pair<double, double> prime_interval(const WalkSchedule& s, int j) {
    if (j < 1 || j > s.R) fail(Errc::IndexOutOfRange, fmt::format("interval {} outside 1..{}", j, s.R));
    return {j == 1 ? 1.0 : s.Xj[j - 1], s.Xj[j]};
}

std::pair<double, double> barriers(const WalkSchedule& s, int r) {
    if (r < 1 || r > s.R) fail(Errc::IndexOutOfRange, fmt::format("barrier {} outside 1..{}", r, s.R));
    return {s.Lbar[r], s.Ubar[r]};
}

namespace {

std::uint64_t saturate(double x) {
    if (!(x < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace

std::uint64_t truncation_degree(const WalkSchedule& s, int j) {
    if (j < 1 || j > s.R) fail(Errc::IndexOutOfRange, fmt::format("degree index {} outside 1..{}", j, s.R));
    const auto& k = s.constants;
    if (j == 1) {
        if (k.a1_trunc > 0) return static_cast<std::uint64_t>(k.a1_trunc);
        return 20 * saturate(s.loglogX());
    }
    if (k.trunc_k > 0) return static_cast<std::uint64_t>(k.trunc_k);
    return saturate(std::pow(s.l[j] - s.l[j + 1], k.trunc_exp));
}

std::uint64_t omega_bound(const WalkSchedule& s, int j) {
    if (j < 1 || j > s.R) fail(Errc::IndexOutOfRange, fmt::format("omega index {} outside 1..{}", j, s.R));
    if (s.constants.omega_bound > 0) return static_cast<std::uint64_t>(s.constants.omega_bound);
    return saturate(10 * std::pow(s.l[j] - s.l[j + 1], s.constants.omega_exp));
}

double length_bound(const WalkSchedule& s) { return std::pow(s.X, s.constants.length_exp); }

std::uint64_t markov_exponent(double v, double n_next, double n_cur) {
    double gap = n_next - n_cur;
    if (!(gap > 0)) fail(Errc::ConstraintViolation, "markov_exponent needs n_{r+1} > n_r");
    return std::max<std::uint64_t>(1, saturate(v * v / (2 * gap)));
}

}  // namespace ltail
