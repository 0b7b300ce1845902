#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ltail/dpoly.hpp"
#include "ltail/lcentral.hpp"
#include "ltail/moments.hpp"
#include "ltail/report.hpp"
#include "ltail/schedule.hpp"
#include "ltail/walk.hpp"

namespace ltail {

// curve data, family and cached central values for one family tuple
struct Workspace {
    EllipticCurve curve;
    HeckeTable hecke;
    SeriesCoefficients coeffs;
    TwistFamily family;
    CentralValueCache cache;

    double value(std::int64_t d) const { return cache.value(d); }
};
// Hecke table covers max(required series length, min_hecke)
Workspace prepare(const EllipticCurve& c, const FamilyKey& key, std::uint64_t min_hecke = 0, bool use_disk = true);

// V from the constants, else alpha loglog X
double tail_V(double X, double alpha, const EffectiveConstants& k);
// mean of max(L, 0)^alpha over the family, any alpha > 0
double fractional_moment(const Workspace& w, double alpha);
// AlphaOutOfRange unless 0 < alpha < 1/2
TailReport tail_report(const Workspace& w, double alpha, const EffectiveConstants& k, bool h_uses_d = false);

struct BarrierRun {
    WalkSchedule schedule;
    std::vector<WalkTrace> traces;
    std::vector<EventFlags> flags;
    DecompositionReport report;
};
BarrierRun barrier_run(const Workspace& w, double alpha, const EffectiveConstants& k, bool h_uses_d = false);

// |S_k - S_j|^{2r} against the walk moment bound for all 1 <= j < k <= R, r = 1..rmax
std::vector<MomentRow> walk_moment_rows(const WalkSchedule& s, const std::vector<WalkTrace>& traces, int rmax);

// random sparse twist factored over P_1..P_r, within the Omega and length bounds
DirichletPoly random_well_factorable(const WalkSchedule& s, int r, std::mt19937_64& rng);

struct TwistedMeanInstance {
    int r = 0;
    DirichletPoly Q;
    double lhs = 0;
    double rhs = 0;
};
std::vector<TwistedMeanInstance> twisted_mean_instances(const Workspace& w, const WalkSchedule& s, int count,
                                             std::uint64_t seed);

struct CancellationPair {
    std::uint64_t p = 0, q = 0;
    double square_mean = 0;
    double diagonal_abs = 0;
};
// Q = chi(p^2) - chi(q^2) with p < q the two largest primes of P_R
CancellationPair cancellation_pair(const Workspace& w, const WalkSchedule& s);

struct MollificationEffect {
    double var_log_L = 0;
    double var_log_LM = 0;
    double corr_S_logM = 0;
    std::uint64_t used = 0;
    std::uint64_t vanishing = 0;
};
// over the non-vanishing members, M_r with degree K on every interval
MollificationEffect mollification_effect(const Workspace& w, const WalkSchedule& s, int r);

struct BetaSweep {
    std::uint64_t p_lo = 0, p_hi = 0;
    double max_scaled_ratio = 0;  // max |beta(p)/beta(p^2)| p^{3/2}
    std::uint64_t argmax = 0;
    std::uint64_t order_violations = 0;  // beta(p^0) < beta(p^2) or beta(p^2) < 0
    double min_gap = 0;                  // min of beta(p^0) - beta(p^2) and beta(p^2)
};
BetaSweep beta_sweep(const HeckeTable& t, std::uint64_t lo, std::uint64_t hi, int terms = 12);

}  // namespace ltail
