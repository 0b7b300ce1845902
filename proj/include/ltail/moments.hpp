#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ltail/dpoly.hpp"
#include "ltail/family.hpp"
#include "ltail/lcentral.hpp"
#include "ltail/schedule.hpp"
#include "ltail/walk.hpp"

namespace ltail {

struct SmoothingWeight {
    enum class Kind { Sharp, Bump };
    Kind kind = Kind::Sharp;
    double integral = 1;  // int_0^1 Phi(u) du

    // sharp: 1 on [0, 1]; bump: e * exp(-1/(1-t^2)), t = 4u - 3, supported on [1/2, 1], peak 1 at u = 3/4
    double operator()(double u) const;
    static SmoothingWeight sharp();
    static SmoothingWeight bump();
};

// S(X; n, v) = Sum_d L(1/2, E_d) chi_d(n) Phi(|d| / X)
double first_twisted_moment(const EllipticCurve& c, const TwistFamily& fam, const CentralValueCache& cache,
                            std::uint64_t n, const SmoothingWeight& w);

struct LeadingTermFit {
    double c = 0;
    std::map<std::uint64_t, double> g;  // per-prime factors, each in [1 - 5/p, 1 + 5/p]
    std::vector<std::uint64_t> n;
    std::vector<double> S;
    std::vector<double> residuals;  // (S(n) - model(n)) / c
};
LeadingTermFit leading_term_fit(const EllipticCurve& c, const TwistFamily& fam, const CentralValueCache& cache,
                                const std::vector<std::uint64_t>& squares, const SmoothingWeight& w);

// log^{-1/2}(X_r) Sum_q | Sum_{sf(u1) = sf(u2) = q} C(u1) C(u2) / sqrt(u1 u2) prod_{p | u1 u2} (1 - 1/p) |
double twisted_mean_rhs(const WalkSchedule& s, const DirichletPoly& Q, int r);
// family mean of L M Q^2
double empirical_lhs(const TwistFamily& fam, const CentralValueCache& cache, const Mollifier& M,
                     const DirichletPoly& Q);

// Sum_{sf(n1) = sf(n2)} c(n1) c(n2) / sqrt(n1 n2) prod_{p | n1 n2} p/(p+1); with absolute, |c(n1) c(n2)|
double diagonal_prediction(const DirichletPoly& Q, bool absolute = false);
// family mean of Q(d)^2
double empirical_square_mean(const TwistFamily& fam, const DirichletPoly& Q);

// (2r)!/(2^r r!) (n_k - n_j + slack / log X_j)^r
double walk_moment_bound(const WalkSchedule& s, int j, int k, int r);
// family mean of |S_k - S_j|^{2r}
double walk_moment_empirical(const std::vector<WalkTrace>& traces, int j, int k, int r);

struct ConditionalMoment {
    double lhs = 0;
    double rhs_shape = 0;
    std::uint64_t in_bucket = 0;
};
// E[Q^2 1(S_r in [w, w + width))] against E[Q^2] e^{-w^2/(2 n_r)} / sqrt(n_r); Q on P_{r+1}
ConditionalMoment conditional_moment_check(const WalkSchedule& s, const TwistFamily& fam,
                                           const std::vector<WalkTrace>& traces, const DirichletPoly& Q, int r,
                                           double w, double width = 1.0);

struct Theta {
    double t1 = 1, t2 = 1, t3 = 1, t4 = 1, t5 = 1;
    // t1 = 1, t2 = t4 = t5 = 1 - 1/p, t3 = t4 (off-diagonal) or t1 (diagonal)
    static Theta defaults(std::uint64_t p, bool diagonal = false);
    // BadTheta on t1 >= t2 > 0, t3 >= t4 > 0, t1 - t2 >= t3 - t4, t2 >= t4
    void validate() const;
};

// beta_p(p^k) truncated to `terms` terms per series. The first series takes G = t1 (k = 0) or t3 (k = 1)
// at i = 0 and t2 / t4 beyond; the second series takes t5.
double beta_at(double a, std::uint64_t p, int k, const Theta& th, int terms);
// parity 0 -> beta_p(p^0), parity 1 -> beta_p(p)
double beta_factor(const HeckeTable& t, std::uint64_t p, int parity, const Theta& th, int terms = 12);

struct BetaFactors {
    std::uint64_t p = 0;
    Theta theta;
    double beta_even = 0;       // beta_p(p^0)
    double beta_odd = 0;        // beta_p(p)
    double beta_even_tail = 0;  // beta_p(p^{2j}), j >= 1
};
BetaFactors beta_factors(const HeckeTable& t, std::uint64_t p, int terms = 12);

// multinom(2r; f) == Sum_{c <= f, |c| = r} multinom(r; c) multinom(r; f - c) over all f with 2t parts;
// returns the number of mismatches, counts cases in *checked
std::uint64_t multinomial_identity_failures(int rmax, int tmax, std::uint64_t* checked = nullptr);

// deterministic summary statistics
double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);
double correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ltail
