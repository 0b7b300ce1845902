#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ltail {

// Every large constant of the barrier scheme, with the asymptotic defaults in paper()
// and the computable ones in desk(). Zero / NaN fields mean "derive from the formula".
struct EffectiveConstants {
    double s_param = 0;        // barrier width s; 0 -> 1e5/(1-2 alpha)
    double log_base = 0;       // base of iterated logs inside l_j, j >= 2; 0 -> e
    double r_const = 1e5;      // R: largest with log_{R+2} X > r_const - log(alpha)
    double trunc_exp = 1e5;    // deg A_j = (l_j - l_{j+1})^trunc_exp
    double omega_exp = 1e4;    // Omega_j <= 10 (l_j - l_{j+1})^omega_exp
    int a1_trunc = 0;          // deg A_1; 0 -> 20 ceil(loglog X)
    int trunc_k = 0;           // fixed degree for every A_j when > 0 (a1_trunc still wins for j = 1)
    int omega_bound = 0;       // fixed Omega bound when > 0
    double length_exp = 1e-3;  // twist length <= X^length_exp
    double delta = 0.5;        // exponent constant in the per-slice reference bound
    double slack = 2.0;        // c in the walk-moment bound (n_k - n_j + c/log X_j)^r
    std::optional<double> V;   // default alpha loglog X
    std::optional<double> kappa;  // default V / loglog X

    static EffectiveConstants paper();
    static EffectiveConstants desk();

    // one-line key=value rendering for report rows
    std::string describe(double alpha) const;
    double s_for(double alpha) const;
};

struct WalkSchedule {
    double X = 0;
    double alpha = 0;
    double V = 0;
    double kappa = 0;
    double s_param = 0;
    int R = 0;
    EffectiveConstants constants;
    std::vector<double> l;       // l_0 .. l_{R+1}
    std::vector<double> Xj;      // X_0 = 0, X_1 .. X_R
    std::vector<double> n;       // n_0 = 0, n_1 .. n_R
    std::vector<double> sigma2;  // index 0 unused, sigma^2_1 .. sigma^2_R
    std::vector<double> Lbar;    // index 0 unused
    std::vector<double> Ubar;

    double loglogX() const;
};

// loglog; iterated log log_k x with log_1 = log in the given base
double iterated_log(double x, int k, double base);

WalkSchedule build_schedule(double X, double alpha, const EffectiveConstants& k);

// (low, high]; P_1 = (1, X_1]
std::pair<double, double> prime_interval(const WalkSchedule& s, int j);
std::pair<double, double> barriers(const WalkSchedule& s, int r);

// degree of A_j and the Omega bound on P_j under the effective constants (saturating)
std::uint64_t truncation_degree(const WalkSchedule& s, int j);
std::uint64_t omega_bound(const WalkSchedule& s, int j);
// largest allowed index of a well-factorable twist
double length_bound(const WalkSchedule& s);

// ceil(v^2 / (2 (n_{r+1} - n_r))), at least 1
std::uint64_t markov_exponent(double v, double n_next, double n_cur);

}  // namespace ltail
