#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ltail {

struct SymForm {
    Eigen::MatrixXd m;

    SymForm() = default;
    // symmetric by construction: the lower triangle mirrors the upper one
    explicit SymForm(const Eigen::MatrixXd& upper);
    static SymForm identity(int dim);
    static SymForm diagonal(const std::vector<double>& d);

    int dim() const { return static_cast<int>(m.rows()); }
    double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const { return x.dot(m * y); }
};

SymForm kronecker_product(const SymForm& a, const SymForm& b);

struct DominanceDetail {
    bool dominated = false;
    double min_eig_Z = 0;
    double max_abs_eig = 0;  // spectral radius of C^{-1} R C^{-1}
    double regularization = 0;
};
// NotPSD when min eig(Z) < -tol; DimMismatch
DominanceDetail dominance_detail(const SymForm& Z, const SymForm& R, double tol = 1e-9);
bool check_dominance(const SymForm& Z, const SymForm& R, double tol = 1e-9);

struct TensorReport {
    int dim = 0;
    bool per_factor = true;
    bool eigen_ok = false;
    bool samples_ok = false;
    double max_abs_eig = 0;
    double worst_margin = 0;  // min over samples of (Z(a,a) + Z(f,f))/2 - |R(a,f)|, relative to the scale
    double regularization = 0;

    bool holds() const { return eigen_ok && samples_ok; }
};
// DimensionBlowup when the tensor dimension exceeds 4096
TensorReport tensor_dominance_test(const std::vector<SymForm>& Zs, const std::vector<SymForm>& Rs, int samples,
                                   std::uint64_t seed, double tol = 1e-9);

// Z = A A^T + floor I, R = C B C with C = sqrt(Z) and B = U diag(lambda) U^T, lambda in [-spectral, spectral]
// with one eigenvalue pinned at +-spectral; dominated iff spectral <= 1
std::pair<SymForm, SymForm> random_dominated_pair(int dim, std::mt19937_64& rng, double spectral = 1.0,
                                                  double floor = 0.0);

struct RankStructured {
    int dim = 1;
    int v0 = 0;
    double t1 = 1, t2 = 0, t3 = 1, t4 = 0;

    // BadTheta on t1 >= t2 >= 0, t3 >= t4 >= 0, t2 >= t4, t1 - t2 >= t3 - t4
    void validate() const;
    SymForm Z() const;
    SymForm R() const;
};

struct RankEval {
    double Zxx = 0, Zyy = 0, Rxy = 0;
};
RankEval rank_structured_eval(const RankStructured& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
RankEval rank_structured_dense(const RankStructured& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct BridgeReport {
    std::uint64_t samples = 0;
    double min_Z = 0;           // smallest Delta(q1, q1, 1)
    double worst_margin = 0;    // min of (Z(x,x) + Z(y,y))/2 - |R(x,y)|
};
// prime-local Delta forms with default theta at p on coefficient vectors over p^0..p^max_exp
BridgeReport delta_bridge(std::uint64_t p, int samples, std::uint64_t seed, int max_exp = 8);

}  // namespace ltail
