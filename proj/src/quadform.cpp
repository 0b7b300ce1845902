#include "ltail/quadform.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <fmt/format.h>
#include <random>

#include "ltail/errors.hpp"
#include "ltail/moments.hpp"

namespace ltail {

SymForm::SymForm(const Eigen::MatrixXd& upper) {
    if (upper.rows() != upper.cols()) fail(Errc::DimMismatch, "form must be square");
    m = upper.triangularView<Eigen::Upper>();
    m.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
}

SymForm SymForm::identity(int dim) { return SymForm(Eigen::MatrixXd::Identity(dim, dim)); }

SymForm SymForm::diagonal(const std::vector<double>& d) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return SymForm(m);
}

SymForm kronecker_product(const SymForm& a, const SymForm& b) {
    int na = a.dim(), nb = b.dim();
    Eigen::MatrixXd k(na * nb, na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) k.block(i * nb, j * nb, nb, nb) = a.m(i, j) * b.m;
    SymForm out;
    out.m = k;
    return out;
}

DominanceDetail dominance_detail(const SymForm& Z, const SymForm& R, double tol) {
    if (Z.dim() != R.dim()) fail(Errc::DimMismatch, fmt::format("dims {} and {}", Z.dim(), R.dim()));
    DominanceDetail out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ez(Z.m);
    out.min_eig_Z = ez.eigenvalues().minCoeff();
    if (out.min_eig_Z < -tol) fail(Errc::NotPSD, fmt::format("min eigenvalue {} of Z", out.min_eig_Z));
    // perturb a singular Z by tol I so the square root is invertible
    Eigen::VectorXd lam = ez.eigenvalues().array().max(0.0);
    if (lam.minCoeff() <= tol) {
        out.regularization = tol;
        lam.array() += tol;
    }
    Eigen::MatrixXd cinv = ez.eigenvectors() * lam.array().rsqrt().matrix().asDiagonal() * ez.eigenvectors().transpose();
    Eigen::MatrixXd B = cinv * R.m * cinv;
    B = (B + B.transpose()) / 2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(B, Eigen::EigenvaluesOnly);
    out.max_abs_eig = eb.eigenvalues().cwiseAbs().maxCoeff();
    out.dominated = out.max_abs_eig <= 1 + tol;
    return out;
}

bool check_dominance(const SymForm& Z, const SymForm& R, double tol) { return dominance_detail(Z, R, tol).dominated; }

TensorReport tensor_dominance_test(const std::vector<SymForm>& Zs, const std::vector<SymForm>& Rs, int samples,
                                   std::uint64_t seed, double tol) {
    if (Zs.size() != Rs.size() || Zs.empty()) fail(Errc::DimMismatch, "need matching nonempty factor lists");
    TensorReport rep;
    long long dim = 1;
    for (std::size_t j = 0; j < Zs.size(); ++j) {
        dim *= Zs[j].dim();
        if (dim > 4096) fail(Errc::DimensionBlowup, fmt::format("tensor dimension exceeds 4096 at factor {}", j));
        rep.per_factor = rep.per_factor && check_dominance(Zs[j], Rs[j], tol);
    }
    SymForm Z = Zs[0], R = Rs[0];
    for (std::size_t j = 1; j < Zs.size(); ++j) {
        Z = kronecker_product(Z, Zs[j]);
        R = kronecker_product(R, Rs[j]);
    }
    rep.dim = Z.dim();
    auto det = dominance_detail(Z, R, tol);
    rep.max_abs_eig = det.max_abs_eig;
    rep.regularization = det.regularization;
    rep.eigen_ok = det.dominated;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    Eigen::VectorXd a(rep.dim), f(rep.dim);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < rep.dim; ++i) {
            a[i] = g(rng);
            f[i] = g(rng);
        }
        double half = (Z(a, a) + Z(f, f)) / 2;
        // the regularized Z is what the eigen criterion certifies against
        half += det.regularization * (a.squaredNorm() + f.squaredNorm()) / 2;
        double margin = (half - std::abs(R(a, f))) / std::max(1.0, half);
        rep.worst_margin = std::min(rep.worst_margin, margin);
    }
    rep.samples_ok = samples == 0 || rep.worst_margin >= -tol;
    return rep;
}

std::pair<SymForm, SymForm> random_dominated_pair(int dim, std::mt19937_64& rng, double spectral, double floor) {
    if (dim < 1) fail(Errc::DimMismatch, "dim must be positive");
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(-spectral, spectral);
    Eigen::MatrixXd A(dim, dim), G(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            A(i, j) = g(rng);
            G(i, j) = g(rng);
        }
    Eigen::MatrixXd Z = A * A.transpose() + floor * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd lam(dim);
    for (int i = 0; i < dim; ++i) lam[i] = u(rng);
    lam[0] = (rng() & 1) ? spectral : -spectral;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd U = qr.householderQ();
    Eigen::MatrixXd B = U * lam.asDiagonal() * U.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ez(Z);
    Eigen::MatrixXd C = ez.operatorSqrt();
    Eigen::MatrixXd R = C * B * C;
    return {SymForm(Z), SymForm(R)};
}

void RankStructured::validate() const {
    auto bad = [](const char* why) { fail(Errc::BadTheta, why); };
    if (!(t1 >= t2 && t2 >= 0)) bad("need t1 >= t2 >= 0");
    if (!(t3 >= t4 && t4 >= 0)) bad("need t3 >= t4 >= 0");
    if (!(t2 >= t4)) bad("need t2 >= t4");
    if (!(t1 - t2 >= t3 - t4)) bad("need t1 - t2 >= t3 - t4");
    if (v0 < 0 || v0 >= dim) fail(Errc::IndexOutOfRange, "v0 outside the basis");
}

SymForm RankStructured::Z() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(dim, dim, t2);
    m(v0, v0) = t1;
    return SymForm(m);
}

SymForm RankStructured::R() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(dim, dim, t4);
    m(v0, v0) = t3;
    return SymForm(m);
}

RankEval rank_structured_eval(const RankStructured& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != rs.dim || y.size() != rs.dim) fail(Errc::DimMismatch, "vector length differs from dim");
    double sx = x.sum(), sy = y.sum();
    double x0 = x[rs.v0], y0 = y[rs.v0];
    RankEval e;
    e.Zxx = (rs.t1 - rs.t2) * x0 * x0 + rs.t2 * sx * sx;
    e.Zyy = (rs.t1 - rs.t2) * y0 * y0 + rs.t2 * sy * sy;
    e.Rxy = (rs.t3 - rs.t4) * x0 * y0 + rs.t4 * sx * sy;
    return e;
}

RankEval rank_structured_dense(const RankStructured& rs, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != rs.dim || y.size() != rs.dim) fail(Errc::DimMismatch, "vector length differs from dim");
    SymForm Z = rs.Z(), R = rs.R();
    return RankEval{Z(x, x), Z(y, y), R(x, y)};
}

BridgeReport delta_bridge(std::uint64_t p, int samples, std::uint64_t seed, int max_exp) {
    Theta th = Theta::defaults(p, true);
    th.validate();
    RankStructured rs{max_exp + 1, 0, th.t1, th.t2, th.t3, th.t4};
    rs.validate();
    std::mt19937_64 rng(seed ^ (p * 0x9e3779b97f4a7c15ULL));
    std::normal_distribution<double> g;
    BridgeReport rep;
    rep.min_Z = std::numeric_limits<double>::infinity();
    rep.worst_margin = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x(rs.dim), y(rs.dim);
    double pd = static_cast<double>(p);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < rs.dim; ++i) {
            double decay = std::pow(pd, -0.5 * i);
            x[i] = g(rng) * decay;
            y[i] = g(rng) * decay;
        }
        auto e = rank_structured_eval(rs, x, y);
        rep.min_Z = std::min({rep.min_Z, e.Zxx, e.Zyy});
        rep.worst_margin = std::min(rep.worst_margin, (e.Zxx + e.Zyy) / 2 - std::abs(e.Rxy));
        ++rep.samples;
    }
    return rep;
}

}  // namespace ltail
