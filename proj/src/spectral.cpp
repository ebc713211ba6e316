#include "kxor/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kxor/rng.hpp"

namespace kxor {

static void require_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw NotSymmetric("matrix is not square");
    if (m.rows() == 0) return;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) throw NotSymmetric("matrix asymmetry above tolerance");
}

SpectralResult spectral_norm_dense(const Eigen::MatrixXd& m) {
    require_symmetric(m);
    SpectralResult res;
    res.method = SolverKind::dense;
    if (m.rows() == 0) return res;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw Error("dense eigensolver failed");
    const auto& vals = es.eigenvalues();
    Eigen::Index which = 0;
    for (Eigen::Index i = 1; i < vals.size(); ++i)
        if (std::abs(vals[i]) > std::abs(vals[which])) which = i;
    res.norm = std::abs(vals[which]);
    const Eigen::VectorXd v = es.eigenvectors().col(which);
    res.residual = (m * v - vals[which] * v).norm();
    return res;
}

SpectralResult spectral_norm_iterative(const LinOp& op, const IterOptions& opts) {
    if (op.dim == 0) throw Error("operator dimension must be >= 1");
    const auto dim = static_cast<Eigen::Index>(op.dim);
    const int max_iter = opts.max_iter > 0
                             ? opts.max_iter
                             : static_cast<int>(std::min<std::uint64_t>(10 * op.dim, 1u << 20));
    const int max_steps = static_cast<int>(std::min<std::uint64_t>(max_iter, op.dim));

    rng::CounterRng g(opts.seed, rng::streams::lanczos);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = g.next_unit_open() - 0.5;
    v.normalize();

    std::vector<Eigen::VectorXd> basis; // kept for full reorthogonalization
    basis.reserve(max_steps);
    std::vector<double> alpha, beta; // beta holds the interior off-diagonals
    Eigen::VectorXd w(dim);

    SpectralResult best;
    best.method = SolverKind::iterative;
    best.tol = opts.tol;

    // extreme Ritz value of the current tridiagonal; residual of that pair is
    // bnorm * |last eigenvector component|
    auto ritz_extreme = [&](double bnorm, double* out_resid) {
        const int j = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j, j);
        for (int i = 0; i < j; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < j) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const auto& vals = es.eigenvalues();
        Eigen::Index which = 0;
        for (Eigen::Index i = 1; i < j; ++i)
            if (std::abs(vals[i]) > std::abs(vals[which])) which = i;
        *out_resid = bnorm * std::abs(es.eigenvectors()(j - 1, which));
        return std::abs(vals[which]);
    };

    for (int step = 1; step <= max_steps; ++step) {
        w.setZero();
        op.mul(std::span<const double>(v.data(), op.dim), std::span<double>(w.data(), op.dim));
        const double a = v.dot(w);
        alpha.push_back(a);
        w -= a * v;
        if (!beta.empty()) w -= beta.back() * basis.back();
        basis.push_back(v);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= b.dot(w) * b;
        const double bnorm = w.norm();

        const bool breakdown = bnorm < 1e-13 * std::max(1.0, std::abs(a));
        const bool check = step <= 10 || step % 5 == 0 || step == max_steps || breakdown;
        if (check) {
            double resid = 0.0;
            const double theta = ritz_extreme(bnorm, &resid);
            best.norm = theta;
            best.residual = resid;
            best.iterations = step;
            if (resid <= opts.tol * std::max(theta, 1e-300)) return best;
        }
        if (breakdown) return best; // invariant subspace, Ritz pairs exact there
        beta.push_back(bnorm);
        v = w / bnorm;
    }
    if (max_steps == static_cast<int>(op.dim)) return best; // full Krylov space
    throw NoConvergence("no convergence in " + std::to_string(max_steps) + " steps", best);
}

double trace_power(const Eigen::MatrixXd& m, int ell) {
    if (ell < 1) throw Error("ell must be >= 1");
    require_symmetric(m);
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("dense eigensolver failed");
    double total = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        total += std::pow(es.eigenvalues()[i], 2 * ell);
    return total;
}

} // namespace kxor
