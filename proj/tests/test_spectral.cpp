#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "kxor/spectral.hpp"

using namespace kxor;

namespace {

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
    std::srand(seed);
    const Eigen::MatrixXd b = Eigen::MatrixXd::Random(n, n);
    return 0.5 * (b + b.transpose());
}

LinOp dense_op(const Eigen::MatrixXd& m) {
    LinOp op;
    op.dim = static_cast<std::uint64_t>(m.rows());
    op.mul = [&m](std::span<const double> x, std::span<double> y) {
        Eigen::Map<const Eigen::VectorXd> xv(x.data(), m.rows());
        Eigen::Map<Eigen::VectorXd> yv(y.data(), m.rows());
        yv = m * xv;
    };
    return op;
}

} // namespace

TEST_CASE("dense norm on tiny matrices") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    const SpectralResult r = spectral_norm_dense(m);
    CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.residual <= 1e-10);
    CHECK(r.method == SolverKind::dense);

    Eigen::MatrixXd diag(2, 2);
    diag << 2, 0, 0, -3;
    CHECK(spectral_norm_dense(diag).norm == doctest::Approx(3.0)); // sign dropped

    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    CHECK(spectral_norm_dense(zero).norm == 0.0);
}

TEST_CASE("dense norm rejects asymmetry") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(spectral_norm_dense(m), NotSymmetric);
}

TEST_CASE("iterative matches dense") {
    const Eigen::MatrixXd m = random_symmetric(40, 1);
    const double want = spectral_norm_dense(m).norm;
    const SpectralResult r = spectral_norm_iterative(dense_op(m), {1e-10, 0, 123});
    CHECK(r.method == SolverKind::iterative);
    CHECK(r.norm == doctest::Approx(want).epsilon(1e-8));
    CHECK(r.residual <= 1e-8 * want);
    CHECK(r.iterations >= 2);
    CHECK(r.iterations <= 40);
}

TEST_CASE("iterative on a diagonal operator") {
    const std::vector<double> diag{3, -5, 2, 0, 1, -1};
    LinOp op;
    op.dim = diag.size();
    op.mul = [&diag](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < diag.size(); ++i) y[i] = diag[i] * x[i];
    };
    const SpectralResult r = spectral_norm_iterative(op);
    CHECK(r.norm == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("iterative is deterministic") {
    const Eigen::MatrixXd m = random_symmetric(30, 2);
    const SpectralResult a = spectral_norm_iterative(dense_op(m), {1e-9, 0, 77});
    const SpectralResult b = spectral_norm_iterative(dense_op(m), {1e-9, 0, 77});
    CHECK(a.norm == b.norm);
    CHECK(a.residual == b.residual);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("iterative reports non-convergence with its best estimate") {
    const Eigen::MatrixXd m = random_symmetric(40, 3);
    bool threw = false;
    try {
        spectral_norm_iterative(dense_op(m), {1e-14, 3, 5});
    } catch (const NoConvergence& e) {
        threw = true;
        CHECK(e.best.iterations == 3);
        CHECK(e.best.norm > 0.0);
        CHECK(e.best.residual > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("a full Krylov sweep is exact") {
    const Eigen::MatrixXd m = random_symmetric(25, 4);
    const double want = spectral_norm_dense(m).norm;
    const SpectralResult r = spectral_norm_iterative(dense_op(m), {0.0, 25, 9});
    CHECK(r.norm == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("trace_power") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 0.5, 0.5, 0;
    CHECK(trace_power(m, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(trace_power(m, 2) == doctest::Approx(0.125).epsilon(1e-14));

    const Eigen::MatrixXd r = random_symmetric(12, 5);
    const double norm = spectral_norm_dense(r).norm;
    for (int ell : {1, 2, 3}) {
        const double tr = trace_power(r, ell);
        CHECK(std::pow(norm, 2 * ell) <= tr * (1 + 1e-12));
        CHECK(tr <= 12.0 * std::pow(norm, 2 * ell) * (1 + 1e-12));
    }
}
