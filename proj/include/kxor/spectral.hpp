#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "kxor/errors.hpp"

namespace kxor {

enum class SolverKind { dense, iterative };

struct SpectralResult {
    double norm = 0.0;           // largest absolute eigenvalue estimate
    double residual = 0.0;       // ||M v - theta v|| for the reported pair
    SolverKind method = SolverKind::dense;
    int iterations = 0;
    double tol = 0.0;
};

struct NoConvergence : Error {
    SpectralResult best;
    NoConvergence(const std::string& msg, SpectralResult b) : Error(msg), best(b) {}
};

// symmetric dense spectral norm via a full eigendecomposition; the input must
// be symmetric to about 1e-12 (relative to its largest entry)
SpectralResult spectral_norm_dense(const Eigen::MatrixXd& m);

struct LinOp {
    std::uint64_t dim = 0;
    std::function<void(std::span<const double>, std::span<double>)> mul;
};

struct IterOptions {
    double tol = 1e-8;       // converged when residual <= tol * |theta|
    int max_iter = 0;        // 0 means 10 * dim
    std::uint64_t seed = 0x6b786f72;
};

// Lanczos with full reorthogonalization on a symmetric operator. Extreme
// Ritz values of the tridiagonal estimate both ends of the spectrum at once.
// Throws NoConvergence (carrying the best estimate) if the budget runs out.
SpectralResult spectral_norm_iterative(const LinOp& op, const IterOptions& opts = {});

// tr(M^(2*ell)) for symmetric M, computed from the eigenvalues
double trace_power(const Eigen::MatrixXd& m, int ell);

} // namespace kxor
