#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "kxor/instance.hpp"
#include "kxor/repmatrix.hpp"
#include "kxor/spectral.hpp"

namespace kxor {

enum class Method { rescaled, trimmed, plain };

std::string method_name(Method m);
Method method_from_name(const std::string& s);

enum class SolverChoice { automatic, dense, iterative };

struct CertifyOptions {
    Method method = Method::rescaled;
    int d = 1;
    std::optional<std::uint32_t> tau; // trimmed only; default ceil(10 ln n)
    SolverChoice solver = SolverChoice::automatic;
    std::uint64_t dense_cap = 8192;
    std::uint64_t kron_cap = 1ull << 25;
    std::uint64_t vec_cap = 1ull << 26;
    double tol = 1e-8;
    int max_iter = 0; // 0 means 10 * dim
    std::uint64_t solver_seed = 0x6b786f72;
};

// One-sided bound on how far any assignment's satisfied fraction can sit from
// one half:  |sat(x) - 1/2| <= hsat - 1/2  for every x.  With the trimmed
// method the quadratic form identity is lost, so the bound is heuristic and
// the certificate carries a caveat.
struct Certificate {
    int n = 0, k = 0, d = 1;
    std::uint64_t m = 0;
    Method method = Method::rescaled;
    double spectral_norm = 0.0;
    double norm_root = 0.0;     // spectral_norm^(1/d)
    double hist_sum_root = 0.0; // weight budget^(1/d)
    double slack = 0.0;
    double hsat = 0.5;
    SpectralResult solver;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> caveat;
};

Certificate certify(const Instance& inst, const CertifyOptions& opts = {});

nlohmann::ordered_json certificate_json(const Certificate& c);

// Model-level bound on hsat - 1/2 with an unspecified leading constant c;
// requires p * d^(k/2-1) * n^(k/2) > 1, otherwise not applicable (nullopt).
std::optional<double> theoretical_excess_bound(int n, int k, int d, double p, double c);

} // namespace kxor
