#include "kxor/certify.hpp"

#include <cmath>

namespace kxor {

std::string method_name(Method m) {
    switch (m) {
        case Method::rescaled: return "rescaled";
        case Method::trimmed: return "trimmed";
        case Method::plain: return "plain";
    }
    throw Error("unknown method");
}

Method method_from_name(const std::string& s) {
    if (s == "rescaled") return Method::rescaled;
    if (s == "trimmed") return Method::trimmed;
    if (s == "plain") return Method::plain;
    throw ParseError("unknown method '" + s + "'");
}

// log2 of a positive bigint, good to double precision
static double log2_bigint(const bigint& v) {
    if (v <= 0) throw Error("log of non-positive value");
    const auto bits = boost::multiprecision::msb(v); // index of highest set bit
    if (bits <= 52) return std::log2(v.convert_to<double>());
    const bigint top = v >> (bits - 52);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

Certificate certify(const Instance& inst, const CertifyOptions& opts) {
    if (inst.m() == 0) throw EmptyInstance("cannot certify an instance with no constraints");
    if (opts.d < 1) throw Error("d must be >= 1");

    const int n = inst.n(), k = inst.k(), d = opts.d;
    const int q = k * d / 2;

    SparseSymMatrix s = symmetrize(flatten(constraints_tensor(inst)));
    SparseSymMatrix s_pow = kron_power(s, d, opts.kron_cap);
    TypeSymMatrix rep = type_symmetrize(s_pow, k, d);

    bigint weight_budget;
    switch (opts.method) {
        case Method::rescaled:
            rep = rescale(rep);
            weight_budget = total_factorial_weight(n, q);
            break;
        case Method::trimmed:
            rep = trim(rep, opts.tau ? *opts.tau : default_trim_threshold(n));
            weight_budget = bigint(pow_checked(static_cast<std::uint64_t>(n), q));
            break;
        case Method::plain:
            weight_budget = bigint(pow_checked(static_cast<std::uint64_t>(n), q));
            break;
    }

    const std::uint64_t side = rep.side();
    SolverChoice solver = opts.solver;
    if (solver == SolverChoice::automatic)
        solver = side <= opts.dense_cap ? SolverChoice::dense : SolverChoice::iterative;

    SpectralResult sres;
    if (solver == SolverChoice::dense) {
        sres = spectral_norm_dense(materialize_dense(rep, opts.dense_cap));
    } else {
        TypeApplyPlan plan(rep, opts.vec_cap);
        LinOp op{plan.dim(), [&plan](std::span<const double> x, std::span<double> y) {
                     plan.apply(x, y);
                 }};
        sres = spectral_norm_iterative(op, {opts.tol, opts.max_iter, opts.solver_seed});
    }

    Certificate c;
    c.n = n;
    c.k = k;
    c.d = d;
    c.m = inst.m();
    c.method = opts.method;
    c.seed = inst.seed();
    c.solver = sres;
    c.spectral_norm = sres.norm;
    c.norm_root = d == 1 ? sres.norm : std::pow(sres.norm, 1.0 / d);
    c.hist_sum_root = std::exp2(log2_bigint(weight_budget) / d);
    c.slack = 1e-9;
    if (sres.method == SolverKind::iterative && sres.norm > 0.0)
        c.slack += sres.residual / sres.norm;
    c.hsat = 0.5 + c.norm_root * c.hist_sum_root * (1.0 + c.slack) /
                       (2.0 * static_cast<double>(inst.m()));
    if (opts.method == Method::trimmed)
        c.caveat = "trimmed matrix is not a matrix representation; bound is heuristic";
    return c;
}

nlohmann::ordered_json certificate_json(const Certificate& c) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["n"] = c.n;
    j["k"] = c.k;
    j["d"] = c.d;
    j["m"] = c.m;
    j["method"] = method_name(c.method);
    j["spectral_norm"] = c.spectral_norm;
    j["norm_root"] = c.norm_root;
    j["hist_sum_root"] = c.hist_sum_root;
    j["slack"] = c.slack;
    j["hsat"] = c.hsat;
    if (c.caveat) j["caveat"] = *c.caveat;
    j["solver"] = nlohmann::ordered_json{
        {"type", c.solver.method == SolverKind::dense ? "dense" : "iterative"},
        {"iterations", c.solver.iterations},
        {"residual", c.solver.residual},
        {"tol", c.solver.tol}};
    if (c.seed) j["seed"] = *c.seed;
    else j["seed"] = nullptr;
    return j;
}

std::optional<double> theoretical_excess_bound(int n, int k, int d, double p, double c) {
    if (n < 2) throw Error("n must be >= 2");
    if (k < 2 || k % 2 != 0) throw UnsupportedArity("k must be even and >= 2");
    if (d < 1) throw Error("d must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability("p must be in [0,1]");
    const double kh = k / 2.0;
    const double scale = p * std::pow(static_cast<double>(d), kh - 1.0) *
                         std::pow(static_cast<double>(n), kh);
    if (!(scale > 1.0)) return std::nullopt;
    const double shape = std::exp(0.75 * k) * std::pow(kh + 1.0, kh) / std::pow(kh, k / 4.0);
    return c * std::log(static_cast<double>(n)) / std::sqrt(scale) * shape;
}

} // namespace kxor
