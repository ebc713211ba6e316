// Timing comparison of the OpenMP kernels against their serial references.
// The two variants must agree exactly; this target only reports speed.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kxor/instance.hpp"
#include "kxor/oracle.hpp"
#include "kxor/polynomial.hpp"
#include "kxor/repmatrix.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <class F>
double time_ms(int reps, F&& f) {
    const auto start = clock_type::now();
    for (int r = 0; r < reps; ++r) f();
    const auto stop = clock_type::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-28s serial %10.3f ms   parallel %10.3f ms   x%.2f   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                match ? "results match" : "RESULTS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    int brute_n = 20;
    int reps = 3;
    std::uint64_t seed = 1;
    CLI::App app{"serial vs parallel kernel timings"};
    app.add_option("-n", brute_n, "variables for the brute force scan");
    app.add_option("--reps", reps, "repetitions per measurement");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    using namespace kxor;

    {
        const Instance inst = generate_random(brute_n, 4, 2e-5, seed);
        std::printf("brute force max sat: n=%d m=%llu\n", inst.n(),
                    static_cast<unsigned long long>(inst.m()));
        oracle::MaxSatResult rs, rp;
        const double ts = time_ms(reps, [&] { rs = oracle::brute_force_max_sat_serial(inst); });
        const double tp = time_ms(reps, [&] { rp = oracle::brute_force_max_sat(inst); });
        report("assignment scan", ts, tp,
               rs.best_count == rp.best_count && rs.witness_code == rp.witness_code);
    }

    {
        const Instance inst = generate_random(40, 2, 0.9, seed);
        const auto s = symmetrize(flatten(constraints_tensor(inst)));
        const auto s3 = kron_power(s, 2, 1ull << 27);
        std::vector<double> x(s3.side(), 0.0), y1(s3.side()), y2(s3.side());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 7) * 0.25 - 0.75;
        std::printf("sparse matvec: side=%llu nnz=%zu\n",
                    static_cast<unsigned long long>(s3.side()), s3.entries.size());
        const double ts = time_ms(reps, [&] { sparse_apply_serial(s3, x, y1); });
        const double tp = time_ms(reps, [&] { sparse_apply(s3, x, y2); });
        report("kron power matvec", ts, tp, y1 == y2);
    }

    {
        const Instance inst = generate_random(8, 4, 0.02, seed);
        const auto s = symmetrize(flatten(constraints_tensor(inst)));
        const auto rep_mat = rescale(type_symmetrize(kron_power(s, 2, 1ull << 27), 4, 2));
        TypeApplyPlan plan(rep_mat);
        std::vector<double> x(plan.dim()), y1(plan.dim()), y2(plan.dim());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = ((i * 2654435761u) % 97) / 96.0 - 0.5;
        std::printf("type-symmetric matvec: dim=%llu buckets=%zu\n",
                    static_cast<unsigned long long>(plan.dim()), rep_mat.buckets.size());
        const double ts = time_ms(reps, [&] { plan.apply_serial(x, y1); });
        const double tp = time_ms(reps, [&] { plan.apply(x, y2); });
        report("bucket matvec", ts, tp, y1 == y2);
    }

    return 0;
}
