#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "kxor/oracle.hpp"
#include "kxor/polynomial.hpp"

using namespace kxor;
using namespace kxor::oracle;

TEST_CASE("brute force on hand instances") {
    const Instance one(2, 2, {{{0, 1}, 1}});
    const MaxSatResult r = brute_force_max_sat(one);
    CHECK(r.best_count == 1);
    CHECK(r.fraction == 1.0);
    CHECK(r.witness_code == 0); // ties break toward all +1
    CHECK(r.witness == Assignment{1, 1});

    const Instance never(2, 2, {{{0, 0}, -1}});
    CHECK(brute_force_max_sat(never).best_count == 0);

    const Instance half(2, 2, {{{0, 0}, -1}, {{1, 1}, 1}});
    const MaxSatResult h = brute_force_max_sat(half);
    CHECK(h.best_count == 1);
    CHECK(h.witness_code == 0);
}

TEST_CASE("brute force against an independent scan") {
    const Instance inst = generate_random(8, 2, 0.3, 21);
    REQUIRE(inst.m() > 5);
    const MaxSatResult r = brute_force_max_sat(inst);
    CHECK(sat_count(inst, r.witness) == r.best_count);
    std::uint64_t best = 0;
    for (std::uint64_t code = 0; code < 256; ++code) {
        Assignment x(8, 1);
        for (int i = 0; i < 8; ++i)
            if (code & (1ull << i)) x[i] = -1;
        best = std::max(best, sat_count(inst, x));
    }
    CHECK(r.best_count == best);
    // counting identity: the best count matches the polynomial maximum
    std::int64_t fmax = INT64_MIN;
    for (std::uint64_t code = 0; code < 256; ++code) {
        Assignment x(8, 1);
        for (int i = 0; i < 8; ++i)
            if (code & (1ull << i)) x[i] = -1;
        fmax = std::max(fmax, eval_polynomial(inst, x));
    }
    CHECK(2 * static_cast<std::int64_t>(best) ==
          static_cast<std::int64_t>(inst.m()) + fmax);
}

TEST_CASE("parallel and serial brute force agree") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        const Instance inst = generate_random(11, 4, 2e-3, seed);
        if (inst.m() == 0) continue;
        const MaxSatResult a = brute_force_max_sat(inst);
        const MaxSatResult b = brute_force_max_sat_serial(inst);
        CHECK(a.best_count == b.best_count);
        CHECK(a.witness_code == b.witness_code);
    }
}

TEST_CASE("brute force guards") {
    CHECK_THROWS_AS(brute_force_max_sat(Instance(2, 2, {})), EmptyInstance);
    const Instance big(25, 2, {{{0, 1}, 1}});
    CHECK_THROWS_AS(brute_force_max_sat(big), BudgetExceeded);
    CHECK_NOTHROW(brute_force_max_sat(big, 25));
}

TEST_CASE("compute_partition groups equal unordered cells") {
    PartitionScenario sc;
    sc.n = 2;
    sc.k = 2;
    sc.d = 2;
    sc.ell = 1;
    sc.tuples = {{0, 1}, {0, 1}};
    sc.row_perms = {{0, 1}, {0, 1}};
    sc.col_perms = {{1, 0}, {0, 1}};
    const IndexPartition part = compute_partition(sc);
    CHECK(part.labels == std::vector<std::uint32_t>{0, 0, 1, 2});
    CHECK(part.size() == 3);
    CHECK(part.classes[0] == std::vector<std::uint32_t>{0, 1});
    CHECK_FALSE(part.all_even());
}

TEST_CASE("compute_partition on a cycle of length four") {
    PartitionScenario sc;
    sc.n = 2;
    sc.k = 2;
    sc.d = 1;
    sc.ell = 2;
    sc.tuples = {{0}, {1}, {0}, {1}};
    sc.row_perms.assign(4, {0});
    sc.col_perms.assign(4, {0});
    const IndexPartition part = compute_partition(sc);
    CHECK(part.size() == 1);
    CHECK(part.labels == std::vector<std::uint32_t>{0, 0, 0, 0});
    CHECK(part.all_even());
}

TEST_CASE("compute_partition validation") {
    PartitionScenario sc;
    sc.n = 2;
    sc.k = 2;
    sc.d = 1;
    sc.ell = 1;
    sc.tuples = {{0}, {1}};
    sc.row_perms = {{0}, {0}};
    sc.col_perms = {{0}};
    CHECK_THROWS_AS(compute_partition(sc), Error); // missing a col perm
    sc.col_perms = {{0}, {1}};                     // not a permutation of {0}
    CHECK_THROWS_AS(compute_partition(sc), Error);
    sc.col_perms = {{0}, {0}};
    sc.tuples = {{0}, {2}};
    CHECK_THROWS_AS(compute_partition(sc), IndexOutOfRange);
}

TEST_CASE("counting suite at exhaustive sizes") {
    const int combos[][4] = {
        {2, 2, 1, 1}, {2, 2, 1, 2}, {2, 4, 1, 1}, {3, 2, 1, 1}};
    for (const auto& c : combos) {
        CAPTURE(c[0]);
        CAPTURE(c[1]);
        CAPTURE(c[3]);
        CHECK(verify_count_perm_invariance(c[0], c[1], c[2], c[3]).passed);
        CHECK(verify_colperm_count_bound(c[0], c[1], c[2], c[3]).passed);
        CHECK(verify_valid_collection_bound(c[0], c[1], c[2], c[3]).passed);
    }
    const auto rep = verify_count_perm_invariance(2, 2, 1, 1);
    CHECK(rep.detail["row_perm_collections"] == 1); // q = 1 has one permutation
    CHECK(rep.detail["mismatches"] == 0);
}

TEST_CASE("counting suite budget guards") {
    CHECK_THROWS_AS(verify_count_perm_invariance(3, 4, 1, 1, 10), BudgetExceeded);
    CHECK_THROWS_AS(verify_colperm_count_bound(2, 2, 1, 9, 1u << 20), BudgetExceeded);
}

TEST_CASE("even partition counts match the literature") {
    const auto c4 = count_even_partitions(4);
    CHECK(c4 == std::vector<std::uint64_t>{0, 1, 3, 0, 0});
    const auto c6 = count_even_partitions(6);
    CHECK(c6 == std::vector<std::uint64_t>{0, 1, 15, 15, 0, 0, 0});
    // totals over all class counts: 1, 4, 31, 379, 6556 for sizes 2,4,6,8,10
    const std::uint64_t totals[] = {1, 4, 31, 379, 6556};
    for (int i = 0; i < 5; ++i) {
        const auto c = count_even_partitions(2 * (i + 1));
        std::uint64_t sum = 0;
        for (auto v : c) sum += v;
        CHECK(sum == totals[i]);
    }
    // odd set sizes admit none
    for (int s : {1, 3, 5, 7}) {
        const auto c = count_even_partitions(s);
        for (auto v : c) CHECK(v == 0);
    }
    CHECK_THROWS_AS(count_even_partitions(12, 100), BudgetExceeded);
}

TEST_CASE("even partition count bound") {
    for (int s = 2; s <= 10; ++s) CHECK(verify_even_partition_count_bound(s).passed);
}

TEST_CASE("factorial weight sum enumeration") {
    CHECK(enumerate_factorial_weight_sum(2, 2) == 6);
    CHECK(enumerate_factorial_weight_sum(3, 2) == 12);
    CHECK(enumerate_factorial_weight_sum(1, 4) == 24);
    const auto rep = verify_factorial_weight_sum(4, 4);
    CHECK(rep.passed);
    CHECK(rep.detail["mismatches"] == 0);
    CHECK(rep.detail["bound_violations"] == 0);
    CHECK_THROWS_AS(enumerate_factorial_weight_sum(10, 10, 1000), BudgetExceeded);
}

TEST_CASE("trace moment bound with hand-computed sides") {
    // q = 1: every tuple pair realizes the single even partition, so the
    // enumerated side is (sum of weights)^2 * p
    const auto a = verify_trace_moment_bound(2, 2, 1, 1, 0.5, 500, 11);
    CHECK(a.passed);
    CHECK(a.detail["exact_bound"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    const double mean_a = a.detail["mc_mean"].get<double>();
    CHECK(mean_a == doctest::Approx(1.5).epsilon(0.12)); // E tr = 3p

    const auto b = verify_trace_moment_bound(3, 2, 1, 1, 1.0 / 3.0, 500, 12);
    CHECK(b.passed);
    CHECK(b.detail["exact_bound"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(b.detail["mc_mean"].get<double>() == doctest::Approx(2.0).epsilon(0.12)); // 6p

    const auto c = verify_trace_moment_bound(2, 4, 1, 1, 0.25, 500, 13);
    CHECK(c.passed);
    CHECK(c.detail["exact_bound"].get<double>() == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(c.detail["mc_mean"].get<double>() == doctest::Approx(1.5).epsilon(0.15)); // 6p
}

TEST_CASE("representation identities on random instances") {
    const Instance a = generate_random(5, 2, 0.3, 1);
    REQUIRE(a.m() > 2);
    CHECK(verify_representation(a, 1, 30, 5).passed);
    CHECK(verify_representation(a, 2, 30, 5).passed);
    const Instance b = generate_random(3, 4, 0.1, 2);
    REQUIRE(b.m() > 0);
    const auto rep = verify_representation(b, 1, 30, 5);
    CHECK(rep.passed);
    CHECK(rep.detail["max_rel_err_plain"].get<double>() <= 1e-9);
    CHECK(rep.detail["max_rel_err_rescaled"].get<double>() <= 1e-9);
}
