#pragma once

// Independent ground-truth checks, kept deliberately naive: exhaustive
// enumeration and direct definitions, no shortcuts shared with the main
// pipeline.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "kxor/instance.hpp"
#include "kxor/repmatrix.hpp"

namespace kxor::oracle {

struct MaxSatResult {
    std::uint64_t best_count = 0;
    std::uint64_t witness_code = 0; // bit i set means x[i] = -1
    Assignment witness;
    double fraction = 0.0;
};

// exhaustive scan over all 2^n assignments; ties resolved toward the smallest
// witness code. The parallel and serial versions return identical results.
MaxSatResult brute_force_max_sat(const Instance& inst, int n_cap = 24);
MaxSatResult brute_force_max_sat_serial(const Instance& inst, int n_cap = 24);

// A pattern of 2*ell index tuples of length q = k*d/2 plus one row and one
// column position permutation per tuple. Describes which matrix cells a term
// of a trace power touches.
struct PartitionScenario {
    int n = 0, k = 0, d = 0, ell = 0;
    std::vector<std::vector<std::uint32_t>> tuples;    // 2*ell tuples over [0,n)
    std::vector<std::vector<std::uint32_t>> row_perms; // 2*ell perms of {0..q-1}
    std::vector<std::vector<std::uint32_t>> col_perms;
};

struct IndexPartition {
    // elements are (j,s) encoded as j*d+s; classes sorted internally and by
    // first element; labels[e] = class of element e in first-occurrence order
    std::vector<std::vector<std::uint32_t>> classes;
    std::vector<std::uint32_t> labels;

    std::size_t size() const { return classes.size(); }
    bool all_even() const;
    bool operator==(const IndexPartition&) const = default;
};

// Elements (j,s) and (j',s') land in one class when their unordered cell
// pairs coincide: the cell of (j,s) is (row tuple j at the row-permuted
// positions of block s, col tuple j+1 at the col-permuted positions of
// block s), indices cyclic in j.
IndexPartition compute_partition(const PartitionScenario& sc);

struct OracleReport {
    bool passed = false;
    nlohmann::ordered_json detail;
};

// partition multiset over all (tuples, col_perms) is unchanged when the row
// permutations move away from the identity
OracleReport verify_count_perm_invariance(int n, int k, int d, int ell,
                                          std::uint64_t budget = 20'000'000);

// for identity row perms, each tuple collection realizes a given partition
// through at most q^(k*|Q|/2) * prod of tuple factorial weights column-perm
// choices (checked for partitions with all class sizes even)
OracleReport verify_colperm_count_bound(int n, int k, int d, int ell,
                                        std::uint64_t budget = 20'000'000);

// each even partition is realized by at most n^(k*(|Q|+d)/2) distinct tuple
// collections
OracleReport verify_valid_collection_bound(int n, int k, int d, int ell,
                                           std::uint64_t budget = 20'000'000);

// N[M] = number of partitions of a set_size-element set into exactly M
// classes, every class of even size; index 0 unused
std::vector<std::uint64_t> count_even_partitions(int set_size,
                                                 std::uint64_t budget = 5'000'000);

// N[M] <= C(set_size, M) * M^(set_size - M) for all M
OracleReport verify_even_partition_count_bound(int set_size,
                                               std::uint64_t budget = 5'000'000);

// Monte Carlo mean of tr(R^(2*ell)) over random instances against the exact
// enumerated bound: mean - 3 * stderr must not exceed it
OracleReport verify_trace_moment_bound(int n, int k, int d, int ell, double p, int trials,
                                       std::uint64_t seed, std::uint64_t budget = 20'000'000);

// quadratic form of the type-symmetric matrix (and its rescaled form against
// weighted vectors) reproduces f(x)^d on random assignments
OracleReport verify_representation(const Instance& inst, int d, int trials,
                                   std::uint64_t seed, std::uint64_t vec_cap = 1ull << 26);

// sum of prod_v mult_v(I)! over every tuple I in [n]^q, by brute enumeration
bigint enumerate_factorial_weight_sum(int n, int q, std::uint64_t budget = 100'000'000);

// the closed form n(n+1)...(n+q-1) equals the enumerated sum for all
// n <= max_n, q <= max_q; and whenever q = k*d/2 with d <= n it stays below
// (k/2+1)^q * n^q
OracleReport verify_factorial_weight_sum(int max_n, int max_q,
                                         std::uint64_t budget = 100'000'000);

} // namespace kxor::oracle
