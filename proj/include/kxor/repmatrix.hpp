#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "kxor/polynomial.hpp"

namespace kxor {

using bigint = boost::multiprecision::cpp_int;

// multiplicity profile of a q-tuple over [0,n)
struct Histogram {
    std::vector<std::uint32_t> counts;   // length n
    bigint factorial_weight;             // prod over values of counts!
    double rescale_weight = 1.0;         // sqrt(factorial_weight)
    std::uint32_t max_count = 0;
};

Histogram histogram(std::span<const std::uint32_t> tuple, int n);

bigint factorial(unsigned v);

// sum over all tuples in [0,n)^q of the factorial weight; closed form
// n * (n+1) * ... * (n+q-1), exact
bigint total_factorial_weight(int n, int q);

// d-fold Kronecker power; entry count is nnz(s)^d, capped
SparseSymMatrix kron_power(const SparseSymMatrix& s, int d, std::uint64_t nnz_cap = 1ull << 25);

// code of the ascending rearrangement of the tuple behind `code`
std::uint64_t sorted_code(std::uint64_t code, int n, int q);

// number of distinct rearrangements of the tuple: q! / factorial_weight
bigint rearrangement_count(std::span<const std::uint32_t> tuple, int n);

// Matrix over index tuples in [0,n)^q, q = k*d/2, constant on type classes:
// the (I,J) entry depends only on the sorted rearrangements of I and J.
// Stored as one bucket per unordered pair of sorted-tuple codes.
struct TypeSymMatrix {
    int n = 0, k = 0, d = 0, q = 0;
    std::optional<std::uint32_t> trim_threshold;
    bool rescaled = false;
    struct Bucket {
        std::uint64_t rkey, ckey; // sorted-tuple codes, rkey <= ckey
        double value;
    };
    std::vector<Bucket> buckets;  // sorted by (rkey, ckey)

    std::uint64_t side() const;
    double entry(std::uint64_t row_code, std::uint64_t col_code) const;
};

// Bucket value = arithmetic mean of s_pow over the bucket's type class, which
// equals the average of s_pow over all row/column position permutations
// (each rearrangement of a tuple I is hit by the same number of permutations,
// so the permutation average collapses to the class mean). Built in one pass
// over the nonzeros with exact integer accumulation.
TypeSymMatrix type_symmetrize(const SparseSymMatrix& s_pow, int k, int d);

std::uint32_t default_trim_threshold(int n); // ceil(10 * ln n)

// drop buckets whose row or column type has any multiplicity > tau
TypeSymMatrix trim(const TypeSymMatrix& r, std::uint32_t tau);

// divide each bucket by the rescale weights of its row and column types
TypeSymMatrix rescale(const TypeSymMatrix& r);

Eigen::MatrixXd materialize_dense(const TypeSymMatrix& r, std::uint64_t side_cap = 8192);

// Precomputed index for fast repeated products: groups the n^q coordinates by
// type once, then each product is one gather per type, one pass over the
// buckets, and one broadcast. apply() and apply_serial() are bit-identical.
class TypeApplyPlan {
public:
    explicit TypeApplyPlan(const TypeSymMatrix& r, std::uint64_t dim_cap = 1ull << 26);

    std::uint64_t dim() const { return dim_; }
    void apply(std::span<const double> x, std::span<double> y) const;
    void apply_serial(std::span<const double> x, std::span<double> y) const;

private:
    void contract(std::span<const double> x, std::span<double> y, bool parallel) const;

    std::uint64_t dim_ = 0;
    std::uint32_t ntypes_ = 0;
    std::vector<std::uint32_t> slot_of_coord_;       // dim entries, type slot per coordinate
    std::vector<std::uint32_t> coord_order_;         // coordinates grouped by slot
    std::vector<std::uint32_t> group_start_;         // ntypes+1 offsets into coord_order_
    struct Link { std::uint32_t other; double value; };
    std::vector<Link> links_;                        // per-slot bucket adjacency
    std::vector<std::uint32_t> link_start_;          // ntypes+1 offsets into links_
};

// one-shot convenience wrapper around TypeApplyPlan
void apply(const TypeSymMatrix& r, std::span<const double> x, std::span<double> y);

// sqrt of the factorial weight of the tuple behind a coordinate code
double coordinate_rescale_weight(std::uint64_t code, int n, int q);

} // namespace kxor
