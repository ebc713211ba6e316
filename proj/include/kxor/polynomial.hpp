#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kxor/instance.hpp"

namespace kxor {

// Order-k coefficient tensor of an instance: entry at a tuple code is the
// constraint sign there, zero elsewhere. Entries sorted by code.
struct SparseTensor {
    int n = 0;
    int k = 0;
    std::vector<std::pair<std::uint64_t, int>> entries;
};

SparseTensor constraints_tensor(const Instance& inst);

// f(x) = sum over constraints of sign * prod of x over the tuple.
// Integer valued, |f| <= m. The two overloads must agree.
std::int64_t eval_polynomial(const Instance& inst, const Assignment& x);
std::int64_t eval_polynomial(const SparseTensor& t, const Assignment& x);

// Square matrix of side n^side_exponent with dyadic entries
// value = num * 2^-denom_log2. Entries sorted by (row, col); zero entries are
// never stored. "symmetric" matrices store both (i,j) and (j,i).
struct SparseSymMatrix {
    int n = 0;
    int side_exponent = 0;
    int denom_log2 = 0;
    struct Entry {
        std::uint64_t row, col;
        std::int64_t num;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;

    std::uint64_t side() const;
    double value_at(std::uint64_t row, std::uint64_t col) const; // 0 if absent
};

// tensor laid out as an n^(k/2) x n^(k/2) matrix: row = leading half of the
// tuple code, col = trailing half
SparseSymMatrix flatten(const SparseTensor& t);

// (M + M^T) / 2, exact in the dyadic representation; cancelled entries dropped
SparseSymMatrix symmetrize(const SparseSymMatrix& ms);

bool is_symmetric(const SparseSymMatrix& ms);

Eigen::MatrixXd to_dense(const SparseSymMatrix& ms, std::uint64_t side_cap = 8192);

// y = M x (serial reference and the default parallel version; both produce
// bit-identical output)
void sparse_apply_serial(const SparseSymMatrix& ms, std::span<const double> x,
                         std::span<double> y);
void sparse_apply(const SparseSymMatrix& ms, std::span<const double> x, std::span<double> y);

// v[code] = prod of x over the tuple of that code, for all codes in [0, n^q)
std::vector<double> kron_vector(const Assignment& x, int q, std::uint64_t len_cap = 1ull << 26);

} // namespace kxor
