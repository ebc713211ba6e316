#include "kxor/polynomial.hpp"

#include <algorithm>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kxor {

SparseTensor constraints_tensor(const Instance& inst) {
    SparseTensor t;
    t.n = inst.n();
    t.k = inst.k();
    t.entries.reserve(inst.m());
    for (const auto& c : inst.constraints())
        t.entries.emplace_back(encode_tuple(c.tuple, inst.n()), c.sign);
    std::sort(t.entries.begin(), t.entries.end());
    return t;
}

std::int64_t eval_polynomial(const Instance& inst, const Assignment& x) {
    check_assignment(inst, x);
    std::int64_t f = 0;
    for (const auto& c : inst.constraints()) {
        int prod = c.sign;
        for (auto v : c.tuple) prod *= x[v];
        f += prod;
    }
    return f;
}

std::int64_t eval_polynomial(const SparseTensor& t, const Assignment& x) {
    if (static_cast<int>(x.size()) != t.n) throw IndexOutOfRange("assignment length");
    std::int64_t f = 0;
    for (const auto& [code, sign] : t.entries) {
        int prod = sign;
        std::uint64_t c = code;
        for (int i = 0; i < t.k; ++i) {
            prod *= x[c % t.n];
            c /= t.n;
        }
        f += prod;
    }
    return f;
}

std::uint64_t SparseSymMatrix::side() const {
    return pow_checked(static_cast<std::uint64_t>(n), side_exponent);
}

double SparseSymMatrix::value_at(std::uint64_t row, std::uint64_t col) const {
    Entry probe{row, col, 0};
    auto it = std::lower_bound(entries.begin(), entries.end(), probe,
                               [](const Entry& a, const Entry& b) {
                                   return a.row != b.row ? a.row < b.row : a.col < b.col;
                               });
    if (it == entries.end() || it->row != row || it->col != col) return 0.0;
    return std::ldexp(static_cast<double>(it->num), -denom_log2);
}

SparseSymMatrix flatten(const SparseTensor& t) {
    SparseSymMatrix ms;
    ms.n = t.n;
    ms.side_exponent = t.k / 2;
    ms.denom_log2 = 0;
    const std::uint64_t half = pow_checked(static_cast<std::uint64_t>(t.n), t.k / 2);
    ms.entries.reserve(t.entries.size());
    for (const auto& [code, sign] : t.entries)
        ms.entries.push_back({code / half, code % half, sign});
    std::sort(ms.entries.begin(), ms.entries.end(), [](const auto& a, const auto& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return ms;
}

SparseSymMatrix symmetrize(const SparseSymMatrix& ms) {
    // exact: out(i,j) = in(i,j) + in(j,i) over the doubled denominator
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::int64_t> acc;
    for (const auto& e : ms.entries) {
        acc[{e.row, e.col}] += e.num;
        acc[{e.col, e.row}] += e.num;
    }
    SparseSymMatrix out;
    out.n = ms.n;
    out.side_exponent = ms.side_exponent;
    out.denom_log2 = ms.denom_log2 + 1;
    for (const auto& [rc, num] : acc)
        if (num != 0) out.entries.push_back({rc.first, rc.second, num});
    return out;
}

bool is_symmetric(const SparseSymMatrix& ms) {
    for (const auto& e : ms.entries) {
        SparseSymMatrix::Entry probe{e.col, e.row, 0};
        auto it = std::lower_bound(ms.entries.begin(), ms.entries.end(), probe,
                                   [](const auto& a, const auto& b) {
                                       return a.row != b.row ? a.row < b.row : a.col < b.col;
                                   });
        if (it == ms.entries.end() || it->row != e.col || it->col != e.row ||
            it->num != e.num)
            return false;
    }
    return true;
}

Eigen::MatrixXd to_dense(const SparseSymMatrix& ms, std::uint64_t side_cap) {
    const std::uint64_t side = ms.side();
    if (side > side_cap) throw DenseTooLarge("matrix side " + std::to_string(side) +
                                             " exceeds cap " + std::to_string(side_cap));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(side, side);
    for (const auto& e : ms.entries)
        d(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) =
            std::ldexp(static_cast<double>(e.num), -ms.denom_log2);
    return d;
}

void sparse_apply_serial(const SparseSymMatrix& ms, std::span<const double> x,
                         std::span<double> y) {
    const std::uint64_t side = ms.side();
    if (x.size() != side || y.size() != side) throw IndexOutOfRange("vector length");
    std::fill(y.begin(), y.end(), 0.0);
    const double scale = std::ldexp(1.0, -ms.denom_log2);
    for (const auto& e : ms.entries)
        y[e.row] += scale * static_cast<double>(e.num) * x[e.col];
}

void sparse_apply(const SparseSymMatrix& ms, std::span<const double> x, std::span<double> y) {
    const std::uint64_t side = ms.side();
    if (x.size() != side || y.size() != side) throw IndexOutOfRange("vector length");
    std::fill(y.begin(), y.end(), 0.0);
    const double scale = std::ldexp(1.0, -ms.denom_log2);
    const std::int64_t nnz = static_cast<std::int64_t>(ms.entries.size());
    // Entries are sorted by row, so chunking on row boundaries gives each
    // thread a disjoint slice of y and the per-row summation order of the
    // serial loop is preserved exactly.
#pragma omp parallel
    {
#ifdef _OPENMP
        const int nt = omp_get_num_threads();
        const int id = omp_get_thread_num();
#else
        const int nt = 1, id = 0;
#endif
        std::int64_t lo = nnz * id / nt, hi = nnz * (id + 1) / nt;
        while (lo > 0 && lo < nnz && ms.entries[lo].row == ms.entries[lo - 1].row) ++lo;
        while (hi > 0 && hi < nnz && ms.entries[hi].row == ms.entries[hi - 1].row) ++hi;
        for (std::int64_t i = lo; i < hi; ++i) {
            const auto& e = ms.entries[i];
            y[e.row] += scale * static_cast<double>(e.num) * x[e.col];
        }
    }
}

std::vector<double> kron_vector(const Assignment& x, int q, std::uint64_t len_cap) {
    const int n = static_cast<int>(x.size());
    for (int v : x)
        if (v != 1 && v != -1) throw BadSign("assignment values must be +1 or -1");
    const std::uint64_t len = pow_checked(static_cast<std::uint64_t>(n), q);
    if (len > len_cap) throw BudgetExceeded("kron vector length exceeds cap");
    std::vector<double> v(len);
    for (std::uint64_t code = 0; code < len; ++code) {
        int prod = 1;
        std::uint64_t c = code;
        for (int i = 0; i < q; ++i) {
            prod *= x[c % n];
            c /= n;
        }
        v[code] = prod;
    }
    return v;
}

} // namespace kxor
