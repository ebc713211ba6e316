#include "kxor/repmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace kxor {

Histogram histogram(std::span<const std::uint32_t> tuple, int n) {
    Histogram h;
    h.counts.assign(n, 0);
    for (auto v : tuple) {
        if (v >= static_cast<std::uint32_t>(n)) throw IndexOutOfRange("tuple coordinate");
        ++h.counts[v];
    }
    h.factorial_weight = 1;
    for (auto c : h.counts) {
        h.factorial_weight *= factorial(c);
        h.max_count = std::max(h.max_count, c);
    }
    h.rescale_weight = std::sqrt(h.factorial_weight.convert_to<double>());
    return h;
}

bigint factorial(unsigned v) {
    bigint r = 1;
    for (unsigned i = 2; i <= v; ++i) r *= i;
    return r;
}

bigint total_factorial_weight(int n, int q) {
    if (n < 1 || q < 1) throw Error("need n >= 1 and q >= 1");
    bigint r = 1;
    for (int i = 0; i < q; ++i) r *= (n + i);
    return r;
}

SparseSymMatrix kron_power(const SparseSymMatrix& s, int d, std::uint64_t nnz_cap) {
    if (d < 1) throw Error("d must be >= 1");
    if (!is_symmetric(s)) throw NotSymmetric("kron_power input must be symmetric");
    const std::uint64_t nnz = s.entries.size();
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
        if (nnz != 0 && total > nnz_cap / nnz)
            throw BudgetExceeded("kron power nonzero count exceeds cap");
        total *= nnz;
    }
    SparseSymMatrix out;
    out.n = s.n;
    out.side_exponent = s.side_exponent * d;
    out.denom_log2 = s.denom_log2 * d;
    (void)out.side(); // overflow check
    if (nnz == 0) return out;

    const std::uint64_t side = s.side();
    out.entries.reserve(total);
    std::vector<std::uint64_t> idx(d, 0);
    for (;;) {
        SparseSymMatrix::Entry e{0, 0, 1};
        for (int i = 0; i < d; ++i) {
            const auto& f = s.entries[idx[i]];
            e.row = e.row * side + f.row;
            e.col = e.col * side + f.col;
            e.num *= f.num;
        }
        out.entries.push_back(e);
        int pos = d - 1;
        while (pos >= 0 && ++idx[pos] == nnz) idx[pos--] = 0;
        if (pos < 0) break;
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return out;
}

std::uint64_t sorted_code(std::uint64_t code, int n, int q) {
    std::uint32_t digits[64];
    for (int i = q - 1; i >= 0; --i) {
        digits[i] = static_cast<std::uint32_t>(code % n);
        code /= n;
    }
    for (int i = 1; i < q; ++i) { // insertion sort, q is small
        std::uint32_t v = digits[i];
        int j = i - 1;
        while (j >= 0 && digits[j] > v) {
            digits[j + 1] = digits[j];
            --j;
        }
        digits[j + 1] = v;
    }
    std::uint64_t out = 0;
    for (int i = 0; i < q; ++i) out = out * n + digits[i];
    return out;
}

bigint rearrangement_count(std::span<const std::uint32_t> tuple, int n) {
    Histogram h = histogram(tuple, n);
    return factorial(static_cast<unsigned>(tuple.size())) / h.factorial_weight;
}

std::uint64_t TypeSymMatrix::side() const {
    return pow_checked(static_cast<std::uint64_t>(n), q);
}

double TypeSymMatrix::entry(std::uint64_t row_code, std::uint64_t col_code) const {
    std::uint64_t a = sorted_code(row_code, n, q);
    std::uint64_t b = sorted_code(col_code, n, q);
    if (a > b) std::swap(a, b);
    Bucket probe{a, b, 0.0};
    auto it = std::lower_bound(buckets.begin(), buckets.end(), probe,
                               [](const Bucket& x, const Bucket& y) {
                                   return x.rkey != y.rkey ? x.rkey < y.rkey : x.ckey < y.ckey;
                               });
    if (it == buckets.end() || it->rkey != a || it->ckey != b) return 0.0;
    return it->value;
}

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
        std::uint64_t h = p.first * 0x9e3779b97f4a7c15ULL;
        h ^= p.second + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

std::uint32_t max_multiplicity_of_key(std::uint64_t key, int n, int q) {
    std::uint32_t best = 1, run = 1;
    std::uint32_t prev = static_cast<std::uint32_t>(key % n);
    key /= n;
    for (int i = 1; i < q; ++i) { // digits of a sorted key come out reversed; runs are runs
        std::uint32_t cur = static_cast<std::uint32_t>(key % n);
        key /= n;
        if (cur == prev) {
            ++run;
            best = std::max(best, run);
        } else {
            run = 1;
            prev = cur;
        }
    }
    return best;
}

double key_factorial_weight(std::uint64_t key, int n, int q) {
    double w = 1.0;
    std::uint32_t run = 1;
    std::uint32_t prev = static_cast<std::uint32_t>(key % n);
    key /= n;
    for (int i = 1; i < q; ++i) {
        std::uint32_t cur = static_cast<std::uint32_t>(key % n);
        key /= n;
        if (cur == prev) {
            ++run;
            w *= run;
        } else {
            run = 1;
            prev = cur;
        }
    }
    return w;
}

} // namespace

TypeSymMatrix type_symmetrize(const SparseSymMatrix& s_pow, int k, int d) {
    if (k < 2 || k % 2 != 0) throw UnsupportedArity("k must be even and >= 2");
    if (d < 1) throw Error("d must be >= 1");
    const int q = k * d / 2;
    if (s_pow.side_exponent != q)
        throw Error("side exponent does not match k*d/2");
    if (!is_symmetric(s_pow)) throw NotSymmetric("type_symmetrize input must be symmetric");

    TypeSymMatrix r;
    r.n = s_pow.n;
    r.k = k;
    r.d = d;
    r.q = q;

    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::int64_t, PairHash> acc;
    acc.reserve(s_pow.entries.size());
    for (const auto& e : s_pow.entries) {
        std::uint64_t a = sorted_code(e.row, s_pow.n, q);
        std::uint64_t b = sorted_code(e.col, s_pow.n, q);
        if (a > b) std::swap(a, b);
        acc[{a, b}] += e.num;
    }

    r.buckets.reserve(acc.size());
    for (const auto& [key, num] : acc) {
        if (num == 0) continue;
        const auto [a, b] = key;
        // class size: rearrangements of a times rearrangements of b; the
        // accumulator saw both (I,J) and (J,I) entries for a != b, hence the
        // factor 2 there
        bigint cls = rearrangement_count(decode_tuple(a, r.n, q), r.n) *
                     rearrangement_count(decode_tuple(b, r.n, q), r.n);
        if (a != b) cls *= 2;
        const double value =
            std::ldexp(static_cast<double>(num), -s_pow.denom_log2) / cls.convert_to<double>();
        r.buckets.push_back({a, b, value});
    }
    std::sort(r.buckets.begin(), r.buckets.end(), [](const auto& x, const auto& y) {
        return x.rkey != y.rkey ? x.rkey < y.rkey : x.ckey < y.ckey;
    });
    return r;
}

std::uint32_t default_trim_threshold(int n) {
    if (n < 1) throw Error("n must be >= 1");
    return static_cast<std::uint32_t>(std::ceil(10.0 * std::log(static_cast<double>(n))));
}

TypeSymMatrix trim(const TypeSymMatrix& r, std::uint32_t tau) {
    if (r.trim_threshold) throw InvalidState("matrix is already trimmed");
    TypeSymMatrix out = r;
    out.trim_threshold = tau;
    out.buckets.clear();
    for (const auto& b : r.buckets)
        if (max_multiplicity_of_key(b.rkey, r.n, r.q) <= tau &&
            max_multiplicity_of_key(b.ckey, r.n, r.q) <= tau)
            out.buckets.push_back(b);
    return out;
}

TypeSymMatrix rescale(const TypeSymMatrix& r) {
    if (r.rescaled) throw InvalidState("matrix is already rescaled");
    TypeSymMatrix out = r;
    out.rescaled = true;
    for (auto& b : out.buckets) {
        const double wr = std::sqrt(key_factorial_weight(b.rkey, r.n, r.q));
        const double wc = std::sqrt(key_factorial_weight(b.ckey, r.n, r.q));
        b.value /= wr * wc;
    }
    return out;
}

namespace {

// coordinates of [0,n^q) grouped by their type slot; slots indexed by the
// sorted order of the used type keys
struct TypeGroups {
    std::uint64_t dim = 0;
    std::uint32_t ntypes = 0;
    std::vector<std::uint64_t> keys;             // sorted used keys
    std::vector<std::uint32_t> slot_of_coord;    // UINT32_MAX when unused
    std::vector<std::uint32_t> group_start;      // ntypes+1
    std::vector<std::uint32_t> coord_order;      // grouped coordinates
    std::unordered_map<std::uint64_t, std::uint32_t> slot_of_key;
};

TypeGroups build_type_groups(const TypeSymMatrix& r, std::uint64_t dim_cap) {
    TypeGroups g;
    g.dim = r.side();
    if (g.dim > dim_cap) throw BudgetExceeded("coordinate space exceeds cap");
    for (const auto& b : r.buckets) {
        g.keys.push_back(b.rkey);
        g.keys.push_back(b.ckey);
    }
    std::sort(g.keys.begin(), g.keys.end());
    g.keys.erase(std::unique(g.keys.begin(), g.keys.end()), g.keys.end());
    g.ntypes = static_cast<std::uint32_t>(g.keys.size());
    g.slot_of_key.reserve(g.ntypes * 2);
    for (std::uint32_t s = 0; s < g.ntypes; ++s) g.slot_of_key.emplace(g.keys[s], s);

    g.slot_of_coord.assign(g.dim, UINT32_MAX);
    std::vector<std::uint32_t> count(g.ntypes, 0);
    for (std::uint64_t c = 0; c < g.dim; ++c) {
        auto it = g.slot_of_key.find(sorted_code(c, r.n, r.q));
        if (it == g.slot_of_key.end()) continue;
        g.slot_of_coord[c] = it->second;
        ++count[it->second];
    }
    g.group_start.assign(g.ntypes + 1, 0);
    for (std::uint32_t s = 0; s < g.ntypes; ++s) g.group_start[s + 1] = g.group_start[s] + count[s];
    g.coord_order.resize(g.group_start[g.ntypes]);
    std::vector<std::uint32_t> fill(g.group_start.begin(), g.group_start.end() - 1);
    for (std::uint64_t c = 0; c < g.dim; ++c) {
        std::uint32_t s = g.slot_of_coord[c];
        if (s != UINT32_MAX) g.coord_order[fill[s]++] = static_cast<std::uint32_t>(c);
    }
    return g;
}

} // namespace

Eigen::MatrixXd materialize_dense(const TypeSymMatrix& r, std::uint64_t side_cap) {
    const std::uint64_t side = r.side();
    if (side > side_cap) throw DenseTooLarge("matrix side " + std::to_string(side) +
                                             " exceeds cap " + std::to_string(side_cap));
    TypeGroups g = build_type_groups(r, side_cap);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(side, side);
    for (const auto& b : r.buckets) {
        const std::uint32_t sa = g.slot_of_key.at(b.rkey);
        const std::uint32_t sb = g.slot_of_key.at(b.ckey);
        for (std::uint32_t ia = g.group_start[sa]; ia < g.group_start[sa + 1]; ++ia)
            for (std::uint32_t ib = g.group_start[sb]; ib < g.group_start[sb + 1]; ++ib) {
                const auto i = static_cast<Eigen::Index>(g.coord_order[ia]);
                const auto j = static_cast<Eigen::Index>(g.coord_order[ib]);
                m(i, j) = b.value;
                m(j, i) = b.value;
            }
    }
    return m;
}

TypeApplyPlan::TypeApplyPlan(const TypeSymMatrix& r, std::uint64_t dim_cap) {
    TypeGroups g = build_type_groups(r, dim_cap);
    dim_ = g.dim;
    ntypes_ = g.ntypes;
    slot_of_coord_ = std::move(g.slot_of_coord);
    coord_order_ = std::move(g.coord_order);
    group_start_ = std::move(g.group_start);

    std::vector<std::uint32_t> count(ntypes_, 0);
    for (const auto& b : r.buckets) {
        ++count[g.slot_of_key.at(b.rkey)];
        if (b.rkey != b.ckey) ++count[g.slot_of_key.at(b.ckey)];
    }
    link_start_.assign(ntypes_ + 1, 0);
    for (std::uint32_t s = 0; s < ntypes_; ++s) link_start_[s + 1] = link_start_[s] + count[s];
    links_.resize(link_start_[ntypes_]);
    std::vector<std::uint32_t> fill(link_start_.begin(), link_start_.end() - 1);
    for (const auto& b : r.buckets) {
        const std::uint32_t sa = g.slot_of_key.at(b.rkey);
        const std::uint32_t sb = g.slot_of_key.at(b.ckey);
        links_[fill[sa]++] = {sb, b.value};
        if (sa != sb) links_[fill[sb]++] = {sa, b.value};
    }
}

void TypeApplyPlan::contract(std::span<const double> x, std::span<double> y,
                             bool parallel) const {
    if (x.size() != dim_ || y.size() != dim_) throw IndexOutOfRange("vector length");
    const std::int64_t nt = ntypes_;
    std::vector<double> sums(ntypes_, 0.0), rowval(ntypes_, 0.0);
    // per-slot loops run in a fixed serial order, so thread count does not
    // change any floating point result
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t s = 0; s < nt; ++s) {
        double total = 0.0;
        for (std::uint32_t i = group_start_[s]; i < group_start_[s + 1]; ++i)
            total += x[coord_order_[i]];
        sums[s] = total;
    }
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t s = 0; s < nt; ++s) {
        double total = 0.0;
        for (std::uint32_t i = link_start_[s]; i < link_start_[s + 1]; ++i)
            total += links_[i].value * sums[links_[i].other];
        rowval[s] = total;
    }
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(dim_); ++c) {
        const std::uint32_t s = slot_of_coord_[c];
        y[c] = (s == UINT32_MAX) ? 0.0 : rowval[s];
    }
}

void TypeApplyPlan::apply(std::span<const double> x, std::span<double> y) const {
    contract(x, y, true);
}

void TypeApplyPlan::apply_serial(std::span<const double> x, std::span<double> y) const {
    contract(x, y, false);
}

void apply(const TypeSymMatrix& r, std::span<const double> x, std::span<double> y) {
    TypeApplyPlan(r).apply(x, y);
}

double coordinate_rescale_weight(std::uint64_t code, int n, int q) {
    return std::sqrt(key_factorial_weight(sorted_code(code, n, q), n, q));
}

} // namespace kxor
