#include "kxor/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "kxor/certify.hpp"
#include "kxor/rng.hpp"
#include "kxor/spectral.hpp"

namespace kxor::oracle {

// ---------------------------------------------------------------- max sat

namespace {

struct ParityTables {
    std::vector<std::uint64_t> mask;  // variables with odd multiplicity
    std::vector<int> want_odd;        // 1 when the sign is -1
};

ParityTables parity_tables(const Instance& inst) {
    ParityTables t;
    t.mask.reserve(inst.m());
    t.want_odd.reserve(inst.m());
    for (const auto& c : inst.constraints()) {
        std::uint64_t mask = 0;
        for (auto v : c.tuple) mask ^= (1ull << v);
        t.mask.push_back(mask);
        t.want_odd.push_back(c.sign < 0 ? 1 : 0);
    }
    return t;
}

std::uint64_t count_satisfied(const ParityTables& t, std::uint64_t code) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < t.mask.size(); ++i)
        count += (static_cast<int>(std::popcount(code & t.mask[i]) & 1) == t.want_odd[i]);
    return count;
}

MaxSatResult finish(const Instance& inst, std::uint64_t best, std::uint64_t code) {
    MaxSatResult r;
    r.best_count = best;
    r.witness_code = code;
    r.witness.assign(inst.n(), +1);
    for (int i = 0; i < inst.n(); ++i)
        if (code & (1ull << i)) r.witness[i] = -1;
    r.fraction = static_cast<double>(best) / static_cast<double>(inst.m());
    return r;
}

void max_sat_guard(const Instance& inst, int n_cap) {
    if (inst.m() == 0) throw EmptyInstance("nothing to maximize");
    if (inst.n() > n_cap || inst.n() > 62)
        throw BudgetExceeded("brute force over 2^" + std::to_string(inst.n()) +
                             " assignments exceeds the cap");
}

} // namespace

MaxSatResult brute_force_max_sat_serial(const Instance& inst, int n_cap) {
    max_sat_guard(inst, n_cap);
    const ParityTables t = parity_tables(inst);
    const std::uint64_t total = 1ull << inst.n();
    std::uint64_t best = 0, best_code = 0;
    for (std::uint64_t code = 0; code < total; ++code) {
        const std::uint64_t c = count_satisfied(t, code);
        if (c > best) {
            best = c;
            best_code = code;
        }
    }
    return finish(inst, best, best_code);
}

MaxSatResult brute_force_max_sat(const Instance& inst, int n_cap) {
    max_sat_guard(inst, n_cap);
    const ParityTables t = parity_tables(inst);
    const std::uint64_t total = 1ull << inst.n();
    // fixed-size blocks reduced in ascending order: result does not depend on
    // the thread count
    const std::uint64_t block = 1ull << 14;
    const std::int64_t nblocks = static_cast<std::int64_t>((total + block - 1) / block);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> per_block(nblocks, {0, 0});
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * block;
        const std::uint64_t hi = std::min(total, lo + block);
        std::uint64_t best = 0, best_code = lo;
        for (std::uint64_t code = lo; code < hi; ++code) {
            const std::uint64_t c = count_satisfied(t, code);
            if (c > best) {
                best = c;
                best_code = code;
            }
        }
        per_block[b] = {best, best_code};
    }
    std::uint64_t best = 0, best_code = 0;
    for (const auto& [c, code] : per_block)
        if (c > best) {
            best = c;
            best_code = code;
        }
    return finish(inst, best, best_code);
}

// ----------------------------------------------------------- partitions

bool IndexPartition::all_even() const {
    for (const auto& c : classes)
        if (c.size() % 2 != 0) return false;
    return true;
}

namespace {

bool is_permutation_of_q(const std::vector<std::uint32_t>& p, int q) {
    if (static_cast<int>(p.size()) != q) return false;
    std::vector<bool> seen(q, false);
    for (auto v : p) {
        if (v >= static_cast<std::uint32_t>(q) || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

IndexPartition partition_from_keys(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& keys) {
    const std::size_t e = keys.size();
    IndexPartition part;
    part.labels.assign(e, 0);
    for (std::size_t i = 0; i < e; ++i) {
        std::uint32_t label = static_cast<std::uint32_t>(part.classes.size());
        for (std::size_t j = 0; j < i; ++j)
            if (keys[j] == keys[i]) {
                label = part.labels[j];
                break;
            }
        part.labels[i] = label;
        if (label == part.classes.size()) part.classes.emplace_back();
        part.classes[label].push_back(static_cast<std::uint32_t>(i));
    }
    return part;
}

} // namespace

IndexPartition compute_partition(const PartitionScenario& sc) {
    const int q = sc.k * sc.d / 2;
    const int k2 = sc.k / 2;
    const int rows = 2 * sc.ell;
    if (sc.n < 1 || sc.k < 2 || sc.k % 2 != 0 || sc.d < 1 || sc.ell < 1)
        throw Error("bad scenario shape");
    if (static_cast<int>(sc.tuples.size()) != rows ||
        static_cast<int>(sc.row_perms.size()) != rows ||
        static_cast<int>(sc.col_perms.size()) != rows)
        throw Error("scenario needs 2*ell tuples and permutations");
    for (const auto& t : sc.tuples) {
        if (static_cast<int>(t.size()) != q) throw Error("tuple length must be k*d/2");
        for (auto v : t)
            if (v >= static_cast<std::uint32_t>(sc.n)) throw IndexOutOfRange("tuple coordinate");
    }
    for (const auto& p : sc.row_perms)
        if (!is_permutation_of_q(p, q)) throw Error("row_perms must permute {0..q-1}");
    for (const auto& p : sc.col_perms)
        if (!is_permutation_of_q(p, q)) throw Error("col_perms must permute {0..q-1}");

    std::vector<std::pair<std::uint64_t, std::uint64_t>> keys;
    keys.reserve(static_cast<std::size_t>(rows) * sc.d);
    for (int j = 0; j < rows; ++j)
        for (int s = 0; s < sc.d; ++s) {
            std::uint64_t a = 0, b = 0;
            for (int t = 0; t < k2; ++t) {
                a = a * sc.n + sc.tuples[j][sc.row_perms[j][s * k2 + t]];
                b = b * sc.n + sc.tuples[(j + 1) % rows][sc.col_perms[j][s * k2 + t]];
            }
            if (a > b) std::swap(a, b);
            keys.emplace_back(a, b);
        }
    return partition_from_keys(keys);
}

// -------------------------------------------------- exhaustive counting

namespace {

std::vector<std::vector<std::uint32_t>> all_permutations(int q) {
    std::vector<std::uint32_t> p(q);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::uint32_t>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::uint64_t pow_u64(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= base;
    return r;
}

// shared precomputation for the enumeration scans
struct ScanContext {
    int n, k, d, ell, q, k2, rows, elements;
    std::uint64_t nq;
    std::vector<std::vector<std::uint32_t>> perms;
    // code of tuple t's digits read through permutation p, block s
    // index: (t * perms + p) * d + s
    std::vector<std::uint32_t> pblock;
    std::vector<std::uint64_t> weight; // factorial weight per tuple code

    std::uint32_t pb(std::uint64_t t, std::size_t p, int s) const {
        return pblock[(t * perms.size() + p) * d + s];
    }
};

ScanContext make_context(int n, int k, int d, int ell, std::uint64_t budget,
                         std::uint64_t scenario_multiplier) {
    if (n < 1 || k < 2 || k % 2 != 0 || d < 1 || ell < 1) throw Error("bad parameters");
    ScanContext c;
    c.n = n;
    c.k = k;
    c.d = d;
    c.ell = ell;
    c.q = k * d / 2;
    c.k2 = k / 2;
    c.rows = 2 * ell;
    c.elements = c.rows * d;
    if (c.elements > 16) throw BudgetExceeded("more than 16 index-set elements");
    c.nq = pow_checked(static_cast<std::uint64_t>(n), c.q);
    if (pow_checked(static_cast<std::uint64_t>(n), c.k2) > (1u << 30))
        throw BudgetExceeded("half-tuple code does not pack");
    c.perms = all_permutations(c.q);
    const std::uint64_t base = pow_u64(c.nq, c.rows) *
                               pow_u64(static_cast<std::uint64_t>(c.perms.size()), c.rows);
    if (base > budget / std::max<std::uint64_t>(1, scenario_multiplier))
        throw BudgetExceeded("enumeration budget exceeded");

    c.pblock.resize(c.nq * c.perms.size() * d);
    c.weight.resize(c.nq);
    for (std::uint64_t t = 0; t < c.nq; ++t) {
        const auto digits = decode_tuple(t, n, c.q);
        for (std::size_t p = 0; p < c.perms.size(); ++p)
            for (int s = 0; s < d; ++s) {
                std::uint32_t code = 0;
                for (int i = 0; i < c.k2; ++i)
                    code = code * n + digits[c.perms[p][s * c.k2 + i]];
                c.pblock[(t * c.perms.size() + p) * d + s] = code;
            }
        c.weight[t] = histogram(digits, n).factorial_weight.convert_to<std::uint64_t>();
    }
    return c;
}

// odometer over `slots` positions each in [0, radix)
struct Odometer {
    std::vector<std::uint64_t> v;
    std::uint64_t radix;
    bool done = false;
    Odometer(int slots, std::uint64_t radix_) : v(slots, 0), radix(radix_) {
        if (radix == 0) done = true;
    }
    void advance() {
        for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
            if (++v[i] < radix) return;
            v[i] = 0;
        }
        done = true;
    }
};

// fingerprint: 4-bit first-occurrence labels of the element keys
struct FingerprintInfo {
    int classes = 0;
    bool even = false;
};

std::uint64_t fingerprint_of_keys(const std::uint64_t* keys, int e,
                                  std::map<std::uint64_t, FingerprintInfo>* registry) {
    std::uint32_t labels[16];
    std::uint32_t sizes[16] = {0};
    int classes = 0;
    std::uint64_t fp = 0;
    for (int i = 0; i < e; ++i) {
        std::uint32_t label = static_cast<std::uint32_t>(classes);
        for (int j = 0; j < i; ++j)
            if (keys[j] == keys[i]) {
                label = labels[j];
                break;
            }
        labels[i] = label;
        if (label == static_cast<std::uint32_t>(classes)) ++classes;
        ++sizes[label];
        fp |= static_cast<std::uint64_t>(label) << (4 * i);
    }
    if (registry && !registry->count(fp)) {
        FingerprintInfo info;
        info.classes = classes;
        info.even = true;
        for (int c = 0; c < classes; ++c)
            if (sizes[c] % 2 != 0) info.even = false;
        (*registry)[fp] = info;
    }
    return fp;
}

// counts of each partition over all (tuple collections, col perm collections)
// for one fixed row perm collection
std::map<std::uint64_t, std::uint64_t> partition_counts(
    const ScanContext& c, const std::vector<std::uint64_t>& row_perm_choice,
    std::map<std::uint64_t, FingerprintInfo>* registry) {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t keys[16];
    for (Odometer ti(c.rows, c.nq); !ti.done; ti.advance()) {
        for (Odometer si(c.rows, c.perms.size()); !si.done; si.advance()) {
            int e = 0;
            for (int j = 0; j < c.rows; ++j)
                for (int s = 0; s < c.d; ++s, ++e) {
                    std::uint64_t a = c.pb(ti.v[j], row_perm_choice[j], s);
                    std::uint64_t b = c.pb(ti.v[(j + 1) % c.rows], si.v[j], s);
                    if (a > b) std::swap(a, b);
                    keys[e] = (a << 31) | b;
                }
            ++counts[fingerprint_of_keys(keys, c.elements, registry)];
        }
    }
    return counts;
}

// per-partition aggregates over the identity row perm scan
struct IdentityScan {
    std::map<std::uint64_t, FingerprintInfo> registry;
    struct Stats {
        std::uint64_t collections = 0;    // distinct tuple collections realizing it
        std::uint64_t weight_sum = 0;     // sum over those of prod tuple weights
        std::uint64_t max_colperms = 0;   // worst per-collection col perm count
        bool colperm_bound_ok = true;     // even partitions only
    };
    std::map<std::uint64_t, Stats> stats;
};

IdentityScan scan_identity(const ScanContext& c) {
    IdentityScan scan;
    const std::vector<std::uint64_t> id_choice(c.rows, 0); // perms[0] is the identity
    std::uint64_t keys[16];
    std::unordered_map<std::uint64_t, std::uint64_t> local;
    for (Odometer ti(c.rows, c.nq); !ti.done; ti.advance()) {
        std::uint64_t wprod = 1;
        for (int j = 0; j < c.rows; ++j) wprod *= c.weight[ti.v[j]];
        local.clear();
        for (Odometer si(c.rows, c.perms.size()); !si.done; si.advance()) {
            int e = 0;
            for (int j = 0; j < c.rows; ++j)
                for (int s = 0; s < c.d; ++s, ++e) {
                    std::uint64_t a = c.pb(ti.v[j], 0, s);
                    std::uint64_t b = c.pb(ti.v[(j + 1) % c.rows], si.v[j], s);
                    if (a > b) std::swap(a, b);
                    keys[e] = (a << 31) | b;
                }
            ++local[fingerprint_of_keys(keys, c.elements, &scan.registry)];
        }
        for (const auto& [fp, cnt] : local) {
            auto& st = scan.stats[fp];
            st.collections += 1;
            st.weight_sum += wprod;
            st.max_colperms = std::max(st.max_colperms, cnt);
            const auto& info = scan.registry.at(fp);
            if (info.even) {
                const std::uint64_t bound =
                    pow_u64(static_cast<std::uint64_t>(c.q), c.k * info.classes / 2) * wprod;
                if (cnt > bound) st.colperm_bound_ok = false;
            }
        }
    }
    return scan;
}

} // namespace

OracleReport verify_count_perm_invariance(int n, int k, int d, int ell, std::uint64_t budget) {
    ScanContext c = make_context(n, k, d, ell, budget,
                                 pow_u64(static_cast<std::uint64_t>(
                                             all_permutations(k * d / 2).size()),
                                         2 * ell));
    std::map<std::uint64_t, FingerprintInfo> registry;
    const auto reference = partition_counts(c, std::vector<std::uint64_t>(c.rows, 0), &registry);
    std::uint64_t checked = 0, mismatches = 0;
    for (Odometer pi(c.rows, c.perms.size()); !pi.done; pi.advance()) {
        ++checked;
        if (partition_counts(c, pi.v, nullptr) != reference) ++mismatches;
    }
    OracleReport rep;
    rep.passed = mismatches == 0;
    rep.detail["check"] = "partition counts invariant under row permutations";
    rep.detail["n"] = n;
    rep.detail["k"] = k;
    rep.detail["d"] = d;
    rep.detail["ell"] = ell;
    rep.detail["row_perm_collections"] = checked;
    rep.detail["distinct_partitions"] = reference.size();
    rep.detail["mismatches"] = mismatches;
    return rep;
}

OracleReport verify_colperm_count_bound(int n, int k, int d, int ell, std::uint64_t budget) {
    ScanContext c = make_context(n, k, d, ell, budget, 1);
    IdentityScan scan = scan_identity(c);
    std::uint64_t even_partitions = 0, violations = 0;
    for (const auto& [fp, st] : scan.stats) {
        if (!scan.registry.at(fp).even) continue;
        ++even_partitions;
        if (!st.colperm_bound_ok) ++violations;
    }
    OracleReport rep;
    rep.passed = violations == 0;
    rep.detail["check"] = "column permutation count bound per tuple collection";
    rep.detail["n"] = n;
    rep.detail["k"] = k;
    rep.detail["d"] = d;
    rep.detail["ell"] = ell;
    rep.detail["even_partitions"] = even_partitions;
    rep.detail["violations"] = violations;
    return rep;
}

OracleReport verify_valid_collection_bound(int n, int k, int d, int ell, std::uint64_t budget) {
    ScanContext c = make_context(n, k, d, ell, budget, 1);
    IdentityScan scan = scan_identity(c);
    std::uint64_t even_partitions = 0, violations = 0;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& [fp, st] : scan.stats) {
        const auto& info = scan.registry.at(fp);
        if (!info.even) continue;
        ++even_partitions;
        const std::uint64_t bound =
            pow_u64(static_cast<std::uint64_t>(n), c.k * (info.classes + c.d) / 2);
        if (st.collections > bound) ++violations;
        rows.push_back({{"classes", info.classes},
                        {"collections", st.collections},
                        {"bound", bound}});
    }
    OracleReport rep;
    rep.passed = violations == 0;
    rep.detail["check"] = "valid tuple collection count bound";
    rep.detail["n"] = n;
    rep.detail["k"] = k;
    rep.detail["d"] = d;
    rep.detail["ell"] = ell;
    rep.detail["even_partitions"] = even_partitions;
    rep.detail["violations"] = violations;
    rep.detail["per_partition"] = rows;
    return rep;
}

std::vector<std::uint64_t> count_even_partitions(int set_size, std::uint64_t budget) {
    if (set_size < 1) throw Error("set_size must be >= 1");
    std::vector<std::uint64_t> out(set_size + 1, 0);
    std::vector<std::uint32_t> assign(set_size, 0);
    std::uint64_t visited = 0;
    // restricted growth strings enumerate set partitions exactly once
    auto rec = [&](auto&& self, int pos, int classes) -> void {
        if (pos == set_size) {
            if (++visited > budget) throw BudgetExceeded("partition enumeration budget");
            std::vector<std::uint32_t> sizes(classes, 0);
            for (auto a : assign) ++sizes[a];
            for (auto s : sizes)
                if (s % 2 != 0) return;
            ++out[classes];
            return;
        }
        for (int cc = 0; cc <= classes; ++cc) {
            assign[pos] = static_cast<std::uint32_t>(cc);
            self(self, pos + 1, std::max(classes, cc + 1));
        }
    };
    rec(rec, 0, 0);
    return out;
}

OracleReport verify_even_partition_count_bound(int set_size, std::uint64_t budget) {
    const auto counts = count_even_partitions(set_size, budget);
    std::uint64_t violations = 0;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int m = 1; m <= set_size; ++m) {
        // C(set_size, m) * m^(set_size - m)
        std::uint64_t choose = 1;
        for (int i = 0; i < m; ++i) choose = choose * (set_size - i) / (i + 1);
        const std::uint64_t bound = choose * pow_u64(static_cast<std::uint64_t>(m), set_size - m);
        if (counts[m] > bound) ++violations;
        if (counts[m] > 0)
            rows.push_back({{"classes", m}, {"count", counts[m]}, {"bound", bound}});
    }
    OracleReport rep;
    rep.passed = violations == 0;
    rep.detail["check"] = "even partition count bound";
    rep.detail["set_size"] = set_size;
    rep.detail["violations"] = violations;
    rep.detail["nonzero_counts"] = rows;
    return rep;
}

OracleReport verify_trace_moment_bound(int n, int k, int d, int ell, double p, int trials,
                                       std::uint64_t seed, std::uint64_t budget) {
    if (trials < 2) throw Error("need at least 2 trials");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability("p must be in [0,1]");
    ScanContext c = make_context(n, k, d, ell, budget, 1);
    IdentityScan scan = scan_identity(c);

    double rhs = 0.0;
    const double cell_factor =
        p * static_cast<double>(pow_u64(static_cast<std::uint64_t>(c.q), c.k2));
    for (const auto& [fp, st] : scan.stats) {
        const auto& info = scan.registry.at(fp);
        if (!info.even) continue;
        rhs += std::pow(cell_factor, info.classes) * static_cast<double>(st.weight_sum);
    }
    rhs /= std::pow(static_cast<double>(c.perms.size()), c.rows);

    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Instance inst = generate_random(n, k, p, rng::mix(seed, rng::streams::trial, t));
        const auto s = symmetrize(flatten(constraints_tensor(inst)));
        const auto rep_mat = type_symmetrize(kron_power(s, d, budget), k, d);
        const double tr = trace_power(materialize_dense(rep_mat, 4096), ell);
        sum += tr;
        sumsq += tr * tr;
    }
    const double mean = sum / trials;
    const double var = std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1));
    const double se = std::sqrt(var / trials);

    OracleReport rep;
    rep.passed = mean - 3.0 * se <= rhs + 1e-12;
    rep.detail["check"] = "trace moment bound";
    rep.detail["n"] = n;
    rep.detail["k"] = k;
    rep.detail["d"] = d;
    rep.detail["ell"] = ell;
    rep.detail["p"] = p;
    rep.detail["trials"] = trials;
    rep.detail["mc_mean"] = mean;
    rep.detail["mc_stderr"] = se;
    rep.detail["exact_bound"] = rhs;
    return rep;
}

bigint enumerate_factorial_weight_sum(int n, int q, std::uint64_t budget) {
    if (n < 1 || q < 1) throw Error("n and q must be >= 1");
    const std::uint64_t total = pow_checked(static_cast<std::uint64_t>(n), q);
    if (total > budget) throw BudgetExceeded("tuple enumeration budget");
    bigint sum = 0;
    std::vector<std::uint32_t> digits(q);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        for (int i = q - 1; i >= 0; --i) {
            digits[i] = static_cast<std::uint32_t>(rest % n);
            rest /= n;
        }
        sum += histogram(digits, n).factorial_weight;
    }
    return sum;
}

OracleReport verify_factorial_weight_sum(int max_n, int max_q, std::uint64_t budget) {
    std::uint64_t checked = 0, mismatches = 0, bound_violations = 0;
    for (int n = 1; n <= max_n; ++n)
        for (int q = 1; q <= max_q; ++q) {
            ++checked;
            if (enumerate_factorial_weight_sum(n, q, budget) != total_factorial_weight(n, q))
                ++mismatches;
        }
    // closed form <= (k/2+1)^q * n^q whenever q = k*d/2 with d <= n
    std::uint64_t bound_checks = 0;
    for (int n = 1; n <= max_n; ++n)
        for (int k = 2; k <= 2 * max_q; k += 2)
            for (int d = 1; d <= n; ++d) {
                const int q = k * d / 2;
                if (q > max_q) break;
                ++bound_checks;
                bigint cap = 1;
                for (int i = 0; i < q; ++i) cap *= (k / 2 + 1) * n;
                if (total_factorial_weight(n, q) > cap) ++bound_violations;
            }
    OracleReport rep;
    rep.passed = mismatches == 0 && bound_violations == 0;
    rep.detail["check"] = "histogram weight total: closed form vs enumeration";
    rep.detail["max_n"] = max_n;
    rep.detail["max_q"] = max_q;
    rep.detail["pairs_checked"] = checked;
    rep.detail["mismatches"] = mismatches;
    rep.detail["bound_checks"] = bound_checks;
    rep.detail["bound_violations"] = bound_violations;
    return rep;
}

OracleReport verify_representation(const Instance& inst, int d, int trials,
                                   std::uint64_t seed, std::uint64_t vec_cap) {
    if (d < 1) throw Error("d must be >= 1");
    const int n = inst.n(), k = inst.k();
    const int q = k * d / 2;
    const auto s = symmetrize(flatten(constraints_tensor(inst)));
    const auto rep_mat = type_symmetrize(kron_power(s, d, vec_cap), k, d);
    const auto rep_scaled = rescale(rep_mat);
    TypeApplyPlan plan(rep_mat, vec_cap);
    TypeApplyPlan plan_scaled(rep_scaled, vec_cap);
    const std::uint64_t dim = plan.dim();

    std::vector<double> weights(dim);
    for (std::uint64_t c = 0; c < dim; ++c)
        weights[c] = coordinate_rescale_weight(c, n, q);

    double worst_plain = 0.0, worst_scaled = 0.0;
    std::vector<double> tmp(dim);
    for (int t = 0; t < trials; ++t) {
        const Assignment x = random_assignment(n, rng::mix(seed, rng::streams::xsample, t));
        const std::vector<double> v = kron_vector(x, q, vec_cap);
        const double fx = static_cast<double>(eval_polynomial(inst, x));
        const double target = std::pow(fx, d);

        plan.apply(v, tmp);
        double quad = 0.0;
        for (std::uint64_t i = 0; i < dim; ++i) quad += v[i] * tmp[i];
        worst_plain = std::max(worst_plain,
                               std::abs(quad - target) / std::max(1.0, std::abs(target)));

        std::vector<double> wv(dim);
        for (std::uint64_t i = 0; i < dim; ++i) wv[i] = weights[i] * v[i];
        plan_scaled.apply(wv, tmp);
        double quad2 = 0.0;
        for (std::uint64_t i = 0; i < dim; ++i) quad2 += wv[i] * tmp[i];
        worst_scaled = std::max(worst_scaled,
                                std::abs(quad2 - target) / std::max(1.0, std::abs(target)));
    }

    OracleReport rep;
    rep.passed = worst_plain <= 1e-9 && worst_scaled <= 1e-9;
    rep.detail["check"] = "quadratic form reproduces f(x)^d";
    rep.detail["n"] = n;
    rep.detail["k"] = k;
    rep.detail["d"] = d;
    rep.detail["m"] = inst.m();
    rep.detail["trials"] = trials;
    rep.detail["max_rel_err_plain"] = worst_plain;
    rep.detail["max_rel_err_rescaled"] = worst_scaled;
    return rep;
}

} // namespace kxor::oracle
