#include "kxor/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "kxor/rng.hpp"

namespace kxor {

static void check_nk(int n, int k) {
    if (n < 1) throw ParseError("n must be >= 1");
    if (k < 2 || k % 2 != 0) throw UnsupportedArity("k must be even and >= 2");
}

Instance::Instance(int n, int k, std::vector<Constraint> constraints,
                   std::optional<std::uint64_t> seed, std::optional<double> p)
    : n_(n), k_(k), constraints_(std::move(constraints)), seed_(seed), p_(p) {
    check_nk(n, k);
    for (const auto& c : constraints_) {
        if (static_cast<int>(c.tuple.size()) != k)
            throw ParseError("constraint tuple length does not match k");
        for (auto v : c.tuple)
            if (v >= static_cast<std::uint32_t>(n))
                throw IndexOutOfRange("tuple coordinate out of range");
        if (c.sign != 1 && c.sign != -1) throw BadSign("constraint sign must be +1 or -1");
    }
}

std::optional<double> Instance::density() const {
    if (!p_) return std::nullopt;
    return *p_ * std::pow(static_cast<double>(n_), k_ - 1);
}

std::uint64_t pow_checked(std::uint64_t n, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (n != 0 && r > UINT64_MAX / n)
            throw BudgetExceeded("n^k does not fit in 64 bits");
        r *= n;
    }
    return r;
}

std::uint64_t encode_tuple(std::span<const std::uint32_t> tuple, int n) {
    std::uint64_t code = 0;
    for (auto v : tuple) code = code * static_cast<std::uint64_t>(n) + v;
    return code;
}

std::vector<std::uint32_t> decode_tuple(std::uint64_t code, int n, int len) {
    std::vector<std::uint32_t> t(len);
    for (int i = len - 1; i >= 0; --i) {
        t[i] = static_cast<std::uint32_t>(code % n);
        code /= n;
    }
    return t;
}

// Exact binomial count via geometric gaps between successes; O(N*p) expected,
// never enumerates the N slots.
static std::uint64_t binomial_draw(std::uint64_t N, double p, rng::CounterRng& g) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return N;
    const double log1mp = std::log1p(-p);
    std::uint64_t count = 0, pos = 0;
    for (;;) {
        const double u = g.next_unit_open();
        const double gap = std::floor(std::log(u) / log1mp);
        if (!(gap < static_cast<double>(N - pos) + 1.0)) break; // also catches inf
        pos += static_cast<std::uint64_t>(gap) + 1;
        if (pos > N) break;
        ++count;
    }
    return count;
}

Instance generate_random(int n, int k, double p, std::uint64_t seed) {
    check_nk(n, k);
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability("p must be in [0,1]");
    const std::uint64_t N = pow_checked(static_cast<std::uint64_t>(n), k);

    rng::CounterRng gb(seed, rng::streams::binomial);
    const std::uint64_t m = binomial_draw(N, p, gb);

    // Floyd's sampler: uniform m-subset of [0, N)
    std::vector<std::uint64_t> codes;
    codes.reserve(m);
    if (m == N) {
        for (std::uint64_t c = 0; c < N; ++c) codes.push_back(c);
    } else if (m > 0) {
        rng::CounterRng gs(seed, rng::streams::select);
        std::unordered_set<std::uint64_t> chosen;
        chosen.reserve(m * 2);
        for (std::uint64_t j = N - m; j < N; ++j) {
            std::uint64_t t = gs.below(j + 1);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        codes.assign(chosen.begin(), chosen.end());
        std::sort(codes.begin(), codes.end());
    }

    std::vector<Constraint> cs;
    cs.reserve(codes.size());
    for (auto code : codes) {
        // sign keyed by the tuple code itself: independent of selection order
        const int sign = (rng::mix(seed, rng::streams::signs, code) >> 63) ? -1 : +1;
        cs.push_back({decode_tuple(code, n, k), sign});
    }
    return Instance(n, k, std::move(cs), seed, p);
}

void check_assignment(const Instance& inst, const Assignment& x) {
    if (static_cast<int>(x.size()) != inst.n())
        throw IndexOutOfRange("assignment length does not match n");
    for (int v : x)
        if (v != 1 && v != -1) throw BadSign("assignment values must be +1 or -1");
}

std::uint64_t sat_count(const Instance& inst, const Assignment& x) {
    if (inst.m() == 0) throw EmptyInstance("instance has no constraints");
    check_assignment(inst, x);
    std::uint64_t count = 0;
    for (const auto& c : inst.constraints()) {
        int prod = 1;
        for (auto v : c.tuple) prod *= x[v];
        if (prod == c.sign) ++count;
    }
    return count;
}

double sat_fraction(const Instance& inst, const Assignment& x) {
    return static_cast<double>(sat_count(inst, x)) / static_cast<double>(inst.m());
}

Assignment random_assignment(int n, std::uint64_t seed) {
    rng::CounterRng g(seed, rng::streams::assignment);
    Assignment x(n);
    for (int i = 0; i < n; ++i) x[i] = g.sign_pm1();
    return x;
}

void save_instance(std::ostream& os, const Instance& inst) {
    os << "# xor-instance v1\n";
    os << "n=" << inst.n() << " k=" << inst.k() << "\n";
    for (const auto& c : inst.constraints()) {
        for (auto v : c.tuple) os << (v + 1) << ' ';
        os << (c.sign > 0 ? "+1" : "-1") << '\n';
    }
}

std::string instance_to_string(const Instance& inst) {
    std::ostringstream os;
    save_instance(os, inst);
    return os.str();
}

void save_instance_file(const std::string& path, const Instance& inst) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    save_instance(f, inst);
}

Instance load_instance(std::istream& is) {
    std::string line;
    bool have_header = false;
    int n = 0, k = 0;
    std::vector<Constraint> cs;
    std::unordered_set<std::uint64_t> seen;
    while (std::getline(is, line)) {
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        if (line[b] == '#') continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string tn, tk, extra;
            ls >> tn >> tk;
            if (ls >> extra) throw ParseError("malformed header line: " + line);
            if (tn.rfind("n=", 0) != 0 || tk.rfind("k=", 0) != 0)
                throw ParseError("expected 'n=<int> k=<int>', got: " + line);
            try {
                std::size_t used = 0;
                n = std::stoi(tn.substr(2), &used);
                if (used != tn.size() - 2) throw std::invalid_argument("");
                k = std::stoi(tk.substr(2), &used);
                if (used != tk.size() - 2) throw std::invalid_argument("");
            } catch (const std::logic_error&) {
                throw ParseError("bad integer in header: " + line);
            }
            check_nk(n, k);
            have_header = true;
            continue;
        }
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (static_cast<int>(toks.size()) != k + 1)
            throw ParseError("expected k coordinates and a sign: " + line);
        Constraint c;
        c.tuple.reserve(k);
        for (int i = 0; i < k; ++i) {
            long v = 0;
            try {
                std::size_t used = 0;
                v = std::stol(toks[i], &used);
                if (used != toks[i].size()) throw std::invalid_argument("");
            } catch (const std::logic_error&) {
                throw ParseError("bad coordinate '" + toks[i] + "' in: " + line);
            }
            if (v < 1 || v > n) throw IndexOutOfRange("coordinate out of 1.." + std::to_string(n));
            c.tuple.push_back(static_cast<std::uint32_t>(v - 1));
        }
        if (toks[k] == "+1") c.sign = +1;
        else if (toks[k] == "-1") c.sign = -1;
        else throw BadSign("sign must be +1 or -1, got '" + toks[k] + "'");
        if (!seen.insert(encode_tuple(c.tuple, n)).second)
            throw DuplicateConstraint("repeated tuple in: " + line);
        cs.push_back(std::move(c));
    }
    if (!have_header) throw ParseError("missing 'n=<int> k=<int>' header");
    return Instance(n, k, std::move(cs));
}

Instance instance_from_string(const std::string& text) {
    std::istringstream is(text);
    return load_instance(is);
}

Instance load_instance_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open: " + path);
    return load_instance(f);
}

} // namespace kxor
