#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "kxor/polynomial.hpp"
#include "kxor/repmatrix.hpp"

using namespace kxor;

namespace {

// the defining average: value at (a,b) over all digit permutations of a and b
double perm_average(const SparseSymMatrix& s_pow, int n, int q, std::uint64_t a,
                    std::uint64_t b) {
    std::vector<std::uint32_t> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    const auto da = decode_tuple(a, n, q);
    const auto db = decode_tuple(b, n, q);
    double sum = 0.0;
    std::uint64_t count = 0;
    std::vector<std::uint32_t> pa(q), pb(q);
    do {
        for (int i = 0; i < q; ++i) pa[i] = da[perm[i]];
        const std::uint64_t ca = encode_tuple(pa, n);
        std::vector<std::uint32_t> perm2(q);
        std::iota(perm2.begin(), perm2.end(), 0);
        do {
            for (int i = 0; i < q; ++i) pb[i] = db[perm2[i]];
            sum += s_pow.value_at(ca, encode_tuple(pb, n));
            ++count;
        } while (std::next_permutation(perm2.begin(), perm2.end()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum / static_cast<double>(count);
}

TypeSymMatrix rep_of(const Instance& inst, int d) {
    return type_symmetrize(kron_power(symmetrize(flatten(constraints_tensor(inst))), d),
                           inst.k(), d);
}

} // namespace

TEST_CASE("histogram") {
    const std::vector<std::uint32_t> t{1, 0, 1, 3};
    const Histogram h = histogram(t, 4);
    CHECK(h.counts == std::vector<std::uint32_t>{1, 2, 0, 1});
    CHECK(h.factorial_weight == 2);
    CHECK(h.max_count == 2);
    CHECK(h.rescale_weight == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(histogram(std::vector<std::uint32_t>{4}, 4), IndexOutOfRange);
}

TEST_CASE("factorial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(1) == 1);
    CHECK(factorial(5) == 120);
    CHECK(factorial(25) == bigint("15511210043330985984000000"));
}

TEST_CASE("total_factorial_weight closed form") {
    CHECK(total_factorial_weight(2, 1) == 2);
    CHECK(total_factorial_weight(2, 2) == 6);
    CHECK(total_factorial_weight(3, 2) == 12);
    CHECK(total_factorial_weight(1, 3) == 6); // only (0,0,0), weight 3!
    CHECK(total_factorial_weight(5, 1) == 5);
}

TEST_CASE("sorted_code and rearrangement_count") {
    CHECK(sorted_code(6, 2, 3) == 3); // (1,1,0) -> (0,1,1)
    CHECK(sorted_code(0, 4, 2) == 0);
    CHECK(rearrangement_count(std::vector<std::uint32_t>{0, 1}, 2) == 2);
    CHECK(rearrangement_count(std::vector<std::uint32_t>{0, 0}, 2) == 1);
    CHECK(rearrangement_count(std::vector<std::uint32_t>{0, 1, 1}, 2) == 3);
    CHECK(rearrangement_count(std::vector<std::uint32_t>{0, 1, 2}, 3) == 6);
}

TEST_CASE("kron_power") {
    const Instance inst(2, 2, {{{0, 1}, 1}});
    const auto s = symmetrize(flatten(constraints_tensor(inst)));
    REQUIRE(s.entries.size() == 2);

    const auto same = kron_power(s, 1);
    CHECK(same.entries == s.entries);
    CHECK(same.denom_log2 == s.denom_log2);

    const auto s2 = kron_power(s, 2);
    CHECK(s2.side() == 4);
    CHECK(s2.denom_log2 == 2);
    CHECK(s2.entries.size() == 4);
    CHECK(s2.value_at(0, 3) == 0.25);
    CHECK(s2.value_at(1, 2) == 0.25);
    CHECK(s2.value_at(2, 1) == 0.25);
    CHECK(s2.value_at(3, 0) == 0.25);
    CHECK(s2.value_at(0, 0) == 0.0);
    CHECK(is_symmetric(s2));

    CHECK(kron_power(s, 3).entries.size() == 8);
    CHECK_THROWS_AS(kron_power(s, 3, 7), BudgetExceeded);
}

TEST_CASE("kron_power quadratic form is the d-th power of f") {
    const Instance inst = generate_random(3, 2, 0.5, 4);
    REQUIRE(inst.m() > 1);
    const auto s = symmetrize(flatten(constraints_tensor(inst)));
    for (int d = 1; d <= 3; ++d) {
        const auto sp = kron_power(s, d);
        const auto dense = to_dense(sp);
        for (int t = 0; t < 5; ++t) {
            const Assignment x = random_assignment(3, 17 * d + t);
            const auto v = kron_vector(x, d);
            double quad = 0.0;
            for (std::uint64_t i = 0; i < sp.side(); ++i)
                for (std::uint64_t j = 0; j < sp.side(); ++j)
                    quad += v[i] * dense(i, j) * v[j];
            const double fx = static_cast<double>(eval_polynomial(inst, x));
            CHECK(quad == doctest::Approx(std::pow(fx, d)).epsilon(1e-12));
        }
    }
}

TEST_CASE("type_symmetrize on the single-constraint pair example") {
    const Instance inst(2, 2, {{{0, 1}, 1}});
    const TypeSymMatrix r = rep_of(inst, 2);
    CHECK(r.n == 2);
    CHECK(r.q == 2);
    CHECK(r.side() == 4);
    REQUIRE(r.buckets.size() == 2);
    // codes: 0=(0,0) 1=(0,1) 2=(1,0) 3=(1,1)
    CHECK(r.buckets[0].rkey == 0);
    CHECK(r.buckets[0].ckey == 3);
    CHECK(r.buckets[0].value == 0.25);
    CHECK(r.buckets[1].rkey == 1);
    CHECK(r.buckets[1].ckey == 1);
    CHECK(r.buckets[1].value == 0.125);
    CHECK(r.entry(0, 3) == 0.25);
    CHECK(r.entry(3, 0) == 0.25);
    CHECK(r.entry(1, 2) == 0.125);
    CHECK(r.entry(2, 1) == 0.125);
    CHECK(r.entry(1, 1) == 0.125);
    CHECK(r.entry(0, 0) == 0.0);
    CHECK(r.entry(0, 1) == 0.0);
}

TEST_CASE("type_symmetrize equals the permutation double average") {
    struct Combo {
        int n, k, d;
        double p;
        std::uint64_t seed;
    };
    for (const Combo c : {Combo{2, 2, 3, 0.6, 1}, Combo{3, 2, 2, 0.4, 2},
                          Combo{3, 4, 1, 0.1, 3}, Combo{2, 4, 1, 0.3, 4}}) {
        const Instance inst = generate_random(c.n, c.k, c.p, c.seed);
        REQUIRE(inst.m() > 0);
        const auto sp = kron_power(symmetrize(flatten(constraints_tensor(inst))), c.d);
        const TypeSymMatrix r = type_symmetrize(sp, c.k, c.d);
        for (std::uint64_t a = 0; a < r.side(); ++a)
            for (std::uint64_t b = 0; b < r.side(); ++b)
                CHECK(r.entry(a, b) ==
                      doctest::Approx(perm_average(sp, c.n, r.q, a, b)).epsilon(1e-12));
    }
}

TEST_CASE("type_symmetrize input checks") {
    const Instance inst(2, 2, {{{0, 1}, 1}});
    const auto flat = flatten(constraints_tensor(inst)); // not symmetric
    CHECK_THROWS_AS(type_symmetrize(flat, 2, 1), NotSymmetric);
    const auto s = symmetrize(flat);
    CHECK_THROWS_AS(type_symmetrize(s, 2, 2), Error); // exponent mismatch
    CHECK_THROWS_AS(type_symmetrize(s, 3, 1), UnsupportedArity);
}

TEST_CASE("trim drops buckets with a crowded type") {
    const Instance inst(2, 2, {{{0, 1}, 1}});
    const TypeSymMatrix r = rep_of(inst, 2);
    const TypeSymMatrix t1 = trim(r, 1);
    CHECK(t1.trim_threshold == 1);
    REQUIRE(t1.buckets.size() == 1); // (0,0)x(1,1) has multiplicity 2 on both sides
    CHECK(t1.buckets[0].rkey == 1);
    CHECK(t1.buckets[0].ckey == 1);
    const TypeSymMatrix t2 = trim(r, 2);
    CHECK(t2.buckets.size() == 2);
    CHECK_THROWS_AS(trim(t1, 1), InvalidState);
    CHECK(default_trim_threshold(2) == 7);   // ceil(10 ln 2)
    CHECK(default_trim_threshold(8) == 21);  // ceil(10 ln 8)
}

TEST_CASE("rescale divides by histogram weights") {
    const Instance inst(2, 2, {{{0, 1}, 1}});
    const TypeSymMatrix r = rescale(rep_of(inst, 2));
    CHECK(r.rescaled);
    CHECK(r.entry(0, 3) == doctest::Approx(0.125).epsilon(1e-14)); // 1/4 over sqrt(2)*sqrt(2)
    CHECK(r.entry(1, 2) == doctest::Approx(0.125).epsilon(1e-14)); // weight 1 on each side
    CHECK_THROWS_AS(rescale(r), InvalidState);
    CHECK(coordinate_rescale_weight(0, 2, 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(coordinate_rescale_weight(1, 2, 2) == 1.0);
    CHECK(coordinate_rescale_weight(2, 2, 2) == 1.0);
}

TEST_CASE("materialize_dense agrees with entry lookups") {
    const Instance inst = generate_random(3, 2, 0.5, 8);
    REQUIRE(inst.m() > 1);
    for (int d : {1, 2}) {
        const TypeSymMatrix r = rep_of(inst, d);
        const auto m = materialize_dense(r);
        REQUIRE(static_cast<std::uint64_t>(m.rows()) == r.side());
        for (std::uint64_t i = 0; i < r.side(); ++i)
            for (std::uint64_t j = 0; j < r.side(); ++j) {
                CHECK(m(i, j) == r.entry(i, j));
                CHECK(m(i, j) == m(j, i));
            }
    }
    CHECK_THROWS_AS(materialize_dense(rep_of(inst, 2), 8), DenseTooLarge);
}

TEST_CASE("apply plan matches the dense matrix") {
    const Instance inst = generate_random(3, 4, 0.08, 12);
    REQUIRE(inst.m() > 1);
    for (bool scaled : {false, true}) {
        TypeSymMatrix r = rep_of(inst, 2);
        if (scaled) r = rescale(r);
        const auto dense = materialize_dense(r);
        const TypeApplyPlan plan(r);
        REQUIRE(plan.dim() == r.side());
        std::vector<double> x(plan.dim()), y(plan.dim()), ys(plan.dim());
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::cos(0.7 * static_cast<double>(i)) + 0.1;
        plan.apply(x, y);
        plan.apply_serial(x, ys);
        CHECK(y == ys); // bitwise
        for (std::uint64_t i = 0; i < plan.dim(); ++i) {
            double want = 0.0;
            for (std::uint64_t j = 0; j < plan.dim(); ++j) want += dense(i, j) * x[j];
            CHECK(y[i] == doctest::Approx(want).epsilon(1e-11));
        }
        std::vector<double> y2(plan.dim());
        apply(r, x, y2);
        CHECK(y2 == y);
    }
}

TEST_CASE("plan rejects oversized coordinate spaces") {
    const Instance inst(2, 2, {{{0, 1}, 1}});
    const TypeSymMatrix r = rep_of(inst, 2);
    CHECK_THROWS_AS(TypeApplyPlan(r, 3), BudgetExceeded);
}
