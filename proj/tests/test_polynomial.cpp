#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "kxor/polynomial.hpp"
#include "kxor/rng.hpp"

using namespace kxor;

TEST_CASE("constraints_tensor mirrors the constraint list") {
    const Instance inst(3, 2, {{{0, 1}, 1}, {{2, 2}, -1}});
    const SparseTensor t = constraints_tensor(inst);
    CHECK(t.n == 3);
    CHECK(t.k == 2);
    REQUIRE(t.entries.size() == 2);
    CHECK(t.entries[0] == std::pair<std::uint64_t, int>{1, 1});      // (0,1)
    CHECK(t.entries[1] == std::pair<std::uint64_t, int>{8, -1});     // (2,2)
}

TEST_CASE("eval_polynomial by hand") {
    // f(x) = x1 x2 - x3 x3 = x1 x2 - 1
    const Instance inst(3, 2, {{{0, 1}, 1}, {{2, 2}, -1}});
    CHECK(eval_polynomial(inst, {1, 1, 1}) == 0);
    CHECK(eval_polynomial(inst, {1, -1, 1}) == -2);
    CHECK(eval_polynomial(inst, {-1, -1, -1}) == 0);
    CHECK(eval_polynomial(constraints_tensor(inst), {1, -1, -1}) == -2);
}

TEST_CASE("two sat counts equal m plus f") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Instance inst = generate_random(7, 2, 0.2, seed);
        if (inst.m() == 0) continue;
        for (int t = 0; t < 10; ++t) {
            const Assignment x = random_assignment(7, rng::mix(seed, 99, t));
            const std::int64_t f = eval_polynomial(inst, x);
            CHECK(std::llabs(f) <= static_cast<std::int64_t>(inst.m()));
            CHECK(2 * static_cast<std::int64_t>(sat_count(inst, x)) ==
                  static_cast<std::int64_t>(inst.m()) + f);
        }
    }
    const Instance inst4 = generate_random(5, 4, 0.05, 3);
    REQUIRE(inst4.m() > 0);
    for (int t = 0; t < 10; ++t) {
        const Assignment x = random_assignment(5, t);
        CHECK(2 * static_cast<std::int64_t>(sat_count(inst4, x)) ==
              static_cast<std::int64_t>(inst4.m()) + eval_polynomial(inst4, x));
    }
}

TEST_CASE("flatten splits codes into row and column halves") {
    const Instance inst(3, 4, {{{1, 0, 2, 1}, -1}});
    const SparseSymMatrix ms = flatten(constraints_tensor(inst));
    CHECK(ms.side() == 9);
    CHECK(ms.denom_log2 == 0);
    REQUIRE(ms.entries.size() == 1);
    CHECK(ms.entries[0].row == 3);  // (1,0)
    CHECK(ms.entries[0].col == 7);  // (2,1)
    CHECK(ms.entries[0].num == -1);
    CHECK(ms.value_at(3, 7) == -1.0);
    CHECK(ms.value_at(7, 3) == 0.0); // not stored; flatten is one-sided
}

TEST_CASE("symmetrize halves the sum of both orientations") {
    const Instance inst(2, 2, {{{0, 1}, 1}, {{1, 0}, 1}, {{0, 0}, -1}});
    const SparseSymMatrix s = symmetrize(flatten(constraints_tensor(inst)));
    CHECK(is_symmetric(s));
    CHECK(s.denom_log2 == 1);
    CHECK(s.value_at(0, 1) == 1.0);  // (1 + 1) / 2
    CHECK(s.value_at(1, 0) == 1.0);
    CHECK(s.value_at(0, 0) == -1.0);
    CHECK(s.value_at(1, 1) == 0.0);
}

TEST_CASE("symmetrize drops cancelling pairs") {
    const Instance inst(2, 2, {{{0, 1}, 1}, {{1, 0}, -1}});
    const SparseSymMatrix s = symmetrize(flatten(constraints_tensor(inst)));
    CHECK(s.entries.empty());
}

TEST_CASE("quadratic form of the symmetrized flattening evaluates f") {
    for (std::uint64_t seed = 2; seed <= 4; ++seed) {
        const Instance inst = generate_random(4, 4, 0.05, seed);
        if (inst.m() == 0) continue;
        const SparseSymMatrix s = symmetrize(flatten(constraints_tensor(inst)));
        const auto dense = to_dense(s);
        for (int t = 0; t < 8; ++t) {
            const Assignment x = random_assignment(4, 31 * seed + t);
            const auto v = kron_vector(x, 2);
            double quad = 0.0;
            for (std::uint64_t i = 0; i < s.side(); ++i)
                for (std::uint64_t j = 0; j < s.side(); ++j)
                    quad += v[i] * dense(i, j) * v[j];
            CHECK(quad == doctest::Approx(eval_polynomial(inst, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("to_dense respects the cap") {
    const Instance inst = generate_random(6, 2, 0.5, 1);
    const auto s = symmetrize(flatten(constraints_tensor(inst)));
    CHECK_THROWS_AS(to_dense(s, 5), DenseTooLarge);
    const auto m = to_dense(s, 6);
    CHECK(m.rows() == 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(m(i, j) == s.value_at(i, j));
}

TEST_CASE("sparse_apply matches the serial kernel exactly") {
    const Instance inst = generate_random(5, 4, 0.1, 9);
    REQUIRE(inst.m() > 2);
    const auto s = symmetrize(flatten(constraints_tensor(inst)));
    const auto dense = to_dense(s);
    std::vector<double> x(s.side()), y1(s.side()), y2(s.side());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(static_cast<double>(i) + 0.5);
    sparse_apply_serial(s, x, y1);
    sparse_apply(s, x, y2);
    CHECK(y1 == y2); // bitwise
    for (std::uint64_t i = 0; i < s.side(); ++i) {
        double want = 0.0;
        for (std::uint64_t j = 0; j < s.side(); ++j) want += dense(i, j) * x[j];
        CHECK(y1[i] == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK_THROWS_AS(sparse_apply(s, x, std::span<double>(y1.data(), 3)), IndexOutOfRange);
}

TEST_CASE("kron_vector lists all coordinate products") {
    const Assignment x{1, -1, 1};
    const auto v = kron_vector(x, 2);
    REQUIRE(v.size() == 9);
    for (std::uint64_t c = 0; c < 9; ++c) {
        const auto digits = decode_tuple(c, 3, 2);
        CHECK(v[c] == x[digits[0]] * x[digits[1]]);
    }
    CHECK_THROWS_AS(kron_vector(x, 20, 100), BudgetExceeded);
    CHECK_THROWS_AS(kron_vector(Assignment{1, 0}, 2), BadSign);
}
