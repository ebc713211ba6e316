#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kxor/errors.hpp"

namespace kxor {

// One parity constraint: ordered k-tuple of variable indices (0-based
// internally; files are 1-based) and a target sign. Repeated indices inside a
// tuple are legal.
struct Constraint {
    std::vector<std::uint32_t> tuple;
    int sign = +1; // +1 or -1

    bool operator==(const Constraint&) const = default;
};

// x[i] is +1 or -1 for variable i.
using Assignment = std::vector<int>;

class Instance {
public:
    Instance() = default;
    Instance(int n, int k, std::vector<Constraint> constraints,
             std::optional<std::uint64_t> seed = std::nullopt,
             std::optional<double> p = std::nullopt);

    int n() const { return n_; }
    int k() const { return k_; }
    std::uint64_t m() const { return constraints_.size(); }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    std::optional<std::uint64_t> seed() const { return seed_; }
    std::optional<double> p() const { return p_; }

    // alpha = p * n^(k-1); requires a known p
    std::optional<double> density() const;

    bool operator==(const Instance& o) const {
        return n_ == o.n_ && k_ == o.k_ && constraints_ == o.constraints_;
    }

private:
    int n_ = 0;
    int k_ = 0;
    std::vector<Constraint> constraints_;
    std::optional<std::uint64_t> seed_;
    std::optional<double> p_;
};

// n^e, throws BudgetExceeded on uint64 overflow
std::uint64_t pow_checked(std::uint64_t n, int e);

// row-major code of a tuple over [0,n): first coordinate most significant
std::uint64_t encode_tuple(std::span<const std::uint32_t> tuple, int n);
std::vector<std::uint32_t> decode_tuple(std::uint64_t code, int n, int len);

// Each of the n^k ordered tuples is included independently with probability p
// and carries an independent uniform sign. Drawn as: tuple count from
// Binomial(n^k, p), then that many distinct tuple codes uniformly at random,
// then a sign per code. Fully determined by (n, k, p, seed); constraints come
// out sorted by tuple code.
Instance generate_random(int n, int k, double p, std::uint64_t seed);

void check_assignment(const Instance& inst, const Assignment& x);

// number of constraints whose tuple product matches its sign; m >= 1 required
std::uint64_t sat_count(const Instance& inst, const Assignment& x);

// sat_count / m; exact for m <= 2^52 since the ratio is a dyadic-free rational
// represented as an IEEE division of two exact integers
double sat_fraction(const Instance& inst, const Assignment& x);

Assignment random_assignment(int n, std::uint64_t seed);

// text format:
//   # xor-instance v1
//   n=<int> k=<int>
//   s1 s2 ... sk <+1|-1>        (1-based coordinates)
// blank lines and '#' lines are ignored on load
void save_instance(std::ostream& os, const Instance& inst);
void save_instance_file(const std::string& path, const Instance& inst);
std::string instance_to_string(const Instance& inst);
Instance load_instance(std::istream& is);
Instance load_instance_file(const std::string& path);
Instance instance_from_string(const std::string& text);

} // namespace kxor
