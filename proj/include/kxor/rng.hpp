#pragma once

// Counter-based randomness. Every consumer derives its values from
// (seed, stream, counter) through a splitmix64-style finalizer, so results do
// not depend on call order across components or on thread scheduling.

#include <cstdint>

namespace kxor::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + kGolden));
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(a, b), c);
}

// Stream tags. Keep these stable: generated instances are part of the
// reproducibility contract.
namespace streams {
inline constexpr std::uint64_t binomial = 1;
inline constexpr std::uint64_t select = 2;
inline constexpr std::uint64_t signs = 3;
inline constexpr std::uint64_t lanczos = 4;
inline constexpr std::uint64_t assignment = 5;
inline constexpr std::uint64_t trial = 6;
inline constexpr std::uint64_t xsample = 7;
} // namespace streams

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : base_(mix(seed, stream)) {}

    std::uint64_t next() { return splitmix64(base_ + kGolden * ++ctr_); }

    // uniform in (0,1], never exactly zero (safe under log())
    double next_unit_open() { return static_cast<double>((next() >> 11) + 1) * 0x1p-53; }

    // unbiased uniform integer in [0, bound), bound >= 1
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

    int sign_pm1() { return (next() >> 63) ? -1 : +1; }

private:
    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
};

} // namespace kxor::rng
