#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kxor/certify.hpp"

namespace kxor {

// Density sweep: for each p run `trials` random instances, certify each, and
// summarize how the bound scales with p.

struct SweepConfig {
    int n = 8;
    int k = 4;
    int d = 1;
    std::vector<double> p_values;
    int trials_per_p = 10;
    std::uint64_t base_seed = 1;
    Method method = Method::rescaled;
    SolverChoice solver = SolverChoice::iterative;
    int max_sat_cap = 14;     // brute-force column only when n <= this
    bool timing = false;      // when false runtime_ms is written as 0 so
                              // output bytes are reproducible
    CertifyOptions certify;   // d/method/solver fields above take precedence
};

struct SweepRow {
    int n = 0, k = 0, d = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t m = 0;
    double norm_root = 0.0;
    double hsat = 0.0;
    std::optional<double> max_sat;
    double runtime_ms = 0.0;
    std::string error;        // empty on success
};

struct SweepSummary {
    double p = 0.0;
    int ok_trials = 0;
    double median_norm_root = 0.0;
    double median_hsat = 0.0;
    double median_excess = 0.0;   // median of hsat - 1/2
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summaries;
    // least-squares slopes over (log p, log median); absent when fewer than
    // two p values produced usable medians
    std::optional<double> excess_slope;
    std::optional<double> norm_root_slope;
    bool excess_monotone_nonincreasing = false;
    std::size_t failed_rows = 0;
};

SweepResult run_sweep(const SweepConfig& config);

// CSV with a header row, one row per trial, then per-p medians and the
// fitted slopes as trailing '#' comment lines
std::string sweep_csv(const SweepResult& result);

// shortest round-trip decimal form, used everywhere floats are serialized
std::string format_double(double v);

} // namespace kxor
