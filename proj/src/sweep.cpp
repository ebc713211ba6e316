#include "kxor/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "kxor/oracle.hpp"
#include "kxor/rng.hpp"

namespace kxor {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t s = v.size();
    return s % 2 == 1 ? v[s / 2] : 0.5 * (v[s / 2 - 1] + v[s / 2]);
}

std::optional<double> fit_slope(const std::vector<std::pair<double, double>>& logxy) {
    if (logxy.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : logxy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = logxy.size() * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (logxy.size() * sxy - sx * sy) / denom;
}

} // namespace

SweepResult run_sweep(const SweepConfig& config) {
    if (config.trials_per_p < 1) throw Error("trials_per_p must be >= 1");
    if (config.p_values.empty()) throw Error("p_values must be nonempty");
    for (double p : config.p_values)
        if (!(p > 0.0 && p <= 1.0)) throw InvalidProbability("sweep p must be in (0,1]");

    CertifyOptions opts = config.certify;
    opts.d = config.d;
    opts.method = config.method;
    opts.solver = config.solver;

    const std::size_t np = config.p_values.size();
    const std::size_t per = static_cast<std::size_t>(config.trials_per_p);
    SweepResult result;
    result.rows.resize(np * per);

    // rows are independent; each derives its own seed, so the schedule
    // cannot change the output
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(np * per); ++idx) {
        const std::size_t pi = static_cast<std::size_t>(idx) / per;
        const std::size_t trial = static_cast<std::size_t>(idx) % per;
        const double p = config.p_values[pi];
        SweepRow row;
        row.n = config.n;
        row.k = config.k;
        row.d = config.d;
        row.p = p;
        row.seed = rng::mix(config.base_seed, pi + 1, trial + 1);
        const auto start = std::chrono::steady_clock::now();
        try {
            const Instance inst = generate_random(config.n, config.k, p, row.seed);
            row.m = inst.m();
            const Certificate cert = certify(inst, opts);
            row.norm_root = cert.norm_root;
            row.hsat = cert.hsat;
            if (config.n <= config.max_sat_cap)
                row.max_sat = oracle::brute_force_max_sat(inst).fraction;
        } catch (const Error& e) {
            row.error = e.what();
        }
        if (config.timing) {
            const auto stop = std::chrono::steady_clock::now();
            row.runtime_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();
        }
        result.rows[static_cast<std::size_t>(idx)] = row;
    }

    std::vector<std::pair<double, double>> excess_pts, norm_pts;
    std::vector<double> medians;
    for (std::size_t pi = 0; pi < np; ++pi) {
        std::vector<double> norms, hsats;
        for (std::size_t t = 0; t < per; ++t) {
            const SweepRow& row = result.rows[pi * per + t];
            if (!row.error.empty()) {
                ++result.failed_rows;
                continue;
            }
            norms.push_back(row.norm_root);
            hsats.push_back(row.hsat);
        }
        if (norms.empty()) continue;
        SweepSummary s;
        s.p = config.p_values[pi];
        s.ok_trials = static_cast<int>(norms.size());
        s.median_norm_root = median_of(norms);
        s.median_hsat = median_of(hsats);
        s.median_excess = s.median_hsat - 0.5;
        result.summaries.push_back(s);
        if (s.median_excess > 0.0)
            excess_pts.emplace_back(std::log(s.p), std::log(s.median_excess));
        if (s.median_norm_root > 0.0)
            norm_pts.emplace_back(std::log(s.p), std::log(s.median_norm_root));
        medians.push_back(s.median_excess);
    }
    result.excess_slope = fit_slope(excess_pts);
    result.norm_root_slope = fit_slope(norm_pts);
    result.excess_monotone_nonincreasing = true;
    for (std::size_t i = 1; i < medians.size(); ++i)
        if (medians[i] > medians[i - 1] + 1e-12) result.excess_monotone_nonincreasing = false;
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "n,k,d,p,seed,m,norm_root,hsat,max_sat,runtime_ms,error\n";
    for (const auto& r : result.rows) {
        out << r.n << ',' << r.k << ',' << r.d << ',' << format_double(r.p) << ','
            << r.seed << ',' << r.m << ',';
        if (r.error.empty())
            out << format_double(r.norm_root) << ',' << format_double(r.hsat) << ',';
        else
            out << ",,";
        if (r.max_sat) out << format_double(*r.max_sat);
        out << ',' << format_double(r.runtime_ms) << ',';
        std::string msg = r.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        out << msg << '\n';
    }
    for (const auto& s : result.summaries)
        out << "# summary p=" << format_double(s.p) << " trials=" << s.ok_trials
            << " median_norm_root=" << format_double(s.median_norm_root)
            << " median_hsat=" << format_double(s.median_hsat)
            << " median_excess=" << format_double(s.median_excess) << '\n';
    out << "# slope excess_vs_p=";
    if (result.excess_slope) out << format_double(*result.excess_slope);
    else out << "nan";
    out << " norm_root_vs_p=";
    if (result.norm_root_slope) out << format_double(*result.norm_root_slope);
    else out << "nan";
    out << '\n';
    return out.str();
}

} // namespace kxor
