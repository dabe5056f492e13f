#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruinlab/farm.hpp"

namespace ruinlab {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval, clamped to [0,1]; z = 0 collapses to the point
// estimate.  Default z is the two-sided 95% normal quantile.
Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double z = 1.959963984540054);

struct RuinEstimate {
    double u = 0.0;
    double level = 0.0; // 0 = ruin proper, else first passage below the level
    double horizon = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t n_hit = 0;
    double p_hat = 0.0;
    double std_err = 0.0; // plug-in sqrt(p(1-p)/n)
    double ci_lo = 0.0;   // Wilson 95%
    double ci_hi = 1.0;
    std::optional<Interval> normal_ci; // comparison CI, only when 10 <= hits <= n-10
    std::uint64_t seed = 0;
};

// P(surplus drops below `level` by the horizon | X_0 = u).  level = 0 means
// ruin proper: a strictly negative surplus, which only a claim can cause.
// Estimates are finite-horizon, hence lower bounds (in expectation) for the
// infinite-horizon probability.  LevelError unless 0 <= level < u.
RuinEstimate estimate_ruin(const ModelParams& p, const SimConfig& cfg, double u, double level,
                           std::uint64_t n_paths, std::uint64_t seed, unsigned workers = 0);

// Several levels from one shared set of paths (rows in the given order).
std::vector<RuinEstimate> estimate_ruin_levels(const ModelParams& p, const SimConfig& cfg,
                                               double u, const std::vector<double>& levels,
                                               std::uint64_t n_paths, std::uint64_t seed,
                                               unsigned workers = 0);

// One set of paths run to the largest horizon; hits by a shorter horizon are
// read off the recorded first-passage times.  Sharing the draws across
// horizons makes p_hat exactly nondecreasing in T, not just statistically.
// Horizons must be strictly increasing.
std::vector<RuinEstimate> horizon_sweep(const ModelParams& p, const SimConfig& cfg, double u,
                                        double level, const std::vector<double>& horizons,
                                        std::uint64_t n_paths, std::uint64_t seed,
                                        unsigned workers = 0);

struct ExitEstimate {
    double u = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double horizon = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t n_hi = 0;
    std::uint64_t n_lo = 0;
    std::uint64_t n_censored = 0;
    double p_hi = 0.0;
    double p_lo = 0.0;
    double p_censored = 0.0;
    Interval hi_ci;               // Wilson 95% on n_hi
    Interval lo_ci;               // Wilson 95% on n_lo
    double hi_upper_censored = 1.0; // Wilson upper on n_hi + n_censored
    std::uint64_t seed = 0;
};

// First exit from [lo, hi): each path is classified by the FIRST of
// value >= hi (exit high), value < lo (exit low), horizon reached (censored).
// IntervalError unless 0 <= lo <= u < hi.
ExitEstimate estimate_exit(const ModelParams& p, const SimConfig& cfg, double u, double lo,
                           double hi, std::uint64_t n_paths, std::uint64_t seed,
                           unsigned workers = 0);

// CSV row: experiment_id,u,level,horizon,n_paths,n_hit,p_hat,ci_lo,ci_hi,seed.
std::string csv_header();
std::string csv_row(const std::string& experiment_id, const RuinEstimate& e);

} // namespace ruinlab
