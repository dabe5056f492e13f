#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ruinlab/estimate.hpp"
#include "ruinlab/generator.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab {

// One executable check.  `statistic` is the scalar held against
// analytic_bound: the adverse CI endpoint for Monte Carlo bound checks, the
// KS distance for the restart check, the largest violation for exact
// (coupling-based) checks.  slack >= 0 iff pass; its sign convention follows
// the check direction (bound - statistic for upper bounds, statistic - bound
// for lower bounds).
struct BoundReport {
    std::string name;
    double analytic_bound = 0.0;
    std::optional<RuinEstimate> ruin_estimate;
    std::optional<ExitEstimate> exit_estimate;
    double statistic = 0.0;
    double slack = 0.0;
    bool pass = false;
    std::string inputs; // parameters echoed, human-readable
};

// "name: statistic vs bound, slack, PASS/FAIL -- inputs"
std::string summary_line(const BoundReport& r);

// Ruin probability decay under bounded claims: for every u in u_values,
// estimates the probability of ruin (level 0) and of dipping below M
// (level M) and holds the Wilson upper CI endpoint against (M/u)^{rho-1}.
// Two reports per u (one per level); the level-M row is skipped when u == M,
// where the bound is 1 and the level estimate is undefined.
// RegimeError unless rho > 1, c > lambda*mean, claims bounded by M, u >= M.
std::vector<BoundReport> check_theorem_decay(const ModelParams& p, double M,
                                             const std::vector<double>& u_values,
                                             const SimConfig& cfg, std::uint64_t n_paths,
                                             std::uint64_t seed, unsigned workers = 0);

// rho < 1 exit bound: paths started at u inside [u*, n_level) with
// u* = threshold_lemma_A(p, alpha); the probability of reaching n_level
// before falling below u* must stay under (u/n_level)^alpha.  Censored
// paths are charged to the exit side (hi_upper_censored), so horizons that
// are too short cannot produce a false pass.
// RegimeError unless rho < 1; IntervalError unless u* <= u < n_level.
BoundReport check_exit_bound_A(const ModelParams& p, double alpha, double u, double n_level,
                               const SimConfig& cfg, std::uint64_t n_paths, std::uint64_t seed,
                               unsigned workers = 0);

// rho = 1 analogue on [u*, n_level) with u* = threshold_lemma_B(p) and bound
// ln ln u / ln ln n_level.  DomainError if n_level <= e^e.
BoundReport check_exit_bound_B(const ModelParams& p, double u, double n_level,
                               const SimConfig& cfg, std::uint64_t n_paths, std::uint64_t seed,
                               unsigned workers = 0);

// Certain ruin for rho <= 1: three reports per u.
//   certain_ruin_*      Wilson lower CI at the largest horizon >= target
//   horizon_monotone_*  the horizon sweep is exactly nondecreasing
//   cap_dominance_*     coupled capped/uncapped pairs (cap = claim mean, at
//                       reduced scale): a capped-claim path may only ruin if
//                       its uncapped twin does, so the capped estimate never
//                       exceeds the uncapped one
// RegimeError if rho > 1 or lambda == 0 (claims are required for ruin).
std::vector<BoundReport> check_certain_ruin(const ModelParams& p,
                                            const std::vector<double>& u_values,
                                            const SimConfig& cfg,
                                            const std::vector<double>& horizons,
                                            std::uint64_t n_paths, std::uint64_t seed,
                                            double target = 0.9, unsigned workers = 0);

// Which drift/volatility regime a sign certificate is issued for.  rho_lt_1
// optionally carries the growth exponent; when empty, default_alpha is used.
struct Regime {
    enum class Kind { RhoGt1, RhoLt1, RhoEq1 };
    Kind kind = Kind::RhoGt1;
    std::optional<double> alpha;

    static Regime rho_gt_1() { return {Kind::RhoGt1, {}}; }
    static Regime rho_lt_1(std::optional<double> alpha = {}) { return {Kind::RhoLt1, alpha}; }
    static Regime rho_eq_1() { return {Kind::RhoEq1, {}}; }
};

// Geometric grid of n_points spanning [threshold, span * threshold].
struct GridSpec {
    std::size_t n_points = 200;
    double span = 100.0;
};

// Nonpositivity certificate for the generator and for the simplified drift
// bound the argument reduces it to.  The two are asserted separately: the
// reduction passes through the claim-size expectation, so the simplified
// expression need not dominate the exact generator pointwise.
struct SignReport {
    TestFunction::Kind test_function = TestFunction::Kind::PowerDecay;
    double threshold = 0.0;
    std::vector<double> grid;
    std::vector<double> gen_values;
    std::vector<double> bound_values;
    bool all_nonpositive = false;       // max gen_values <= +1e-12
    bool bound_all_nonpositive = false; // max bound_values <= +1e-12
    std::pair<double, double> worst_point{0.0, 0.0};       // (x, generator)
    std::pair<double, double> bound_worst_point{0.0, 0.0}; // (x, bound)
    bool pass = false;
};

std::string summary_line(const SignReport& r);

// Evaluates the generator with the regime's test function on a log grid
// starting at the regime's threshold (M for rho > 1, the lemma threshold
// otherwise), together with the simplified drift bound:
//   rho > 1   (1-rho)(c - lambda*mean) x^{-rho}
//   rho < 1   alpha x^alpha (sigma^2/2 (rho+alpha-1) + c/x)
//   rho = 1   (c/x - sigma^2/(2 ln x)) / ln x
// Claims must be bounded (DomainError).  DomainError from points with
// x - M at or below the test function's domain propagates.
SignReport certify_generator_signs(const ModelParams& p, const Regime& regime,
                                   const GridSpec& grid = {}, const QuadConfig& quad = {});

// Ruin probability is nonincreasing in initial capital: estimates at each u
// share (seed, path index), so the coupled paths make the comparison exact,
// not statistical.  u_values must be nondecreasing, all > level (OrderError).
BoundReport check_monotone_psi(const ModelParams& p, const std::vector<double>& u_values,
                               double level, const SimConfig& cfg, std::uint64_t n_paths,
                               std::uint64_t seed, unsigned workers = 0);

// Distributional restart check: terminal values of paths started at x and
// run for duration t must look the same whether the clock starts at s (with
// fresh randomness) or at 0.  Ruined paths are dropped from both samples —
// the conditioning is identical on the two sides.  The two-sample KS
// distance must stay below the 1% asymptotic critical value; both surviving
// samples must have at least 1000 entries.
BoundReport check_markov_restart(const ModelParams& p, double x, double s, double t,
                                 const SimConfig& cfg, std::uint64_t n_paths, std::uint64_t seed,
                                 unsigned workers = 0);

// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.  Inputs
// need not be sorted.  Both samples must have at least 1000 entries (the
// critical values below are asymptotic).
double ks_statistic(const std::vector<double>& a, const std::vector<double>& b);

// Asymptotic two-sample critical value sqrt(-ln(alpha/2)/2) * sqrt((n+m)/(n m)).
double ks_critical(std::size_t n, std::size_t m, double alpha = 0.01);

} // namespace ruinlab
