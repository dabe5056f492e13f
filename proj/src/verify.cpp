#include "ruinlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csvfmt.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/farm.hpp"
#include "ruinlab/sim.hpp"

namespace ruinlab {

namespace {

constexpr double k_sign_tol = 1e-12;

std::string fmt(double x) {
    std::string s;
    detail::append_number(s, x);
    return s;
}

std::string model_inputs(const ModelParams& p) {
    std::ostringstream os;
    os << "a=" << fmt(p.a) << " sigma=" << fmt(p.sigma) << " c=" << fmt(p.c)
       << " lambda=" << fmt(p.lambda) << " claim=" << p.claim.describe()
       << " rho=" << fmt(rho(p));
    return os.str();
}

std::string run_inputs(const ModelParams& p, const SimConfig& cfg, std::uint64_t n_paths,
                       std::uint64_t seed) {
    std::ostringstream os;
    os << model_inputs(p) << " dt=" << fmt(cfg.dt) << " n=" << n_paths << " seed=" << seed;
    return os.str();
}

} // namespace

std::string summary_line(const BoundReport& r) {
    std::ostringstream os;
    os << r.name << ": statistic=" << fmt(r.statistic) << " bound=" << fmt(r.analytic_bound);
    if (r.ruin_estimate) {
        const auto& e = *r.ruin_estimate;
        os << " p_hat=" << fmt(e.p_hat) << " ci=[" << fmt(e.ci_lo) << ", " << fmt(e.ci_hi)
           << "]";
    } else if (r.exit_estimate) {
        const auto& e = *r.exit_estimate;
        os << " p_hi=" << fmt(e.p_hi) << " censored=" << fmt(e.p_censored) << " adverse_ci_hi="
           << fmt(e.hi_upper_censored);
    }
    os << " slack=" << fmt(r.slack) << (r.pass ? " PASS" : " FAIL") << " -- " << r.inputs;
    return os.str();
}

std::vector<BoundReport> check_theorem_decay(const ModelParams& p, double M,
                                             const std::vector<double>& u_values,
                                             const SimConfig& cfg, std::uint64_t n_paths,
                                             std::uint64_t seed, unsigned workers) {
    const double r = rho(p);
    if (!(r > 1.0))
        throw RegimeError("check_theorem_decay: requires rho > 1, got rho = " + fmt(r));
    if (!net_profit_condition(p))
        throw RegimeError("check_theorem_decay: requires c > lambda * E[claim]");
    if (!(std::isfinite(M) && M > 0.0))
        throw RegimeError("check_theorem_decay: M must be > 0 and finite");
    if (!p.claim.bounded() || p.claim.essential_sup() > M)
        throw RegimeError("check_theorem_decay: claims must be bounded by M = " + fmt(M));
    if (u_values.empty())
        throw RegimeError("check_theorem_decay: need at least one initial capital");
    for (double u : u_values)
        if (!(std::isfinite(u) && u >= M))
            throw RegimeError("check_theorem_decay: every u must satisfy u >= M, got u = " +
                              fmt(u));

    std::vector<BoundReport> out;
    for (double u : u_values) {
        const double bound = std::pow(M / u, r - 1.0);
        std::vector<double> levels{0.0};
        if (u > M) levels.push_back(M);
        const auto ests = estimate_ruin_levels(p, cfg, u, levels, n_paths, seed, workers);
        for (const auto& e : ests) {
            BoundReport rep;
            rep.name = "decay_u" + fmt(u) + "_level" + fmt(e.level);
            rep.analytic_bound = bound;
            rep.ruin_estimate = e;
            rep.statistic = e.ci_hi;
            rep.slack = bound - e.ci_hi;
            rep.pass = e.ci_hi <= bound;
            rep.inputs = run_inputs(p, cfg, n_paths, seed) + " u=" + fmt(u) +
                         " level=" + fmt(e.level) + " T=" + fmt(e.horizon) + " M=" + fmt(M);
            out.push_back(std::move(rep));
        }
    }
    return out;
}

namespace {

BoundReport exit_report(const ModelParams& p, const char* name_stem, double u_star, double u,
                        double n_level, double bound, const SimConfig& cfg,
                        std::uint64_t n_paths, std::uint64_t seed, unsigned workers) {
    if (!(u_star <= u && u < n_level)) {
        std::ostringstream os;
        os << name_stem << ": need u* <= u < n_level, got u* = " << fmt(u_star)
           << ", u = " << fmt(u) << ", n_level = " << fmt(n_level);
        throw IntervalError(os.str());
    }
    const ExitEstimate e = estimate_exit(p, cfg, u, u_star, n_level, n_paths, seed, workers);
    BoundReport rep;
    rep.name = std::string(name_stem) + "_u" + fmt(u) + "_n" + fmt(n_level);
    rep.analytic_bound = bound;
    rep.exit_estimate = e;
    rep.statistic = e.hi_upper_censored;
    rep.slack = bound - rep.statistic;
    rep.pass = rep.statistic <= bound;
    rep.inputs = run_inputs(p, cfg, n_paths, seed) + " u=" + fmt(u) + " interval=[" +
                 fmt(u_star) + ", " + fmt(n_level) + ") T=" + fmt(e.horizon);
    return rep;
}

} // namespace

BoundReport check_exit_bound_A(const ModelParams& p, double alpha, double u, double n_level,
                               const SimConfig& cfg, std::uint64_t n_paths, std::uint64_t seed,
                               unsigned workers) {
    const double u_star = threshold_lemma_A(p, alpha); // validates rho < 1 and alpha
    const double bound = std::pow(u / n_level, alpha);
    return exit_report(p, "exit_power_bound", u_star, u, n_level, bound, cfg, n_paths, seed,
                       workers);
}

BoundReport check_exit_bound_B(const ModelParams& p, double u, double n_level,
                               const SimConfig& cfg, std::uint64_t n_paths, std::uint64_t seed,
                               unsigned workers) {
    const double ee = std::exp(std::exp(1.0));
    if (!(n_level > ee))
        throw DomainError("check_exit_bound_B: n_level must exceed e^e, got " + fmt(n_level));
    const double u_star = threshold_lemma_B(p); // validates rho == 1, always > e
    const double bound = std::log(std::log(u)) / std::log(std::log(n_level));
    return exit_report(p, "exit_loglog_bound", u_star, u, n_level, bound, cfg, n_paths, seed,
                       workers);
}

std::vector<BoundReport> check_certain_ruin(const ModelParams& p,
                                            const std::vector<double>& u_values,
                                            const SimConfig& cfg,
                                            const std::vector<double>& horizons,
                                            std::uint64_t n_paths, std::uint64_t seed,
                                            double target, unsigned workers) {
    const double r = rho(p);
    if (r > 1.0)
        throw RegimeError("check_certain_ruin: requires rho <= 1, got rho = " + fmt(r));
    if (!(p.lambda > 0.0))
        throw RegimeError("check_certain_ruin: lambda must be > 0 (claims are required for ruin)");
    if (!(std::isfinite(target) && target > 0.0 && target < 1.0))
        throw InvalidConfig("check_certain_ruin: target must lie in (0, 1)");
    if (u_values.empty())
        throw InvalidConfig("check_certain_ruin: need at least one initial capital");

    std::vector<BoundReport> out;
    for (double u : u_values) {
        const auto sweep = horizon_sweep(p, cfg, u, 0.0, horizons, n_paths, seed, workers);
        const RuinEstimate& last = sweep.back();

        BoundReport certain;
        certain.name = "certain_ruin_u" + fmt(u);
        certain.analytic_bound = target;
        certain.ruin_estimate = last;
        certain.statistic = last.ci_lo;
        certain.slack = last.ci_lo - target;
        certain.pass = last.ci_lo >= target;
        certain.inputs = run_inputs(p, cfg, n_paths, seed) + " u=" + fmt(u) +
                         " T=" + fmt(last.horizon);
        out.push_back(std::move(certain));

        BoundReport mono;
        mono.name = "horizon_monotone_u" + fmt(u);
        mono.analytic_bound = 0.0;
        mono.statistic = 0.0; // largest backward step; stays 0 when nondecreasing
        std::string seq = "p_hat(T)=";
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            if (i) {
                mono.statistic =
                    std::max(mono.statistic, sweep[i - 1].p_hat - sweep[i].p_hat);
                seq += ',';
            }
            seq += fmt(sweep[i].p_hat);
        }
        mono.slack = -mono.statistic;
        mono.pass = mono.statistic <= 0.0;
        mono.inputs = run_inputs(p, cfg, n_paths, seed) + " u=" + fmt(u) + " " + seq;
        out.push_back(std::move(mono));

        // coupled capped/uncapped pairs at reduced scale; the capped leg
        // dominates pathwise, so these counts are ordered surely, not just
        // in expectation
        const double cap = p.claim.mean();
        SimConfig cc = cfg;
        cc.horizon = std::min(horizons.back(), 200.0);
        cc.watch_levels.clear();
        cc.exit_lo.reset();
        cc.exit_hi.reset();
        const std::uint64_t n_cap = std::min<std::uint64_t>(n_paths, 200);
        std::uint64_t capped_hits = 0, uncapped_hits = 0;
        std::size_t violations = 0;
        bool implication_ok = true, times_ok = true;
        for (std::uint64_t i = 0; i < n_cap; ++i) {
            const auto pair = simulate_coupled_cap(p, cc, u, cap, RngStream(seed, i, 16));
            const auto& orig = pair.primary_path.outcome;    // original claims
            const auto& capped = pair.secondary_path.outcome; // capped claims
            violations += pair.ordering_violations;
            capped_hits += capped.ruin_time.has_value();
            uncapped_hits += orig.ruin_time.has_value();
            if (capped.ruin_time && !orig.ruin_time) implication_ok = false;
            if (capped.ruin_time && orig.ruin_time && !(*orig.ruin_time <= *capped.ruin_time))
                times_ok = false;
        }
        BoundReport capdom;
        capdom.name = "cap_dominance_u" + fmt(u);
        capdom.analytic_bound = 0.0;
        RuinEstimate capped_est;
        capped_est.u = u;
        capped_est.level = 0.0;
        capped_est.horizon = cc.horizon;
        capped_est.n_paths = n_cap;
        capped_est.n_hit = capped_hits;
        capped_est.seed = seed;
        capped_est.p_hat = static_cast<double>(capped_hits) / static_cast<double>(n_cap);
        capped_est.std_err = std::sqrt(capped_est.p_hat * (1.0 - capped_est.p_hat) /
                                       static_cast<double>(n_cap));
        const Interval w = wilson_interval(capped_hits, n_cap);
        capped_est.ci_lo = w.lo;
        capped_est.ci_hi = w.hi;
        capdom.ruin_estimate = capped_est;
        capdom.statistic = capped_est.p_hat -
                           static_cast<double>(uncapped_hits) / static_cast<double>(n_cap);
        capdom.slack = -capdom.statistic;
        capdom.pass = violations == 0 && implication_ok && times_ok && capdom.statistic <= 0.0;
        capdom.inputs = run_inputs(p, cc, n_cap, seed) + " u=" + fmt(u) + " cap=" + fmt(cap) +
                        " T=" + fmt(cc.horizon) + " capped_hits=" + fmt(double(capped_hits)) +
                        " uncapped_hits=" + fmt(double(uncapped_hits));
        out.push_back(std::move(capdom));
    }
    return out;
}

std::string summary_line(const SignReport& r) {
    const char* kind = r.test_function == TestFunction::Kind::PowerDecay  ? "power_decay"
                       : r.test_function == TestFunction::Kind::PowerGrowth ? "power_growth"
                                                                            : "loglog";
    std::ostringstream os;
    os << "signs_" << kind << ": threshold=" << fmt(r.threshold) << " grid=" << r.grid.size()
       << " worst_generator=" << fmt(r.worst_point.second) << "@x=" << fmt(r.worst_point.first)
       << " worst_bound=" << fmt(r.bound_worst_point.second) << "@x="
       << fmt(r.bound_worst_point.first) << (r.pass ? " PASS" : " FAIL");
    return os.str();
}

SignReport certify_generator_signs(const ModelParams& p, const Regime& regime,
                                   const GridSpec& grid, const QuadConfig& quad) {
    if (grid.n_points < 2)
        throw InvalidConfig("certify_generator_signs: grid needs at least 2 points");
    if (!(std::isfinite(grid.span) && grid.span > 1.0))
        throw InvalidConfig("certify_generator_signs: grid span must exceed 1");
    if (!p.claim.bounded())
        throw DomainError("certify_generator_signs: claim law must be bounded");

    const double r = rho(p);
    double threshold = 0.0;
    std::optional<TestFunction> F;
    switch (regime.kind) {
    case Regime::Kind::RhoGt1:
        F = TestFunction::power_decay(r); // validates rho > 1
        threshold = p.claim.essential_sup();
        break;
    case Regime::Kind::RhoLt1: {
        const double alpha = regime.alpha ? *regime.alpha : default_alpha(p);
        F = TestFunction::power_growth(alpha, r);
        threshold = threshold_lemma_A(p, alpha);
        break;
    }
    case Regime::Kind::RhoEq1:
        F = TestFunction::loglog();
        threshold = threshold_lemma_B(p);
        break;
    }

    const double mu = p.claim.mean();
    const auto displayed_bound = [&](double x) {
        switch (F->kind()) {
        case TestFunction::Kind::PowerDecay:
            return (1.0 - r) * (p.c - p.lambda * mu) * std::pow(x, -r);
        case TestFunction::Kind::PowerGrowth: {
            const double al = F->exponent();
            return al * std::pow(x, al) *
                   (0.5 * p.sigma * p.sigma * (r + al - 1.0) + p.c / x);
        }
        case TestFunction::Kind::LogLog: {
            const double lx = std::log(x);
            return (p.c / x - 0.5 * p.sigma * p.sigma / lx) / lx;
        }
        }
        return 0.0; // unreachable
    };

    SignReport rep;
    rep.test_function = F->kind();
    rep.threshold = threshold;
    rep.grid.reserve(grid.n_points);
    const auto n = static_cast<double>(grid.n_points - 1);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        rep.grid.push_back(threshold * std::pow(grid.span, static_cast<double>(i) / n));

    rep.gen_values.reserve(grid.n_points);
    rep.bound_values.reserve(grid.n_points);
    for (double x : rep.grid) {
        rep.gen_values.push_back(generator_apply(F.value(), p, x, quad));
        rep.bound_values.push_back(displayed_bound(x));
    }

    const auto gi = std::max_element(rep.gen_values.begin(), rep.gen_values.end());
    const auto bi = std::max_element(rep.bound_values.begin(), rep.bound_values.end());
    rep.worst_point = {rep.grid[gi - rep.gen_values.begin()], *gi};
    rep.bound_worst_point = {rep.grid[bi - rep.bound_values.begin()], *bi};
    rep.all_nonpositive = *gi <= k_sign_tol;
    rep.bound_all_nonpositive = *bi <= k_sign_tol;
    rep.pass = rep.all_nonpositive && rep.bound_all_nonpositive;
    return rep;
}

BoundReport check_monotone_psi(const ModelParams& p, const std::vector<double>& u_values,
                               double level, const SimConfig& cfg, std::uint64_t n_paths,
                               std::uint64_t seed, unsigned workers) {
    if (u_values.empty())
        throw OrderError("check_monotone_psi: need at least one initial capital");
    for (std::size_t i = 0; i < u_values.size(); ++i) {
        if (!(u_values[i] > level))
            throw OrderError("check_monotone_psi: every u must exceed the level");
        if (i && !(u_values[i - 1] <= u_values[i]))
            throw OrderError("check_monotone_psi: u_values must be nondecreasing");
    }

    std::vector<RuinEstimate> ests;
    ests.reserve(u_values.size());
    for (double u : u_values)
        ests.push_back(estimate_ruin(p, cfg, u, level, n_paths, seed, workers));

    BoundReport rep;
    rep.name = "psi_monotone_level" + fmt(level);
    rep.analytic_bound = 0.0;
    rep.ruin_estimate = ests.front();
    rep.statistic = 0.0; // largest increase along ascending u; 0 when none
    std::string seq = "p_hat(u)=";
    for (std::size_t i = 0; i < ests.size(); ++i) {
        if (i) {
            rep.statistic = std::max(rep.statistic, ests[i].p_hat - ests[i - 1].p_hat);
            seq += ',';
        }
        seq += fmt(ests[i].p_hat);
    }
    rep.slack = -rep.statistic;
    rep.pass = rep.statistic <= 0.0;
    rep.inputs = run_inputs(p, cfg, n_paths, seed) + " level=" + fmt(level) + " " + seq;
    return rep;
}

double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 1000 || b.size() < 1000)
        throw std::invalid_argument(
            "ks_statistic: both samples need at least 1000 entries for the "
            "asymptotic critical values to apply");
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) ++i;
        while (j < sb.size() && sb[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
    if (n == 0 || m == 0) throw std::invalid_argument("ks_critical: sample sizes must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ks_critical: alpha must lie in (0, 1)");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

BoundReport check_markov_restart(const ModelParams& p, double x, double s, double t,
                                 const SimConfig& cfg, std::uint64_t n_paths, std::uint64_t seed,
                                 unsigned workers) {
    if (!(std::isfinite(x) && x > 0.0))
        throw InvalidConfig("check_markov_restart: x must be > 0 and finite");
    if (!(std::isfinite(s) && s >= 0.0))
        throw InvalidConfig("check_markov_restart: s must be >= 0 and finite");
    if (!(std::isfinite(t) && t > 0.0))
        throw InvalidConfig("check_markov_restart: t must be > 0 and finite");
    if (n_paths < 1000)
        throw InvalidConfig("check_markov_restart: need at least 1000 paths per sample");

    SimConfig run = cfg;
    run.horizon = t;
    run.watch_levels.clear();
    run.exit_lo.reset();
    run.exit_hi.reset();
    run.stop_on_ruin = true;

    // restarted-at-s sample: time origin s, fresh substream block
    run.t0 = s;
    const auto restarted = run_farm(p, run, x, seed, n_paths, workers, 0, 16 /* fresh block */);
    // fresh-from-0 sample: disjoint path indices
    run.t0 = 0.0;
    const auto fresh = run_farm(p, run, x, seed, n_paths, workers, n_paths, 0);

    std::vector<double> va, vb;
    va.reserve(n_paths);
    vb.reserve(n_paths);
    for (const auto& o : restarted)
        if (!o.ruin_time) va.push_back(o.terminal_value);
    for (const auto& o : fresh)
        if (!o.ruin_time) vb.push_back(o.terminal_value);
    if (va.size() < 1000 || vb.size() < 1000)
        throw InvalidConfig("check_markov_restart: fewer than 1000 paths survived to the "
                            "horizon; increase n_paths or shorten t");

    const double ks = ks_statistic(va, vb);
    const double crit = ks_critical(va.size(), vb.size());

    BoundReport rep;
    rep.name = "markov_restart_x" + fmt(x) + "_s" + fmt(s) + "_t" + fmt(t);
    rep.analytic_bound = crit;
    rep.statistic = ks;
    rep.slack = crit - ks;
    rep.pass = ks < crit;
    rep.inputs = run_inputs(p, cfg, n_paths, seed) + " x=" + fmt(x) + " s=" + fmt(s) +
                 " t=" + fmt(t) + " n_restarted=" + fmt(double(va.size())) +
                 " n_fresh=" + fmt(double(vb.size()));
    return rep;
}

} // namespace ruinlab
