#include "ruinlab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csvfmt.hpp"
#include "ruinlab/errors.hpp"

namespace ruinlab {

Interval wilson_interval(std::uint64_t hits, std::uint64_t n, double z) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n must be >= 1");
    if (hits > n) throw std::invalid_argument("wilson_interval: hits must not exceed n");
    if (!(std::isfinite(z) && z >= 0.0))
        throw std::invalid_argument("wilson_interval: z must be >= 0 and finite");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    if (z == 0.0) return {p, p};
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = p + z2 / (2.0 * nn);
    const double rad = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    Interval out{std::max(0.0, (center - rad) / denom), std::min(1.0, (center + rad) / denom)};
    // center - rad cancels to 0 (resp. 1) at the boundary counts; keep it exact
    if (hits == 0) out.lo = 0.0;
    if (hits == n) out.hi = 1.0;
    return out;
}

namespace {

RuinEstimate make_estimate(double u, double level, double horizon, std::uint64_t n_paths,
                           std::uint64_t n_hit, std::uint64_t seed) {
    RuinEstimate e;
    e.u = u;
    e.level = level;
    e.horizon = horizon;
    e.n_paths = n_paths;
    e.n_hit = n_hit;
    e.seed = seed;
    const double nn = static_cast<double>(n_paths);
    e.p_hat = static_cast<double>(n_hit) / nn;
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / nn);
    const Interval w = wilson_interval(n_hit, n_paths);
    e.ci_lo = w.lo;
    e.ci_hi = w.hi;
    if (n_hit >= 10 && n_hit + 10 <= n_paths) {
        constexpr double z = 1.959963984540054;
        e.normal_ci = Interval{std::max(0.0, e.p_hat - z * e.std_err),
                               std::min(1.0, e.p_hat + z * e.std_err)};
    }
    return e;
}

void check_level(double level, double u) {
    if (!(std::isfinite(level) && level >= 0.0 && level < u)) {
        std::ostringstream os;
        os << "estimate_ruin: need 0 <= level < u, got level = " << level << ", u = " << u;
        throw LevelError(os.str());
    }
}

void check_paths(std::uint64_t n_paths) {
    if (n_paths == 0) throw std::invalid_argument("estimate: n_paths must be >= 1");
}

} // namespace

RuinEstimate estimate_ruin(const ModelParams& p, const SimConfig& cfg_in, double u, double level,
                           std::uint64_t n_paths, std::uint64_t seed, unsigned workers) {
    check_level(level, u);
    check_paths(n_paths);
    SimConfig cfg = cfg_in;
    cfg.watch_levels.clear();
    cfg.exit_hi.reset();
    std::uint64_t n_hit = 0;
    if (level == 0.0) {
        // ruin proper: only claims can take the surplus negative
        cfg.exit_lo.reset();
        cfg.stop_on_ruin = true;
        for (const auto& o : run_farm(p, cfg, u, seed, n_paths, workers))
            n_hit += o.ruin_time.has_value();
    } else {
        // downcrossing of a positive level doubles as a low exit, which lets
        // the path stop at the first hit
        cfg.exit_lo = level;
        cfg.stop_on_exit = true;
        for (const auto& o : run_farm(p, cfg, u, seed, n_paths, workers))
            n_hit += o.exit == ExitKind::Low;
    }
    return make_estimate(u, level, cfg.horizon, n_paths, n_hit, seed);
}

std::vector<RuinEstimate> estimate_ruin_levels(const ModelParams& p, const SimConfig& cfg_in,
                                               double u, const std::vector<double>& levels,
                                               std::uint64_t n_paths, std::uint64_t seed,
                                               unsigned workers) {
    check_paths(n_paths);
    if (levels.empty()) throw LevelError("estimate_ruin_levels: need at least one level");
    for (double lvl : levels) check_level(lvl, u);

    SimConfig cfg = cfg_in;
    cfg.exit_lo.reset();
    cfg.exit_hi.reset();
    cfg.stop_on_ruin = true; // ruin ends every watched event: X < 0 < level
    cfg.watch_levels.clear();
    for (double lvl : levels)
        if (lvl > 0.0) cfg.watch_levels.push_back(lvl);
    cfg.validate_and_normalize(); // fix watch order before reading outcomes

    std::vector<std::uint64_t> hits(levels.size(), 0);
    const auto outcomes = run_farm(p, cfg, u, seed, n_paths, workers);
    for (const auto& o : outcomes) {
        for (std::size_t li = 0; li < levels.size(); ++li) {
            if (levels[li] == 0.0) {
                hits[li] += o.ruin_time.has_value();
            } else {
                const auto it = std::find(cfg.watch_levels.begin(), cfg.watch_levels.end(),
                                          levels[li]);
                const auto idx = static_cast<std::size_t>(it - cfg.watch_levels.begin());
                hits[li] += o.crossing_times[idx].has_value();
            }
        }
    }
    std::vector<RuinEstimate> out;
    out.reserve(levels.size());
    for (std::size_t li = 0; li < levels.size(); ++li)
        out.push_back(make_estimate(u, levels[li], cfg.horizon, n_paths, hits[li], seed));
    return out;
}

std::vector<RuinEstimate> horizon_sweep(const ModelParams& p, const SimConfig& cfg_in, double u,
                                        double level, const std::vector<double>& horizons,
                                        std::uint64_t n_paths, std::uint64_t seed,
                                        unsigned workers) {
    check_level(level, u);
    check_paths(n_paths);
    if (horizons.empty()) throw InvalidConfig("horizon_sweep: need at least one horizon");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(std::isfinite(horizons[i]) && horizons[i] > 0.0))
            throw InvalidConfig("horizon_sweep: horizons must be > 0 and finite");
        if (i && !(horizons[i - 1] < horizons[i]))
            throw InvalidConfig("horizon_sweep: horizons must be strictly increasing");
    }

    SimConfig cfg = cfg_in;
    cfg.horizon = horizons.back();
    cfg.watch_levels.clear();
    cfg.exit_hi.reset();
    if (level == 0.0) {
        cfg.exit_lo.reset();
        cfg.stop_on_ruin = true;
    } else {
        cfg.exit_lo = level;
        cfg.stop_on_exit = true;
    }

    const auto outcomes = run_farm(p, cfg, u, seed, n_paths, workers);
    std::vector<RuinEstimate> out;
    out.reserve(horizons.size());
    for (double T : horizons) {
        std::uint64_t n_hit = 0;
        for (const auto& o : outcomes) {
            const auto& hit =
                level == 0.0 ? o.ruin_time : (o.exit == ExitKind::Low ? o.exit_time : std::nullopt);
            n_hit += hit.has_value() && *hit <= T;
        }
        out.push_back(make_estimate(u, level, T, n_paths, n_hit, seed));
    }
    return out;
}

ExitEstimate estimate_exit(const ModelParams& p, const SimConfig& cfg_in, double u, double lo,
                           double hi, std::uint64_t n_paths, std::uint64_t seed,
                           unsigned workers) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= u && u < hi)) {
        std::ostringstream os;
        os << "estimate_exit: need 0 <= lo <= u < hi, got lo = " << lo << ", u = " << u
           << ", hi = " << hi;
        throw IntervalError(os.str());
    }
    check_paths(n_paths);

    SimConfig cfg = cfg_in;
    cfg.watch_levels.clear();
    cfg.exit_lo = lo;
    cfg.exit_hi = hi;
    cfg.stop_on_exit = true;
    cfg.stop_on_ruin = true; // unreachable before a low exit while lo >= 0

    ExitEstimate e;
    e.u = u;
    e.lo = lo;
    e.hi = hi;
    e.horizon = cfg.horizon;
    e.n_paths = n_paths;
    e.seed = seed;
    for (const auto& o : run_farm(p, cfg, u, seed, n_paths, workers)) {
        switch (o.exit) {
        case ExitKind::High: ++e.n_hi; break;
        case ExitKind::Low: ++e.n_lo; break;
        case ExitKind::None: ++e.n_censored; break;
        }
    }
    const double nn = static_cast<double>(n_paths);
    e.p_hi = static_cast<double>(e.n_hi) / nn;
    e.p_lo = static_cast<double>(e.n_lo) / nn;
    e.p_censored = static_cast<double>(e.n_censored) / nn;
    e.hi_ci = wilson_interval(e.n_hi, n_paths);
    e.lo_ci = wilson_interval(e.n_lo, n_paths);
    e.hi_upper_censored = wilson_interval(e.n_hi + e.n_censored, n_paths).hi;
    return e;
}

std::string csv_header() {
    return "experiment_id,u,level,horizon,n_paths,n_hit,p_hat,ci_lo,ci_hi,seed\n";
}

std::string csv_row(const std::string& experiment_id, const RuinEstimate& e) {
    std::string s;
    s.reserve(experiment_id.size() + 96);
    s += experiment_id;
    s += ',';
    detail::append_number(s, e.u);
    s += ',';
    detail::append_number(s, e.level);
    s += ',';
    detail::append_number(s, e.horizon);
    s += ',';
    detail::append_number(s, e.n_paths);
    s += ',';
    detail::append_number(s, e.n_hit);
    s += ',';
    detail::append_number(s, e.p_hat);
    s += ',';
    detail::append_number(s, e.ci_lo);
    s += ',';
    detail::append_number(s, e.ci_hi);
    s += ',';
    detail::append_number(s, e.seed);
    s += '\n';
    return s;
}

} // namespace ruinlab
