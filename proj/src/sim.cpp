#include "ruinlab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "csvfmt.hpp"
#include "engine.hpp"
#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {
void require_cfg(bool ok, const char* what) {
    if (!ok) throw InvalidConfig(what);
}
} // namespace

void SimConfig::validate_and_normalize() {
    require_cfg(std::isfinite(dt) && dt > 0.0, "sim config: dt must be > 0 and finite");
    require_cfg(std::isfinite(horizon) && horizon > 0.0,
                "sim config: horizon must be > 0 and finite");
    require_cfg(dt <= horizon, "sim config: dt must not exceed the horizon");
    require_cfg(std::isfinite(t0) && t0 >= 0.0, "sim config: t0 must be >= 0 and finite");
    for (double lvl : watch_levels)
        require_cfg(std::isfinite(lvl) && lvl >= 0.0,
                    "sim config: watch levels must be >= 0 and finite");
    std::sort(watch_levels.begin(), watch_levels.end(), std::greater<>());
    watch_levels.erase(std::unique(watch_levels.begin(), watch_levels.end()),
                       watch_levels.end());
    if (exit_lo)
        require_cfg(std::isfinite(*exit_lo) && *exit_lo >= 0.0,
                    "sim config: exit_lo must be >= 0 and finite");
    if (exit_hi)
        require_cfg(std::isfinite(*exit_hi) && *exit_hi > 0.0,
                    "sim config: exit_hi must be > 0 and finite");
    if (exit_lo && exit_hi)
        require_cfg(*exit_lo < *exit_hi, "sim config: exit_lo must be below exit_hi");
}

SimConfig SimConfig::defaults_for(double lambda) {
    SimConfig cfg;
    if (lambda > 0.0) cfg.dt = 1e-3 * std::min(1.0, 1.0 / lambda);
    return cfg;
}

std::vector<JumpEvent> generate_jumps(double lambda, double horizon,
                                      const ClaimDistribution& claim, const RngStream& stream) {
    if (!(std::isfinite(lambda) && lambda >= 0.0))
        throw std::invalid_argument("generate_jumps: lambda must be >= 0 and finite");
    if (!(std::isfinite(horizon) && horizon > 0.0))
        throw std::invalid_argument("generate_jumps: horizon must be > 0 and finite");
    std::vector<JumpEvent> out;
    if (lambda == 0.0) return out;
    const double mean_gap = 1.0 / lambda;
    out.reserve(static_cast<std::size_t>(lambda * horizon * 1.25) + 4);
    double t = 0.0;
    for (std::uint64_t i = 0;; ++i) {
        t += stream.exponential(Sub::JumpTimes, i, mean_gap);
        if (!(t <= horizon)) break;
        out.push_back({t, claim.quantile(stream.uniform(Sub::ClaimSizes, i)), detail::k_nan});
    }
    return out;
}

PathRecord simulate_path(const ModelParams& p, const SimConfig& cfg_in, double u,
                         RngStream stream) {
    SimConfig cfg = cfg_in;
    cfg.validate_and_normalize();
    PathRecord rec;
    detail::FullRecorder fr{&rec};
    rec.outcome = detail::run_single(p, cfg, u, stream, fr);
    return rec;
}

namespace {
// Shared joint-loop wrapper; `a` is the dominating leg of detail::run_coupled.
CoupledPair make_pair_records(const ModelParams& pa, const ModelParams& pb, const SimConfig& cfg,
                              double ua, double ub, const RngStream& stream) {
    PathRecord ra, rb;
    detail::FullRecorder fa{&ra}, fb{&rb};
    std::size_t violations = 0;
    auto outcomes = detail::run_coupled(pa, pb, cfg, ua, ub, stream, fa, fb, violations);
    ra.outcome = std::move(outcomes.first);
    rb.outcome = std::move(outcomes.second);
    CoupledPair pair;
    pair.ordering_violations = violations;
    pair.primary_path = std::move(ra);
    pair.secondary_path = std::move(rb);
    return pair;
}
} // namespace

CoupledPair simulate_coupled_initial(const ModelParams& p, const SimConfig& cfg_in, double u,
                                     double v, RngStream stream) {
    if (!(u >= v)) {
        std::ostringstream os;
        os << "coupled initial capitals: need u >= v, got u = " << u << ", v = " << v;
        throw OrderError(os.str());
    }
    SimConfig cfg = cfg_in;
    cfg.validate_and_normalize();
    // primary starts higher and dominates
    CoupledPair pair = make_pair_records(p, p, cfg, u, v, stream);
    pair.kind = CouplingKind::InitialCapital;
    return pair;
}

CoupledPair simulate_coupled_cap(const ModelParams& p, const SimConfig& cfg_in, double u,
                                 double M, RngStream stream) {
    SimConfig cfg = cfg_in;
    cfg.validate_and_normalize();
    ModelParams capped(p.a, p.sigma, p.c, p.lambda, p.claim.capped(M));
    // capped claims shrink every loss, so the capped leg dominates
    CoupledPair pair = make_pair_records(capped, p, cfg, u, u, stream);
    // callers expect primary = original claims, secondary = capped ones
    std::swap(pair.primary_path, pair.secondary_path);
    pair.kind = CouplingKind::ClaimCap;
    return pair;
}

void write_trace_csv(const PathRecord& rec, std::ostream& os) {
    std::string buf;
    buf.reserve(rec.times.size() * 48 + 64);
    buf += "time,value,is_jump,claim_size\n";
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        detail::append_number(buf, rec.times[i]);
        buf += ',';
        detail::append_number(buf, rec.values[i]);
        const bool is_jump = !std::isnan(rec.claim_marks[i]);
        buf += is_jump ? ",1," : ",0,";
        if (is_jump) detail::append_number(buf, rec.claim_marks[i]);
        buf += '\n';
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

} // namespace ruinlab
