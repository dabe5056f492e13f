#pragma once

// Stepping core shared by simulate_path, the coupled runs, and the path farm.
// Internal to src/.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ruinlab/errors.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/rng.hpp"
#include "ruinlab/sim.hpp"

namespace ruinlab::detail {

inline constexpr double k_nan = std::numeric_limits<double>::quiet_NaN();

// One diffusion state advanced by shared Brownian increments.  The ExactY step
//   X_{t+h} = (X_t + (c h / 2)(1 + y_h)) / y_h,
//   y_h     = exp((sigma^2/2 - a) h - sigma dW),
// telescopes to the trapezoid discretization of the strong solution X = V/Y
// without ever forming the exponentially large Y itself, so it is exact for
// the homogeneous part.  The Euler step is the usual first-order scheme; its
// one-step map loses monotonicity in x on astronomically rare large negative
// increments, which is why the exact coupling guarantees are stated for
// ExactY.
struct DiffusionState {
    double x;
    double w = 0.0;

    void advance(const ModelParams& p, Scheme scheme, double h, double dw) {
        w += dw;
        if (scheme == Scheme::ExactY) {
            const double y = std::exp((0.5 * p.sigma * p.sigma - p.a) * h - p.sigma * dw);
            x = (x + 0.5 * p.c * h * (1.0 + y)) / y;
        } else {
            x = x * (1.0 + p.a * h + p.sigma * dw) + p.c * h;
        }
    }
};

// First-hit bookkeeping for one leg.  All checks run at grid points; see the
// conventions on SimConfig.
struct OutcomeTracker {
    const SimConfig* cfg = nullptr;
    PathOutcome out;
    std::size_t next_level = 0;

    void init(const SimConfig& c, std::uint64_t path_index) {
        cfg = &c;
        out.path_index = path_index;
        out.crossing_times.assign(c.watch_levels.size(), std::nullopt);
    }

    // The surplus just before a claim can already have escaped upward.
    void note_pre_jump(double t_abs, double x_pre) {
        if (cfg->exit_hi && out.exit == ExitKind::None && x_pre >= *cfg->exit_hi) {
            out.exit = ExitKind::High;
            out.exit_time = t_abs;
        }
    }

    void note_jump_result(double t_abs, double x_post) {
        ++out.n_jumps;
        if (!out.ruin_time && x_post < 0.0) out.ruin_time = t_abs;
    }

    // Post-event checks; returns true when the configured stops fire.
    bool note_state(double t_abs, double x) {
        while (next_level < cfg->watch_levels.size() && x < cfg->watch_levels[next_level]) {
            out.crossing_times[next_level] = t_abs;
            ++next_level;
        }
        if (out.exit == ExitKind::None) {
            if (cfg->exit_hi && x >= *cfg->exit_hi) {
                out.exit = ExitKind::High;
                out.exit_time = t_abs;
            } else if (cfg->exit_lo && x < *cfg->exit_lo) {
                out.exit = ExitKind::Low;
                out.exit_time = t_abs;
            }
        }
        return (cfg->stop_on_ruin && out.ruin_time.has_value()) ||
               (cfg->stop_on_exit && out.exit != ExitKind::None);
    }

    void finish(double t_abs, double x) {
        out.stop_time = t_abs;
        out.terminal_value = x;
    }
};

struct NullRecorder {
    void row(double, double, double, double) {}
    void jump(const JumpEvent&) {}
};

struct FullRecorder {
    PathRecord* rec;
    void row(double t, double x, double w, double claim) {
        rec->times.push_back(t);
        rec->values.push_back(x);
        rec->w_values.push_back(w);
        rec->claim_marks.push_back(claim);
    }
    void jump(const JumpEvent& e) { rec->jumps.push_back(e); }
};

inline void check_initial_capital(double u) {
    if (!std::isfinite(u) || u < 0.0)
        throw std::invalid_argument("simulate: initial capital must be >= 0 and finite");
}

template <class Recorder>
PathOutcome run_single(const ModelParams& p, const SimConfig& cfg, double u,
                       const RngStream& stream, Recorder& rec) {
    check_initial_capital(u);
    const auto jumps = generate_jumps(p.lambda, cfg.horizon, p.claim, stream);
    DrawCursor normals(stream, Sub::Brownian);
    DiffusionState st{u};
    OutcomeTracker trk;
    trk.init(cfg, stream.path_index());

    double t = 0.0;
    rec.row(cfg.t0, u, 0.0, k_nan);
    bool stop = trk.note_state(cfg.t0, u);

    std::uint64_t k = 1; // next uniform tick
    std::size_t j = 0;   // next jump
    while (!stop && t < cfg.horizon) {
        const double tick = std::min(static_cast<double>(k) * cfg.dt, cfg.horizon);
        const bool jump_next = j < jumps.size() && jumps[j].time <= tick;
        const double te = jump_next ? jumps[j].time : tick;
        const double h = te - t;
        if (h > 0.0) st.advance(p, cfg.scheme, h, std::sqrt(h) * normals.next_normal());
        t = te;
        const double t_abs = cfg.t0 + t;

        double claim = k_nan;
        if (jump_next) {
            trk.note_pre_jump(t_abs, st.x);
            JumpEvent ev = jumps[j];
            ev.time = t_abs; // recorded events share the rows' time basis
            ev.pre_value = st.x;
            st.x -= ev.size;
            claim = ev.size;
            rec.jump(ev);
            trk.note_jump_result(t_abs, st.x);
            ++j;
        } else {
            ++k;
        }
        rec.row(t_abs, st.x, st.w, claim);
        stop = trk.note_state(t_abs, st.x);
    }
    trk.finish(cfg.t0 + t, st.x);
    return std::move(trk.out);
}

// Two legs, one set of draws.  Jump times are shared; the i-th claim of each
// leg comes from the same uniform through its own law's quantile.  Both legs
// run to the horizon (no early stop: violations are counted on the full grid).
// `va` counts grid points where leg a fails to dominate leg b.
template <class RecA, class RecB>
std::pair<PathOutcome, PathOutcome> run_coupled(const ModelParams& pa, const ModelParams& pb,
                                                const SimConfig& cfg, double ua, double ub,
                                                const RngStream& stream, RecA& ra, RecB& rb,
                                                std::size_t& violations) {
    check_initial_capital(ua);
    check_initial_capital(ub);
    if (pa.lambda != pb.lambda)
        throw std::invalid_argument("coupled run: legs must share the jump intensity");

    std::vector<double> times;
    {
        const auto shared = generate_jumps(pa.lambda, cfg.horizon, pa.claim, stream);
        times.reserve(shared.size());
        for (const auto& e : shared) times.push_back(e.time);
    }
    const auto size_at = [&](const ClaimDistribution& law, std::size_t i) {
        return law.quantile(stream.uniform(Sub::ClaimSizes, i));
    };

    DrawCursor normals(stream, Sub::Brownian);
    DiffusionState A{ua}, B{ub};
    OutcomeTracker ta, tb;
    ta.init(cfg, stream.path_index());
    tb.init(cfg, stream.path_index());
    violations = 0;

    double t = 0.0;
    ra.row(cfg.t0, A.x, 0.0, k_nan);
    rb.row(cfg.t0, B.x, 0.0, k_nan);
    ta.note_state(cfg.t0, A.x);
    tb.note_state(cfg.t0, B.x);
    if (A.x < B.x) ++violations;

    std::uint64_t k = 1;
    std::size_t j = 0;
    while (t < cfg.horizon) {
        const double tick = std::min(static_cast<double>(k) * cfg.dt, cfg.horizon);
        const bool jump_next = j < times.size() && times[j] <= tick;
        const double te = jump_next ? times[j] : tick;
        const double h = te - t;
        if (h > 0.0) {
            const double dw = std::sqrt(h) * normals.next_normal();
            A.advance(pa, cfg.scheme, h, dw);
            B.advance(pb, cfg.scheme, h, dw);
        }
        t = te;
        const double t_abs = cfg.t0 + t;

        double claim_a = k_nan, claim_b = k_nan;
        if (jump_next) {
            ta.note_pre_jump(t_abs, A.x);
            tb.note_pre_jump(t_abs, B.x);
            claim_a = size_at(pa.claim, j);
            claim_b = size_at(pb.claim, j);
            ra.jump({t_abs, claim_a, A.x});
            rb.jump({t_abs, claim_b, B.x});
            A.x -= claim_a;
            B.x -= claim_b;
            ta.note_jump_result(t_abs, A.x);
            tb.note_jump_result(t_abs, B.x);
            ++j;
        } else {
            ++k;
        }
        ra.row(t_abs, A.x, A.w, claim_a);
        rb.row(t_abs, B.x, B.w, claim_b);
        ta.note_state(t_abs, A.x);
        tb.note_state(t_abs, B.x);
        if (A.x < B.x) ++violations;
    }
    ta.finish(cfg.t0 + t, A.x);
    tb.finish(cfg.t0 + t, B.x);
    return {std::move(ta.out), std::move(tb.out)};
}

} // namespace ruinlab::detail
