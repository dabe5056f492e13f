#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ruinlab/model.hpp"
#include "ruinlab/rng.hpp"

namespace ruinlab {

enum class Scheme {
    ExactY, // renormalized strong-solution step: exact GBM factor + trapezoid premium
    Euler,  // classic Euler-Maruyama step
};

enum class ExitKind { None, High, Low };

// Time stepping and event detection for one path.  Times are reported as
// t0 + run time; the grid is the union of uniform dt ticks and the exact jump
// times.  Detection conventions, applied at grid points only:
//   ruin        X < 0 strictly, checked right after a claim (the surplus
//               cannot change sign between claims while c >= 0);
//   crossings   X < level strictly, first time only;
//   exit high   X >= exit_hi, the value just before a claim counts too;
//   exit low    X < exit_lo strictly.
struct SimConfig {
    double dt = 1e-3;
    double horizon = 100.0;
    Scheme scheme = Scheme::ExactY;
    double t0 = 0.0; // shifts reported times, nothing else

    std::vector<double> watch_levels; // normalized to strictly descending
    std::optional<double> exit_lo;
    std::optional<double> exit_hi;

    bool stop_on_ruin = true;
    bool stop_on_exit = true;

    // Throws InvalidConfig; sorts watch_levels descending and drops duplicates.
    void validate_and_normalize();

    // dt = 1e-3 * min(1, 1/lambda): at least a thousand ticks per unit time
    // and per mean claim interval.
    static SimConfig defaults_for(double lambda);
};

struct JumpEvent {
    double time;
    double size;
    double pre_value; // surplus just before the claim hits; NaN until simulated
};

struct PathOutcome {
    std::uint64_t path_index = 0;
    std::optional<double> ruin_time;
    std::vector<std::optional<double>> crossing_times; // parallel to watch_levels
    ExitKind exit = ExitKind::None;
    std::optional<double> exit_time;
    double terminal_value = 0.0; // value when the path stopped
    double stop_time = 0.0;
    std::size_t n_jumps = 0; // claims applied before the stop
};

// Full trajectory; rows are aligned across times/values/w_values/claim_marks.
// values[0] = u at t0.  Rows at jump times hold the post-jump surplus; the
// pre-jump surplus lives in jumps[].pre_value.
struct PathRecord {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> w_values;    // cumulative Brownian path, w_values[0] = 0
    std::vector<double> claim_marks; // claim size at jump rows, NaN elsewhere
    std::vector<JumpEvent> jumps;
    PathOutcome outcome;
};

// Poisson(lambda) arrivals on (0, horizon] with sizes drawn from the claim
// law by inverse CDF.  The i-th event consumes draw i of the JumpTimes and
// ClaimSizes substreams, so two runs sharing (seed, path) see identical
// arrival times, and identical claims up to their laws' quantile maps.
std::vector<JumpEvent> generate_jumps(double lambda, double horizon,
                                      const ClaimDistribution& claim, const RngStream& stream);

// u >= 0 (the surplus starts nonnegative; 0 itself is not ruin).
PathRecord simulate_path(const ModelParams& p, const SimConfig& cfg, double u, RngStream stream);

enum class CouplingKind { InitialCapital, ClaimCap };

// Two paths driven by identical randomness.  Both legs always run to the
// horizon (no early stop), so the domination invariant can be checked at
// every grid point.  ordering_violations counts grid points where the
// dominating leg sits strictly below the dominated one:
//   InitialCapital  primary (starts at u) >= secondary (starts at v)
//   ClaimCap        secondary (capped claims) >= primary (original claims)
struct CoupledPair {
    PathRecord primary_path;
    PathRecord secondary_path;
    CouplingKind kind = CouplingKind::InitialCapital;
    std::size_t ordering_violations = 0;
};

// Same model, same draws, initial capitals u >= v >= 0 (OrderError otherwise).
CoupledPair simulate_coupled_initial(const ModelParams& p, const SimConfig& cfg, double u,
                                     double v, RngStream stream);

// Same start, original claims (primary) versus claims capped at M (secondary),
// built from the same uniform draws, so each capped claim is exactly
// min(original claim, M).
CoupledPair simulate_coupled_cap(const ModelParams& p, const SimConfig& cfg, double u, double M,
                                 RngStream stream);

// One row per grid point: time,value,is_jump,claim_size (claim_size empty on
// non-jump rows).
void write_trace_csv(const PathRecord& rec, std::ostream& os);

} // namespace ruinlab
