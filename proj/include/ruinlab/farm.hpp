#pragma once

#include <cstdint>
#include <vector>

#include "ruinlab/model.hpp"
#include "ruinlab/sim.hpp"

namespace ruinlab {

// Worker count: explicit request wins, then the RUINLAB_WORKERS environment
// variable, then hardware concurrency (minimum 1).
unsigned resolve_workers(unsigned requested);

// Simulates path indices [first_path, first_path + n_paths) and returns their
// outcomes ordered by path index.  Work is handed out through an atomic
// counter, but every path's randomness is addressed purely by its index, so
// the result is identical for any worker count or schedule.
std::vector<PathOutcome> run_farm(const ModelParams& p, const SimConfig& cfg, double u,
                                  std::uint64_t seed, std::uint64_t n_paths,
                                  unsigned workers = 0, std::uint64_t first_path = 0,
                                  std::uint32_t substream_base = 0);

} // namespace ruinlab
