#pragma once

#include <cstdint>
#include <vector>

#include "infcen/graph.hpp"
#include "infcen/rng.hpp"

namespace infcen {

// Validated seed set: sorted unique ids below the node count.
struct SeedSet {
  std::vector<NodeId> nodes;

  static SeedSet from(std::vector<NodeId> ids, NodeId n);
};

struct SpreadEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t num_sims = 0;
};

// One cascade: each newly activated node gets one chance per out-edge to
// activate the head, independently with the edge probability. Returns the
// sorted activated set (a superset of the seeds).
std::vector<NodeId> forward_simulate(const Graph& g, const SeedSet& seeds,
                                     RngStream& rng);

// Monte-Carlo influence spread. Simulation i draws its randomness from
// stream (seed, i), so the estimate does not depend on the thread count.
SpreadEstimate estimate_spread_mc(const Graph& g, const SeedSet& seeds,
                                  std::uint64_t num_sims, std::uint64_t seed,
                                  unsigned threads = 0);

}  // namespace infcen
