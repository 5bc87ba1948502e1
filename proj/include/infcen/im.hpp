#pragma once

#include <cstdint>
#include <vector>

#include "infcen/graph.hpp"

namespace infcen {

struct GreedyResult {
  std::vector<NodeId> seeds;           // selection order
  std::vector<double> coverage_steps;  // cumulative covered fraction per seed
  double coverage = 0.0;               // final covered fraction
  double est_spread = 0.0;             // n * coverage
};

// Greedy max-cover over num_rr stored reverse reachable sets, with lazy
// marginal-gain re-evaluation. Ties break toward the smaller node id.
// Unlike the two-phase estimators this stores its sets, so it enforces a
// memory cap.
GreedyResult rr_greedy(const Graph& g, std::uint32_t k, std::uint64_t num_rr,
                       std::uint64_t seed, unsigned threads = 0,
                       std::size_t memory_cap_bytes = std::size_t(1) << 30);

}  // namespace infcen
