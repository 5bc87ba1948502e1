#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infcen/graph.hpp"
#include "infcen/rng.hpp"
#include "infcen/weights.hpp"

namespace infcen {

// Reverse-reachable set: the nodes that reach `root` in one sampled
// live-edge graph. `width` is the total in-degree of the members, which is
// proportional to the sampling cost.
struct RRSet {
  NodeId root = 0;
  std::vector<NodeId> members;  // sorted, includes root
  std::uint64_t width = 0;
};

// Prefix-sum table for weight-proportional root selection.
class CumulativeWeights {
 public:
  explicit CumulativeWeights(const NodeWeights& w);
  NodeId sample(RngStream& rng) const;

 private:
  std::vector<double> cum_;
};

// Reverse-BFS sampler with reusable scratch; one instance per worker.
// Edges are sampled lazily while walking, so a set costs O(width + 1) and
// no live-edge graph is materialized. Each node's in-edges are drawn at
// most once per sample. Edge draws compare raw 64-bit stream words against
// precomputed fixed-point thresholds; p = 0 can never fire and p = 1
// always fires.
class RRSampler {
 public:
  explicit RRSampler(const Graph& g);

  // Members land in an internal buffer, sorted; valid until the next call.
  std::span<const NodeId> sample_from_into(NodeId root, RngStream& rng,
                                           std::uint64_t* width = nullptr);

  // Accumulation path: same walk, no sort, no width.
  std::span<const NodeId> sample_members_unsorted(NodeId root, RngStream& rng);

 private:
  void walk(NodeId root, RngStream& rng);

  const Graph& g_;
  std::vector<std::uint64_t> in_thresh_;  // CSR-aligned with in_probs
  std::vector<std::uint64_t> seen_;
  std::uint64_t epoch_;
  std::vector<NodeId> members_;
  std::size_t cursor_ = 0;
};

RRSet sample_rr_from(const Graph& g, NodeId root, RngStream& rng);
RRSet sample_rr_uniform(const Graph& g, RngStream& rng);
RRSet sample_rr_weighted(const Graph& g, const CumulativeWeights& cum,
                         RngStream& rng);

}  // namespace infcen
