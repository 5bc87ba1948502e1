#include "infcen/rrset.hpp"

#include <algorithm>

namespace infcen {

CumulativeWeights::CumulativeWeights(const NodeWeights& w) {
  if (!(w.total > 0.0))
    throw std::invalid_argument("total weight must be positive");
  cum_.reserve(w.w.size());
  double acc = 0.0;
  for (double x : w.w) {
    acc += x;
    cum_.push_back(acc);
  }
}

NodeId CumulativeWeights::sample(RngStream& rng) const {
  double target = rng.next_unit() * cum_.back();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  if (it == cum_.end()) --it;  // target == total after rounding
  return static_cast<NodeId>(it - cum_.begin());
}

namespace {

constexpr std::uint64_t kAlways = ~std::uint64_t(0);

std::uint64_t prob_threshold(double p) {
  if (p >= 1.0) return kAlways;
  if (p <= 0.0) return 0;
  return static_cast<std::uint64_t>(p * 0x1.0p64);
}

bool fires(std::uint64_t word, std::uint64_t threshold) {
  return word < threshold || threshold == kAlways;
}

}  // namespace

RRSampler::RRSampler(const Graph& g)
    : g_(g), seen_(g.node_count(), 0), epoch_(0) {
  in_thresh_.reserve(g.edge_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (double p : g.in_probs(v)) in_thresh_.push_back(prob_threshold(p));
}

void RRSampler::walk(NodeId root, RngStream& rng) {
  ++epoch_;
  members_.clear();
  cursor_ = 0;
  members_.push_back(root);
  seen_[root] = epoch_;
  // members_ doubles as the BFS queue; cursor_ marks the next node whose
  // in-edges still need their Bernoulli draws.
  while (cursor_ < members_.size()) {
    NodeId u = members_[cursor_++];
    auto nbrs = g_.in_neighbors(u);
    const std::uint64_t* thresh = in_thresh_.data() + g_.in_offset(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      NodeId v = nbrs[i];
      if (fires(rng.next_u64(), thresh[i]) && seen_[v] != epoch_) {
        seen_[v] = epoch_;
        members_.push_back(v);
      }
    }
  }
}

std::span<const NodeId> RRSampler::sample_from_into(NodeId root,
                                                    RngStream& rng,
                                                    std::uint64_t* width) {
  walk(root, rng);
  std::sort(members_.begin(), members_.end());
  if (width) {
    std::uint64_t w = 0;
    for (NodeId v : members_) w += g_.in_degree(v);
    *width = w;
  }
  return members_;
}

std::span<const NodeId> RRSampler::sample_members_unsorted(NodeId root,
                                                           RngStream& rng) {
  walk(root, rng);
  return members_;
}

RRSet sample_rr_from(const Graph& g, NodeId root, RngStream& rng) {
  if (root >= g.node_count()) throw std::invalid_argument("root out of range");
  RRSampler sampler(g);
  RRSet r;
  r.root = root;
  auto span = sampler.sample_from_into(root, rng, &r.width);
  r.members.assign(span.begin(), span.end());
  return r;
}

RRSet sample_rr_uniform(const Graph& g, RngStream& rng) {
  if (g.node_count() == 0)
    throw std::invalid_argument("cannot sample from an empty graph");
  return sample_rr_from(g, rng.next_below(g.node_count()), rng);
}

RRSet sample_rr_weighted(const Graph& g, const CumulativeWeights& cum,
                         RngStream& rng) {
  return sample_rr_from(g, cum.sample(rng), rng);
}

}  // namespace infcen
