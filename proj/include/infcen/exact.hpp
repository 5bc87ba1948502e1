#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "infcen/graph.hpp"
#include "infcen/weights.hpp"

// Brute-force ground truth at desk scale: explicit P(S,T) influence tables,
// live-edge enumeration, and two independent exact Shapley routes
// (permutation enumeration vs. reverse-reachability counting) that the
// sampling estimators are checked against.
namespace infcen {

// Node subset as a bitmask; bit v set means node v is in the set.
using Mask = std::uint32_t;

inline int mask_size(Mask m) { return __builtin_popcount(m); }
inline Mask mask_of(std::initializer_list<int> nodes) {
  Mask m = 0;
  for (int v : nodes) m |= Mask(1) << v;
  return m;
}

// Small-n influence model as an explicit probability table: row S holds the
// distribution of the exactly-activated set T >= S. Rows sum to 1 within
// 1e-12; the empty seed set activates nothing.
class ExplicitInstance {
 public:
  static constexpr int kMaxNodes = 16;
  using Row = std::vector<std::pair<Mask, double>>;

  static ExplicitInstance from_rows(int n, std::vector<Row> rows,
                                    std::optional<NodeWeights> weights = {});

  int node_count() const { return n_; }
  Mask full_mask() const { return (Mask(1) << n_) - 1; }
  std::span<const std::pair<Mask, double>> row(Mask seed) const {
    return rows_[seed];
  }
  double prob(Mask seed, Mask target) const;

  // sigma(S) = sum_T P(S,T) |T|
  double spread(Mask seed) const;
  // sigma_w(S) = sum_T P(S,T) w(T)
  double weighted_spread(Mask seed, const NodeWeights& w) const;

  const std::optional<NodeWeights>& weights() const { return weights_; }

 private:
  int n_ = 0;
  std::vector<Row> rows_;  // indexed by seed mask
  std::optional<NodeWeights> weights_;
};

// ---- live-edge enumeration over IC graphs ----

inline constexpr std::size_t kMaxExactEdges = 24;

// Calls fn(live_edge_mask, probability) for every live-edge subgraph with
// nonzero probability; bit i of the mask refers to g.edges()[i]. Edges with
// p exactly 0 or 1 are resolved up front, so only genuinely random edges
// are enumerated.
void enumerate_live_edge_graphs(
    const Graph& g,
    const std::function<void(Mask live_edges, double prob)>& fn);

double exact_spread(const Graph& g, Mask seeds);
double exact_weighted_spread(const Graph& g, Mask seeds, const NodeWeights& w);

// ---- exact Shapley / SNI ----

inline constexpr int kMaxPermNodes = 9;

// Shapley value by full permutation enumeration of an arbitrary spread
// function on n <= 9 nodes. Distinct subsets are evaluated once.
std::vector<double> exact_shapley_perm(
    const std::function<double(Mask)>& spread_fn, int n);

std::vector<double> exact_shapley_perm(const Graph& g);
std::vector<double> exact_shapley_perm(const ExplicitInstance& inst);

// Shapley value by live-edge enumeration: for every live graph L and root v,
// each member of the set reaching v contributes Pr(L)/|set|. Independent of
// the permutation route; scales with 2^m instead of n!.
std::vector<double> exact_shapley_rr(const Graph& g);

double exact_sni(const Graph& g, NodeId v);
double exact_sni(const ExplicitInstance& inst, int v);

std::vector<double> weighted_exact_shapley(const Graph& g,
                                           const NodeWeights& w);
std::vector<double> weighted_exact_shapley(const ExplicitInstance& inst,
                                           const NodeWeights& w);

// ---- fixture instances ----

// Seed sets containing critical_set activate target_set on top of
// themselves; every other seed set activates itself only.
// Requires {} != critical_set <= target_set <= V.
ExplicitInstance critical_set_instance(int n, Mask critical_set,
                                       Mask target_set);

// Every seed set activates exactly itself.
ExplicitInstance null_instance(int n);

// P(S u {v}, T u {v}) = P(S,T) + P(S, T u {v}): v influences nobody else.
bool is_sink(const ExplicitInstance& inst, int v);
// P(S u {v}, T u {v}) = P(S,T): a sink that also cannot be influenced.
bool is_isolated(const ExplicitInstance& inst, int v);

// Removes sink node v, folding P(S,T) and P(S, T u {v}) together. Remaining
// nodes are renumbered downward past v. Throws if v is not a sink.
ExplicitInstance sink_projection(const ExplicitInstance& inst, int v);

// Entrywise convex combination of same-size instances.
ExplicitInstance bayesian_mixture(
    const std::vector<const ExplicitInstance*>& instances,
    const std::vector<double>& lambda);

// Bridges an IC graph into the table form: P(S,T) = total probability of
// live-edge graphs in which S reaches exactly T.
ExplicitInstance graph_to_instance(const Graph& g);

}  // namespace infcen
