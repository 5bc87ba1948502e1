#include "infcen/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace infcen {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_node_count(int n) {
  if (n < 1 || n > ExplicitInstance::kMaxNodes)
    throw std::invalid_argument("explicit instances support 1.." +
                                std::to_string(ExplicitInstance::kMaxNodes) +
                                " nodes");
}

}  // namespace

ExplicitInstance ExplicitInstance::from_rows(
    int n, std::vector<Row> rows, std::optional<NodeWeights> weights) {
  check_node_count(n);
  const Mask full = (Mask(1) << n) - 1;
  if (rows.size() != std::size_t(full) + 1)
    throw std::invalid_argument("expected one row per seed mask");
  if (weights && weights->w.size() != std::size_t(n))
    throw std::invalid_argument("weights length does not match node count");

  for (Mask s = 0; s <= full; ++s) {
    auto& row = rows[s];
    std::sort(row.begin(), row.end());
    double sum = 0.0;
    Mask prev_t = 0;
    bool first = true;
    for (auto& [t, p] : row) {
      if (!first && t == prev_t)
        throw std::invalid_argument("duplicate target mask in row");
      first = false;
      prev_t = t;
      if ((t & s) != s) throw std::invalid_argument("target must contain seed");
      if (t > full) throw std::invalid_argument("target mask out of range");
      if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw std::invalid_argument("row probabilities must sum to 1");
  }
  // The empty seed set activates nothing, with certainty.
  if (rows[0].size() != 1 || rows[0][0].first != 0)
    throw std::invalid_argument("empty seed set must map to the empty set");
  ExplicitInstance inst;
  inst.n_ = n;
  inst.rows_ = std::move(rows);
  inst.weights_ = std::move(weights);
  return inst;
}

double ExplicitInstance::prob(Mask seed, Mask target) const {
  const Row& row = rows_[seed];
  auto it = std::lower_bound(row.begin(), row.end(),
                             std::make_pair(target, -1.0));
  if (it != row.end() && it->first == target) return it->second;
  return 0.0;
}

double ExplicitInstance::spread(Mask seed) const {
  double s = 0.0;
  for (const auto& [t, p] : rows_[seed]) s += p * mask_size(t);
  return s;
}

double ExplicitInstance::weighted_spread(Mask seed, const NodeWeights& w) const {
  double s = 0.0;
  for (const auto& [t, p] : rows_[seed]) {
    double wt = 0.0;
    for (Mask rest = t; rest; rest &= rest - 1)
      wt += w.w[__builtin_ctz(rest)];
    s += p * wt;
  }
  return s;
}

// ---------------------------------------------------------------------------

void enumerate_live_edge_graphs(
    const Graph& g,
    const std::function<void(Mask live_edges, double prob)>& fn) {
  const auto& edges = g.edges();
  const std::size_t m = edges.size();
  if (m > kMaxExactEdges)
    throw std::invalid_argument("exact enumeration supports at most " +
                                std::to_string(kMaxExactEdges) + " edges");

  Mask always_live = 0;
  std::vector<std::size_t> random_edges;
  for (std::size_t i = 0; i < m; ++i) {
    if (edges[i].prob >= 1.0)
      always_live |= Mask(1) << i;
    else if (edges[i].prob > 0.0)
      random_edges.push_back(i);
  }

  const std::size_t r = random_edges.size();
  for (Mask choice = 0; choice < (Mask(1) << r); ++choice) {
    Mask live = always_live;
    double prob = 1.0;
    for (std::size_t j = 0; j < r; ++j) {
      double p = edges[random_edges[j]].prob;
      if (choice >> j & 1) {
        live |= Mask(1) << random_edges[j];
        prob *= p;
      } else {
        prob *= 1.0 - p;
      }
    }
    fn(live, prob);
  }
}

namespace {

// Forward reachability from a seed mask over the live edges.
Mask reach_forward(const Graph& g, Mask live, Mask seeds) {
  const auto& edges = g.edges();
  Mask reached = seeds;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!(live >> i & 1)) continue;
      Mask src = Mask(1) << edges[i].source;
      Mask dst = Mask(1) << edges[i].target;
      if ((reached & src) && !(reached & dst)) {
        reached |= dst;
        grew = true;
      }
    }
  }
  return reached;
}

void check_exact_graph(const Graph& g) {
  if (g.node_count() > 32)  // node subsets live in 32-bit masks
    throw std::invalid_argument(
        "exact graph routines support at most 32 nodes");
}

double mask_weight(Mask m, const NodeWeights& w) {
  double s = 0.0;
  for (Mask rest = m; rest; rest &= rest - 1) s += w.w[__builtin_ctz(rest)];
  return s;
}

}  // namespace

double exact_spread(const Graph& g, Mask seeds) {
  check_exact_graph(g);
  if (seeds == 0) return 0.0;
  double total = 0.0;
  enumerate_live_edge_graphs(g, [&](Mask live, double prob) {
    total += prob * mask_size(reach_forward(g, live, seeds));
  });
  return total;
}

double exact_weighted_spread(const Graph& g, Mask seeds, const NodeWeights& w) {
  check_exact_graph(g);
  if (w.w.size() != g.node_count())
    throw std::invalid_argument("weights length does not match node count");
  if (seeds == 0) return 0.0;
  double total = 0.0;
  enumerate_live_edge_graphs(g, [&](Mask live, double prob) {
    total += prob * mask_weight(reach_forward(g, live, seeds), w);
  });
  return total;
}

// ---------------------------------------------------------------------------

std::vector<double> exact_shapley_perm(
    const std::function<double(Mask)>& spread_fn, int n) {
  if (n < 1 || n > kMaxPermNodes)
    throw std::invalid_argument(
        "permutation enumeration supports 1.." + std::to_string(kMaxPermNodes) +
        " nodes; use the reachability route beyond that");

  // Distinct subsets are far fewer than permutation prefixes.
  std::vector<double> sigma(std::size_t(1) << n,
                            std::numeric_limits<double>::quiet_NaN());
  auto eval = [&](Mask s) {
    double& slot = sigma[s];
    if (std::isnan(slot)) slot = spread_fn(s);
    return slot;
  };
  eval(0);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> acc(n, 0.0);
  std::uint64_t count = 0;
  do {
    Mask prefix = 0;
    double prev = sigma[0];
    for (int v : order) {
      prefix |= Mask(1) << v;
      double cur = eval(prefix);
      acc[v] += cur - prev;
      prev = cur;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));

  for (double& x : acc) x /= static_cast<double>(count);
  return acc;
}

std::vector<double> exact_shapley_perm(const Graph& g) {
  return exact_shapley_perm([&](Mask s) { return exact_spread(g, s); },
                            static_cast<int>(g.node_count()));
}

std::vector<double> exact_shapley_perm(const ExplicitInstance& inst) {
  return exact_shapley_perm([&](Mask s) { return inst.spread(s); },
                            inst.node_count());
}

std::vector<double> exact_shapley_rr(const Graph& g) {
  check_exact_graph(g);
  const int n = static_cast<int>(g.node_count());
  std::vector<double> psi(n, 0.0);
  std::vector<Mask> reach_to(n);  // reach_to[v]: nodes that can reach v
  enumerate_live_edge_graphs(g, [&](Mask live, double prob) {
    // One reverse walk per root; members split Pr(L) evenly.
    for (int v = 0; v < n; ++v) {
      Mask r = Mask(1) << v;
      bool grew = true;
      while (grew) {
        grew = false;
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
          if (!(live >> i & 1)) continue;
          Mask src = Mask(1) << edges[i].source;
          Mask dst = Mask(1) << edges[i].target;
          if ((r & dst) && !(r & src)) {
            r |= src;
            grew = true;
          }
        }
      }
      reach_to[v] = r;
    }
    for (int v = 0; v < n; ++v) {
      double share = prob / mask_size(reach_to[v]);
      for (Mask rest = reach_to[v]; rest; rest &= rest - 1)
        psi[__builtin_ctz(rest)] += share;
    }
  });
  return psi;
}

double exact_sni(const Graph& g, NodeId v) {
  return exact_spread(g, Mask(1) << v);
}

double exact_sni(const ExplicitInstance& inst, int v) {
  return inst.spread(Mask(1) << v);
}

std::vector<double> weighted_exact_shapley(const Graph& g,
                                           const NodeWeights& w) {
  return exact_shapley_perm(
      [&](Mask s) { return exact_weighted_spread(g, s, w); },
      static_cast<int>(g.node_count()));
}

std::vector<double> weighted_exact_shapley(const ExplicitInstance& inst,
                                           const NodeWeights& w) {
  if (w.w.size() != std::size_t(inst.node_count()))
    throw std::invalid_argument("weights length does not match node count");
  return exact_shapley_perm([&](Mask s) { return inst.weighted_spread(s, w); },
                            inst.node_count());
}

// ---------------------------------------------------------------------------

ExplicitInstance critical_set_instance(int n, Mask critical_set,
                                       Mask target_set) {
  check_node_count(n);
  const Mask full = (Mask(1) << n) - 1;
  if (critical_set == 0 || (critical_set & ~target_set) || (target_set & ~full))
    throw std::invalid_argument(
        "need {} != critical_set <= target_set <= V");
  std::vector<ExplicitInstance::Row> rows(std::size_t(full) + 1);
  for (Mask s = 0; s <= full; ++s) {
    Mask t = ((s & critical_set) == critical_set) ? (s | target_set) : s;
    rows[s] = {{t, 1.0}};
  }
  return ExplicitInstance::from_rows(n, std::move(rows));
}

ExplicitInstance null_instance(int n) {
  check_node_count(n);
  const Mask full = (Mask(1) << n) - 1;
  std::vector<ExplicitInstance::Row> rows(std::size_t(full) + 1);
  for (Mask s = 0; s <= full; ++s) rows[s] = {{s, 1.0}};
  return ExplicitInstance::from_rows(n, std::move(rows));
}

bool is_sink(const ExplicitInstance& inst, int v) {
  const Mask full = inst.full_mask();
  const Mask vbit = Mask(1) << v;
  const Mask others = full & ~vbit;
  for (Mask s = others;; s = (s - 1) & others) {
    for (Mask t = others;; t = (t - 1) & others) {
      double lhs = inst.prob(s | vbit, t | vbit);
      double rhs = inst.prob(s, t) + inst.prob(s, t | vbit);
      if (std::abs(lhs - rhs) > kRowSumTol) return false;
      if (t == 0) break;
    }
    if (s == 0) break;
  }
  return true;
}

bool is_isolated(const ExplicitInstance& inst, int v) {
  const Mask full = inst.full_mask();
  const Mask vbit = Mask(1) << v;
  const Mask others = full & ~vbit;
  for (Mask s = others;; s = (s - 1) & others) {
    for (Mask t = others;; t = (t - 1) & others) {
      if ((t & s) == s) {
        double lhs = inst.prob(s | vbit, t | vbit);
        if (std::abs(lhs - inst.prob(s, t)) > kRowSumTol) return false;
      }
      if (t == 0) break;
    }
    if (s == 0) break;
  }
  return true;
}

namespace {

// Drop bit v and close the gap: nodes above v shift down one position.
Mask compact_mask(Mask m, int v) {
  Mask low = m & ((Mask(1) << v) - 1);
  Mask high = m >> (v + 1);
  return low | (high << v);
}

}  // namespace

ExplicitInstance sink_projection(const ExplicitInstance& inst, int v) {
  if (v < 0 || v >= inst.node_count())
    throw std::invalid_argument("node out of range");
  if (!is_sink(inst, v))
    throw std::invalid_argument("projection requires a sink node");
  const int n = inst.node_count() - 1;
  if (n == 0) throw std::invalid_argument("cannot project the last node away");
  const Mask vbit = Mask(1) << v;
  const Mask others = inst.full_mask() & ~vbit;

  std::vector<ExplicitInstance::Row> rows(std::size_t(1) << n);
  for (Mask s = others;; s = (s - 1) & others) {
    ExplicitInstance::Row row;
    for (const auto& [t, p] : inst.row(s)) {
      Mask ct = compact_mask(t & ~vbit, v);
      auto it = std::find_if(row.begin(), row.end(),
                             [&](const auto& e) { return e.first == ct; });
      if (it == row.end())
        row.emplace_back(ct, p);
      else
        it->second += p;
    }
    rows[compact_mask(s, v)] = std::move(row);
    if (s == 0) break;
  }
  return ExplicitInstance::from_rows(n, std::move(rows));
}

ExplicitInstance bayesian_mixture(
    const std::vector<const ExplicitInstance*>& instances,
    const std::vector<double>& lambda) {
  if (instances.empty() || instances.size() != lambda.size())
    throw std::invalid_argument("need one prior weight per instance");
  const int n = instances[0]->node_count();
  double lsum = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] >= 0.0))
      throw std::invalid_argument("prior weights must be >= 0");
    lsum += lambda[i];
    if (instances[i]->node_count() != n)
      throw std::invalid_argument("instances must share the node set");
  }
  if (std::abs(lsum - 1.0) > kRowSumTol)
    throw std::invalid_argument("prior weights must sum to 1");

  const Mask full = (Mask(1) << n) - 1;
  std::vector<ExplicitInstance::Row> rows(std::size_t(full) + 1);
  for (Mask s = 0; s <= full; ++s) {
    std::vector<double> dense(std::size_t(full) + 1, 0.0);
    for (std::size_t i = 0; i < instances.size(); ++i)
      for (const auto& [t, p] : instances[i]->row(s)) dense[t] += lambda[i] * p;
    for (Mask t = 0; t <= full; ++t)
      if (dense[t] != 0.0) rows[s].emplace_back(t, dense[t]);
  }
  return ExplicitInstance::from_rows(n, std::move(rows));
}

ExplicitInstance graph_to_instance(const Graph& g) {
  const int n = static_cast<int>(g.node_count());
  check_node_count(n);
  const Mask full = (Mask(1) << n) - 1;
  std::vector<ExplicitInstance::Row> rows(std::size_t(full) + 1);
  std::vector<double> dense(std::size_t(full) + 1);
  for (Mask s = 0; s <= full; ++s) {
    std::fill(dense.begin(), dense.end(), 0.0);
    enumerate_live_edge_graphs(g, [&](Mask live, double prob) {
      dense[s == 0 ? 0 : reach_forward(g, live, s)] += prob;
    });
    // Only supersets of s can carry mass.
    for (Mask t = s;; t = (t + 1) | s) {
      if (dense[t] != 0.0) rows[s].emplace_back(t, dense[t]);
      if (t == full) break;
    }
  }
  return ExplicitInstance::from_rows(n, std::move(rows));
}

}  // namespace infcen
