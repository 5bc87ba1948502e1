#include "infcen/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "infcen/kernels.hpp"

namespace infcen {

ProbScheme ProbScheme::pagerank(double restart, double tol, int max_iters) {
  if (!(restart > 0.0 && restart < 1.0))
    throw std::invalid_argument("PR restart must be in (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("PR tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("PR max_iters must be >= 1");
  ProbScheme s;
  s.kind = Kind::pagerank;
  s.pr_restart = restart;
  s.pr_tol = tol;
  s.pr_max_iters = max_iters;
  return s;
}

ProbScheme ProbScheme::constant(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("constant probability must be in [0,1]");
  ProbScheme s;
  s.kind = Kind::constant;
  s.const_p = p;
  return s;
}

namespace {

struct EdgeKeyHash {
  std::size_t operator()(std::uint64_t k) const noexcept {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdull;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

std::uint64_t edge_key(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph Graph::from_edges(NodeId n, std::vector<Edge> edges,
                        std::vector<std::string> labels) {
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  if (labels.empty()) {
    labels.reserve(n);
    for (NodeId v = 0; v < n; ++v) labels.push_back(std::to_string(v));
  }
  if (labels.size() != n)
    throw std::invalid_argument("label count does not match node count");
  g.labels_ = std::move(labels);
  for (NodeId v = 0; v < n; ++v) g.label_to_id_.emplace(g.labels_[v], v);

  std::unordered_set<std::uint64_t, EdgeKeyHash> seen;
  seen.reserve(g.edges_.size() * 2);
  for (const Edge& e : g.edges_) {
    if (e.source >= n || e.target >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.source == e.target)
      throw std::invalid_argument("self-loop edges are not supported");
    if (!(e.prob >= 0.0 && e.prob <= 1.0))
      throw std::invalid_argument("edge probability outside [0,1]");
    if (!seen.insert(edge_key(e.source, e.target)).second)
      throw std::invalid_argument("duplicate directed edge (" +
                                  g.labels_[e.source] + "," +
                                  g.labels_[e.target] + ")");
  }
  g.build_adjacency();
  return g;
}

void Graph::build_adjacency() {
  in_offsets_.assign(n_ + 1, 0);
  out_offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++out_offsets_[e.source + 1];
    ++in_offsets_[e.target + 1];
  }
  for (NodeId v = 0; v < n_; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  in_nodes_.resize(edges_.size());
  in_probs_.resize(edges_.size());
  out_nodes_.resize(edges_.size());
  out_probs_.resize(edges_.size());
  std::vector<std::uint32_t> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
  std::vector<std::uint32_t> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
  for (const Edge& e : edges_) {
    std::uint32_t oi = out_pos[e.source]++;
    out_nodes_[oi] = e.target;
    out_probs_[oi] = e.prob;
    std::uint32_t ii = in_pos[e.target]++;
    in_nodes_[ii] = e.source;
    in_probs_[ii] = e.prob;
  }
}

std::optional<NodeId> Graph::find_label(std::string_view label) const {
  auto it = label_to_id_.find(std::string(label));
  if (it == label_to_id_.end()) return std::nullopt;
  return it->second;
}

Graph Graph::load_edge_list(std::string_view text, Directedness dir,
                            const ProbScheme& scheme) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in, dir, scheme);
}

Graph Graph::load_edge_list(std::istream& in, Directedness dir,
                            const ProbScheme& scheme) {
  struct RawEdge {
    NodeId u, v;
    double p;
  };
  std::vector<RawEdge> raw;
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::unordered_set<std::uint64_t, EdgeKeyHash> seen;

  auto intern = [&](const std::string& tok) -> NodeId {
    auto it = ids.find(tok);
    if (it != ids.end()) return it->second;
    NodeId id = static_cast<NodeId>(labels.size());
    ids.emplace(tok, id);
    labels.push_back(tok);
    return id;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tu, tv, tp, extra;
    if (!(ls >> tu)) continue;  // blank line
    if (tu[0] == '#') continue;
    if (!(ls >> tv)) parse_fail(line_no, "expected \"u v\" or \"u v p\"");
    bool has_p = static_cast<bool>(ls >> tp);
    if (has_p && (ls >> extra)) parse_fail(line_no, "trailing fields");

    double p = 1.0;
    if (has_p) {
      const char* b = tp.data();
      const char* e = b + tp.size();
      auto [ptr, ec] = std::from_chars(b, e, p);
      if (ec != std::errc() || ptr != e)
        parse_fail(line_no, "bad probability \"" + tp + "\"");
      if (!(p >= 0.0 && p <= 1.0))
        parse_fail(line_no, "probability " + tp + " outside [0,1]");
    } else if (scheme.kind == ProbScheme::Kind::from_file) {
      parse_fail(line_no, "missing probability field");
    }

    NodeId u = intern(tu), v = intern(tv);
    if (u == v) parse_fail(line_no, "self-loop on node " + tu);
    if (!seen.insert(edge_key(u, v)).second)
      parse_fail(line_no, "duplicate directed edge " + tu + " -> " + tv);
    raw.push_back({u, v, p});
    if (dir == Directedness::undirected) {
      if (!seen.insert(edge_key(v, u)).second)
        parse_fail(line_no, "duplicate directed edge " + tv + " -> " + tu);
      raw.push_back({v, u, p});
    }
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw) {
    double p = e.p;
    if (scheme.kind == ProbScheme::Kind::constant) p = scheme.const_p;
    edges.push_back({e.u, e.v, p});
  }
  const NodeId n = static_cast<NodeId>(labels.size());
  Graph g = Graph::from_edges(n, std::move(edges), std::move(labels));
  switch (scheme.kind) {
    case ProbScheme::Kind::wc:
      return assign_wc(g);
    case ProbScheme::Kind::pagerank:
      return assign_pr(g, scheme.pr_restart, scheme.pr_tol, scheme.pr_max_iters);
    case ProbScheme::Kind::constant:
    case ProbScheme::Kind::from_file:
      return g;
  }
  return g;
}

Graph assign_wc(const Graph& g) {
  std::vector<Graph::Edge> edges = g.edges();
  for (auto& e : edges) e.prob = 1.0 / g.in_degree(e.target);
  return Graph::from_edges(g.node_count(), std::move(edges), g.labels());
}

PageRankResult pagerank(const Graph& g, double restart, double tol,
                        int max_iters) {
  if (!(restart > 0.0 && restart < 1.0))
    throw std::invalid_argument("restart must be in (0,1)");
  const NodeId n = g.node_count();
  if (n == 0) throw std::invalid_argument("pagerank on empty graph");

  // Votes flow against the influence edges: edge (u,v) means v endorses u.
  // In the reversed graph a node's out-degree is its original in-degree,
  // so nodes with no in-edges are the dangling ones.
  std::vector<double> inv_deg(n, 0.0);
  std::vector<NodeId> dangling;
  for (NodeId v = 0; v < n; ++v) {
    std::uint32_t d = g.in_degree(v);
    if (d == 0)
      dangling.push_back(v);
    else
      inv_deg[v] = 1.0 / d;
  }

  const auto& ops = kernels::active();
  std::vector<double> rank(n, 1.0 / n), next(n), contrib(n);
  int iter = 0;
  bool converged = false;
  for (; iter < max_iters; ++iter) {
    ops.mul(contrib.data(), rank.data(), inv_deg.data(), n);
    double dangling_mass = 0.0;
    for (NodeId v : dangling) dangling_mass += rank[v];
    for (NodeId t = 0; t < n; ++t) {
      double acc = 0.0;
      for (NodeId v : g.out_neighbors(t)) acc += contrib[v];
      next[t] = acc;
    }
    const double damp = 1.0 - restart;
    ops.affine(next.data(), next.data(), damp,
               restart / n + damp * dangling_mass / n, n);
    double delta = ops.l1_diff(next.data(), rank.data(), n);
    rank.swap(next);
    if (delta <= tol) {
      converged = true;
      ++iter;
      break;
    }
  }
  return {std::move(rank), iter, converged};
}

Graph assign_pr(const Graph& g, double restart, double tol, int max_iters,
                std::size_t* clamped_out) {
  PageRankResult pr = pagerank(g, restart, tol, max_iters);
  const double scale =
      static_cast<double>(g.node_count()) / (2.0 * g.undirected_edge_count());
  std::size_t clamped = 0;
  std::vector<Graph::Edge> edges = g.edges();
  for (auto& e : edges) {
    double ru = pr.scores[e.source], rv = pr.scores[e.target];
    double p = ru / (ru + rv) * scale;
    if (p > 1.0) {
      p = 1.0;
      ++clamped;
    }
    e.prob = p;
  }
  if (clamped_out) *clamped_out = clamped;
  return Graph::from_edges(g.node_count(), std::move(edges), g.labels());
}

std::size_t Graph::undirected_edge_count() const {
  std::unordered_set<std::uint64_t, EdgeKeyHash> pairs;
  pairs.reserve(edges_.size() * 2);
  for (const Edge& e : edges_) {
    NodeId a = std::min(e.source, e.target), b = std::max(e.source, e.target);
    pairs.insert(edge_key(a, b));
  }
  return pairs.size();
}

void write_edge_list(std::ostream& out, const Graph& g, int precision) {
  char buf[64];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, e.prob);
    out << g.label(e.source) << ' ' << g.label(e.target) << ' ' << buf << '\n';
  }
}

void write_id_map(std::ostream& out, const Graph& g) {
  for (NodeId v = 0; v < g.node_count(); ++v)
    out << g.label(v) << ' ' << v << '\n';
}

}  // namespace infcen
