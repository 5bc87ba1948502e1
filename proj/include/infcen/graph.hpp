#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace infcen {

using NodeId = std::uint32_t;

// Edge-probability assignment applied while loading an edge list.
struct ProbScheme {
  enum class Kind { wc, pagerank, constant, from_file };

  Kind kind = Kind::from_file;
  double const_p = 1.0;
  double pr_restart = 0.15;
  double pr_tol = 1e-12;
  int pr_max_iters = 200;

  static ProbScheme wc() { return {Kind::wc, 0, 0.15, 1e-12, 200}; }
  static ProbScheme pagerank(double restart = 0.15, double tol = 1e-12,
                             int max_iters = 200);
  static ProbScheme constant(double p);
  static ProbScheme from_file() { return {}; }
};

enum class Directedness { directed, undirected };

// Input problem on a malformed or inconsistent edge list; message carries
// the 1-based line number when one applies.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directed graph with one Bernoulli probability per edge, stored as an
// input-order edge list plus dual CSR adjacency. Immutable after
// construction, so it can be shared read-only across sampler threads.
class Graph {
 public:
  struct Edge {
    NodeId source;
    NodeId target;
    double prob;
  };

  Graph() = default;

  // Node labels default to the decimal ids when none are supplied.
  static Graph from_edges(NodeId n, std::vector<Edge> edges,
                          std::vector<std::string> labels = {});

  static Graph load_edge_list(std::istream& in, Directedness dir,
                              const ProbScheme& scheme);
  static Graph load_edge_list(std::string_view text, Directedness dir,
                              const ProbScheme& scheme);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::uint32_t in_degree(NodeId v) const {
    return in_offsets_[v + 1] - in_offsets_[v];
  }
  std::uint32_t out_degree(NodeId v) const {
    return out_offsets_[v + 1] - out_offsets_[v];
  }

  // Start of node v's slice in the in-CSR arrays.
  std::uint32_t in_offset(NodeId v) const { return in_offsets_[v]; }

  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_nodes_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }
  std::span<const double> in_probs(NodeId v) const {
    return {in_probs_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }
  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_nodes_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const double> out_probs(NodeId v) const {
    return {out_probs_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(NodeId v) const { return labels_[v]; }
  std::optional<NodeId> find_label(std::string_view label) const;

  // Unordered node pairs with at least one edge between them (the PR
  // scheme's undirected edge count).
  std::size_t undirected_edge_count() const;

 private:
  void build_adjacency();

  NodeId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_to_id_;
  std::vector<std::uint32_t> in_offsets_, out_offsets_;
  std::vector<NodeId> in_nodes_, out_nodes_;
  std::vector<double> in_probs_, out_probs_;
};

// p(u,v) = 1 / in_degree(v), so each node's incoming probabilities sum to 1.
Graph assign_wc(const Graph& g);

struct PageRankResult {
  std::vector<double> scores;  // nonnegative, sums to 1
  int iterations = 0;
  bool converged = false;
};

// Power iteration on the edge-reversed unweighted graph with uniform
// teleport; dangling mass is redistributed uniformly. Runs at most
// max_iters rounds and reports non-convergence in the result flag.
PageRankResult pagerank(const Graph& g, double restart, double tol,
                        int max_iters);

// p(u,v) = min(1, r(u)/(r(u)+r(v)) * n/(2*mU)). Values above 1 are clamped
// to keep a valid Bernoulli; clamped_out (if given) receives the count.
Graph assign_pr(const Graph& g, double restart, double tol = 1e-12,
                int max_iters = 200, std::size_t* clamped_out = nullptr);

// "u v p" lines in input edge order; probabilities with `precision`
// significant digits.
void write_edge_list(std::ostream& out, const Graph& g, int precision = 9);

// "label id" lines, one per node, in id order.
void write_id_map(std::ostream& out, const Graph& g);

}  // namespace infcen
