#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "infcen/graph.hpp"
#include "infcen/weights.hpp"

namespace infcen {

enum class CentralityMode { shapley, sni };

// Sample budget overflow: the requested accuracy needs more reverse
// reachable sets than the configured hard cap.
class ThetaCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EstimatorParams {
  double epsilon = 0.5;  // relative error target
  double ell = 1.0;      // confidence exponent: guarantee holds w.p. 1-1/n^ell
  std::uint32_t k = 50;  // rank anchoring the error guarantee
  std::uint64_t seed = 0;
  CentralityMode mode = CentralityMode::shapley;
  std::optional<NodeWeights> weights;  // weight-proportional roots when set
  bool near_linear = false;            // Phase 1 bounds the top single-node
                                       // influence instead (forces k=1)
  std::uint64_t theta_cap = std::uint64_t(1) << 40;
};

struct CentralityResult {
  std::vector<double> estimates;
  std::uint64_t theta_phase1 = 0;  // sets generated in Phase 1
  std::uint64_t theta = 0;         // sets generated in Phase 2
  double lb = 1.0;                 // Phase-1 lower bound on the k-th value
  CentralityMode mode = CentralityMode::shapley;
  double wall_ms = 0.0;
};

// Phase-1 sample count for lower-bound target x:
// ceil(n ((ell+1) ln n + ln log2 n + ln 2)(2 + 2/3 eps') / (eps'^2 x)).
std::uint64_t theta_iteration(std::uint32_t n, double epsilon_prime,
                              double ell, double x, std::uint64_t cap);

// Phase-2 sample count:
// ceil(n ((ell+1) ln n + ln 4)(2 + 2/3 eps) / (eps^2 lb)).
std::uint64_t theta_final(std::uint32_t n, double epsilon, double ell,
                          double lb, std::uint64_t cap);

// k-th largest value counting duplicates (k is 1-based).
double kth_largest(std::span<const double> values, std::uint32_t k);

// Two-phase estimator. Phase 1 searches for a lower bound on the k-th
// largest centrality by halving the target; Phase 2 generates a fresh batch
// of theta_final sets and turns the per-node tallies into estimates
// (Shapley: each member of a set gets 1/|set|; SNI: each member gets 1).
// The result is a pure function of (graph, params); the thread count only
// changes the wall time.
CentralityResult run(const Graph& g, const EstimatorParams& params,
                     unsigned threads = 0);

// Phase 2 alone at a caller-chosen budget; used to study the raw estimator
// at a fixed sample count.
CentralityResult run_fixed_theta(const Graph& g, const EstimatorParams& params,
                                 std::uint64_t theta, unsigned threads = 0);

}  // namespace infcen
