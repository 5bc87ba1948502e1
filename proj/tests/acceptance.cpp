// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Everything is seeded, so a green run is green forever.
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "infcen/diffusion.hpp"
#include "infcen/estimators.hpp"
#include "infcen/exact.hpp"
#include "infcen/graph.hpp"
#include "infcen/im.hpp"
#include "infcen/rng.hpp"
#include "test_support.hpp"

using namespace infcen;
using testsupport::make_graph;
using testsupport::neumaier_sum;
using testsupport::random_small_graph;
using testsupport::random_symmetric_graph;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// Tracks the absolute-normalization invariant over every Shapley-mode run
// the suite performs (criterion 5 reports on the tally).
struct NormTracker {
  std::uint64_t runs = 0;
  std::uint64_t violations = 0;
  double worst = 0.0;

  void observe(const CentralityResult& result, double expected_total) {
    ++runs;
    double err = std::abs(neumaier_sum(result.estimates) - expected_total);
    worst = std::max(worst, err / expected_total);
    if (err > 1e-6 * expected_total) ++violations;
  }
} g_norm;

CentralityResult run_shapley(const Graph& g, const EstimatorParams& params,
                             unsigned threads = 0) {
  CentralityResult result = run(g, params, threads);
  if (params.mode == CentralityMode::shapley)
    g_norm.observe(result, params.weights ? params.weights->total
                                          : double(g.node_count()));
  return result;
}

Graph triangle_graph(double p) {
  return make_graph(3, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 0, p}, {2, 0, p}});
}

EstimatorParams base_params(double eps, double ell, std::uint32_t k,
                            std::uint64_t seed,
                            CentralityMode mode = CentralityMode::shapley) {
  EstimatorParams p;
  p.epsilon = eps;
  p.ell = ell;
  p.k = k;
  p.seed = seed;
  p.mode = mode;
  return p;
}

// ---- criterion 1: the two exact Shapley routes agree ----

void criterion_oracle_triangle() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = random_small_graph(rng, 6, 10, {0.2, 0.5, 1.0});
    auto perm = exact_shapley_perm(g);
    auto rr = exact_shapley_rr(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      double err = std::abs(perm[v] - rr[v]);
      worst = std::max(worst, err);
      if (err > 1e-9) ok = false;
    }
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  if (secs >= 30.0) ok = false;
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "50 graphs, max |perm - rr| = %.2e, %.1fs", worst, secs);
  report(1, "permutation and reachability oracles agree", ok, detail);
}

// ---- criterion 2: closed forms on critical-set instances ----

void criterion_critical_values() {
  bool ok = true;
  double worst = 0.0;
  for (int r = 1; r <= 4; ++r) {
    const int n = r + 1;
    auto inst =
        critical_set_instance(n, (Mask(1) << r) - 1, (Mask(1) << n) - 1);
    auto shapley = exact_shapley_perm(inst);
    auto check = [&](double got, double want) {
      worst = std::max(worst, std::abs(got - want));
      if (std::abs(got - want) > 1e-9) ok = false;
    };
    check(shapley[n - 1], double(r) / (r + 1));
    for (int u = 0; u < r; ++u)
      check(shapley[u], 1.0 + 1.0 / (double(r) * (r + 1)));
    check(exact_sni(inst, n - 1), 1.0);
    for (int u = 0; u < r; ++u)
      check(exact_sni(inst, u), r > 1 ? 1.0 : double(n));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "|R| in {1..4}, max error %.2e", worst);
  report(2, "critical-set closed forms", ok, detail);
}

// ---- criterion 3: symmetric probabilities flatten Shapley ----

void criterion_symmetric() {
  std::mt19937_64 rng(3003);
  bool exact_ok = true;
  std::vector<Graph> graphs;
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = random_symmetric_graph(rng, 6, 8, {0.2, 0.4, 0.7});
    for (double v : exact_shapley_rr(g))
      if (std::abs(v - 1.0) > 1e-9) exact_ok = false;
    graphs.push_back(std::move(g));
  }

  int good_runs = 0;
  const int total_runs = 100;
  for (int i = 0; i < total_runs; ++i) {
    const Graph& g = graphs[i % 5];
    auto result = run_shapley(g, base_params(0.1, 1.0, 1, 30000 + i));
    bool within = true;
    for (double v : result.estimates)
      if (v < 0.9 || v > 1.1) within = false;
    good_runs += within;
  }
  bool ok = exact_ok && good_runs >= 99;
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "exact %s, estimator in-band runs %d/100",
                exact_ok ? "flat" : "NOT flat", good_runs);
  report(3, "symmetric model gives unit centrality", ok, detail);
}

// ---- criterion 4: triangle ranking flip between Shapley and SNI ----

void criterion_ranking() {
  const double p = 0.55;
  Graph g = triangle_graph(p);
  auto shapley = exact_shapley_perm(g);
  std::vector<double> sni(3);
  for (int v = 0; v < 3; ++v) sni[v] = exact_sni(g, v);

  bool exact_ok = std::abs(shapley[1] - shapley[2]) <= 1e-9 &&
                  shapley[1] > shapley[0] && std::abs(sni[1] - sni[2]) <= 1e-9 &&
                  sni[0] > sni[1];

  int shapley_hits = 0, sni_hits = 0;
  const int runs = 100;
  for (int i = 0; i < runs; ++i) {
    auto est = run_shapley(g, base_params(0.02, 1.0, 1, 40000 + i));
    if (est.estimates[1] > est.estimates[0] &&
        est.estimates[2] > est.estimates[0])
      ++shapley_hits;
    auto est_sni = run(
        g, base_params(0.02, 1.0, 1, 41000 + i, CentralityMode::sni));
    if (est_sni.estimates[0] > est_sni.estimates[1] &&
        est_sni.estimates[0] > est_sni.estimates[2])
      ++sni_hits;
  }
  bool ok = exact_ok && shapley_hits >= 95 && sni_hits >= 95;
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "exact %s, shapley flips %d/100, sni holds %d/100",
                exact_ok ? "ok" : "WRONG", shapley_hits, sni_hits);
  report(4, "triangle ranking disagreement at p=0.55", ok, detail);
}

// ---- criterion 6: unbiasedness at a fixed small budget ----

void criterion_unbiasedness() {
  // Fixed 5-node, 8-edge graph with mixed probabilities.
  Graph g = make_graph(5, {{0, 1, 0.5},
                           {1, 2, 0.2},
                           {2, 0, 0.5},
                           {0, 3, 0.2},
                           {3, 4, 0.5},
                           {4, 1, 0.2},
                           {2, 4, 1.0},
                           {3, 1, 0.5}});
  auto exact = exact_shapley_perm(g);
  const int runs = 500;
  const std::uint64_t theta = 2000;
  const int n = 5;
  std::vector<double> mean(n, 0.0), m2(n, 0.0);
  for (int i = 0; i < runs; ++i) {
    auto result =
        run_fixed_theta(g, base_params(0.2, 1.0, 1, 60000 + i), theta);
    g_norm.observe(result, double(n));
    for (int v = 0; v < n; ++v) {
      double delta = result.estimates[v] - mean[v];
      mean[v] += delta / (i + 1);
      m2[v] += delta * (result.estimates[v] - mean[v]);
    }
  }
  bool ok = true;
  double worst_z = 0.0;
  for (int v = 0; v < n; ++v) {
    double se = std::sqrt(m2[v] / (runs - 1) / runs);
    double z = std::abs(mean[v] - exact[v]) / se;
    worst_z = std::max(worst_z, z);
    if (z > 4.0) ok = false;
  }
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "500 runs at theta=2000, worst |z| = %.2f", worst_z);
  report(6, "fixed-budget estimator is unbiased", ok, detail);
}

// ---- criterion 7: the two-sided relative error split ----

void criterion_robustness() {
  // 6-node oracle graph chosen so the 2nd-largest Shapley value is >= 1.
  Graph g = make_graph(6, {{0, 1, 1.0},
                           {0, 2, 0.5},
                           {3, 4, 1.0},
                           {3, 5, 0.5},
                           {1, 3, 0.2},
                           {4, 0, 0.2}});
  auto exact = exact_shapley_perm(g);
  const std::uint32_t k = 2;
  const double eps = 0.2, ell = 1.0;
  std::vector<double> sorted = exact;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double psi_k = sorted[k - 1];
  if (psi_k < 1.0) {
    report(7, "relative-error split", false, "fixture lost psi^(k) >= 1");
    return;
  }

  const int runs = 200;
  int hits = 0;
  for (int i = 0; i < runs; ++i) {
    auto result = run_shapley(g, base_params(eps, ell, k, 70000 + i));
    bool within = true;
    for (int v = 0; v < 6; ++v) {
      double err = std::abs(result.estimates[v] - exact[v]);
      double bound = exact[v] > psi_k ? eps * exact[v] : eps * psi_k;
      if (err > bound) within = false;
    }
    hits += within;
  }
  const double needed = (1.0 - 1.0 / 6.0 - 0.02) * runs;
  bool ok = hits >= needed;
  char detail[96];
  std::snprintf(detail, sizeof detail, "split held in %d/200 (need %.0f)",
                hits, std::ceil(needed));
  report(7, "relative-error split", ok, detail);
}

// ---- criterion 8: SNI estimates equal forward Monte-Carlo spread ----

Graph random_wc_graph(NodeId n, unsigned out_degree, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<Graph::Edge> edges;
  std::vector<std::uint8_t> used(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    std::vector<NodeId> picked;
    while (picked.size() < out_degree) {
      NodeId v = rng.next_below(n);
      if (v == u || used[v]) continue;
      used[v] = 1;
      picked.push_back(v);
    }
    for (NodeId v : picked) {
      used[v] = 0;
      edges.push_back({u, v, 0.0});
    }
  }
  return assign_wc(Graph::from_edges(n, std::move(edges)));
}

void criterion_sni_vs_spread() {
  Graph g = random_wc_graph(1000, 5, 8008);
  auto result =
      run(g, base_params(0.3, 1.0, 10, 808, CentralityMode::sni));

  std::vector<NodeId> order(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return result.estimates[a] > result.estimates[b];
  });

  bool ok = true;
  double worst_z = 0.0;
  for (int rank = 0; rank < 10; ++rank) {
    NodeId v = order[rank];
    auto mc = estimate_spread_mc(g, SeedSet::from({v}, g.node_count()),
                                 100000, 909);
    double q = result.estimates[v] / double(g.node_count());
    double rr_se = double(g.node_count()) *
                   std::sqrt(q * (1.0 - q) / double(result.theta));
    double combined = std::sqrt(mc.stderr_ * mc.stderr_ + rr_se * rr_se);
    double z = std::abs(result.estimates[v] - mc.mean) / combined;
    worst_z = std::max(worst_z, z);
    if (z > 4.0) ok = false;
  }
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "top-10 on n=1000 WC graph, worst |z| = %.2f", worst_z);
  report(8, "sni estimates match forward monte carlo", ok, detail);
}

// ---- criterion 9: weighted variant ----

void criterion_weighted() {
  bool ok = true;
  std::string note;

  // Exact weighted bargaining value, pinned exactly.
  for (int r = 1; r <= 3; ++r) {
    const int n = r + 1;
    auto inst =
        critical_set_instance(n, (Mask(1) << r) - 1, (Mask(1) << n) - 1);
    std::vector<double> w(n, 1.0);
    w[n - 1] = 3.25;
    auto values = weighted_exact_shapley(inst, NodeWeights::from(w));
    if (std::abs(values[n - 1] - double(r) * 3.25 / (r + 1)) > 1e-9) {
      ok = false;
      note = "bargaining value off";
    }
  }

  // Uniform-weight runs match the unweighted exact targets within eps.
  Graph g = triangle_graph(0.6);
  auto exact = exact_shapley_perm(g);
  double psi_top = *std::max_element(exact.begin(), exact.end());
  const double eps = 0.1;
  int hits = 0;
  const int runs = 20;
  for (int i = 0; i < runs; ++i) {
    EstimatorParams params = base_params(eps, 1.0, 1, 90000 + i);
    params.weights = NodeWeights::uniform(3);
    auto result = run_shapley(g, params);
    bool within = true;
    for (int v = 0; v < 3; ++v)
      if (std::abs(result.estimates[v] - exact[v]) > eps * psi_top)
        within = false;
    hits += within;
  }
  if (hits < runs) {
    ok = false;
    note += " uniform-weight runs strayed";
  }
  char detail[96];
  std::snprintf(detail, sizeof detail,
                "bargaining exact, uniform-weight runs %d/%d in band", hits,
                runs);
  report(9, "weighted shapley", ok, detail);
}

// ---- criterion 10: near-linear variant's absolute band ----

void criterion_near_linear() {
  Graph g1 = triangle_graph(0.6);
  Graph g2 = make_graph(4, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}, {3, 0, 0.5}});
  const double eps = 0.1;
  int good = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    const Graph& g = (i % 2) ? g2 : g1;
    auto exact = exact_shapley_perm(g);
    double sigma_top = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v)
      sigma_top = std::max(sigma_top, exact_sni(g, v));
    EstimatorParams params = base_params(eps, 1.0, 1, 100000 + i);
    params.near_linear = true;
    auto result = run_shapley(g, params);
    bool within = true;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (std::abs(result.estimates[v] - exact[v]) > eps * sigma_top)
        within = false;
    good += within;
  }
  bool ok = good >= 99;
  char detail[64];
  std::snprintf(detail, sizeof detail, "in-band runs %d/100", good);
  report(10, "near-linear variant absolute band", ok, detail);
}

// ---- criterion 11: scalability smoke test ----

std::size_t peak_rss_bytes() {
  struct rusage usage;
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return std::size_t(usage.ru_maxrss) * 1024;  // ru_maxrss is in KiB on Linux
}

void criterion_scalability() {
  auto start = std::chrono::steady_clock::now();
  Graph g = random_wc_graph(100000, 10, 11011);
  auto result = run_shapley(g, base_params(0.5, 1.0, 50, 1111));
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  std::size_t rss = peak_rss_bytes();
  bool ok = secs < 300.0 && rss < (std::size_t(2) << 30) &&
            result.estimates.size() == 100000;
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "n=100k m=1M: %.1fs, peak rss %.0f MiB, theta=%llu", secs,
                double(rss) / (1 << 20),
                static_cast<unsigned long long>(result.theta));
  report(11, "scalability smoke (100k nodes, 1M edges)", ok, detail);
}

// ---- criterion 12: mixtures are linear in the prior ----

void criterion_bayesian() {
  auto a = critical_set_instance(4, mask_of({0}), mask_of({0, 1, 2}));
  auto b = critical_set_instance(4, mask_of({1, 2}), mask_of({1, 2, 3}));
  auto c = graph_to_instance(
      make_graph(4, {{0, 1, 0.5}, {1, 2, 0.2}, {2, 3, 0.5}, {3, 0, 0.2}}));
  std::vector<double> lambda{0.25, 0.35, 0.4};
  auto mix = bayesian_mixture({&a, &b, &c}, lambda);

  auto mix_shapley = exact_shapley_perm(mix);
  auto sa = exact_shapley_perm(a);
  auto sb = exact_shapley_perm(b);
  auto sc = exact_shapley_perm(c);
  bool ok = true;
  double worst = 0.0;
  for (int v = 0; v < 4; ++v) {
    double want = 0.25 * sa[v] + 0.35 * sb[v] + 0.4 * sc[v];
    worst = std::max(worst, std::abs(mix_shapley[v] - want));
    double sni_want = 0.25 * exact_sni(a, v) + 0.35 * exact_sni(b, v) +
                      0.4 * exact_sni(c, v);
    worst = std::max(worst, std::abs(exact_sni(mix, v) - sni_want));
  }
  ok = worst <= 1e-9;
  char detail[64];
  std::snprintf(detail, sizeof detail, "max deviation %.2e", worst);
  report(12, "bayesian mixture linearity", ok, detail);
}

// ---- criterion 5 reports last: it audits every tracked run ----

void criterion_normalization() {
  // Add dedicated weighted runs to the tally.
  Graph g = triangle_graph(0.6);
  for (int i = 0; i < 10; ++i) {
    EstimatorParams params = base_params(0.3, 1.0, 1, 50000 + i);
    params.weights = NodeWeights::from({1.5, 0.5, 2.0});
    run_shapley(g, params);
  }
  bool ok = g_norm.runs > 0 && g_norm.violations == 0;
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "%llu shapley runs, %llu violations, worst rel dev %.2e",
                static_cast<unsigned long long>(g_norm.runs),
                static_cast<unsigned long long>(g_norm.violations),
                g_norm.worst);
  report(5, "absolute normalization across the suite", ok, detail);
}

}  // namespace

int main() {
  criterion_oracle_triangle();
  criterion_critical_values();
  criterion_symmetric();
  criterion_ranking();
  criterion_unbiasedness();
  criterion_robustness();
  criterion_sni_vs_spread();
  criterion_weighted();
  criterion_near_linear();
  criterion_scalability();
  criterion_bayesian();
  criterion_normalization();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
