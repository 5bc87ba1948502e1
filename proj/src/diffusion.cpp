#include "infcen/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace infcen {

namespace {

constexpr std::uint64_t kSpreadSalt = 0x3000000000000003ull;

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Cascade with reusable scratch; returns the activated count.
class CascadeRunner {
 public:
  explicit CascadeRunner(const Graph& g)
      : g_(g), seen_(g.node_count(), 0), epoch_(0) {}

  std::uint32_t run(const SeedSet& seeds, RngStream& rng,
                    std::vector<NodeId>* activated_out) {
    ++epoch_;
    frontier_.clear();
    next_.clear();
    if (activated_out) activated_out->clear();
    std::uint32_t activated = 0;
    for (NodeId v : seeds.nodes) {
      seen_[v] = epoch_;
      frontier_.push_back(v);
      ++activated;
      if (activated_out) activated_out->push_back(v);
    }
    while (!frontier_.empty()) {
      next_.clear();
      for (NodeId u : frontier_) {
        auto nbrs = g_.out_neighbors(u);
        auto probs = g_.out_probs(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
          NodeId v = nbrs[i];
          if (seen_[v] == epoch_) continue;
          if (rng.bernoulli(probs[i])) {
            seen_[v] = epoch_;
            next_.push_back(v);
            ++activated;
            if (activated_out) activated_out->push_back(v);
          }
        }
      }
      frontier_.swap(next_);
    }
    return activated;
  }

 private:
  const Graph& g_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t epoch_;
  std::vector<NodeId> frontier_, next_;
};

}  // namespace

SeedSet SeedSet::from(std::vector<NodeId> ids, NodeId n) {
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= n) throw std::invalid_argument("seed id out of range");
    if (i > 0 && ids[i] == ids[i - 1])
      throw std::invalid_argument("duplicate seed id");
  }
  return SeedSet{std::move(ids)};
}

std::vector<NodeId> forward_simulate(const Graph& g, const SeedSet& seeds,
                                     RngStream& rng) {
  CascadeRunner runner(g);
  std::vector<NodeId> activated;
  runner.run(seeds, rng, &activated);
  std::sort(activated.begin(), activated.end());
  return activated;
}

SpreadEstimate estimate_spread_mc(const Graph& g, const SeedSet& seeds,
                                  std::uint64_t num_sims, std::uint64_t seed,
                                  unsigned threads) {
  if (num_sims < 1) throw std::invalid_argument("num_sims must be >= 1");
  for (NodeId v : seeds.nodes)
    if (v >= g.node_count()) throw std::invalid_argument("seed out of range");

  unsigned workers = resolve_threads(threads);
  if (workers > num_sims) workers = static_cast<unsigned>(num_sims);

  // Activated counts are integers, so the partial sums are exact and the
  // totals do not depend on the worker split.
  std::vector<std::uint64_t> sums(workers, 0), squares(workers, 0);
  auto body = [&](unsigned w) {
    CascadeRunner runner(g);
    std::uint64_t local_sum = 0, local_sq = 0;
    for (std::uint64_t i = w; i < num_sims; i += workers) {
      RngStream rng(seed, kSpreadSalt ^ i);
      std::uint64_t count = runner.run(seeds, rng, nullptr);
      local_sum += count;
      local_sq += count * count;
    }
    sums[w] = local_sum;
    squares[w] = local_sq;
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }

  std::uint64_t total = 0, total_sq = 0;
  for (unsigned w = 0; w < workers; ++w) {
    total += sums[w];
    total_sq += squares[w];
  }
  const double nd = static_cast<double>(num_sims);
  const double mean = static_cast<double>(total) / nd;
  double stderr_v = 0.0;
  if (num_sims > 1) {
    double var =
        (static_cast<double>(total_sq) - nd * mean * mean) / (nd - 1.0);
    if (var < 0.0) var = 0.0;  // rounding at zero variance
    stderr_v = std::sqrt(var / nd);
  }
  return {mean, stderr_v, num_sims};
}

}  // namespace infcen
