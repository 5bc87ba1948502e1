#include "infcen/im.hpp"

#include <algorithm>
#include <atomic>
#include <queue>
#include <thread>

#include "infcen/rng.hpp"
#include "infcen/rrset.hpp"

namespace infcen {

namespace {

constexpr std::uint64_t kImSalt = 0x4000000000000004ull;

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

GreedyResult rr_greedy(const Graph& g, std::uint32_t k, std::uint64_t num_rr,
                       std::uint64_t seed, unsigned threads,
                       std::size_t memory_cap_bytes) {
  const NodeId n = g.node_count();
  if (n == 0) throw std::invalid_argument("empty graph");
  if (k < 1 || k > n) throw std::invalid_argument("k must be in [1, n]");
  if (num_rr < 1 || num_rr > 0xffffffffull)
    throw std::invalid_argument("num_rr must be in [1, 2^32)");

  // Set contents are a function of (seed, index) alone, so parallel
  // generation fills the same table in any schedule.
  std::vector<std::vector<NodeId>> sets(num_rr);
  std::atomic<std::size_t> bytes_used{0};
  std::atomic<bool> over_cap{false};
  unsigned workers = resolve_threads(threads);
  if (workers > num_rr) workers = static_cast<unsigned>(num_rr);
  auto body = [&](unsigned w) {
    RRSampler sampler(g);
    for (std::uint64_t j = w; j < num_rr && !over_cap.load(); j += workers) {
      RngStream rng(seed, kImSalt ^ j);
      auto members = sampler.sample_from_into(rng.next_below(n), rng);
      sets[j].assign(members.begin(), members.end());
      std::size_t sz =
          bytes_used.fetch_add(members.size() * sizeof(NodeId)) +
          members.size() * sizeof(NodeId);
      if (sz > memory_cap_bytes) over_cap.store(true);
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  if (over_cap.load())
    throw std::runtime_error("stored RR sets exceed the memory cap");

  // Inverted index: node -> set ids containing it.
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& s : sets)
    for (NodeId u : s) ++deg[u];
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + deg[v];
  std::vector<std::uint32_t> containing(offsets[n]);
  {
    std::vector<std::uint64_t> pos(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t j = 0; j < num_rr; ++j)
      for (NodeId u : sets[j]) containing[pos[u]++] = j;
  }

  // Lazy greedy: a popped entry with a stale round is refreshed and pushed
  // back; gains only ever shrink, so a fresh top entry is optimal.
  struct Entry {
    std::uint64_t gain;
    NodeId node;
    std::uint32_t round;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (NodeId v = 0; v < n; ++v) heap.push({deg[v], v, 0});

  std::vector<char> covered(num_rr, 0);
  std::vector<char> selected(n, 0);
  GreedyResult result;
  std::uint64_t covered_count = 0;
  std::uint32_t round = 0;
  while (result.seeds.size() < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (selected[top.node]) continue;
    if (top.round != round) {
      std::uint64_t gain = 0;
      for (std::uint64_t i = offsets[top.node]; i < offsets[top.node + 1]; ++i)
        if (!covered[containing[i]]) ++gain;
      heap.push({gain, top.node, round});
      continue;
    }
    selected[top.node] = 1;
    for (std::uint64_t i = offsets[top.node]; i < offsets[top.node + 1]; ++i) {
      std::uint32_t j = containing[i];
      if (!covered[j]) {
        covered[j] = 1;
        ++covered_count;
      }
    }
    result.seeds.push_back(top.node);
    result.coverage_steps.push_back(static_cast<double>(covered_count) /
                                    static_cast<double>(num_rr));
    ++round;
  }

  result.coverage = result.coverage_steps.empty()
                        ? 0.0
                        : result.coverage_steps.back();
  result.est_spread = static_cast<double>(n) * result.coverage;
  return result;
}

}  // namespace infcen
