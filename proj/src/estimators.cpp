#include "infcen/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "infcen/kernels.hpp"
#include "infcen/rng.hpp"
#include "infcen/rrset.hpp"

namespace infcen {

namespace {

// Salts differ in the top bits so that salt ^ index can never alias across
// phases for any index below the theta hard cap.
constexpr std::uint64_t kPhase1Salt = 0x1000000000000001ull;
constexpr std::uint64_t kPhase2Salt = 0x2000000000000002ull;

// Fixed accumulation granularity. Chunk c sums its sets in index order and
// chunks merge in chunk order, so the tallies are bit-identical for any
// worker count (including one).
constexpr std::uint64_t kChunk = 4096;

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct AccumulateJob {
  const Graph& g;
  bool shapley_increment;                // 1/|R| per member vs. 1 per member
  const CumulativeWeights* root_weights; // nullptr: uniform roots
  std::uint64_t seed;
  std::uint64_t salt;
};

// Worker-local state for one chunk: dense partials plus the touched-node
// list that lets us merge and clear without scanning all n entries.
class ChunkAccumulator {
 public:
  explicit ChunkAccumulator(const Graph& g)
      : sampler_(g), partial_(g.node_count(), 0.0),
        stamp_(g.node_count(), 0) {}

  void add_range(const AccumulateJob& job, std::uint64_t first,
                 std::uint64_t last) {
    ++epoch_;
    touched_.clear();
    const std::uint32_t n = job.g.node_count();
    for (std::uint64_t j = first; j < last; ++j) {
      RngStream rng(job.seed, job.salt ^ j);
      NodeId root = job.root_weights ? job.root_weights->sample(rng)
                                     : rng.next_below(n);
      auto members = sampler_.sample_members_unsorted(root, rng);
      double inc = job.shapley_increment
                       ? 1.0 / static_cast<double>(members.size())
                       : 1.0;
      for (NodeId u : members) {
        if (stamp_[u] != epoch_) {
          stamp_[u] = epoch_;
          touched_.push_back(u);
          partial_[u] = 0.0;
        }
        partial_[u] += inc;
      }
    }
  }

  // Adds this chunk's partials into est in ascending node order and clears
  // them. When most nodes were touched, a full scan beats sorting the
  // touched list; both paths add in ascending node order and untouched
  // entries hold 0.0, whose addition leaves est bit-identical.
  void merge_into(std::vector<double>& est) {
    if (touched_.size() >= partial_.size() / 8) {
      for (std::size_t v = 0; v < partial_.size(); ++v) {
        est[v] += partial_[v];
        partial_[v] = 0.0;
      }
      touched_.clear();
      return;
    }
    std::sort(touched_.begin(), touched_.end());
    for (NodeId u : touched_) {
      est[u] += partial_[u];
      partial_[u] = 0.0;
    }
  }

 private:
  RRSampler sampler_;
  std::vector<double> partial_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  std::vector<NodeId> touched_;
};

// Generates set indices [begin, end) and folds them into est. Chunks are
// claimed dynamically but merged strictly in chunk order.
void accumulate_range(const AccumulateJob& job, std::uint64_t begin,
                      std::uint64_t end, std::vector<double>& est,
                      unsigned threads) {
  if (begin >= end) return;
  const std::uint64_t count = end - begin;
  const std::uint64_t num_chunks = (count + kChunk - 1) / kChunk;
  unsigned workers = resolve_threads(threads);
  if (workers > num_chunks) workers = static_cast<unsigned>(num_chunks);

  if (workers <= 1) {
    ChunkAccumulator acc(job.g);
    for (std::uint64_t c = 0; c < num_chunks; ++c) {
      std::uint64_t first = begin + c * kChunk;
      std::uint64_t last = std::min(end, first + kChunk);
      acc.add_range(job, first, last);
      acc.merge_into(est);
    }
    return;
  }

  std::atomic<std::uint64_t> next_chunk{0};
  std::mutex merge_mutex;
  std::condition_variable merge_cv;
  std::uint64_t next_to_merge = 0;

  auto body = [&]() {
    ChunkAccumulator acc(job.g);
    for (;;) {
      std::uint64_t c = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (c >= num_chunks) return;
      std::uint64_t first = begin + c * kChunk;
      std::uint64_t last = std::min(end, first + kChunk);
      acc.add_range(job, first, last);
      {
        std::unique_lock<std::mutex> lock(merge_mutex);
        merge_cv.wait(lock, [&] { return next_to_merge == c; });
        acc.merge_into(est);
        ++next_to_merge;
      }
      merge_cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
}

std::uint64_t ceil_with_cap(double value, std::uint64_t cap,
                            const char* which) {
  if (!std::isfinite(value))
    throw ThetaCapError(std::string(which) + " sample count is not finite");
  double c = std::ceil(value);
  if (c > static_cast<double>(cap))
    throw ThetaCapError(std::string(which) + " sample count " +
                        std::to_string(c) + " exceeds the hard cap " +
                        std::to_string(cap));
  if (c < 1.0) return 1;
  return static_cast<std::uint64_t>(c);
}

void validate(const Graph& g, const EstimatorParams& p) {
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(p.ell > 0.0)) throw std::invalid_argument("ell must be > 0");
  if (p.k < 1 || p.k > g.node_count())
    throw std::invalid_argument("k must be in [1, n]");
  if (p.weights) {
    if (p.weights->w.size() != g.node_count())
      throw std::invalid_argument("weights length does not match node count");
    if (!(p.weights->total > 0.0))
      throw std::invalid_argument("total weight must be positive");
  }
}

}  // namespace

std::uint64_t theta_iteration(std::uint32_t n, double epsilon_prime,
                              double ell, double x, std::uint64_t cap) {
  if (n < 2) throw std::invalid_argument("theta_iteration requires n >= 2");
  if (!(x > 0.0)) throw std::invalid_argument("x must be positive");
  double nd = static_cast<double>(n);
  double value = nd *
                 ((ell + 1.0) * std::log(nd) + std::log(std::log2(nd)) +
                  std::log(2.0)) *
                 (2.0 + 2.0 / 3.0 * epsilon_prime) /
                 (epsilon_prime * epsilon_prime * x);
  return ceil_with_cap(value, cap, "Phase-1");
}

std::uint64_t theta_final(std::uint32_t n, double epsilon, double ell,
                          double lb, std::uint64_t cap) {
  if (n < 2) throw std::invalid_argument("theta_final requires n >= 2");
  if (!(lb >= 1.0)) throw std::invalid_argument("lb must be >= 1");
  double nd = static_cast<double>(n);
  double value = nd * ((ell + 1.0) * std::log(nd) + std::log(4.0)) *
                 (2.0 + 2.0 / 3.0 * epsilon) / (epsilon * epsilon * lb);
  return ceil_with_cap(value, cap, "Phase-2");
}

double kth_largest(std::span<const double> values, std::uint32_t k) {
  if (k < 1 || k > values.size())
    throw std::out_of_range("k out of range in kth_largest");
  std::vector<double> copy(values.begin(), values.end());
  std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end(),
                   std::greater<>());
  return copy[k - 1];
}

namespace {

CentralityResult run_impl(const Graph& g, const EstimatorParams& params,
                          std::optional<std::uint64_t> fixed_theta,
                          unsigned threads) {
  validate(g, params);
  const auto t_start = std::chrono::steady_clock::now();
  const std::uint32_t n = g.node_count();

  CentralityResult result;
  result.mode = params.mode;

  if (n == 1) {
    // A single node influences exactly itself.
    result.estimates = {params.weights ? params.weights->total : 1.0};
    result.theta = fixed_theta.value_or(0);
    return result;
  }

  std::optional<CumulativeWeights> cum;
  if (params.weights) cum.emplace(*params.weights);

  AccumulateJob phase2_job{g, params.mode == CentralityMode::shapley,
                           cum ? &*cum : nullptr, params.seed, kPhase2Salt};

  std::vector<double> est(n, 0.0);
  double lb = 1.0;
  std::uint64_t theta = 0;

  if (fixed_theta) {
    theta = *fixed_theta;
    if (theta < 1) throw std::invalid_argument("theta must be >= 1");
  } else {
    // Phase 1: halve the target x until the k-th tally certifies a lower
    // bound. The estimates accumulate across iterations; only the final
    // Phase 2 batch is fresh.
    const double eps_prime = std::sqrt(2.0) * params.epsilon;
    const std::uint32_t k_eff = params.near_linear ? 1 : params.k;
    AccumulateJob phase1_job{
        g, !params.near_linear && params.mode == CentralityMode::shapley,
        cum ? &*cum : nullptr, params.seed, kPhase1Salt};

    const int max_iter =
        static_cast<int>(std::floor(std::log2(static_cast<double>(n)))) - 1;
    std::uint64_t theta_prev = 0;
    for (int i = 1; i <= max_iter; ++i) {
      double x = static_cast<double>(n) / std::exp2(static_cast<double>(i));
      std::uint64_t theta_i =
          theta_iteration(n, eps_prime, params.ell, x, params.theta_cap);
      accumulate_range(phase1_job, theta_prev, theta_i, est, threads);
      theta_prev = theta_i;
      double est_k = kth_largest(est, k_eff);
      if (static_cast<double>(n) * est_k / static_cast<double>(theta_i) >=
          (1.0 + eps_prime) * x) {
        lb = static_cast<double>(n) * est_k /
             (static_cast<double>(theta_i) * (1.0 + eps_prime));
        break;
      }
    }
    result.theta_phase1 = theta_prev;
    theta = theta_final(n, params.epsilon, params.ell, lb, params.theta_cap);
    std::fill(est.begin(), est.end(), 0.0);
  }

  accumulate_range(phase2_job, 0, theta, est, threads);

  const double scale =
      (params.weights ? params.weights->total : static_cast<double>(n)) /
      static_cast<double>(theta);
  kernels::active().scale(est.data(), scale, n);

  result.estimates = std::move(est);
  result.theta = theta;
  result.lb = lb;
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return result;
}

}  // namespace

CentralityResult run(const Graph& g, const EstimatorParams& params,
                     unsigned threads) {
  return run_impl(g, params, std::nullopt, threads);
}

CentralityResult run_fixed_theta(const Graph& g, const EstimatorParams& params,
                                 std::uint64_t theta, unsigned threads) {
  return run_impl(g, params, theta, threads);
}

}  // namespace infcen
