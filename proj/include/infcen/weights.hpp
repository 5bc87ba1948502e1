#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace infcen {

// Nonnegative per-node weights for the weighted-spread variants.
struct NodeWeights {
  std::vector<double> w;
  double total = 0.0;

  static NodeWeights from(std::vector<double> values) {
    NodeWeights nw;
    nw.w = std::move(values);
    for (double x : nw.w) {
      if (!(x >= 0.0)) throw std::invalid_argument("node weight must be >= 0");
      nw.total += x;
    }
    if (!(nw.total > 0.0))
      throw std::invalid_argument("total node weight must be positive");
    return nw;
  }

  static NodeWeights uniform(std::size_t n, double value = 1.0) {
    return from(std::vector<double>(n, value));
  }
};

}  // namespace infcen
