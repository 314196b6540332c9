#pragma once

#include <cstddef>
#include <span>

namespace sgmproxy {

// Pairwise (tree) summation. The split points depend only on the length, so
// results are reproducible regardless of how the inputs were produced.
inline double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kLeaf = 8;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
  return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace sgmproxy
