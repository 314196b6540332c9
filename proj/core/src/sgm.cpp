#include "sgmproxy/sgm.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sgmproxy/parallel.hpp"

namespace sgmproxy {

void SgmParams::validate() const {
  if (!(p1 > 0 && p1 < p2)) throw std::invalid_argument("SgmParams: require 0 < p1 < p2");
  // Keeps the 8-path sum of (max cost + p2) inside 32 bits.
  if (p2 > (1u << 24)) throw std::invalid_argument("SgmParams: p2 too large");
  if (d_max < 1) throw std::invalid_argument("SgmParams: d_max must be >= 1");
}

namespace {

bool is_canonical(Direction dir) {
  return std::find(kPathDirections.begin(), kPathDirections.end(), dir) != kPathDirections.end();
}

// One step of the normalized recurrence. `prev` is null at a path start.
// Returns min_d out[d].
std::uint32_t path_step(std::span<const std::uint16_t> cost, const std::uint32_t* prev,
                        std::uint32_t prev_min, std::uint32_t* out, std::uint32_t p1,
                        std::uint32_t p2) {
  const int depth = static_cast<int>(cost.size());
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  if (prev == nullptr) {
    for (int d = 0; d < depth; ++d) {
      out[d] = cost[d];
      best = std::min(best, out[d]);
    }
    return best;
  }
  const std::uint32_t jump = prev_min + p2;
  for (int d = 0; d < depth; ++d) {
    std::uint32_t v = std::min(prev[d], jump);
    if (d > 0) v = std::min(v, prev[d - 1] + p1);
    if (d + 1 < depth) v = std::min(v, prev[d + 1] + p1);
    out[d] = cost[d] + v - prev_min;
    best = std::min(best, out[d]);
  }
  return best;
}

// Visits every pixel along `dir` in dependency order and hands its path
// costs to sink(x, y, const uint32_t*). Distinct pixels may be delivered
// concurrently.
template <typename Sink>
void sweep(const CostVolume& volume, Direction dir, const SgmParams& params, int threads,
           Sink&& sink) {
  const int w = volume.width();
  const int h = volume.height();
  const int depth = volume.depth();
  if (w == 0 || h == 0) return;

  if (dir.dy == 0) {
    parallel_for(0, h, threads, [&](int y) {
      std::vector<std::uint32_t> prev(depth), cur(depth);
      std::uint32_t prev_min = 0;
      const int x0 = dir.dx > 0 ? 0 : w - 1;
      for (int i = 0, x = x0; i < w; ++i, x += dir.dx) {
        prev_min = path_step(volume.at(x, y), i == 0 ? nullptr : prev.data(), prev_min,
                             cur.data(), params.p1, params.p2);
        sink(x, y, cur.data());
        std::swap(prev, cur);
      }
    });
    return;
  }

  std::vector<std::uint32_t> prev(static_cast<std::size_t>(w) * depth);
  std::vector<std::uint32_t> cur(prev.size());
  std::vector<std::uint32_t> prev_min(w), cur_min(w);
  const int y0 = dir.dy > 0 ? 0 : h - 1;
  for (int j = 0, y = y0; j < h; ++j, y += dir.dy) {
    parallel_for(0, w, threads, [&](int x) {
      const int px = x - dir.dx;
      const bool start = j == 0 || px < 0 || px >= w;
      cur_min[x] = path_step(volume.at(x, y), start ? nullptr : prev.data() + px * depth,
                             start ? 0 : prev_min[px], cur.data() + x * depth, params.p1,
                             params.p2);
      sink(x, y, cur.data() + x * depth);
    });
    std::swap(prev, cur);
    std::swap(prev_min, cur_min);
  }
}

template <typename T>
DisparityMap argmin_map(const Volume<T>& volume) {
  DisparityMap out(volume.width(), volume.height());
  for (int y = 0; y < volume.height(); ++y) {
    for (int x = 0; x < volume.width(); ++x) {
      const auto costs = volume.at(x, y);
      // min_element returns the first minimum, i.e. the smallest disparity.
      out(x, y) = static_cast<double>(std::min_element(costs.begin(), costs.end()) - costs.begin());
    }
  }
  return out;
}

}  // namespace

AggregatedVolume aggregate_path(const CostVolume& volume, Direction dir, const SgmParams& params) {
  if (!is_canonical(dir)) throw std::invalid_argument("aggregate_path: unsupported direction");
  if (!(params.p1 > 0 && params.p1 < params.p2)) {
    throw std::invalid_argument("SgmParams: require 0 < p1 < p2");
  }
  AggregatedVolume out(volume.width(), volume.height(), volume.depth());
  const int depth = volume.depth();
  sweep(volume, dir, params, 1, [&](int x, int y, const std::uint32_t* l) {
    std::copy_n(l, depth, out.at(x, y).begin());
  });
  return out;
}

AggregatedVolume aggregate_all(const CostVolume& volume, const SgmParams& params, int threads) {
  if (!(params.p1 > 0 && params.p1 < params.p2)) {
    throw std::invalid_argument("SgmParams: require 0 < p1 < p2");
  }
  AggregatedVolume sum(volume.width(), volume.height(), volume.depth());
  const int depth = volume.depth();
  for (Direction dir : kPathDirections) {
    sweep(volume, dir, params, threads, [&](int x, int y, const std::uint32_t* l) {
      auto acc = sum.at(x, y);
      for (int d = 0; d < depth; ++d) acc[d] += l[d];
    });
  }
  return sum;
}

DisparityMap winner_takes_all(const AggregatedVolume& volume) { return argmin_map(volume); }
DisparityMap winner_takes_all(const CostVolume& volume) { return argmin_map(volume); }

DisparityPair compute_disparity_pair(const Image& left, const Image& right,
                                     const SgmParams& params, int threads) {
  params.validate();
  if (left.width() != right.width() || left.height() != right.height()) {
    throw std::invalid_argument("compute_disparity_pair: dimension mismatch");
  }
  const CensusField cl = census_transform(to_grayscale(left), threads);
  const CensusField cr = census_transform(to_grayscale(right), threads);
  DisparityPair pair;
  pair.left = winner_takes_all(aggregate_all(build_cost_volume(cl, cr, params.d_max, threads),
                                             params, threads));
  pair.right = winner_takes_all(aggregate_all(
      build_cost_volume_right_ref(cl, cr, params.d_max, threads), params, threads));
  return pair;
}

}  // namespace sgmproxy
