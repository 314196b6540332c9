#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "sgmproxy/census.hpp"
#include "sgmproxy/imagery.hpp"

namespace sgmproxy {

struct SgmParams {
  // Small (|dd| == 1) and large (|dd| > 1) jump penalties in Hamming units.
  std::uint32_t p1 = 7;
  std::uint32_t p2 = 86;
  int d_max = 128;

  void validate() const;
};

struct Direction {
  int dx;
  int dy;
  friend bool operator==(Direction, Direction) = default;
};

inline constexpr std::array<Direction, 8> kPathDirections = {{
    {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1},
}};

using AggregatedVolume = Volume<std::uint32_t>;

/// Scanline recurrence along `dir`, where each pixel's predecessor is
/// p - dir:
///   L(p,d) = C(p,d) + min(L(p',d), L(p',d+-1) + P1, min_k L(p',k) + P2) - min_k L(p',k)
/// Path starts take L = C.
AggregatedVolume aggregate_path(const CostVolume& volume, Direction dir, const SgmParams& params);

/// Sum of the eight directional aggregations.
AggregatedVolume aggregate_all(const CostVolume& volume, const SgmParams& params,
                               int threads = 1);

/// Per-pixel argmin; ties go to the smallest disparity.
DisparityMap winner_takes_all(const AggregatedVolume& volume);
DisparityMap winner_takes_all(const CostVolume& volume);

struct DisparityPair {
  DisparityMap left;
  DisparityMap right;
};

/// grayscale -> census -> cost volume -> 8-path aggregation -> WTA, for both
/// reference views.
DisparityPair compute_disparity_pair(const Image& left, const Image& right,
                                     const SgmParams& params, int threads = 1);

}  // namespace sgmproxy
