#pragma once

#include <cstdint>

#include "sgmproxy/grid.hpp"
#include "sgmproxy/imagery.hpp"

namespace sgmproxy {

inline constexpr int kCensusWindowWidth = 9;
inline constexpr int kCensusWindowHeight = 7;
inline constexpr int kCensusBits = kCensusWindowWidth * kCensusWindowHeight - 1;  // 62

/// Per-pixel 62-bit census descriptors. Bit k is set iff the k-th window
/// neighbour (row-major over the 9x7 window, centre skipped) is strictly
/// darker than the centre. Out-of-image neighbours replicate the edge.
using CensusField = Grid<std::uint64_t>;

/// Matching costs, costs(x, y, d) in [0, 62].
using CostVolume = Volume<std::uint16_t>;

CensusField census_transform(const Image& gray, int threads = 1);

/// Left-reference costs: popcount(left(x,y) ^ right(max(x-d, 0), y)).
CostVolume build_cost_volume(const CensusField& left, const CensusField& right, int d_max,
                             int threads = 1);

/// Right-reference costs: popcount(right(x,y) ^ left(min(x+d, W-1), y)).
CostVolume build_cost_volume_right_ref(const CensusField& left, const CensusField& right,
                                       int d_max, int threads = 1);

}  // namespace sgmproxy
