#include "sgmproxy/census.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <vector>

#include "sgmproxy/parallel.hpp"

namespace sgmproxy {

CensusField census_transform(const Image& gray, int threads) {
  if (gray.channels() != 1) throw std::invalid_argument("census_transform: expects grayscale");
  if (gray.width() < 1 || gray.height() < 1) {
    throw std::invalid_argument("census_transform: image smaller than 1x1");
  }
  constexpr int rx = kCensusWindowWidth / 2;
  constexpr int ry = kCensusWindowHeight / 2;
  const int w = gray.width();
  const int h = gray.height();
  CensusField field(w, h);

  // Edge-replicated copy so the window loop needs no bounds handling.
  const int pw = w + 2 * rx;
  std::vector<double> padded(static_cast<std::size_t>(pw) * (h + 2 * ry));
  for (int y = 0; y < h + 2 * ry; ++y) {
    const int sy = std::clamp(y - ry, 0, h - 1);
    for (int x = 0; x < pw; ++x) {
      padded[static_cast<std::size_t>(y) * pw + x] = gray(std::clamp(x - rx, 0, w - 1), sy);
    }
  }

  parallel_for(0, h, threads, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const double* top = padded.data() + static_cast<std::size_t>(y) * pw + x;
      const double center = top[ry * pw + rx];
      std::uint64_t bits = 0;
      int k = 0;
      for (int dy = 0; dy < kCensusWindowHeight; ++dy) {
        const double* row = top + dy * pw;
        for (int dx = 0; dx < kCensusWindowWidth; ++dx) {
          if (dx == rx && dy == ry) continue;
          bits |= static_cast<std::uint64_t>(row[dx] < center) << k;
          ++k;
        }
      }
      field(x, y) = bits;
    }
  });
  return field;
}

namespace {

void check_pair(const CensusField& left, const CensusField& right, int d_max) {
  if (!left.same_shape(right)) throw std::invalid_argument("cost volume: dimension mismatch");
  if (d_max < 1) throw std::invalid_argument("cost volume: d_max must be >= 1");
}

}  // namespace

CostVolume build_cost_volume(const CensusField& left, const CensusField& right, int d_max,
                             int threads) {
  check_pair(left, right, d_max);
  const int w = left.width();
  CostVolume volume(w, left.height(), d_max);
  parallel_for(0, left.height(), threads, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const std::uint64_t ref = left(x, y);
      auto costs = volume.at(x, y);
      for (int d = 0; d < d_max; ++d) {
        costs[d] = static_cast<std::uint16_t>(std::popcount(ref ^ right(std::max(x - d, 0), y)));
      }
    }
  });
  return volume;
}

CostVolume build_cost_volume_right_ref(const CensusField& left, const CensusField& right,
                                       int d_max, int threads) {
  check_pair(left, right, d_max);
  const int w = left.width();
  CostVolume volume(w, left.height(), d_max);
  parallel_for(0, left.height(), threads, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const std::uint64_t ref = right(x, y);
      auto costs = volume.at(x, y);
      for (int d = 0; d < d_max; ++d) {
        costs[d] = static_cast<std::uint16_t>(std::popcount(ref ^ left(std::min(x + d, w - 1), y)));
      }
    }
  });
  return volume;
}

}  // namespace sgmproxy
