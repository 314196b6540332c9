#include "sgmproxy/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgmproxy {

void ConsistencyParams::validate() const {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("ConsistencyParams: epsilon must be >= 0");
}

DisparityMap lr_check(const DisparityMap& d_left, const DisparityMap& d_right,
                      const ConsistencyParams& params) {
  params.validate();
  if (!d_left.same_shape(d_right)) throw std::invalid_argument("lr_check: dimension mismatch");
  const int w = d_left.width();
  DisparityMap out(w, d_left.height(), DisparityMap::kInvalid);
  for (int y = 0; y < d_left.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      const double dl = d_left(x, y);
      if (!DisparityMap::is_valid(dl)) continue;
      const long col = std::clamp(std::lround(x - dl), 0L, static_cast<long>(w - 1));
      const double dr = d_right(static_cast<int>(col), y);
      if (DisparityMap::is_valid(dr) && std::abs(dl - dr) <= params.epsilon) out(x, y) = dl;
    }
  }
  return out;
}

DisparityMap scale_disparity(const DisparityMap& map, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale_disparity: factor must be > 0");
  DisparityMap out = map;
  for (double& v : out.data()) {
    if (DisparityMap::is_valid(v)) v *= factor;
  }
  return out;
}

double width_scale_factor(int native_width, int target_width) {
  if (native_width <= 0 || target_width <= 0) {
    throw std::invalid_argument("width_scale_factor: widths must be positive");
  }
  return static_cast<double>(target_width) / native_width;
}

DisparityMap distill_proxy(const Image& left, const Image& right, const SgmParams& sgm,
                           const ConsistencyParams& cons, double scale, int threads) {
  const DisparityPair pair = compute_disparity_pair(left, right, sgm, threads);
  return scale_disparity(lr_check(pair.left, pair.right, cons), scale);
}

}  // namespace sgmproxy
