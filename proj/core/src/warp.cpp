#include <cmath>
#include <stdexcept>

#include "sgmproxy/losses.hpp"

namespace sgmproxy {

namespace {

void check_warp_inputs(const Image& src, const DisparityMap& disp, int sign) {
  if (src.width() != disp.width() || src.height() != disp.height()) {
    throw std::invalid_argument("warp_horizontal: dimension mismatch");
  }
  if (sign != 1 && sign != -1) throw std::invalid_argument("warp_horizontal: sign must be +-1");
  if (!disp.dense()) throw std::invalid_argument("warp_horizontal: disparity has invalid pixels");
}

// Two-tap sample position; t == 0 with x0 == x1 when the coordinate is
// clamped to the border.
struct Tap {
  int x0;
  int x1;
  double t;
  bool clamped;
};

Tap tap_for(double xs, int width) {
  if (xs <= 0.0) return {0, 0, 0.0, true};
  if (xs >= width - 1) return {width - 1, width - 1, 0.0, true};
  const int x0 = static_cast<int>(std::floor(xs));
  return {x0, x0 + 1, xs - x0, false};
}

}  // namespace

Image warp_horizontal(const Image& src, const DisparityMap& disp, int sign) {
  check_warp_inputs(src, disp, sign);
  Image out(src.width(), src.height(), src.channels());
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      const Tap tap = tap_for(x + sign * disp(x, y), src.width());
      for (int c = 0; c < src.channels(); ++c) {
        out(x, y, c) = (1.0 - tap.t) * src(tap.x0, y, c) + tap.t * src(tap.x1, y, c);
      }
    }
  }
  return out;
}

Image warp_horizontal_derivative(const Image& src, const DisparityMap& disp, int sign) {
  check_warp_inputs(src, disp, sign);
  Image out(src.width(), src.height(), src.channels());
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      const Tap tap = tap_for(x + sign * disp(x, y), src.width());
      if (tap.clamped) continue;
      for (int c = 0; c < src.channels(); ++c) {
        out(x, y, c) = sign * (src(tap.x1, y, c) - src(tap.x0, y, c));
      }
    }
  }
  return out;
}

}  // namespace sgmproxy
