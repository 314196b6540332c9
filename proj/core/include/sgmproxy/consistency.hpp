#pragma once

#include "sgmproxy/imagery.hpp"
#include "sgmproxy/sgm.hpp"

namespace sgmproxy {

struct ConsistencyParams {
  double epsilon = 1.0;  // pixels
  void validate() const;
};

/// Keeps d_left(p) where |D^L(p) - D^R(p - D^L(p))| <= epsilon, else -1.
/// The lookup column is rounded to nearest and clamped into the image; an
/// invalid D^R at the lookup invalidates the pixel.
DisparityMap lr_check(const DisparityMap& d_left, const DisparityMap& d_right,
                      const ConsistencyParams& params);

/// Multiplies valid values by `factor`; -1 entries are left alone.
DisparityMap scale_disparity(const DisparityMap& map, double factor);

/// Factor mapping disparities computed at `native_width` into a pipeline
/// running at `target_width` (1280 for the KITTI training resolution).
double width_scale_factor(int native_width, int target_width = 1280);

DisparityMap distill_proxy(const Image& left, const Image& right, const SgmParams& sgm,
                           const ConsistencyParams& cons, double scale, int threads = 1);

}  // namespace sgmproxy
