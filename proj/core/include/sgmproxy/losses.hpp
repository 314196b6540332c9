#pragma once

#include <optional>
#include <vector>

#include "sgmproxy/imagery.hpp"

namespace sgmproxy {

// Defaults follow the published training setup.
struct LossWeights {
  double alpha_ap = 1.0;     // appearance (reconstruction) weight
  double alpha_ds = 0.1;     // disparity smoothness weight
  double alpha_ps = 1.0;     // proxy supervision weight
  double ssim_alpha = 0.85;  // SSIM vs L1 mix inside the appearance term
  double berhu_alpha = 0.2;  // berHu threshold as a fraction of the max residual
  int n_i = 4;               // scales of the initial estimator
  int n_r = 3;               // scales of the refinement stage

  void validate() const;
};

/// Bilinear horizontal resampling: out(x,y) = src(x + sign*disp(x,y), y),
/// with the sample coordinate clamped to [0, W-1]. sign = -1 rebuilds the
/// left view from the right image; sign = +1 rebuilds the right view from
/// the left image. `disp` must be dense.
Image warp_horizontal(const Image& src, const DisparityMap& disp, int sign);

/// d out(x,y,c) / d disp(x,y) for the warp above (zero where the sample
/// coordinate is clamped).
Image warp_horizontal_derivative(const Image& src, const DisparityMap& disp, int sign);

/// Per-pixel, per-channel SSIM using 3x3 box statistics (edge-replicated
/// windows), C1 = 0.01^2, C2 = 0.03^2.
Image ssim(const Image& a, const Image& b);

/// Scalar loss with an optional gradient laid out like the differentiated
/// input (image samples for loss_ap, disparity pixels otherwise).
struct TermResult {
  double value = 0.0;
  std::vector<double> gradient;
};

/// mean of ssim_alpha * (1 - SSIM) / 2 + (1 - ssim_alpha) * |I - I_hat| over
/// all samples. Gradient is with respect to `reconstructed`.
TermResult loss_ap(const Image& target, const Image& reconstructed, const LossWeights& w,
                   bool with_gradient = false);

/// Edge-aware smoothness, mean over all pixels of
/// |dx d| exp(-|dx I|) + |dy d| exp(-|dy I|), forward differences, zero on
/// the last column/row, image gradient magnitude averaged over channels.
TermResult loss_ds(const DisparityMap& disp, const Image& image, bool with_gradient = false);

/// Reverse Huber: |r| for |r| <= c, (r^2 - c^2) / (2c) otherwise. c == 0
/// degenerates to |r|.
double berhu(double residual, double c);
double berhu_derivative(double residual, double c);

/// berhu_alpha * max |d - proxy| over pixels where the proxy is valid.
double berhu_threshold(const DisparityMap& disp, const DisparityMap& proxy, double berhu_alpha);

/// Mean berHu over valid proxy pixels. The threshold is recomputed from the
/// current residuals unless `frozen_c` is supplied; the gradient treats it as
/// a constant either way.
TermResult loss_ps(const DisparityMap& disp, const DisparityMap& proxy, const LossWeights& w,
                   bool with_gradient = false, std::optional<double> frozen_c = std::nullopt);

/// Per-scale disparities, all already at full input resolution.
struct MultiScaleDisparities {
  std::vector<DisparityMap> left;
  std::vector<DisparityMap> right;
};

struct LossBreakdown {
  // Unweighted term sums over scales and views.
  double ap = 0.0;
  double ds = 0.0;
  double ps = 0.0;
  // alpha_ap * ap + alpha_ds * ds + alpha_ps * ps
  double total = 0.0;
  // d total / d disparity per scale; empty unless requested.
  std::vector<Grid<double>> grad_left;
  std::vector<Grid<double>> grad_right;
};

/// Initial-estimator loss summed over n_i scales, left and right views.
/// I_hat_L = warp(I_R, d_L, -1), I_hat_R = warp(I_L, d_R, +1).
LossBreakdown loss_init(const MultiScaleDisparities& scales, const Image& left,
                        const Image& right, const DisparityMap& proxy_left,
                        const DisparityMap& proxy_right, const LossWeights& w,
                        bool with_gradient = false);

/// Refinement loss summed over n_r scales, left view only.
LossBreakdown loss_ref(const std::vector<DisparityMap>& left_scales, const Image& left,
                       const Image& right, const DisparityMap& proxy_left,
                       const LossWeights& w, bool with_gradient = false);

double loss_total(const LossBreakdown& init, const LossBreakdown& ref);

/// Flip-and-blend test-time post-processing. `d_flipped` is the prediction
/// for the mirrored input. The leftmost `band` of the width takes the
/// mirrored-back map, the rightmost `band` takes `d`, each weight ramps
/// linearly to zero over the following `band`, and the rest is the average.
DisparityMap post_process(const DisparityMap& d, const DisparityMap& d_flipped,
                          double band = 0.05);

}  // namespace sgmproxy
