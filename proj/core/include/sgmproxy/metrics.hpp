#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "sgmproxy/grid.hpp"
#include "sgmproxy/imagery.hpp"

namespace sgmproxy {

/// Metric depth in meters; values <= 0 are invalid.
using DepthMap = Grid<double>;

/// depth = focal * baseline / d for d > 0; -1 and 0 map to invalid (0).
DepthMap disparity_to_depth(const DisparityMap& map, const CameraCalib& calib);
DisparityMap depth_to_disparity(const DepthMap& depth, const CameraCalib& calib);

struct EvalReport {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  std::size_t valid_pixel_count = 0;
};

struct EigenOptions {
  double cap = 80.0;         // meters
  double min_depth = 1e-3;   // prediction floor
  bool garg_crop = false;
  bool median_scaling = false;
};

/// Evaluated on pixels with gt in (0, cap] (inside the crop when enabled).
/// Predictions are clamped to [min_depth, cap]. Throws if no pixel qualifies.
EvalReport eigen_metrics(const DepthMap& pred, const DepthMap& gt,
                         const EigenOptions& options = {});

/// Standard KITTI evaluation crop over rows [0.4081h, 0.9919h) and
/// columns [0.0359w, 0.9641w).
Mask garg_crop_mask(int width, int height);

/// Mean of per-image reports; valid_pixel_count is summed.
EvalReport mean_report(std::span<const EvalReport> reports);

struct D1Report {
  double d1_bg = 0.0;  // percent
  double d1_fg = 0.0;
  double d1_all = 0.0;
  std::size_t count_bg = 0;
  std::size_t count_fg = 0;
  std::size_t errors_bg = 0;
  std::size_t errors_fg = 0;
};

/// |p - g| > 3 and |p - g| > 0.05 g. An invalid prediction counts as an error.
bool d1_erroneous(double pred, double gt) noexcept;

/// Evaluated over valid gt pixels; `fg_mask` splits the domain (all
/// background when absent). Throws on an empty domain.
D1Report d1_metric(const DisparityMap& pred, const DisparityMap& gt,
                   const Mask* fg_mask = nullptr);

/// Pools pixel counts across images.
D1Report pool_d1(std::span<const D1Report> reports);

struct ProxyQuality {
  double fraction = 0.0;  // share with |proxy - gt| < threshold
  std::size_t good = 0;
  std::size_t count = 0;  // pixels valid in both maps
};

ProxyQuality proxy_quality(const DisparityMap& proxy, const DisparityMap& gt,
                           double threshold = 3.0);
ProxyQuality pool_proxy_quality(std::span<const ProxyQuality> parts);

}  // namespace sgmproxy
