#include "sgmproxy/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sgmproxy/reduce.hpp"

namespace sgmproxy {

DepthMap disparity_to_depth(const DisparityMap& map, const CameraCalib& calib) {
  calib.validate();
  DepthMap depth(map.width(), map.height(), 0.0);
  const double fb = calib.focal_length * calib.baseline;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double d = map.data()[i];
    if (d > 0.0) depth.data()[i] = fb / d;
  }
  return depth;
}

DisparityMap depth_to_disparity(const DepthMap& depth, const CameraCalib& calib) {
  calib.validate();
  DisparityMap map(depth.width(), depth.height(), DisparityMap::kInvalid);
  const double fb = calib.focal_length * calib.baseline;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const double z = depth.data()[i];
    if (z > 0.0) map.data()[i] = fb / z;
  }
  return map;
}

Mask garg_crop_mask(int width, int height) {
  Mask mask(width, height, 0);
  const int top = static_cast<int>(0.40810811 * height);
  const int bottom = static_cast<int>(0.99189189 * height);
  const int left = static_cast<int>(0.03594771 * width);
  const int right = static_cast<int>(0.96405405 * width);
  for (int y = top; y < bottom; ++y) {
    for (int x = left; x < right; ++x) mask(x, y) = 1;
  }
  return mask;
}

EvalReport eigen_metrics(const DepthMap& pred, const DepthMap& gt, const EigenOptions& options) {
  if (!pred.same_shape(gt)) throw std::invalid_argument("eigen_metrics: dimension mismatch");
  if (!(options.cap > options.min_depth && options.min_depth > 0.0)) {
    throw std::invalid_argument("eigen_metrics: require 0 < min_depth < cap");
  }
  const Mask crop = options.garg_crop ? garg_crop_mask(gt.width(), gt.height()) : Mask();

  std::vector<double> p, g;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const double z = gt(x, y);
      if (!(z > 0.0 && z <= options.cap)) continue;
      if (options.garg_crop && !crop(x, y)) continue;
      p.push_back(pred(x, y));
      g.push_back(z);
    }
  }
  if (g.empty()) throw std::invalid_argument("eigen_metrics: no valid ground-truth pixels");

  if (options.median_scaling) {
    auto median = [](std::vector<double> v) {
      const std::size_t mid = v.size() / 2;
      std::nth_element(v.begin(), v.begin() + mid, v.end());
      if (v.size() % 2) return v[mid];
      const double hi = v[mid];
      return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + mid));
    };
    std::vector<double> positive;
    for (double v : p) {
      if (v > 0.0) positive.push_back(v);
    }
    if (!positive.empty()) {
      const double ratio = median(g) / median(positive);
      for (double& v : p) v *= ratio;
    }
  }
  for (double& v : p) v = std::clamp(v, options.min_depth, options.cap);

  const std::size_t n = g.size();
  std::vector<double> abs_rel(n), sq_rel(n), sq(n), sq_log(n), d1(n), d2(n), d3(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = p[i] - g[i];
    abs_rel[i] = std::abs(diff) / g[i];
    sq_rel[i] = diff * diff / g[i];
    sq[i] = diff * diff;
    const double ld = std::log(p[i]) - std::log(g[i]);
    sq_log[i] = ld * ld;
    const double ratio = std::max(p[i] / g[i], g[i] / p[i]);
    d1[i] = ratio < 1.25 ? 1.0 : 0.0;
    d2[i] = ratio < 1.25 * 1.25 ? 1.0 : 0.0;
    d3[i] = ratio < 1.25 * 1.25 * 1.25 ? 1.0 : 0.0;
  }
  EvalReport r;
  r.abs_rel = pairwise_mean(abs_rel);
  r.sq_rel = pairwise_mean(sq_rel);
  r.rmse = std::sqrt(pairwise_mean(sq));
  r.rmse_log = std::sqrt(pairwise_mean(sq_log));
  r.delta1 = pairwise_mean(d1);
  r.delta2 = pairwise_mean(d2);
  r.delta3 = pairwise_mean(d3);
  r.valid_pixel_count = n;
  return r;
}

EvalReport mean_report(std::span<const EvalReport> reports) {
  if (reports.empty()) throw std::invalid_argument("mean_report: no reports");
  const std::size_t n = reports.size();
  auto field_mean = [&](double EvalReport::*field) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = reports[i].*field;
    return pairwise_mean(v);
  };
  EvalReport r;
  r.abs_rel = field_mean(&EvalReport::abs_rel);
  r.sq_rel = field_mean(&EvalReport::sq_rel);
  r.rmse = field_mean(&EvalReport::rmse);
  r.rmse_log = field_mean(&EvalReport::rmse_log);
  r.delta1 = field_mean(&EvalReport::delta1);
  r.delta2 = field_mean(&EvalReport::delta2);
  r.delta3 = field_mean(&EvalReport::delta3);
  for (const auto& rep : reports) r.valid_pixel_count += rep.valid_pixel_count;
  return r;
}

bool d1_erroneous(double pred, double gt) noexcept {
  if (!DisparityMap::is_valid(pred)) return true;
  const double err = std::abs(pred - gt);
  return err > 3.0 && err > 0.05 * gt;
}

namespace {

double percent(std::size_t errors, std::size_t count) {
  return count == 0 ? 0.0 : 100.0 * static_cast<double>(errors) / static_cast<double>(count);
}

void finish(D1Report& r) {
  r.d1_bg = percent(r.errors_bg, r.count_bg);
  r.d1_fg = percent(r.errors_fg, r.count_fg);
  r.d1_all = percent(r.errors_bg + r.errors_fg, r.count_bg + r.count_fg);
}

}  // namespace

D1Report d1_metric(const DisparityMap& pred, const DisparityMap& gt, const Mask* fg_mask) {
  if (!pred.same_shape(gt)) throw std::invalid_argument("d1_metric: dimension mismatch");
  if (fg_mask && (fg_mask->width() != gt.width() || fg_mask->height() != gt.height())) {
    throw std::invalid_argument("d1_metric: mask dimension mismatch");
  }
  D1Report r;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double g = gt.data()[i];
    if (!DisparityMap::is_valid(g)) continue;
    const bool err = d1_erroneous(pred.data()[i], g);
    if (fg_mask && fg_mask->data()[i]) {
      ++r.count_fg;
      r.errors_fg += err;
    } else {
      ++r.count_bg;
      r.errors_bg += err;
    }
  }
  if (r.count_bg + r.count_fg == 0) throw std::invalid_argument("d1_metric: empty domain");
  finish(r);
  return r;
}

D1Report pool_d1(std::span<const D1Report> reports) {
  D1Report r;
  for (const auto& p : reports) {
    r.count_bg += p.count_bg;
    r.count_fg += p.count_fg;
    r.errors_bg += p.errors_bg;
    r.errors_fg += p.errors_fg;
  }
  if (r.count_bg + r.count_fg == 0) throw std::invalid_argument("pool_d1: empty domain");
  finish(r);
  return r;
}

ProxyQuality proxy_quality(const DisparityMap& proxy, const DisparityMap& gt, double threshold) {
  if (!proxy.same_shape(gt)) throw std::invalid_argument("proxy_quality: dimension mismatch");
  ProxyQuality q;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double p = proxy.data()[i];
    const double g = gt.data()[i];
    if (!DisparityMap::is_valid(p) || !DisparityMap::is_valid(g)) continue;
    ++q.count;
    q.good += std::abs(p - g) < threshold;
  }
  if (q.count == 0) throw std::invalid_argument("proxy_quality: no pixels valid in both maps");
  q.fraction = static_cast<double>(q.good) / static_cast<double>(q.count);
  return q;
}

ProxyQuality pool_proxy_quality(std::span<const ProxyQuality> parts) {
  ProxyQuality q;
  for (const auto& p : parts) {
    q.good += p.good;
    q.count += p.count;
  }
  if (q.count == 0) throw std::invalid_argument("pool_proxy_quality: empty");
  q.fraction = static_cast<double>(q.good) / static_cast<double>(q.count);
  return q;
}

}  // namespace sgmproxy
