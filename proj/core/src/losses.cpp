#include "sgmproxy/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgmproxy/reduce.hpp"
#include "ssim_detail.hpp"

namespace sgmproxy {

namespace {

double sign_of(double v) { return (v > 0.0) - (v < 0.0); }

void check_same_size(const DisparityMap& d, const Image& img, const char* what) {
  if (d.width() != img.width() || d.height() != img.height()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

void LossWeights::validate() const {
  for (double v : {alpha_ap, alpha_ds, alpha_ps, ssim_alpha, berhu_alpha}) {
    if (!(v >= 0.0)) throw std::invalid_argument("LossWeights: weights must be non-negative");
  }
  if (ssim_alpha > 1.0) throw std::invalid_argument("LossWeights: ssim_alpha must be in [0,1]");
  if (n_i < 0 || n_r < 0) throw std::invalid_argument("LossWeights: scale counts must be >= 0");
}

TermResult loss_ap(const Image& target, const Image& reconstructed, const LossWeights& w,
                   bool with_gradient) {
  if (!target.same_shape(reconstructed)) throw std::invalid_argument("loss_ap: dimension mismatch");
  const std::size_t n = target.size();
  if (n == 0) throw std::invalid_argument("loss_ap: empty image");
  const Image s = ssim(target, reconstructed);
  const auto iv = target.data();
  const auto rv = reconstructed.data();
  const auto sv = s.data();

  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    terms[i] = w.ssim_alpha * (1.0 - sv[i]) * 0.5 + (1.0 - w.ssim_alpha) * std::abs(iv[i] - rv[i]);
  }
  TermResult r;
  r.value = pairwise_mean(terms);
  if (!with_gradient) return r;

  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> upstream(n, -0.5 * w.ssim_alpha * inv_n);
  r.gradient = w.ssim_alpha > 0.0 ? detail::ssim_vjp_b(target, reconstructed, upstream)
                                  : std::vector<double>(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    r.gradient[i] += (1.0 - w.ssim_alpha) * sign_of(rv[i] - iv[i]) * inv_n;
  }
  return r;
}

TermResult loss_ds(const DisparityMap& disp, const Image& image, bool with_gradient) {
  check_same_size(disp, image, "loss_ds");
  if (!disp.dense()) throw std::invalid_argument("loss_ds: disparity has invalid pixels");
  const int width = disp.width();
  const int height = disp.height();
  const int channels = image.channels();
  const std::size_t n = disp.size();
  if (n == 0) throw std::invalid_argument("loss_ds: empty input");

  // Edge-aware weights, zero gradient on the last column/row.
  Grid<double> wx(width, height), wy(width, height), gx(width, height), gy(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width) {
        double m = 0.0;
        for (int c = 0; c < channels; ++c) m += std::abs(image(x + 1, y, c) - image(x, y, c));
        wx(x, y) = std::exp(-m / channels);
        gx(x, y) = disp(x + 1, y) - disp(x, y);
      }
      if (y + 1 < height) {
        double m = 0.0;
        for (int c = 0; c < channels; ++c) m += std::abs(image(x, y + 1, c) - image(x, y, c));
        wy(x, y) = std::exp(-m / channels);
        gy(x, y) = disp(x, y + 1) - disp(x, y);
      }
    }
  }

  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    terms[i] = std::abs(gx.data()[i]) * wx.data()[i] + std::abs(gy.data()[i]) * wy.data()[i];
  }
  TermResult r;
  r.value = pairwise_mean(terms);
  if (!with_gradient) return r;

  const double inv_n = 1.0 / static_cast<double>(n);
  r.gradient.assign(n, 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = disp.index(x, y);
      if (x + 1 < width) {
        const double g = sign_of(gx(x, y)) * wx(x, y) * inv_n;
        r.gradient[i + 1] += g;
        r.gradient[i] -= g;
      }
      if (y + 1 < height) {
        const double g = sign_of(gy(x, y)) * wy(x, y) * inv_n;
        r.gradient[i + width] += g;
        r.gradient[i] -= g;
      }
    }
  }
  return r;
}

double berhu(double residual, double c) {
  const double a = std::abs(residual);
  if (c <= 0.0 || a <= c) return a;
  return (a * a - c * c) / (2.0 * c);
}

double berhu_derivative(double residual, double c) {
  if (c <= 0.0 || std::abs(residual) <= c) return sign_of(residual);
  return residual / c;
}

double berhu_threshold(const DisparityMap& disp, const DisparityMap& proxy, double berhu_alpha) {
  if (!disp.same_shape(proxy)) throw std::invalid_argument("berhu_threshold: dimension mismatch");
  double max_abs = 0.0;
  for (std::size_t i = 0; i < disp.size(); ++i) {
    if (DisparityMap::is_valid(proxy.data()[i])) {
      max_abs = std::max(max_abs, std::abs(disp.data()[i] - proxy.data()[i]));
    }
  }
  return berhu_alpha * max_abs;
}

TermResult loss_ps(const DisparityMap& disp, const DisparityMap& proxy, const LossWeights& w,
                   bool with_gradient, std::optional<double> frozen_c) {
  if (!disp.same_shape(proxy)) throw std::invalid_argument("loss_ps: dimension mismatch");
  const double c = frozen_c ? *frozen_c : berhu_threshold(disp, proxy, w.berhu_alpha);

  const auto dv = disp.data();
  const auto pv = proxy.data();
  std::vector<double> terms;
  terms.reserve(disp.size());
  for (std::size_t i = 0; i < dv.size(); ++i) {
    if (DisparityMap::is_valid(pv[i])) terms.push_back(berhu(dv[i] - pv[i], c));
  }
  if (terms.empty()) throw std::invalid_argument("loss_ps: proxy has no valid pixels");

  TermResult r;
  r.value = pairwise_mean(terms);
  if (!with_gradient) return r;
  const double inv_n = 1.0 / static_cast<double>(terms.size());
  r.gradient.assign(dv.size(), 0.0);
  for (std::size_t i = 0; i < dv.size(); ++i) {
    if (DisparityMap::is_valid(pv[i])) r.gradient[i] = berhu_derivative(dv[i] - pv[i], c) * inv_n;
  }
  return r;
}

namespace {

struct ViewTerms {
  double ap = 0.0;
  double ds = 0.0;
  double ps = 0.0;
  Grid<double> grad;
};

// Terms for one view: `target` is the reference image, `source` the other
// view warped onto it with `disp` and `sign`.
ViewTerms view_terms(const DisparityMap& disp, const Image& target, const Image& source,
                     int sign, const DisparityMap& proxy, const LossWeights& w,
                     bool with_gradient) {
  check_same_size(disp, target, "loss");
  const Image reconstructed = warp_horizontal(source, disp, sign);
  const TermResult ap = loss_ap(target, reconstructed, w, with_gradient);
  const TermResult ds = loss_ds(disp, target, with_gradient);
  const TermResult ps = loss_ps(disp, proxy, w, with_gradient);

  ViewTerms v{ap.value, ds.value, ps.value, {}};
  if (!with_gradient) return v;

  const Image jac = warp_horizontal_derivative(source, disp, sign);
  const int channels = target.channels();
  v.grad = Grid<double>(disp.width(), disp.height());
  auto g = v.grad.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    double chain = 0.0;
    for (int c = 0; c < channels; ++c) {
      chain += ap.gradient[i * channels + c] * jac.data()[i * channels + c];
    }
    g[i] = w.alpha_ap * chain + w.alpha_ds * ds.gradient[i] + w.alpha_ps * ps.gradient[i];
  }
  return v;
}

void check_images(const Image& left, const Image& right) {
  if (!left.same_shape(right)) throw std::invalid_argument("loss: left/right image mismatch");
}

}  // namespace

LossBreakdown loss_init(const MultiScaleDisparities& scales, const Image& left,
                        const Image& right, const DisparityMap& proxy_left,
                        const DisparityMap& proxy_right, const LossWeights& w,
                        bool with_gradient) {
  w.validate();
  check_images(left, right);
  if (scales.left.size() != static_cast<std::size_t>(w.n_i) ||
      scales.right.size() != static_cast<std::size_t>(w.n_i)) {
    throw std::invalid_argument("loss_init: scale count mismatch (expected n_i per view)");
  }
  LossBreakdown out;
  for (int s = 0; s < w.n_i; ++s) {
    ViewTerms l = view_terms(scales.left[s], left, right, -1, proxy_left, w, with_gradient);
    ViewTerms r = view_terms(scales.right[s], right, left, +1, proxy_right, w, with_gradient);
    out.ap += l.ap + r.ap;
    out.ds += l.ds + r.ds;
    out.ps += l.ps + r.ps;
    if (with_gradient) {
      out.grad_left.push_back(std::move(l.grad));
      out.grad_right.push_back(std::move(r.grad));
    }
  }
  out.total = w.alpha_ap * out.ap + w.alpha_ds * out.ds + w.alpha_ps * out.ps;
  return out;
}

LossBreakdown loss_ref(const std::vector<DisparityMap>& left_scales, const Image& left,
                       const Image& right, const DisparityMap& proxy_left,
                       const LossWeights& w, bool with_gradient) {
  w.validate();
  check_images(left, right);
  if (left_scales.size() != static_cast<std::size_t>(w.n_r)) {
    throw std::invalid_argument("loss_ref: scale count mismatch (expected n_r)");
  }
  LossBreakdown out;
  for (const DisparityMap& d : left_scales) {
    ViewTerms l = view_terms(d, left, right, -1, proxy_left, w, with_gradient);
    out.ap += l.ap;
    out.ds += l.ds;
    out.ps += l.ps;
    if (with_gradient) out.grad_left.push_back(std::move(l.grad));
  }
  out.total = w.alpha_ap * out.ap + w.alpha_ds * out.ds + w.alpha_ps * out.ps;
  return out;
}

double loss_total(const LossBreakdown& init, const LossBreakdown& ref) {
  return init.total + ref.total;
}

DisparityMap post_process(const DisparityMap& d, const DisparityMap& d_flipped, double band) {
  if (!d.same_shape(d_flipped)) throw std::invalid_argument("post_process: dimension mismatch");
  if (!(band > 0.0 && band <= 0.5)) throw std::invalid_argument("post_process: band must be in (0, 0.5]");
  if (!d.dense() || !d_flipped.dense()) {
    throw std::invalid_argument("post_process: inputs must be dense");
  }
  const DisparityMap back = mirror_horizontal(d_flipped);
  const int width = d.width();
  DisparityMap out(width, d.height());

  auto left_weight = [&](int x) {
    const double u = width > 1 ? static_cast<double>(x) / (width - 1) : 0.5;
    return 1.0 - std::clamp((u - band) / band, 0.0, 1.0);
  };
  for (int x = 0; x < width; ++x) {
    const double lw = width > 1 ? left_weight(x) : 0.0;
    const double rw = width > 1 ? left_weight(width - 1 - x) : 0.0;
    const double mw = 1.0 - lw - rw;
    for (int y = 0; y < d.height(); ++y) {
      const double mean = 0.5 * (d(x, y) + back(x, y));
      out(x, y) = rw * d(x, y) + lw * back(x, y) + mw * mean;
    }
  }
  return out;
}

}  // namespace sgmproxy
