#include <algorithm>
#include <array>
#include <stdexcept>

#include "sgmproxy/losses.hpp"
#include "ssim_detail.hpp"

namespace sgmproxy {

namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr double kWindowWeight = 1.0 / 9.0;

void check_pair(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("ssim: dimension mismatch");
}

// Indices of the 9 edge-replicated window samples around (x, y), channel c.
std::array<std::size_t, 9> window(const Image& img, int x, int y, int c) {
  std::array<std::size_t, 9> idx{};
  int k = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const int yy = std::clamp(y + dy, 0, img.height() - 1);
    for (int dx = -1; dx <= 1; ++dx) {
      idx[k++] = img.index(std::clamp(x + dx, 0, img.width() - 1), yy, c);
    }
  }
  return idx;
}

struct Moments {
  double mu_a, mu_b, var_a, var_b, cov;
};

Moments moments(std::span<const double> a, std::span<const double> b,
                const std::array<std::size_t, 9>& idx) {
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i : idx) {
    sa += a[i];
    sb += b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
    sab += a[i] * b[i];
  }
  Moments m;
  m.mu_a = sa * kWindowWeight;
  m.mu_b = sb * kWindowWeight;
  m.var_a = saa * kWindowWeight - m.mu_a * m.mu_a;
  m.var_b = sbb * kWindowWeight - m.mu_b * m.mu_b;
  m.cov = sab * kWindowWeight - m.mu_a * m.mu_b;
  return m;
}

double ssim_value(const Moments& m) {
  const double num = (2.0 * m.mu_a * m.mu_b + kC1) * (2.0 * m.cov + kC2);
  const double den = (m.mu_a * m.mu_a + m.mu_b * m.mu_b + kC1) * (m.var_a + m.var_b + kC2);
  return num / den;
}

}  // namespace

Image ssim(const Image& a, const Image& b) {
  check_pair(a, b);
  Image out(a.width(), a.height(), a.channels());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        out(x, y, c) = ssim_value(moments(a.data(), b.data(), window(a, x, y, c)));
      }
    }
  }
  return out;
}

namespace detail {

std::vector<double> ssim_vjp_b(const Image& a, const Image& b, std::span<const double> upstream) {
  check_pair(a, b);
  if (upstream.size() != a.size()) throw std::invalid_argument("ssim_vjp_b: upstream size");
  std::vector<double> grad(a.size(), 0.0);
  const auto av = a.data();
  const auto bv = b.data();
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        const double g = upstream[a.index(x, y, c)];
        if (g == 0.0) continue;
        const auto idx = window(a, x, y, c);
        const Moments m = moments(av, bv, idx);
        const double lum_num = 2.0 * m.mu_a * m.mu_b + kC1;
        const double con_num = 2.0 * m.cov + kC2;
        const double lum_den = m.mu_a * m.mu_a + m.mu_b * m.mu_b + kC1;
        const double con_den = m.var_a + m.var_b + kC2;
        const double s = lum_num * con_num / (lum_den * con_den);

        const double ds_dmu_b = 2.0 * m.mu_a * con_num / (lum_den * con_den) - s * 2.0 * m.mu_b / lum_den;
        const double ds_dcov = 2.0 * lum_num / (lum_den * con_den);
        const double ds_dvar_b = -s / con_den;

        // d s / d b_q = w * (alpha + beta * b_q + gamma * a_q) per window hit.
        const double alpha = ds_dmu_b - 2.0 * m.mu_b * ds_dvar_b - m.mu_a * ds_dcov;
        const double beta = 2.0 * ds_dvar_b;
        const double gamma = ds_dcov;
        const double scale = g * kWindowWeight;
        for (std::size_t q : idx) grad[q] += scale * (alpha + beta * bv[q] + gamma * av[q]);
      }
    }
  }
  return grad;
}

}  // namespace detail

}  // namespace sgmproxy
