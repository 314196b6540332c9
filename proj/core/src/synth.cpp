#include "sgmproxy/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace sgmproxy {

namespace {

// std::mt19937_64's output sequence is fixed by the standard; the
// <random> distributions are not, so values are derived from raw draws.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  bool bit() { return (engine_() >> 63) != 0; }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int uniform_int(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

double quantize8(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

// Binary 50% dots, 3x3 box smoothed with edge replication, 8-bit quantized.
Grid<double> dot_texture(int width, int height, PortableRng& rng) {
  Grid<double> dots(width, height);
  for (double& v : dots.data()) v = rng.bit() ? 1.0 : 0.0;
  Grid<double> out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          s += dots(std::clamp(x + dx, 0, width - 1), std::clamp(y + dy, 0, height - 1));
        }
      }
      out(x, y) = quantize8(s / 9.0);
    }
  }
  return out;
}

}  // namespace

void SceneSpec::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("SceneSpec: empty scene");
  auto check_disparity = [&](int d) {
    if (d < 0 || 4 * d >= width) {
      throw std::invalid_argument("SceneSpec: disparity must satisfy 0 <= d < width/4");
    }
  };
  check_disparity(background_disparity);
  for (const Layer& l : layers) {
    check_disparity(l.disparity);
    const Rect& r = l.rect;
    if (r.width <= 0 || r.height <= 0 || r.x < 0 || r.y < 0 || r.x + r.width > width ||
        r.y + r.height > height) {
      throw std::invalid_argument("SceneSpec: layer rectangle outside the image");
    }
  }
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("SceneSpec: negative noise");
}

SyntheticScene random_dot_scene(const SceneSpec& spec) {
  spec.validate();
  const int w = spec.width;
  const int h = spec.height;
  const int n_layers = static_cast<int>(spec.layers.size());
  PortableRng rng(spec.seed);

  // Surface k = 0 is the background, k = i + 1 is layer i. Textures live in
  // left-view coordinates, padded so the background can be sampled up to
  // x + d for every right-view column.
  const int tex_width = w + w / 4;
  std::vector<Grid<double>> textures;
  std::vector<int> disparity{spec.background_disparity};
  textures.push_back(dot_texture(tex_width, h, rng));
  for (const Layer& l : spec.layers) {
    textures.push_back(dot_texture(tex_width, h, rng));
    disparity.push_back(l.disparity);
  }

  auto left_surface = [&](int x, int y) {
    for (int i = n_layers - 1; i >= 0; --i) {
      if (spec.layers[i].rect.contains(x, y)) return i + 1;
    }
    return 0;
  };
  auto right_surface = [&](int xr, int y) {
    for (int i = n_layers - 1; i >= 0; --i) {
      if (spec.layers[i].rect.contains(xr + spec.layers[i].disparity, y)) return i + 1;
    }
    return 0;
  };

  SyntheticScene scene;
  scene.seed = spec.seed;
  scene.left = Image(w, h, 1);
  scene.right = Image(w, h, 1);
  scene.gt_disparity = DisparityMap(w, h);
  scene.occlusion_mask = Mask(w, h, 0);
  scene.occlusion_band = Mask(w, h, 0);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int k = left_surface(x, y);
      scene.left(x, y) = textures[k](x, y);
      scene.gt_disparity(x, y) = disparity[k];
      const int xr = x - disparity[k];
      if (xr < 0) {
        scene.occlusion_mask(x, y) = 1;
      } else if (right_surface(xr, y) != k) {
        scene.occlusion_mask(x, y) = 1;
        scene.occlusion_band(x, y) = 1;
      }

      const int kr = right_surface(x, y);
      scene.right(x, y) = textures[kr](x + disparity[kr], y);
    }
  }

  if (spec.noise_sigma > 0.0) {
    for (Image* img : {&scene.left, &scene.right}) {
      for (double& v : img->data()) v = quantize8(v + spec.noise_sigma * rng.gaussian());
    }
  }
  return scene;
}

SceneSpec random_scene_spec(int width, int height, int max_layers, int max_disparity,
                            std::uint64_t seed) {
  if (max_layers < 1 || max_disparity < 2) {
    throw std::invalid_argument("random_scene_spec: need max_layers >= 1, max_disparity >= 2");
  }
  // Stream distinct from the texture stream of the same seed.
  PortableRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.seed = seed;
  const int n = rng.uniform_int(1, max_layers);
  // Disparities strictly increase toward the viewer.
  const int step = max_disparity / (n + 1);
  spec.background_disparity = rng.uniform_int(0, std::max(0, step - 1));
  int prev = spec.background_disparity;
  for (int i = 0; i < n; ++i) {
    const int lo = prev + 2;
    const int hi = std::max(lo, std::min(max_disparity, prev + 2 * step));
    Layer l;
    l.disparity = rng.uniform_int(lo, hi);
    prev = l.disparity;
    l.rect.width = rng.uniform_int(width / 6, width / 3);
    l.rect.height = rng.uniform_int(height / 4, height / 2);
    l.rect.x = rng.uniform_int(0, width - l.rect.width);
    l.rect.y = rng.uniform_int(0, height - l.rect.height);
    spec.layers.push_back(l);
  }
  spec.validate();
  return spec;
}

bool photometrically_consistent(const SyntheticScene& scene) {
  const int w = scene.left.width();
  for (int y = 0; y < scene.left.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      if (scene.occlusion_mask(x, y)) continue;
      const int xr = x - static_cast<int>(scene.gt_disparity(x, y));
      if (xr < 0 || xr >= w || scene.right(xr, y) != scene.left(x, y)) return false;
    }
  }
  return true;
}

}  // namespace sgmproxy
