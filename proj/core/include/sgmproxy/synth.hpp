#pragma once

#include <cstdint>
#include <vector>

#include "sgmproxy/imagery.hpp"

namespace sgmproxy {

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool contains(int px, int py) const noexcept {
    return px >= x && px < x + width && py >= y && py < y + height;
  }
};

/// Fronto-parallel textured rectangle at an integer disparity. Rectangles
/// are given in left-view coordinates.
struct Layer {
  Rect rect;
  int disparity = 0;
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  int background_disparity = 0;
  std::vector<Layer> layers;  // back to front
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;   // optional additive Gaussian noise, [0,1] units

  void validate() const;
};

struct SyntheticScene {
  Image left;
  Image right;
  DisparityMap gt_disparity;  // left-aligned
  // Left pixels with no counterpart in the right view (hidden by a nearer
  // layer or shifted out of frame).
  Mask occlusion_mask;
  // Subset of occlusion_mask hidden by a nearer layer.
  Mask occlusion_band;
  std::uint64_t seed = 0;
};

/// Random-dot scene: each surface carries its own 50% binary dot texture,
/// smoothed with a 3x3 box and quantized to 8 bits. Views are composited
/// back to front with exact integer shifts. Deterministic per seed.
SyntheticScene random_dot_scene(const SceneSpec& spec);

/// Draws 1..max_layers rectangles with disparities in [0, max_disparity],
/// nearer layers having larger disparity.
SceneSpec random_scene_spec(int width, int height, int max_layers, int max_disparity,
                            std::uint64_t seed);

/// right(x - gt(x,y), y) == left(x,y) on every pixel outside the occlusion
/// mask (noise-free scenes only).
bool photometrically_consistent(const SyntheticScene& scene);

}  // namespace sgmproxy
