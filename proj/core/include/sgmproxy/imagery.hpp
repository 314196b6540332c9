#pragma once

#include <span>
#include <vector>

#include "sgmproxy/grid.hpp"

namespace sgmproxy {

/// Intensity raster with 1 or 3 interleaved channels, values in [0,1].
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);
  /// Takes ownership of `data`; validates length and range.
  Image(int width, int height, int channels, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t index(int x, int y, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  double& operator()(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }
  double operator()(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const Image& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<double> data_;
};

/// Dense disparity field in pixels. -1 marks an invalid pixel.
class DisparityMap : public Grid<double> {
 public:
  static constexpr double kInvalid = -1.0;

  using Grid<double>::Grid;
  DisparityMap() = default;
  explicit DisparityMap(Grid<double> g) : Grid<double>(std::move(g)) {}

  static bool is_valid(double v) noexcept { return v >= 0.0; }
  bool valid(int x, int y) const noexcept { return is_valid((*this)(x, y)); }
  std::size_t valid_count() const noexcept;
  double valid_fraction() const noexcept;
  /// True when no entry is -1.
  bool dense() const noexcept;

  friend bool operator==(const DisparityMap&, const DisparityMap&) = default;
};

struct CameraCalib {
  double focal_length = 0.0;  // pixels
  double baseline = 0.0;      // meters
  int native_width = 0;       // pixels

  void validate() const;
};

Image to_grayscale(const Image& img);
Image mirror_horizontal(const Image& img);
DisparityMap mirror_horizontal(const DisparityMap& map);

/// Bilinear resize with half-pixel centers. Used to bring coarse network
/// outputs up to full resolution; values are multiplied by `value_scale`.
DisparityMap resize_bilinear(const DisparityMap& map, int width, int height,
                             double value_scale = 1.0);

}  // namespace sgmproxy
