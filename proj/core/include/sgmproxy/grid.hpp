#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgmproxy {

// Row-major 2-D field, origin top-left, x rightward, y downward.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(checked(width, "width")), height_(checked(height, "height")),
        data_(static_cast<std::size_t>(width) * height, fill) {}
  Grid(int width, int height, std::vector<T> data)
      : width_(checked(width, "width")), height_(checked(height, "height")),
        data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(width_) * height_) {
      throw std::invalid_argument("Grid: data length does not match width*height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> row(int y) noexcept { return data().subspan(index(0, y), width_); }
  std::span<const T> row(int y) const noexcept { return data().subspan(index(0, y), width_); }

  bool same_shape(const Grid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static int checked(int v, const char* what) {
    if (v < 0) throw std::invalid_argument(std::string("Grid: negative ") + what);
    return v;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// W x H x D block; the disparity axis is innermost so one pixel's hypotheses
// are contiguous.
template <typename T>
class Volume {
 public:
  Volume() = default;
  Volume(int width, int height, int depth, T fill = T{})
      : width_(width), height_(height), depth_(depth) {
    if (width < 0 || height < 0 || depth < 0) {
      throw std::invalid_argument("Volume: negative dimension");
    }
    data_.assign(static_cast<std::size_t>(width) * height * depth, fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int depth() const noexcept { return depth_; }

  std::size_t index(int x, int y, int d) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * depth_ + d;
  }
  T& operator()(int x, int y, int d) noexcept { return data_[index(x, y, d)]; }
  const T& operator()(int x, int y, int d) const noexcept { return data_[index(x, y, d)]; }

  std::span<T> at(int x, int y) noexcept {
    return std::span<T>(data_).subspan(index(x, y, 0), depth_);
  }
  std::span<const T> at(int x, int y) const noexcept {
    return std::span<const T>(data_).subspan(index(x, y, 0), depth_);
  }
  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int depth_ = 0;
  std::vector<T> data_;
};

template <typename T>
Grid<T> mirror_horizontal(const Grid<T>& g) {
  Grid<T> out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) out(g.width() - 1 - x, y) = g(x, y);
  }
  return out;
}

using Mask = Grid<unsigned char>;

}  // namespace sgmproxy
