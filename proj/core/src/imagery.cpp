#include "sgmproxy/imagery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgmproxy {

namespace {

void check_dims(int width, int height, int channels) {
  if (width < 0 || height < 0) throw std::invalid_argument("Image: negative dimension");
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("Image: channels must be 1 or 3");
  }
}

}  // namespace

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image::Image(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw std::invalid_argument("Image: data length does not match dimensions");
  }
  for (double v : data_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("Image: intensity outside [0,1]");
    }
  }
}

std::size_t DisparityMap::valid_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(data().begin(), data().end(), [](double v) { return is_valid(v); }));
}

double DisparityMap::valid_fraction() const noexcept {
  return empty() ? 0.0 : static_cast<double>(valid_count()) / static_cast<double>(size());
}

bool DisparityMap::dense() const noexcept { return valid_count() == size(); }

void CameraCalib::validate() const {
  if (!(focal_length > 0.0) || !(baseline > 0.0) || native_width <= 0) {
    throw std::invalid_argument("CameraCalib: all fields must be strictly positive");
  }
}

Image to_grayscale(const Image& img) {
  if (img.channels() == 1) return img;
  Image out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double v = 0.299 * img(x, y, 0) + 0.587 * img(x, y, 1) + 0.114 * img(x, y, 2);
      out(x, y) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

Image mirror_horizontal(const Image& img) {
  Image out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) out(img.width() - 1 - x, y, c) = img(x, y, c);
    }
  }
  return out;
}

DisparityMap mirror_horizontal(const DisparityMap& map) {
  return DisparityMap(mirror_horizontal(static_cast<const Grid<double>&>(map)));
}

DisparityMap resize_bilinear(const DisparityMap& map, int width, int height, double value_scale) {
  if (map.empty() || width <= 0 || height <= 0) {
    throw std::invalid_argument("resize_bilinear: empty input or target");
  }
  if (!map.dense()) throw std::invalid_argument("resize_bilinear: input has invalid pixels");
  DisparityMap out(width, height);
  const double sx = static_cast<double>(map.width()) / width;
  const double sy = static_cast<double>(map.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, map.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, map.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, map.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, map.width() - 1);
      const double tx = fx - x0;
      const double top = (1.0 - tx) * map(x0, y0) + tx * map(x1, y0);
      const double bottom = (1.0 - tx) * map(x0, y1) + tx * map(x1, y1);
      out(x, y) = value_scale * ((1.0 - ty) * top + ty * bottom);
    }
  }
  return out;
}

}  // namespace sgmproxy
