#include "sgmproxy/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace sgmproxy {

namespace {

namespace fs = std::filesystem;

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

// Decoded PNG samples. 16-bit samples are kept big-endian as stored.
struct RawPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> bytes;
};

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<std::string*>(png_get_error_ptr(png));
  if (buf) *buf = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

RawPng read_png_raw(const fs::path& path) {
  FilePtr file = open_file(path, "rb");
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn,
                                           png_warning_fn);
  if (!png) throw IoError("libpng: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  RawPng raw;
  std::vector<png_bytep> rows;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("malformed PNG " + path.string() + (error.empty() ? "" : ": " + error));
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    depth = 8;
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  raw.width = static_cast<int>(png_get_image_width(png, info));
  raw.height = static_cast<int>(png_get_image_height(png, info));
  raw.channels = png_get_channels(png, info);
  raw.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  raw.bytes.resize(stride * raw.height);
  rows.resize(raw.height);
  for (int y = 0; y < raw.height; ++y) rows[y] = raw.bytes.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return raw;
}

void write_png_raw(const fs::path& path, const RawPng& raw) {
  FilePtr file = open_file(path, "wb");
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn,
                                            png_warning_fn);
  if (!png) throw IoError("libpng: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(raw.height);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("cannot write PNG " + path.string() + (error.empty() ? "" : ": " + error));
  }
  png_init_io(png, file.get());
  const int color = raw.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, raw.width, raw.height, raw.bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride =
      static_cast<std::size_t>(raw.width) * raw.channels * (raw.bit_depth / 8);
  for (int y = 0; y < raw.height; ++y) {
    rows[y] = const_cast<png_bytep>(raw.bytes.data() + stride * y);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

bool has_png_signature(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Reads the next header token of a netpbm file, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_int(const std::string& tok, const fs::path& path) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed header in " + path.string());
  }
}

Image read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  int channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw IoError("unsupported image format: " + path.string());
  }
  const int width = parse_int(pnm_token(in), path);
  const int height = parse_int(pnm_token(in), path);
  const int maxval = parse_int(pnm_token(in), path);
  if (width <= 0 || height <= 0) throw IoError("malformed header in " + path.string());
  if (maxval != 255) throw IoError("unsupported bit depth in " + path.string());
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw IoError("truncated pixel data in " + path.string());
  }
  std::vector<double> data(bytes.size());
  std::transform(bytes.begin(), bytes.end(), data.begin(),
                 [](unsigned char b) { return b / 255.0; });
  return Image(width, height, channels, std::move(data));
}

void write_pnm(const Image& img, const fs::path& path, int channels) {
  if (img.channels() != channels) {
    throw IoError(path.string() + ": channel count does not match the extension");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << (channels == 1 ? "P5" : "P6") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << 255 << '\n';
  std::vector<unsigned char> bytes(img.size());
  std::transform(img.data().begin(), img.data().end(), bytes.begin(), to_byte);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

DisparityMap read_kitti_png16(const fs::path& path) {
  const RawPng raw = read_png_raw(path);
  if (raw.channels != 1 || raw.bit_depth != 16) {
    throw IoError("unsupported bit depth in " + path.string() + " (expected 16-bit gray)");
  }
  DisparityMap map(raw.width, raw.height);
  auto out = map.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const unsigned v = (static_cast<unsigned>(raw.bytes[2 * i]) << 8) | raw.bytes[2 * i + 1];
    out[i] = v == 0 ? DisparityMap::kInvalid : v / 256.0;
  }
  return map;
}

void write_kitti_png16(const DisparityMap& map, const fs::path& path) {
  RawPng raw{map.width(), map.height(), 1, 16, {}};
  raw.bytes.resize(map.size() * 2);
  const auto in = map.data();
  for (std::size_t i = 0; i < in.size(); ++i) {
    long stored = 0;
    if (DisparityMap::is_valid(in[i])) {
      // Valid values below 1/512 would collide with the invalid code.
      stored = std::max(1L, std::lround(in[i] * 256.0));
      if (stored > 65535) {
        throw std::out_of_range("kitti_png16: disparity " + std::to_string(in[i]) +
                                " exceeds 255.996");
      }
    }
    raw.bytes[2 * i] = static_cast<std::uint8_t>(stored >> 8);
    raw.bytes[2 * i + 1] = static_cast<std::uint8_t>(stored & 0xff);
  }
  write_png_raw(path, raw);
}

DisparityMap read_pfm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "Pf") throw IoError("malformed PFM header (expected Pf) in " + path.string());
  const int width = parse_int(pnm_token(in), path);
  const int height = parse_int(pnm_token(in), path);
  const std::string scale_tok = pnm_token(in);
  double scale = 0.0;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::exception&) {
    throw IoError("malformed PFM scale in " + path.string());
  }
  if (width <= 0 || height <= 0 || scale == 0.0) {
    throw IoError("malformed PFM header in " + path.string());
  }
  const bool little = scale < 0.0;
  const bool swap = little != (std::endian::native == std::endian::little);

  DisparityMap map(width, height);
  std::vector<char> row(static_cast<std::size_t>(width) * 4);
  // PFM stores rows bottom to top.
  for (int y = height - 1; y >= 0; --y) {
    in.read(row.data(), static_cast<std::streamsize>(row.size()));
    if (static_cast<std::size_t>(in.gcount()) != row.size()) {
      throw IoError("truncated PFM data in " + path.string());
    }
    for (int x = 0; x < width; ++x) {
      char* p = row.data() + 4 * x;
      if (swap) std::reverse(p, p + 4);
      float f;
      std::memcpy(&f, p, 4);
      map(x, y) = f;
    }
  }
  return map;
}

void write_pfm(const DisparityMap& map, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << "Pf\n" << map.width() << ' ' << map.height() << "\n-1.0\n";
  std::vector<char> row(static_cast<std::size_t>(map.width()) * 4);
  for (int y = map.height() - 1; y >= 0; --y) {
    for (int x = 0; x < map.width(); ++x) {
      const float f = static_cast<float>(map(x, y));
      char* p = row.data() + 4 * x;
      std::memcpy(p, &f, 4);
      if constexpr (std::endian::native == std::endian::big) std::reverse(p, p + 4);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

Image read_image(const fs::path& path) {
  if (!has_png_signature(path)) return read_pnm(path);
  const RawPng raw = read_png_raw(path);
  if (raw.bit_depth != 8) throw IoError("unsupported bit depth in " + path.string());
  if (raw.channels != 1 && raw.channels != 3) {
    throw IoError("unsupported channel layout in " + path.string());
  }
  std::vector<double> data(raw.bytes.size());
  std::transform(raw.bytes.begin(), raw.bytes.end(), data.begin(),
                 [](std::uint8_t b) { return b / 255.0; });
  return Image(raw.width, raw.height, raw.channels, std::move(data));
}

void write_image(const Image& img, const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") return write_pnm(img, path, 1);
  if (ext == ".ppm") return write_pnm(img, path, 3);
  if (ext != ".png") throw IoError("unsupported image extension: " + path.string());
  RawPng raw{img.width(), img.height(), img.channels(), 8, {}};
  raw.bytes.resize(img.size());
  std::transform(img.data().begin(), img.data().end(), raw.bytes.begin(), to_byte);
  write_png_raw(path, raw);
}

DisparityFormat parse_disparity_format(std::string_view name) {
  if (name == "kitti_png16" || name == "png16" || name == "png") return DisparityFormat::kKittiPng16;
  if (name == "pfm") return DisparityFormat::kPfm;
  throw std::invalid_argument("unknown disparity format: " + std::string(name));
}

std::string_view to_string(DisparityFormat f) {
  return f == DisparityFormat::kPfm ? "pfm" : "kitti_png16";
}

std::string_view file_extension(DisparityFormat f) {
  return f == DisparityFormat::kPfm ? ".pfm" : ".png";
}

DisparityMap read_disparity(const fs::path& path, DisparityFormat format) {
  return format == DisparityFormat::kPfm ? read_pfm(path) : read_kitti_png16(path);
}

void write_disparity(const DisparityMap& map, const fs::path& path, DisparityFormat format) {
  if (format == DisparityFormat::kPfm) {
    write_pfm(map, path);
  } else {
    write_kitti_png16(map, path);
  }
}

DisparityMap read_disparity(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pfm") return read_pfm(path);
  if (ext == ".png") return read_kitti_png16(path);
  throw IoError("cannot infer disparity format from " + path.string());
}

Mask read_mask(const fs::path& path) {
  const RawPng raw = read_png_raw(path);
  if (raw.channels != 1 || raw.bit_depth != 8) {
    throw IoError("mask must be an 8-bit gray PNG: " + path.string());
  }
  Mask mask(raw.width, raw.height);
  std::transform(raw.bytes.begin(), raw.bytes.end(), mask.data().begin(),
                 [](std::uint8_t b) { return static_cast<unsigned char>(b != 0); });
  return mask;
}

void write_mask(const Mask& mask, const fs::path& path) {
  RawPng raw{mask.width(), mask.height(), 1, 8, {}};
  raw.bytes.resize(mask.size());
  std::transform(mask.data().begin(), mask.data().end(), raw.bytes.begin(),
                 [](unsigned char b) { return static_cast<std::uint8_t>(b ? 255 : 0); });
  write_png_raw(path, raw);
}

}  // namespace sgmproxy
