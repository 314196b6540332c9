#pragma once

#include <filesystem>
#include <string_view>

#include "sgmproxy/error.hpp"
#include "sgmproxy/imagery.hpp"

namespace sgmproxy {

// 8-bit PNG (gray/RGB) or binary PGM/PPM, detected from the file signature.
// Intensities map as v/255.
Image read_image(const std::filesystem::path& path);
// Format chosen from the extension: .png, .pgm, .ppm. Values are written as
// round(255 * v).
void write_image(const Image& img, const std::filesystem::path& path);

enum class DisparityFormat { kKittiPng16, kPfm };

DisparityFormat parse_disparity_format(std::string_view name);
std::string_view to_string(DisparityFormat f);
std::string_view file_extension(DisparityFormat f);

// kitti_png16: 16-bit gray PNG, stored = round(d * 256), 0 = invalid.
// pfm: single channel little-endian float32, -1 kept verbatim.
DisparityMap read_disparity(const std::filesystem::path& path, DisparityFormat format);
void write_disparity(const DisparityMap& map, const std::filesystem::path& path,
                     DisparityFormat format);

/// Picks the format from the extension (.png -> kitti_png16, .pfm -> pfm).
DisparityMap read_disparity(const std::filesystem::path& path);

// Binary masks as 8-bit gray PNG, nonzero = set.
Mask read_mask(const std::filesystem::path& path);
void write_mask(const Mask& mask, const std::filesystem::path& path);

}  // namespace sgmproxy
