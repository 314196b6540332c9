#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgmproxy/consistency.hpp"
#include "sgmproxy/image_io.hpp"
#include "sgmproxy/losses.hpp"
#include "sgmproxy/metrics.hpp"
#include "sgmproxy/sgm.hpp"

namespace sgmproxy::cli {

inline constexpr int kSchemaVersion = 1;

struct DistillOptions {
  std::filesystem::path left_dir;
  std::filesystem::path right_dir;
  std::filesystem::path out_dir;
  SgmParams sgm;
  ConsistencyParams consistency;
  int target_width = 0;  // 0 keeps native-resolution disparity values
  DisparityFormat format = DisparityFormat::kKittiPng16;
  int threads = 1;
  bool fail_fast = true;
  void validate() const;
};

/// Writes one label per matched pair, `summary.json` (deterministic) and
/// `timing.json` into out_dir. Returns the process exit status.
int run_distill(const DistillOptions& options, std::ostream& log);

enum class EvalMode { kEigen, kD1, kProxy };
EvalMode parse_eval_mode(const std::string& name);

struct EvalOptions {
  std::filesystem::path pred_dir;
  std::filesystem::path gt_dir;
  EvalMode mode = EvalMode::kEigen;
  std::optional<double> focal_length;  // pixels, eigen mode
  std::optional<double> baseline;      // meters, eigen mode
  bool gt_is_depth = false;            // eigen mode: gt files hold depth in meters
  EigenOptions eigen{.garg_crop = true};
  double pred_scale = 1.0;             // applied to predicted disparities on load
  std::filesystem::path fg_mask_dir;   // d1 mode, optional
  double proxy_threshold = 3.0;        // proxy mode, pixels
  std::filesystem::path json_out;      // empty: stdout
  std::filesystem::path csv_out;       // empty: none
  int threads = 1;
  void validate() const;
};

int run_eval(const EvalOptions& options, std::ostream& out, std::ostream& log);

struct LossOptions {
  std::filesystem::path left_image;
  std::filesystem::path right_image;
  std::filesystem::path proxy_left;
  std::filesystem::path proxy_right;
  std::vector<std::filesystem::path> init_left;   // fine to coarse
  std::vector<std::filesystem::path> init_right;  // fine to coarse
  std::vector<std::filesystem::path> refined;     // fine to coarse
  LossWeights weights;
  std::filesystem::path json_out;       // empty: stdout
  std::filesystem::path gradient_out;   // empty: no gradient dump
  void validate() const;
};

int run_loss(const LossOptions& options, std::ostream& out, std::ostream& log);

struct SynthOptions {
  std::filesystem::path out_dir;
  int count = 1;
  std::uint64_t seed = 0;
  int width = 256;
  int height = 128;
  int max_layers = 3;
  int max_disparity = 32;
  double noise_sigma = 0.0;
  DisparityFormat format = DisparityFormat::kPfm;
  void validate() const;
};

/// Writes left/, right/, gt/, occlusion/, occlusion_band/ and spec/
/// subdirectories, one file per scene named scene_NNNN.
int run_synth(const SynthOptions& options, std::ostream& log);

}  // namespace sgmproxy::cli
