#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "files.hpp"
#include "sgmproxy/cli/commands.hpp"
#include "sgmproxy/parallel.hpp"

namespace sgmproxy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void DistillOptions::validate() const {
  sgm.validate();
  consistency.validate();
  if (target_width < 0) throw std::invalid_argument("target_width must be >= 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (left_dir.empty() || right_dir.empty() || out_dir.empty()) {
    throw std::invalid_argument("left, right and output directories are required");
  }
}

namespace {

struct PairResult {
  bool done = false;
  std::string error;
  int width = 0;
  int height = 0;
  double scale = 1.0;
  std::size_t valid = 0;
  std::string label;
  double seconds = 0.0;
};

json config_json(const DistillOptions& o) {
  return {{"p1", o.sgm.p1},
          {"p2", o.sgm.p2},
          {"d_max", o.sgm.d_max},
          {"epsilon", o.consistency.epsilon},
          {"target_width", o.target_width},
          {"format", std::string(to_string(o.format))}};
}

}  // namespace

int run_distill(const DistillOptions& o, std::ostream& log) {
  o.validate();
  const auto left = files_by_stem(o.left_dir, kImageExtensions);
  const auto right = files_by_stem(o.right_dir, kImageExtensions);
  const StemMatch match = match_stems(left, right);
  fs::create_directories(o.out_dir);

  json summary = {{"schema", "sgmproxy.distill"},
                  {"schema_version", kSchemaVersion},
                  {"config", config_json(o)},
                  {"unmatched", {{"left_only", match.only_a}, {"right_only", match.only_b}}}};

  const bool unmatched = !match.only_a.empty() || !match.only_b.empty();
  for (const auto& s : match.only_a) log << "unmatched left image: " << s << "\n";
  for (const auto& s : match.only_b) log << "unmatched right image: " << s << "\n";
  if (unmatched && o.fail_fast) {
    summary["status"] = "failed";
    summary["images"] = json::array();
    summary["failures"] = json::array();
    write_text(o.out_dir / "summary.json", dump_json(summary));
    return 1;
  }

  const int n = static_cast<int>(match.matched.size());
  const int outer = std::max(1, std::min(o.threads, n));
  const int inner = std::max(1, o.threads / outer);
  std::vector<PairResult> results(n);
  std::atomic<int> first_failure{std::numeric_limits<int>::max()};

  const auto start = std::chrono::steady_clock::now();
  parallel_for(0, n, outer, [&](int i) {
    if (o.fail_fast && i > first_failure.load()) return;
    const std::string& stem = match.matched[i];
    PairResult& r = results[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Image l = read_image(left.at(stem));
      const Image rt = read_image(right.at(stem));
      if (!l.same_shape(rt)) throw std::runtime_error("left/right size mismatch");
      r.width = l.width();
      r.height = l.height();
      r.scale = o.target_width > 0 ? width_scale_factor(l.width(), o.target_width) : 1.0;
      const DisparityMap label = distill_proxy(l, rt, o.sgm, o.consistency, r.scale, inner);
      r.label = stem + std::string(file_extension(o.format));
      write_disparity(label, o.out_dir / r.label, o.format);
      r.valid = label.valid_count();
      r.done = true;
    } catch (const std::exception& e) {
      r.error = e.what();
      int cur = first_failure.load();
      while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  const double total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const int stop = o.fail_fast ? std::min(first_failure.load(), n) : n;
  json images = json::array(), failures = json::array(), timing = json::array();
  std::size_t valid = 0, total = 0;
  for (int i = 0; i < n; ++i) {
    const PairResult& r = results[i];
    const std::string& stem = match.matched[i];
    if (!r.error.empty() && (!o.fail_fast || i == stop)) {
      failures.push_back({{"name", stem}, {"error", r.error}});
      log << "failed: " << stem << ": " << r.error << "\n";
    }
    if (!r.done || i >= stop) continue;
    const std::size_t px = static_cast<std::size_t>(r.width) * r.height;
    images.push_back({{"name", stem},
                      {"label", r.label},
                      {"width", r.width},
                      {"height", r.height},
                      {"scale_factor", r.scale},
                      {"valid_pixels", r.valid},
                      {"total_pixels", px},
                      {"valid_fraction", static_cast<double>(r.valid) / px}});
    timing.push_back({{"name", stem}, {"seconds", r.seconds}});
    valid += r.valid;
    total += px;
  }
  const bool failed = o.fail_fast && stop < n;
  summary["status"] = failed ? "failed" : "ok";
  summary["images"] = images;
  summary["failures"] = failures;
  summary["totals"] = {{"pairs", n},
                       {"written", images.size()},
                       {"failed", failures.size()},
                       {"valid_pixels", valid},
                       {"total_pixels", total},
                       {"valid_fraction", total ? static_cast<double>(valid) / total : 0.0}};
  write_text(o.out_dir / "summary.json", dump_json(summary));
  write_text(o.out_dir / "timing.json",
             dump_json({{"threads", o.threads}, {"total_seconds", total_seconds}, {"images", timing}}));
  log << "distilled " << images.size() << " of " << n << " pairs into " << o.out_dir.string()
      << "\n";
  return failed ? 1 : 0;
}

}  // namespace sgmproxy::cli
