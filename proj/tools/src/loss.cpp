#include <ostream>
#include <stdexcept>

#include "files.hpp"
#include "sgmproxy/cli/commands.hpp"

namespace sgmproxy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void LossOptions::validate() const {
  weights.validate();
  if (left_image.empty() || right_image.empty()) {
    throw std::invalid_argument("left and right images are required");
  }
  if (proxy_left.empty() || proxy_right.empty()) {
    throw std::invalid_argument("left and right proxy labels are required");
  }
  if (init_left.size() != init_right.size()) {
    throw std::invalid_argument("init-left and init-right need the same number of scales");
  }
}

namespace {

DisparityMap load_scale(const fs::path& path, int width, int height) {
  const DisparityMap d = read_disparity(path);
  if (d.width() == width && d.height() == height) return d;
  return resize_bilinear(d, width, height, static_cast<double>(width) / d.width());
}

std::vector<DisparityMap> load_scales(const std::vector<fs::path>& paths, int width,
                                      int height) {
  std::vector<DisparityMap> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(load_scale(p, width, height));
  return out;
}

json terms_json(const LossBreakdown& b) {
  return {{"ap", b.ap}, {"ds", b.ds}, {"ps", b.ps}, {"total", b.total}};
}

json grids_json(const std::vector<Grid<double>>& grids) {
  json out = json::array();
  for (const auto& g : grids) {
    out.push_back({{"width", g.width()},
                   {"height", g.height()},
                   {"values", std::vector<double>(g.data().begin(), g.data().end())}});
  }
  return out;
}

}  // namespace

int run_loss(const LossOptions& o, std::ostream& out, std::ostream& log) {
  o.validate();
  const Image left = read_image(o.left_image);
  const Image right = read_image(o.right_image);
  if (!left.same_shape(right)) throw std::invalid_argument("shape mismatch: left/right images");
  const int w = left.width(), h = left.height();
  const DisparityMap proxy_left = read_disparity(o.proxy_left);
  const DisparityMap proxy_right = read_disparity(o.proxy_right);
  for (const DisparityMap* p : {&proxy_left, &proxy_right}) {
    if (p->width() != w || p->height() != h) {
      throw std::invalid_argument("shape mismatch: proxy labels must match the image size");
    }
  }

  const MultiScaleDisparities init{load_scales(o.init_left, w, h),
                                   load_scales(o.init_right, w, h)};
  const std::vector<DisparityMap> refined = load_scales(o.refined, w, h);
  const bool grads = !o.gradient_out.empty();
  const LossBreakdown bi =
      loss_init(init, left, right, proxy_left, proxy_right, o.weights, grads);
  const LossBreakdown br = loss_ref(refined, left, right, proxy_left, o.weights, grads);

  const LossWeights& lw = o.weights;
  const json report = {{"schema", "sgmproxy.loss"},
                       {"schema_version", kSchemaVersion},
                       {"weights",
                        {{"alpha_ap", lw.alpha_ap},
                         {"alpha_ds", lw.alpha_ds},
                         {"alpha_ps", lw.alpha_ps},
                         {"ssim_alpha", lw.ssim_alpha},
                         {"berhu_alpha", lw.berhu_alpha},
                         {"n_i", lw.n_i},
                         {"n_r", lw.n_r}}},
                       {"init", terms_json(bi)},
                       {"ref", terms_json(br)},
                       {"total", loss_total(bi, br)}};
  if (o.json_out.empty()) {
    out << dump_json(report);
  } else {
    write_text(o.json_out, dump_json(report));
  }
  if (grads) {
    write_text(o.gradient_out, dump_json({{"schema", "sgmproxy.loss_gradient"},
                                          {"schema_version", kSchemaVersion},
                                          {"init_left", grids_json(bi.grad_left)},
                                          {"init_right", grids_json(bi.grad_right)},
                                          {"ref_left", grids_json(br.grad_left)}}));
    log << "gradients written to " << o.gradient_out.string() << "\n";
  }
  return 0;
}

}  // namespace sgmproxy::cli
