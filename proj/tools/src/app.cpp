#include "sgmproxy/cli/app.hpp"

#include <CLI11.hpp>
#include <exception>
#include <ostream>

#include "sgmproxy/cli/commands.hpp"

namespace sgmproxy::cli {

namespace {

const std::vector<std::string> kFormats = {"kitti_png16", "png16", "png", "pfm"};

void add_sgm_options(CLI::App& app, DistillOptions& o) {
  app.add_option("--p1", o.sgm.p1, "SGM small-jump penalty")->capture_default_str();
  app.add_option("--p2", o.sgm.p2, "SGM large-jump penalty")->capture_default_str();
  app.add_option("--d-max", o.sgm.d_max, "number of disparity hypotheses")
      ->capture_default_str();
  app.add_option("--epsilon", o.consistency.epsilon, "left-right consistency tolerance (px)")
      ->capture_default_str();
}

void add_weight_options(CLI::App& app, LossWeights& w) {
  app.add_option("--alpha-ap", w.alpha_ap, "appearance weight")->capture_default_str();
  app.add_option("--alpha-ds", w.alpha_ds, "smoothness weight")->capture_default_str();
  app.add_option("--alpha-ps", w.alpha_ps, "proxy supervision weight")->capture_default_str();
  app.add_option("--ssim-alpha", w.ssim_alpha, "SSIM share of the appearance term")
      ->capture_default_str();
  app.add_option("--berhu-alpha", w.berhu_alpha, "berHu threshold fraction")
      ->capture_default_str();
  app.add_option("--n-i", w.n_i, "scales of the initial estimate")->capture_default_str();
  app.add_option("--n-r", w.n_r, "scales of the refined estimate")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical stereo proxy labels, losses and evaluation"};
  app.set_config("--config", "", "key=value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  DistillOptions distill;
  std::string distill_format = "kitti_png16";
  bool skip_failures = false;
  auto* d = app.add_subcommand("distill", "distill proxy labels from stereo pairs");
  d->add_option("--left", distill.left_dir, "left image directory")->required();
  d->add_option("--right", distill.right_dir, "right image directory")->required();
  d->add_option("--out", distill.out_dir, "label output directory")->required();
  add_sgm_options(*d, distill);
  d->add_option("--target-width", distill.target_width,
                "rescale label values to this image width (0 keeps native values)")
      ->capture_default_str();
  d->add_option("--format", distill_format, "label format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  d->add_option("--threads", distill.threads, "worker threads")->capture_default_str();
  d->add_flag("--skip-failures", skip_failures, "report unreadable pairs and continue");

  EvalOptions eval;
  std::string eval_mode = "eigen";
  double focal = 0.0, baseline = 0.0;
  auto* e = app.add_subcommand("eval", "evaluate disparity predictions");
  e->add_option("--pred", eval.pred_dir, "prediction directory")->required();
  e->add_option("--gt", eval.gt_dir, "ground-truth directory")->required();
  e->add_option("--mode", eval_mode, "eigen, d1 or proxy")
      ->check(CLI::IsMember({"eigen", "d1", "proxy"}))
      ->capture_default_str();
  auto* focal_opt = e->add_option("--focal", focal, "focal length (px)");
  auto* baseline_opt = e->add_option("--baseline", baseline, "stereo baseline (m)");
  e->add_flag("--gt-depth", eval.gt_is_depth, "ground-truth files hold depth in meters");
  e->add_option("--cap", eval.eigen.cap, "maximum evaluated depth (m)")->capture_default_str();
  e->add_option("--min-depth", eval.eigen.min_depth, "prediction depth floor (m)")
      ->capture_default_str();
  e->add_flag("--garg-crop,!--no-garg-crop", eval.eigen.garg_crop, "apply the Garg crop")
      ->capture_default_str();
  e->add_flag("--median-scaling", eval.eigen.median_scaling, "median ground-truth scaling");
  e->add_option("--pred-scale", eval.pred_scale, "factor applied to predicted disparities")
      ->capture_default_str();
  e->add_option("--fg-masks", eval.fg_mask_dir, "foreground mask directory (d1 mode)");
  e->add_option("--threshold", eval.proxy_threshold, "proxy accuracy threshold (px)")
      ->capture_default_str();
  e->add_option("--json", eval.json_out, "JSON report path (default stdout)");
  e->add_option("--csv", eval.csv_out, "CSV report path");
  e->add_option("--threads", eval.threads, "worker threads")->capture_default_str();

  LossOptions loss;
  auto* l = app.add_subcommand("loss", "evaluate the training loss on given disparities");
  l->add_option("--left-image", loss.left_image, "left image")->required();
  l->add_option("--right-image", loss.right_image, "right image")->required();
  l->add_option("--proxy-left", loss.proxy_left, "left proxy labels")->required();
  l->add_option("--proxy-right", loss.proxy_right, "right proxy labels")->required();
  l->add_option("--init-left", loss.init_left, "initial left disparities, fine to coarse")
      ->required();
  l->add_option("--init-right", loss.init_right, "initial right disparities, fine to coarse")
      ->required();
  l->add_option("--ref", loss.refined, "refined left disparities, fine to coarse")->required();
  add_weight_options(*l, loss.weights);
  l->add_option("--json", loss.json_out, "JSON report path (default stdout)");
  l->add_option("--gradients", loss.gradient_out, "write gradients as JSON");

  SynthOptions synth;
  std::string synth_format = "pfm";
  auto* s = app.add_subcommand("synth", "write random-dot stereo scenes");
  s->add_option("--out", synth.out_dir, "output directory")->required();
  s->add_option("--count", synth.count, "number of scenes")->capture_default_str();
  s->add_option("--seed", synth.seed, "first scene seed")->capture_default_str();
  s->add_option("--width", synth.width, "scene width")->capture_default_str();
  s->add_option("--height", synth.height, "scene height")->capture_default_str();
  s->add_option("--layers", synth.max_layers, "maximum occluding layers")->capture_default_str();
  s->add_option("--max-disparity", synth.max_disparity, "largest disparity")
      ->capture_default_str();
  s->add_option("--noise", synth.noise_sigma, "Gaussian noise sigma")->capture_default_str();
  s->add_option("--format", synth_format, "ground-truth format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err);
  }

  try {
    if (d->parsed()) {
      distill.format = parse_disparity_format(distill_format);
      distill.fail_fast = !skip_failures;
      return run_distill(distill, err);
    }
    if (e->parsed()) {
      eval.mode = parse_eval_mode(eval_mode);
      if (focal_opt->count()) eval.focal_length = focal;
      if (baseline_opt->count()) eval.baseline = baseline;
      return run_eval(eval, out, err);
    }
    if (l->parsed()) return run_loss(loss, out, err);
    if (s->parsed()) {
      synth.format = parse_disparity_format(synth_format);
      return run_synth(synth, err);
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sgmproxy::cli
