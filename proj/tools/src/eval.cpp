#include <ostream>
#include <sstream>
#include <stdexcept>

#include "files.hpp"
#include "sgmproxy/cli/commands.hpp"
#include "sgmproxy/parallel.hpp"

namespace sgmproxy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

EvalMode parse_eval_mode(const std::string& name) {
  if (name == "eigen") return EvalMode::kEigen;
  if (name == "d1") return EvalMode::kD1;
  if (name == "proxy") return EvalMode::kProxy;
  throw std::invalid_argument("unknown eval mode: " + name);
}

void EvalOptions::validate() const {
  if (pred_dir.empty() || gt_dir.empty()) {
    throw std::invalid_argument("prediction and ground-truth directories are required");
  }
  if (mode == EvalMode::kEigen) {
    if (!focal_length || !baseline) {
      throw std::invalid_argument("eigen mode requires --focal and --baseline");
    }
    if (!(*focal_length > 0.0) || !(*baseline > 0.0)) {
      throw std::invalid_argument("focal length and baseline must be positive");
    }
    if (!(eigen.min_depth > 0.0) || !(eigen.cap > eigen.min_depth)) {
      throw std::invalid_argument("require 0 < min_depth < cap");
    }
  }
  if (!(pred_scale > 0.0)) throw std::invalid_argument("pred_scale must be positive");
  if (!(proxy_threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

namespace {

const char* mode_name(EvalMode m) {
  switch (m) {
    case EvalMode::kEigen: return "eigen";
    case EvalMode::kD1: return "d1";
    case EvalMode::kProxy: return "proxy";
  }
  return "";
}

DisparityMap load_prediction(const fs::path& path, const DisparityMap& gt, double scale) {
  DisparityMap pred = read_disparity(path);
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    pred = resize_bilinear(pred, gt.width(), gt.height(),
                           static_cast<double>(gt.width()) / pred.width());
  }
  return scale == 1.0 ? pred : scale_disparity(pred, scale);
}

json eigen_json(const EvalReport& r) {
  return {{"abs_rel", r.abs_rel}, {"sq_rel", r.sq_rel},   {"rmse", r.rmse},
          {"rmse_log", r.rmse_log}, {"delta1", r.delta1}, {"delta2", r.delta2},
          {"delta3", r.delta3},   {"valid_pixels", r.valid_pixel_count}};
}

std::string eigen_csv(const EvalReport& r) {
  return fixed6(r.abs_rel) + "," + fixed6(r.sq_rel) + "," + fixed6(r.rmse) + "," +
         fixed6(r.rmse_log) + "," + fixed6(r.delta1) + "," + fixed6(r.delta2) + "," +
         fixed6(r.delta3) + "," + std::to_string(r.valid_pixel_count);
}

json d1_json(const D1Report& r) {
  return {{"d1_bg", r.d1_bg},         {"d1_fg", r.d1_fg},         {"d1_all", r.d1_all},
          {"count_bg", r.count_bg},   {"count_fg", r.count_fg},   {"errors_bg", r.errors_bg},
          {"errors_fg", r.errors_fg}};
}

std::string d1_csv(const D1Report& r) {
  return fixed6(r.d1_bg) + "," + fixed6(r.d1_fg) + "," + fixed6(r.d1_all) + "," +
         std::to_string(r.count_bg) + "," + std::to_string(r.count_fg) + "," +
         std::to_string(r.errors_bg) + "," + std::to_string(r.errors_fg);
}

json proxy_json(const ProxyQuality& q) {
  return {{"accuracy", q.fraction}, {"good", q.good}, {"count", q.count}};
}

std::string proxy_csv(const ProxyQuality& q) {
  return fixed6(q.fraction) + "," + std::to_string(q.good) + "," + std::to_string(q.count);
}

}  // namespace

int run_eval(const EvalOptions& o, std::ostream& out, std::ostream& log) {
  o.validate();
  const auto pred = files_by_stem(o.pred_dir, kDisparityExtensions);
  const auto gt = files_by_stem(o.gt_dir, kDisparityExtensions);
  const StemMatch match = match_stems(pred, gt);
  if (match.matched.empty()) throw std::runtime_error("no prediction matches a ground-truth file");
  for (const auto& s : match.only_a) log << "no ground truth for prediction: " << s << "\n";
  for (const auto& s : match.only_b) log << "no prediction for ground truth: " << s << "\n";

  const int n = static_cast<int>(match.matched.size());
  std::vector<EvalReport> eigen(n);
  std::vector<D1Report> d1(n);
  std::vector<ProxyQuality> proxy(n);
  parallel_for(0, n, o.threads, [&](int i) {
    const std::string& stem = match.matched[i];
    const DisparityMap g = read_disparity(gt.at(stem));
    const DisparityMap p = load_prediction(pred.at(stem), g, o.pred_scale);
    switch (o.mode) {
      case EvalMode::kEigen: {
        const CameraCalib calib{*o.focal_length, *o.baseline, g.width()};
        DepthMap gt_depth(g.width(), g.height());
        if (o.gt_is_depth) {
          for (std::size_t k = 0; k < g.size(); ++k) gt_depth.data()[k] = g.data()[k];
        } else {
          gt_depth = disparity_to_depth(g, calib);
        }
        eigen[i] = eigen_metrics(disparity_to_depth(p, calib), gt_depth, o.eigen);
        break;
      }
      case EvalMode::kD1: {
        if (o.fg_mask_dir.empty()) {
          d1[i] = d1_metric(p, g);
        } else {
          const Mask fg = read_mask(o.fg_mask_dir / (stem + ".png"));
          d1[i] = d1_metric(p, g, &fg);
        }
        break;
      }
      case EvalMode::kProxy:
        proxy[i] = proxy_quality(p, g, o.proxy_threshold);
        break;
    }
  });

  json images = json::array();
  std::ostringstream csv;
  json aggregate;
  switch (o.mode) {
    case EvalMode::kEigen: {
      csv << "name,abs_rel,sq_rel,rmse,rmse_log,delta1,delta2,delta3,valid_pixels\n";
      for (int i = 0; i < n; ++i) {
        json e = eigen_json(eigen[i]);
        e["name"] = match.matched[i];
        images.push_back(e);
        csv << match.matched[i] << "," << eigen_csv(eigen[i]) << "\n";
      }
      const EvalReport mean = mean_report(eigen);
      aggregate = eigen_json(mean);
      csv << "mean," << eigen_csv(mean) << "\n";
      break;
    }
    case EvalMode::kD1: {
      csv << "name,d1_bg,d1_fg,d1_all,count_bg,count_fg,errors_bg,errors_fg\n";
      for (int i = 0; i < n; ++i) {
        json e = d1_json(d1[i]);
        e["name"] = match.matched[i];
        images.push_back(e);
        csv << match.matched[i] << "," << d1_csv(d1[i]) << "\n";
      }
      const D1Report pooled = pool_d1(d1);
      aggregate = d1_json(pooled);
      csv << "pooled," << d1_csv(pooled) << "\n";
      break;
    }
    case EvalMode::kProxy: {
      csv << "name,accuracy,good,count\n";
      for (int i = 0; i < n; ++i) {
        json e = proxy_json(proxy[i]);
        e["name"] = match.matched[i];
        images.push_back(e);
        csv << match.matched[i] << "," << proxy_csv(proxy[i]) << "\n";
      }
      const ProxyQuality pooled = pool_proxy_quality(proxy);
      aggregate = proxy_json(pooled);
      csv << "pooled," << proxy_csv(pooled) << "\n";
      break;
    }
  }

  json report = {{"schema", "sgmproxy.eval"},
                 {"schema_version", kSchemaVersion},
                 {"mode", mode_name(o.mode)},
                 {"images", images},
                 {"aggregate", aggregate},
                 {"unmatched", {{"pred_only", match.only_a}, {"gt_only", match.only_b}}}};
  if (o.mode == EvalMode::kEigen) {
    report["options"] = {{"focal_length", *o.focal_length}, {"baseline", *o.baseline},
                         {"cap", o.eigen.cap},          {"min_depth", o.eigen.min_depth},
                         {"garg_crop", o.eigen.garg_crop},
                         {"median_scaling", o.eigen.median_scaling},
                         {"gt_is_depth", o.gt_is_depth}, {"pred_scale", o.pred_scale}};
  } else if (o.mode == EvalMode::kProxy) {
    report["options"] = {{"threshold", o.proxy_threshold}, {"pred_scale", o.pred_scale}};
  } else {
    report["options"] = {{"pred_scale", o.pred_scale}};
  }
  if (o.json_out.empty()) {
    out << dump_json(report);
  } else {
    write_text(o.json_out, dump_json(report));
  }
  if (!o.csv_out.empty()) write_text(o.csv_out, csv.str());
  return 0;
}

}  // namespace sgmproxy::cli
