#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sgmproxy/cli/app.hpp"
#include "sgmproxy/image_io.hpp"
#include "sgmproxy/synth.hpp"

namespace sgmproxy {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kDataDir = SGMPROXY_TEST_DATA_DIR;
const fs::path kConfigDir = SGMPROXY_CONFIG_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("sgmproxy_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "sgmproxy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  void synth(const fs::path& where, int count, std::uint64_t seed = 11) {
    ASSERT_EQ(run({"synth", "--out", where.string(), "--count", std::to_string(count), "--seed",
                   std::to_string(seed), "--width", "96", "--height", "48", "--max-disparity",
                   "16"}),
              0)
        << err_.str();
  }

  int distill(const fs::path& scenes, const fs::path& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"distill",          "--left", (scenes / "left").string(),
                                     "--right",          (scenes / "right").string(),
                                     "--out",            out.string(),
                                     "--d-max",          "24"};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

std::string read_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

json read_json(const fs::path& p) { return json::parse(read_bytes(p)); }

std::vector<std::string> sorted_files(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

void write_map(const fs::path& p, int w, int h, std::vector<double> values) {
  DisparityMap m(w, h);
  std::copy(values.begin(), values.end(), m.data().begin());
  write_disparity(m, p, DisparityFormat::kPfm);
}

TEST_F(CliTest, DistillWritesOneLabelPerPair) {
  synth(dir_ / "scenes", 3);
  ASSERT_EQ(distill(dir_ / "scenes", dir_ / "labels"), 0) << err_.str();
  const json summary = read_json(dir_ / "labels" / "summary.json");
  EXPECT_EQ(summary["schema_version"], 1);
  EXPECT_EQ(summary["status"], "ok");
  ASSERT_EQ(summary["images"].size(), 3u);
  EXPECT_EQ(summary["totals"]["written"], 3);
  for (const auto& img : summary["images"]) {
    const DisparityMap label = read_disparity(dir_ / "labels" / img["label"].get<std::string>());
    EXPECT_EQ(label.valid_count(), img["valid_pixels"].get<std::size_t>());
    EXPECT_EQ(label.size(), img["total_pixels"].get<std::size_t>());
    EXPECT_DOUBLE_EQ(label.valid_fraction(), img["valid_fraction"].get<double>());
  }
  EXPECT_TRUE(fs::exists(dir_ / "labels" / "timing.json"));
}

TEST_F(CliTest, DistillIsDeterministicAcrossRunsAndThreads) {
  synth(dir_ / "scenes", 3);
  ASSERT_EQ(distill(dir_ / "scenes", dir_ / "a", {"--threads", "1"}), 0);
  ASSERT_EQ(distill(dir_ / "scenes", dir_ / "b", {"--threads", "3"}), 0);
  ASSERT_EQ(distill(dir_ / "scenes", dir_ / "c", {"--threads", "1"}), 0);
  for (const auto& name : sorted_files(dir_ / "a")) {
    if (name == "timing.json") continue;
    EXPECT_EQ(read_bytes(dir_ / "a" / name), read_bytes(dir_ / "b" / name)) << name;
    EXPECT_EQ(read_bytes(dir_ / "a" / name), read_bytes(dir_ / "c" / name)) << name;
  }
}

TEST_F(CliTest, ValidFractionShrinksWithEpsilon) {
  synth(dir_ / "scenes", 2);
  std::vector<json> summaries;
  for (const char* eps : {"0", "1", "3"}) {
    const fs::path out = dir_ / (std::string("eps") + eps);
    ASSERT_EQ(distill(dir_ / "scenes", out, {"--epsilon", eps}), 0);
    summaries.push_back(read_json(out / "summary.json"));
  }
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LE(summaries[0]["images"][i]["valid_fraction"].get<double>(),
              summaries[1]["images"][i]["valid_fraction"].get<double>());
    EXPECT_LE(summaries[1]["images"][i]["valid_fraction"].get<double>(),
              summaries[2]["images"][i]["valid_fraction"].get<double>());
  }
}

TEST_F(CliTest, DistillScalesLabelsToTargetWidth) {
  synth(dir_ / "scenes", 1);
  ASSERT_EQ(distill(dir_ / "scenes", dir_ / "native", {"--format", "pfm"}), 0);
  ASSERT_EQ(distill(dir_ / "scenes", dir_ / "scaled", {"--format", "pfm", "--target-width", "192"}),
            0);
  const DisparityMap a = read_disparity(dir_ / "native" / "scene_0000.pfm");
  const DisparityMap b = read_disparity(dir_ / "scaled" / "scene_0000.pfm");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.data()[i] < 0) {
      EXPECT_EQ(b.data()[i], -1.0);
    } else {
      EXPECT_FLOAT_EQ(b.data()[i], 2.0 * a.data()[i]);
    }
  }
  EXPECT_EQ(read_json(dir_ / "scaled" / "summary.json")["images"][0]["scale_factor"], 2.0);
}

TEST_F(CliTest, UnmatchedFilenames) {
  synth(dir_ / "scenes", 2);
  fs::remove(dir_ / "scenes" / "right" / "scene_0001.png");
  EXPECT_EQ(distill(dir_ / "scenes", dir_ / "strict"), 1);
  EXPECT_NE(err_.str().find("scene_0001"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "strict" / "scene_0000.png"));

  EXPECT_EQ(distill(dir_ / "scenes", dir_ / "lenient", {"--skip-failures"}), 0);
  const json summary = read_json(dir_ / "lenient" / "summary.json");
  EXPECT_EQ(summary["unmatched"]["left_only"], json::array({"scene_0001"}));
  EXPECT_EQ(summary["images"].size(), 1u);
}

TEST_F(CliTest, UnreadableImageFailFastVersusSkip) {
  synth(dir_ / "scenes", 3);
  std::ofstream(dir_ / "scenes" / "left" / "scene_0001.png") << "not an image";

  EXPECT_EQ(distill(dir_ / "scenes", dir_ / "strict"), 1);
  const json strict = read_json(dir_ / "strict" / "summary.json");
  EXPECT_EQ(strict["status"], "failed");
  ASSERT_EQ(strict["failures"].size(), 1u);
  EXPECT_EQ(strict["failures"][0]["name"], "scene_0001");

  EXPECT_EQ(distill(dir_ / "scenes", dir_ / "lenient", {"--skip-failures"}), 0);
  const json lenient = read_json(dir_ / "lenient" / "summary.json");
  EXPECT_EQ(lenient["status"], "ok");
  EXPECT_EQ(lenient["images"].size(), 2u);
  EXPECT_EQ(lenient["failures"].size(), 1u);
  EXPECT_TRUE(fs::exists(dir_ / "lenient" / "scene_0002.png"));
}

TEST_F(CliTest, EvalAgainstItselfIsPerfect) {
  synth(dir_ / "scenes", 2);
  const std::string gt = (dir_ / "scenes" / "gt").string();
  ASSERT_EQ(run({"eval", "--pred", gt, "--gt", gt, "--mode", "eigen", "--focal", "720",
                 "--baseline", "0.54"}),
            0)
      << err_.str();
  const json eigen = json::parse(out_.str())["aggregate"];
  for (const char* k : {"abs_rel", "sq_rel", "rmse", "rmse_log"}) EXPECT_EQ(eigen[k], 0.0) << k;
  for (const char* k : {"delta1", "delta2", "delta3"}) EXPECT_EQ(eigen[k], 1.0) << k;

  ASSERT_EQ(run({"eval", "--pred", gt, "--gt", gt, "--mode", "d1"}), 0);
  EXPECT_EQ(json::parse(out_.str())["aggregate"]["d1_all"], 0.0);
  ASSERT_EQ(run({"eval", "--pred", gt, "--gt", gt, "--mode", "proxy"}), 0);
  EXPECT_EQ(json::parse(out_.str())["aggregate"]["accuracy"], 1.0);
}

TEST_F(CliTest, EigenAggregateIsMeanOverImages) {
  // focal * baseline = 1, so depth = 1 / disparity.
  fs::create_directories(dir_ / "pred");
  fs::create_directories(dir_ / "gt");
  write_map(dir_ / "gt" / "a.pfm", 2, 1, {1.0, 0.5});    // depth {1, 2}
  write_map(dir_ / "pred" / "a.pfm", 2, 1, {0.5, 0.5});  // depth {2, 2}
  write_map(dir_ / "gt" / "b.pfm", 1, 1, {1.0});
  write_map(dir_ / "pred" / "b.pfm", 1, 1, {1.0});
  const fs::path csv = dir_ / "eigen.csv";
  ASSERT_EQ(run({"eval", "--pred", (dir_ / "pred").string(), "--gt", (dir_ / "gt").string(),
                 "--focal", "1", "--baseline", "1", "--no-garg-crop", "--csv", csv.string()}),
            0)
      << err_.str();
  const json r = json::parse(out_.str());
  // Image a: abs_rel 0.5, sq_rel 0.5, rmse sqrt(0.5), rmse_log ln2/sqrt(2),
  // all deltas 0.5. Image b is exact.
  const json& m = r["aggregate"];
  EXPECT_NEAR(m["abs_rel"].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(m["sq_rel"].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(m["rmse"].get<double>(), std::sqrt(0.5) / 2, 1e-12);
  EXPECT_NEAR(m["rmse_log"].get<double>(), std::log(2.0) / std::sqrt(2.0) / 2, 1e-12);
  for (const char* k : {"delta1", "delta2", "delta3"}) EXPECT_NEAR(m[k].get<double>(), 0.75, 1e-12);
  EXPECT_EQ(read_bytes(csv),
            "name,abs_rel,sq_rel,rmse,rmse_log,delta1,delta2,delta3,valid_pixels\n"
            "a,0.500000,0.500000,0.707107,0.490129,0.500000,0.500000,0.500000,2\n"
            "b,0.000000,0.000000,0.000000,0.000000,1.000000,1.000000,1.000000,1\n"
            "mean,0.250000,0.250000,0.353553,0.245065,0.750000,0.750000,0.750000,3\n");
}

TEST_F(CliTest, D1AggregateIsPooled) {
  fs::create_directories(dir_ / "pred");
  fs::create_directories(dir_ / "gt");
  write_map(dir_ / "gt" / "a.pfm", 2, 1, {10.0, 10.0});
  write_map(dir_ / "pred" / "a.pfm", 2, 1, {20.0, 10.0});
  write_map(dir_ / "gt" / "b.pfm", 1, 1, {10.0});
  write_map(dir_ / "pred" / "b.pfm", 1, 1, {10.0});
  ASSERT_EQ(run({"eval", "--pred", (dir_ / "pred").string(), "--gt", (dir_ / "gt").string(),
                 "--mode", "d1"}),
            0);
  const json r = json::parse(out_.str());
  EXPECT_NEAR(r["aggregate"]["d1_all"].get<double>(), 100.0 / 3.0, 1e-12);
  EXPECT_EQ(r["images"][0]["d1_all"], 50.0);
}

TEST_F(CliTest, EvalErrors) {
  synth(dir_ / "scenes", 1);
  const std::string gt = (dir_ / "scenes" / "gt").string();
  EXPECT_EQ(run({"eval", "--pred", gt, "--gt", gt, "--mode", "eigen"}), 1);
  EXPECT_NE(err_.str().find("focal"), std::string::npos);
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(run({"eval", "--pred", (dir_ / "empty").string(), "--gt", gt, "--mode", "d1"}), 1);
  EXPECT_NE(err_.str().find("no prediction"), std::string::npos);
}

std::vector<std::string> golden_loss_args(const fs::path& d) {
  std::vector<std::string> a = {"loss",
                                "--left-image",  (d / "left.png").string(),
                                "--right-image", (d / "right.png").string(),
                                "--proxy-left",  (d / "proxy_left.pfm").string(),
                                "--proxy-right", (d / "proxy_right.pfm").string(),
                                "--init-left"};
  for (int s = 0; s < 4; ++s) a.push_back((d / ("init_left_" + std::to_string(s) + ".pfm")).string());
  a.push_back("--init-right");
  for (int s = 0; s < 4; ++s) a.push_back((d / ("init_right_" + std::to_string(s) + ".pfm")).string());
  a.push_back("--ref");
  for (int s = 0; s < 3; ++s) a.push_back((d / ("ref_" + std::to_string(s) + ".pfm")).string());
  return a;
}

TEST_F(CliTest, LossMatchesGolden) {
  ASSERT_EQ(run(golden_loss_args(kDataDir / "loss")), 0) << err_.str();
  const json got = json::parse(out_.str());
  const json golden = read_json(kDataDir / "loss" / "golden.json");
  for (const char* part : {"init", "ref"}) {
    for (const char* term : {"ap", "ds", "ps", "total"}) {
      EXPECT_NEAR(got[part][term].get<double>(), golden[part][term].get<double>(), 1e-9)
          << part << "." << term;
    }
  }
  EXPECT_NEAR(got["total"].get<double>(), golden["total"].get<double>(), 1e-9);
}

TEST_F(CliTest, LossWeightsAreLinear) {
  ASSERT_EQ(run(golden_loss_args(kDataDir / "loss")), 0);
  const json base = json::parse(out_.str());
  for (const auto& [flag, term] : {std::pair{"--alpha-ap", "ap"}, std::pair{"--alpha-ds", "ds"},
                                   std::pair{"--alpha-ps", "ps"}}) {
    auto args = golden_loss_args(kDataDir / "loss");
    args.insert(args.end(), {flag, "0"});
    ASSERT_EQ(run(args), 0);
    const json z = json::parse(out_.str());
    for (const char* part : {"init", "ref"}) {
      const double weight = std::string(term) == "ds" ? 0.1 : 1.0;
      EXPECT_NEAR(z[part]["total"].get<double>(),
                  base[part]["total"].get<double>() - weight * base[part][term].get<double>(),
                  1e-12)
          << flag;
      EXPECT_EQ(z[part][term], base[part][term]);
    }
  }
}

TEST_F(CliTest, LossOfPerfectInputsIsZero) {
  const Image img = read_image(kDataDir / "loss" / "left.png");
  write_image(img, dir_ / "img.png");
  const DisparityMap zero(img.width(), img.height(), 0.0);
  write_disparity(zero, dir_ / "zero.pfm", DisparityFormat::kPfm);
  write_disparity(DisparityMap(img.width() / 2, img.height() / 2, 0.0), dir_ / "zero_half.pfm",
                  DisparityFormat::kPfm);
  const std::string z = (dir_ / "zero.pfm").string(), h = (dir_ / "zero_half.pfm").string(),
                    i = (dir_ / "img.png").string();
  ASSERT_EQ(run({"loss", "--left-image", i, "--right-image", i, "--proxy-left", z,
                 "--proxy-right", z, "--init-left", z, h, h, h, "--init-right", z, h, h, h,
                 "--ref", z, h, h}),
            0)
      << err_.str();
  const json r = json::parse(out_.str());
  for (const char* part : {"init", "ref"}) {
    for (const char* term : {"ap", "ds", "ps", "total"}) {
      EXPECT_NEAR(r[part][term].get<double>(), 0.0, 1e-9) << part << "." << term;
    }
  }
}

TEST_F(CliTest, LossErrorsAndGradientDump) {
  auto args = golden_loss_args(kDataDir / "loss");
  const fs::path grads = dir_ / "grad.json";
  args.insert(args.end(), {"--gradients", grads.string()});
  ASSERT_EQ(run(args), 0);
  const json g = read_json(grads);
  EXPECT_EQ(g["init_left"].size(), 4u);
  EXPECT_EQ(g["init_right"].size(), 4u);
  EXPECT_EQ(g["ref_left"].size(), 3u);
  EXPECT_EQ(g["ref_left"][0]["values"].size(), 32u * 16u);

  // Proxy labels at the wrong resolution.
  args = golden_loss_args(kDataDir / "loss");
  const auto proxy = std::find(args.begin(), args.end(), "--proxy-left") + 1;
  *proxy = (kDataDir / "loss" / "init_left_1.pfm").string();
  EXPECT_EQ(run(args), 1);
  EXPECT_NE(err_.str().find("shape mismatch"), std::string::npos);

  // Three initial scales where four are configured.
  args = golden_loss_args(kDataDir / "loss");
  args.erase(std::find(args.begin(), args.end(), "--init-right") - 1);
  args.erase(std::find(args.begin(), args.end(), "--ref") - 1);
  EXPECT_EQ(run(args), 1);
}

TEST_F(CliTest, SynthIsDeterministicAndConsistent) {
  synth(dir_ / "a", 3, 99);
  synth(dir_ / "b", 3, 99);
  for (const char* sub : {"left", "right", "gt", "occlusion", "occlusion_band", "spec"}) {
    const auto names = sorted_files(dir_ / "a" / sub);
    ASSERT_EQ(names.size(), 3u);
    for (const auto& n : names) {
      EXPECT_EQ(read_bytes(dir_ / "a" / sub / n), read_bytes(dir_ / "b" / sub / n)) << n;
    }
  }
  for (int i = 0; i < 3; ++i) {
    const std::string stem = "scene_000" + std::to_string(i);
    SyntheticScene s;
    s.left = read_image(dir_ / "a" / "left" / (stem + ".png"));
    s.right = read_image(dir_ / "a" / "right" / (stem + ".png"));
    s.gt_disparity = read_disparity(dir_ / "a" / "gt" / (stem + ".pfm"));
    s.occlusion_mask = read_mask(dir_ / "a" / "occlusion" / (stem + ".png"));
    EXPECT_TRUE(photometrically_consistent(s)) << stem;

    const json spec = read_json(dir_ / "a" / "spec" / (stem + ".json"));
    std::set<double> plateaus(s.gt_disparity.data().begin(), s.gt_disparity.data().end());
    EXPECT_EQ(plateaus.size(), spec["layers"].size() + 1) << stem;
  }
}

TEST_F(CliTest, DefaultConfigLoads) {
  synth(dir_ / "scenes", 1);
  ASSERT_EQ(run({"--config", (kConfigDir / "default.cfg").string(), "distill", "--left",
                 (dir_ / "scenes" / "left").string(), "--right",
                 (dir_ / "scenes" / "right").string(), "--out", (dir_ / "out").string(),
                 "--d-max", "24"}),
            0)
      << err_.str();
  const json cfg = read_json(dir_ / "out" / "summary.json")["config"];
  EXPECT_EQ(cfg["p1"], 7);
  EXPECT_EQ(cfg["p2"], 86);
  EXPECT_EQ(cfg["d_max"], 24);
  EXPECT_EQ(cfg["epsilon"], 1.0);

  std::ofstream(dir_ / "bad.cfg") << "[distill]\nnot-an-option = 1\n";
  EXPECT_NE(run({"--config", (dir_ / "bad.cfg").string(), "distill", "--left", "x", "--right",
                 "y", "--out", "z"}),
            0);
}

}  // namespace
}  // namespace sgmproxy
