#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gradient_checks.hpp"
#include "oracles.hpp"
#include "sgmproxy/losses.hpp"
#include "sgmproxy/synth.hpp"
#include "test_support.hpp"

namespace sgmproxy {
namespace {

// --- warp ---------------------------------------------------------------

TEST(Warp, ZeroDisparityIsIdentity) {
  std::mt19937_64 rng(20);
  const Image src = testing::random_image(12, 7, 3, rng);
  EXPECT_EQ(warp_horizontal(src, DisparityMap(12, 7, 0.0), -1), src);
  EXPECT_EQ(warp_horizontal(src, DisparityMap(12, 7, 0.0), 1), src);
}

TEST(Warp, UnitShiftOfRamp) {
  Image ramp(10, 2, 1);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 10; ++x) ramp(x, y) = x / 10.0;
  }
  const Image out = warp_horizontal(ramp, DisparityMap(10, 2, 1.0), -1);
  for (int x = 1; x < 10; ++x) EXPECT_DOUBLE_EQ(out(x, 0), (x - 1) / 10.0);
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);  // clamped to the border column
}

TEST(Warp, MatchesTwoTapOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Image src = testing::random_image(9, 3, 1, rng);
    const DisparityMap d = testing::random_disparity(9, 3, 0.0, 6.0, rng);
    const int sign = trial % 2 ? 1 : -1;
    const Image out = warp_horizontal(src, d, sign);
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 9; ++x) {
        double xs = x + sign * d(x, y);
        xs = std::min(std::max(xs, 0.0), 8.0);
        const int lo = static_cast<int>(std::floor(xs));
        const int hi = std::min(lo + 1, 8);
        const double frac = xs - lo;
        const double expect = src(lo, y) + frac * (src(hi, y) - src(lo, y));
        ASSERT_NEAR(out(x, y), expect, 1e-15);
      }
    }
  }
}

TEST(Warp, RejectsInvalidDisparity) {
  DisparityMap d(4, 4, 0.0);
  d(1, 1) = -1;
  EXPECT_THROW(warp_horizontal(Image(4, 4, 1), d, -1), std::invalid_argument);
  EXPECT_THROW(warp_horizontal(Image(4, 4, 1), DisparityMap(4, 4, 0.0), 2), std::invalid_argument);
}

// --- SSIM ---------------------------------------------------------------

TEST(Ssim, IdenticalImagesGiveOne) {
  std::mt19937_64 rng(22);
  const Image a = testing::random_image(10, 8, 3, rng);
  const Image s = ssim(a, a);
  for (double v : s.data()) EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(Ssim, ConstantImagesClosedForm) {
  const double c1 = 0.3, c2 = 0.7, k1 = 1e-4;
  const double expect = (2 * c1 * c2 + k1) / (c1 * c1 + c2 * c2 + k1);
  const Image s = ssim(Image(6, 5, 1, c1), Image(6, 5, 1, c2));
  for (double v : s.data()) {
    EXPECT_NEAR(v, expect, 1e-9);
  }
}

TEST(Ssim, MatchesWindowOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Image a = testing::random_image(11, 9, trial % 2 ? 3 : 1, rng);
    const Image b = testing::random_image(11, 9, a.channels(), rng);
    const Image s = ssim(a, b);
    for (int y = 0; y < 9; ++y) {
      for (int x = 0; x < 11; ++x) {
        for (int c = 0; c < a.channels(); ++c) {
          const double v = s(x, y, c);
          ASSERT_NEAR(v, oracle::ssim_at(a, b, x, y, c), 1e-6);
          ASSERT_GE(v, -1.0);
          ASSERT_LE(v, 1.0);
        }
      }
    }
  }
}

TEST(Ssim, DimensionMismatch) {
  EXPECT_THROW(ssim(Image(3, 3, 1), Image(3, 3, 3)), std::invalid_argument);
}

// --- loss_ap ------------------------------------------------------------

TEST(LossAp, PerfectReconstructionIsZero) {
  std::mt19937_64 rng(24);
  const Image a = testing::random_image(16, 16, 3, rng);
  EXPECT_NEAR(loss_ap(a, a, LossWeights{}).value, 0.0, 1e-9);
}

TEST(LossAp, PureL1OfConstantOffset) {
  std::mt19937_64 rng(25);
  Image a(8, 8, 1);
  for (double& v : a.data()) v = 0.8 * std::uniform_real_distribution<double>(0, 1)(rng);
  Image b = a;
  for (double& v : b.data()) v += 0.1;
  LossWeights w;
  w.ssim_alpha = 0.0;
  EXPECT_NEAR(loss_ap(a, b, w).value, 0.1, 1e-12);
}

TEST(LossAp, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = testing::check_loss_ap(seed, seed % 2 ? 3 : 1);
    EXPECT_LT(r.max_rel_error, 1e-3) << seed;
    EXPECT_GT(r.checked, 200);
  }
}

// --- loss_ds ------------------------------------------------------------

TEST(LossDs, ConstantDisparityIsZero) {
  std::mt19937_64 rng(26);
  EXPECT_EQ(loss_ds(DisparityMap(9, 9, 4.2), testing::random_image(9, 9, 3, rng)).value, 0.0);
}

TEST(LossDs, UnitRampOnConstantImage) {
  const int w = 10, h = 6;
  DisparityMap ramp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) ramp(x, y) = x;
  }
  const double value = loss_ds(ramp, Image(w, h, 1, 0.5)).value;
  // Every pixel but the last column contributes |dx d| * e^0 = 1.
  EXPECT_DOUBLE_EQ(value, static_cast<double>(w - 1) / w);
  const double interior_normalized = value * (w * h) / ((w - 1) * h);
  EXPECT_DOUBLE_EQ(interior_normalized, 1.0);
}

TEST(LossDs, EdgesDampThePenalty) {
  const int w = 4, h = 1;
  DisparityMap step(w, h, 0.0);
  step(2, 0) = step(3, 0) = 1.0;
  Image flat(w, h, 1, 0.2), edge(w, h, 1, 0.2);
  edge(2, 0) = edge(3, 0) = 0.9;
  EXPECT_DOUBLE_EQ(loss_ds(step, flat).value, 0.25);
  EXPECT_DOUBLE_EQ(loss_ds(step, edge).value, 0.25 * std::exp(-0.7));
}

TEST(LossDs, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = testing::check_loss_ds(seed);
    EXPECT_LT(r.max_rel_error, 1e-3) << seed;
  }
}

TEST(LossDs, RejectsInvalidPixels) {
  DisparityMap d(3, 3, 1.0);
  d(0, 0) = -1;
  EXPECT_THROW(loss_ds(d, Image(3, 3, 1)), std::invalid_argument);
}

// --- loss_ps ------------------------------------------------------------

TEST(Berhu, PiecewiseValues) {
  EXPECT_EQ(berhu(0.3, 0.4), 0.3);
  EXPECT_EQ(berhu(-0.3, 0.4), 0.3);
  EXPECT_DOUBLE_EQ(berhu(1.0, 0.4), 1.05);
  EXPECT_DOUBLE_EQ(berhu(2.0, 0.4), 4.8);
  EXPECT_EQ(berhu(0.7, 0.0), 0.7);
}

TEST(LossPs, EqualToProxyIsZero) {
  std::mt19937_64 rng(27);
  const DisparityMap d = testing::random_disparity(8, 8, 0.0, 30.0, rng);
  const TermResult r = loss_ps(d, d, LossWeights{}, true);
  EXPECT_EQ(r.value, 0.0);
  for (double g : r.gradient) EXPECT_EQ(g, 0.0);
}

TEST(LossPs, TwoPixelWorkedExample) {
  DisparityMap d(2, 1), proxy(2, 1, 0.0);
  d(0, 0) = 1.0;
  d(1, 0) = 2.0;
  LossWeights w;
  EXPECT_DOUBLE_EQ(berhu_threshold(d, proxy, w.berhu_alpha), 0.4);
  EXPECT_DOUBLE_EQ(loss_ps(d, proxy, w).value, 2.925);
}

TEST(LossPs, MaskedPixelsAreIgnored) {
  std::mt19937_64 rng(28);
  DisparityMap d = testing::random_disparity(10, 10, 0.0, 10.0, rng);
  DisparityMap proxy = testing::random_disparity(10, 10, 0.0, 10.0, rng);
  for (int x = 0; x < 10; ++x) proxy(x, 3) = -1;
  const double base = loss_ps(d, proxy, LossWeights{}).value;
  for (int x = 0; x < 10; ++x) d(x, 3) = 1000.0 + x;
  EXPECT_EQ(loss_ps(d, proxy, LossWeights{}).value, base);
}

TEST(LossPs, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = testing::check_loss_ps(seed);
    EXPECT_LT(r.max_rel_error, 1e-3) << seed;
  }
}

TEST(LossPs, NoValidProxyPixels) {
  EXPECT_THROW(loss_ps(DisparityMap(3, 3, 1.0), DisparityMap(3, 3, -1.0), LossWeights{}),
               std::invalid_argument);
}

// --- compositions -------------------------------------------------------

struct Pair {
  Image left, right;
  DisparityMap gt;
};

Pair shifted_pair(int shift) {
  SceneSpec spec;
  spec.width = 48;
  spec.height = 24;
  spec.background_disparity = shift;
  spec.seed = 31;
  const SyntheticScene s = random_dot_scene(spec);
  return {s.left, s.right, s.gt_disparity};
}

TEST(LossInit, ZeroWeightsGiveZeroTotal) {
  const Pair p = shifted_pair(3);
  LossWeights w;
  w.alpha_ap = w.alpha_ds = w.alpha_ps = 0.0;
  w.n_i = 2;
  MultiScaleDisparities scales{{p.gt, p.gt}, {p.gt, p.gt}};
  EXPECT_EQ(loss_init(scales, p.left, p.right, p.gt, p.gt, w).total, 0.0);
}

TEST(LossInit, PerfectDisparityBeatsZeroDisparity) {
  const Pair p = shifted_pair(3);
  LossWeights w;
  w.n_i = 1;
  const LossBreakdown good = loss_init({{p.gt}, {p.gt}}, p.left, p.right, p.gt, p.gt, w);
  const DisparityMap zero(48, 24, 0.0);
  const LossBreakdown bad = loss_init({{zero}, {zero}}, p.left, p.right, p.gt, p.gt, w);
  EXPECT_EQ(good.ps, 0.0);
  EXPECT_LT(good.ap, bad.ap);
}

TEST(LossInit, TotalIsWeightedSumOfIndependentTerms) {
  std::mt19937_64 rng(29);
  const Image l = testing::random_image(16, 12, 3, rng);
  const Image r = testing::random_image(16, 12, 3, rng);
  LossWeights w;
  w.n_i = 2;
  MultiScaleDisparities scales;
  for (int s = 0; s < 2; ++s) {
    scales.left.push_back(testing::random_disparity(16, 12, 0.0, 4.0, rng));
    scales.right.push_back(testing::random_disparity(16, 12, 0.0, 4.0, rng));
  }
  const DisparityMap pl = testing::random_disparity(16, 12, 0.0, 4.0, rng);
  const DisparityMap pr = testing::random_disparity(16, 12, 0.0, 4.0, rng);
  const LossBreakdown b = loss_init(scales, l, r, pl, pr, w);

  double ap = 0, ds = 0, ps = 0;
  for (int s = 0; s < 2; ++s) {
    ap += loss_ap(l, warp_horizontal(r, scales.left[s], -1), w).value +
          loss_ap(r, warp_horizontal(l, scales.right[s], 1), w).value;
    ds += loss_ds(scales.left[s], l).value + loss_ds(scales.right[s], r).value;
    ps += loss_ps(scales.left[s], pl, w).value + loss_ps(scales.right[s], pr, w).value;
  }
  EXPECT_NEAR(b.ap, ap, 1e-12 * ap);
  EXPECT_NEAR(b.ds, ds, 1e-12 * ds);
  EXPECT_NEAR(b.ps, ps, 1e-12 * ps);
  const double weighted = w.alpha_ap * b.ap + w.alpha_ds * b.ds + w.alpha_ps * b.ps;
  EXPECT_NEAR(b.total, weighted, 1e-12 * weighted);
}

TEST(LossInit, ScaleCountMismatch) {
  const Pair p = shifted_pair(2);
  LossWeights w;  // n_i = 4
  EXPECT_THROW(loss_init({{p.gt}, {p.gt}}, p.left, p.right, p.gt, p.gt, w), std::invalid_argument);
  EXPECT_THROW(loss_ref({p.gt}, p.left, p.right, p.gt, w), std::invalid_argument);
}

TEST(LossInit, DisparityGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(30);
  const int w = 12, h = 10;
  const Image l = testing::random_image(w, h, 3, rng);
  const Image r = testing::random_image(w, h, 3, rng);
  LossWeights weights;
  weights.n_i = 1;
  MultiScaleDisparities scales{{testing::random_disparity(w, h, 0.2, 4.0, rng)},
                               {testing::random_disparity(w, h, 0.2, 4.0, rng)}};
  const DisparityMap pl = testing::random_disparity(w, h, 0.0, 4.0, rng);
  const DisparityMap pr = testing::random_disparity(w, h, 0.0, 4.0, rng);
  const LossBreakdown b = loss_init(scales, l, r, pl, pr, weights, true);
  ASSERT_EQ(b.grad_left.size(), 1u);

  const Image recon = warp_horizontal(r, scales.left[0], -1);
  const double c = berhu_threshold(scales.left[0], pl, weights.berhu_alpha);
  DisparityMap& d = scales.left[0];
  int checked = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double pos = x - d(x, y);
      const double res = d(x, y) - pl(x, y);
      bool kink = pos <= 1e-3 || std::abs(pos - std::round(pos)) <= 1e-3 ||
                  std::abs(std::abs(res) - c) <= 1e-3 || std::abs(res) <= 1e-3 ||
                  std::abs(std::abs(res) - c / weights.berhu_alpha) <= 1e-9;
      for (int ch = 0; ch < 3; ++ch) kink |= std::abs(recon(x, y, ch) - l(x, y, ch)) <= 1e-3;
      for (auto [nx, ny] : {std::pair{x + 1, y}, std::pair{x - 1, y}, std::pair{x, y + 1}, std::pair{x, y - 1}}) {
        if (nx >= 0 && nx < w && ny >= 0 && ny < h) kink |= std::abs(d(nx, ny) - d(x, y)) <= 1e-3;
      }
      if (kink) continue;
      const double fd = testing::central_difference(
          [&] { return loss_init(scales, l, r, pl, pr, weights).total; }, d(x, y));
      EXPECT_LT(testing::relative_error(b.grad_left[0](x, y), fd), 1e-3) << x << "," << y;
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(LossRef, LeftOnlyComposition) {
  const Pair p = shifted_pair(4);
  LossWeights w;
  w.n_r = 3;
  const std::vector<DisparityMap> scales{p.gt, p.gt, p.gt};
  const LossBreakdown b = loss_ref(scales, p.left, p.right, p.gt, w, true);
  const double one = w.alpha_ap * loss_ap(p.left, warp_horizontal(p.right, p.gt, -1), w).value +
                     w.alpha_ds * loss_ds(p.gt, p.left).value;
  EXPECT_NEAR(b.total, 3 * one, 1e-12);
  EXPECT_EQ(b.grad_left.size(), 3u);
  EXPECT_TRUE(b.grad_right.empty());
}

TEST(LossTotal, SumsBothStages) {
  LossBreakdown a, b;
  EXPECT_EQ(loss_total(a, b), 0.0);
  a.total = 1.25;
  b.total = 0.5;
  EXPECT_EQ(loss_total(a, b), 1.75);
}

TEST(LossTotal, MatchesHandComposedPipeline) {
  std::mt19937_64 rng(32);
  const Image l = testing::random_image(14, 10, 1, rng);
  const Image r = testing::random_image(14, 10, 1, rng);
  LossWeights w;
  w.n_i = 1;
  w.n_r = 1;
  const DisparityMap dl = testing::random_disparity(14, 10, 0.0, 3.0, rng);
  const DisparityMap dr = testing::random_disparity(14, 10, 0.0, 3.0, rng);
  const DisparityMap dref = testing::random_disparity(14, 10, 0.0, 3.0, rng);
  const DisparityMap pl = testing::random_disparity(14, 10, 0.0, 3.0, rng);
  const DisparityMap pr = testing::random_disparity(14, 10, 0.0, 3.0, rng);
  const double total =
      loss_total(loss_init({{dl}, {dr}}, l, r, pl, pr, w), loss_ref({dref}, l, r, pl, w));

  auto view = [&](const DisparityMap& d, const Image& tgt, const Image& src, int sign,
                  const DisparityMap& proxy) {
    return w.alpha_ap * loss_ap(tgt, warp_horizontal(src, d, sign), w).value +
           w.alpha_ds * loss_ds(d, tgt).value + w.alpha_ps * loss_ps(d, proxy, w).value;
  };
  const double expect = view(dl, l, r, -1, pl) + view(dr, r, l, 1, pr) + view(dref, l, r, -1, pl);
  EXPECT_NEAR(total, expect, 1e-12 * expect);
}

// --- post-processing ----------------------------------------------------

TEST(PostProcess, IdenticalMapsPassThrough) {
  std::mt19937_64 rng(33);
  const DisparityMap d = testing::random_disparity(40, 5, 0.0, 9.0, rng);
  const DisparityMap out = post_process(d, mirror_horizontal(d));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(out.data()[i], d.data()[i], 1e-12);
}

TEST(PostProcess, MiddleAveragesAndBordersPick) {
  const int w = 100;
  const DisparityMap d(w, 2, 2.0);
  const DisparityMap flipped(w, 2, 4.0);  // mirrored back: also 4 everywhere
  const DisparityMap out = post_process(d, flipped);
  EXPECT_EQ(out(50, 0), 3.0);
  EXPECT_EQ(out(0, 0), 4.0);
  EXPECT_EQ(out(w - 1, 1), 2.0);
}

TEST(PostProcess, LeftColumnTakesMirroredBackValue) {
  std::mt19937_64 rng(34);
  const DisparityMap d = testing::random_disparity(30, 4, 0.0, 9.0, rng);
  const DisparityMap f = testing::random_disparity(30, 4, 0.0, 9.0, rng);
  const DisparityMap out = post_process(d, f);
  for (int y = 0; y < 4; ++y) {
    EXPECT_EQ(out(0, y), f(29, y));
    EXPECT_EQ(out(29, y), d(29, y));
  }
}

TEST(PostProcess, Errors) {
  EXPECT_THROW(post_process(DisparityMap(3, 3), DisparityMap(4, 3)), std::invalid_argument);
  EXPECT_THROW(post_process(DisparityMap(3, 3), DisparityMap(3, 3), 0.0), std::invalid_argument);
}

TEST(LossWeights, Validation) {
  LossWeights w;
  EXPECT_NO_THROW(w.validate());
  w.ssim_alpha = 1.5;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = LossWeights{};
  w.alpha_ds = -1;
  EXPECT_THROW(w.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace sgmproxy
