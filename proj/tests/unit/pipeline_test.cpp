#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dctfuse/color.hpp"
#include "dctfuse/io.hpp"
#include "dctfuse/pipeline.hpp"
#include "synthetic.hpp"

namespace dctfuse {
namespace {

PipelineConfig fuse_config() {
  PipelineConfig cfg;
  cfg.mode = Mode::FuseOnly;
  return cfg;
}

PipelineConfig joint_config(double sigma) {
  PipelineConfig cfg;
  cfg.mode = Mode::Joint;
  cfg.fusion.sigma = sigma;
  cfg.match.search_window = 15;
  cfg.match.group_size = 8;
  return cfg;
}

// Std of (R+G+B)/3 over the pixels selected by `mask`.
double luma_std(const Image& rgb, const std::vector<char>& mask) {
  double sum = 0.0;
  double sq = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const double y = (rgb.plane(0)[i] + rgb.plane(1)[i] + rgb.plane(2)[i]) / 3.0;
    sum += y;
    sq += y * y;
    n += 1.0;
  }
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, sq / n - mean * mean));
}

TEST(PipelineConfig, Validation) {
  PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.step = 9;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = PipelineConfig{};
  cfg.mode = Mode::Joint;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);  // sigma must be > 0
  cfg.fusion.sigma = 0.1;
  EXPECT_NO_THROW(cfg.validate());
  cfg.match.block = 4;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(ExposureContext, Means) {
  EXPECT_NEAR(compute_exposure_context(ExposureSequence({Image(8, 8, 3, 0.5)}))
                  .image_means[0],
              0.5, 1e-12);
  EXPECT_EQ(compute_exposure_context(ExposureSequence({Image(8, 8, 3, 0.0)}))
                .image_means[0],
            0.0);
  const auto ctx = compute_exposure_context(
      ExposureSequence({Image(8, 8, 3, 0.2), Image(8, 8, 3, 0.8)}));
  EXPECT_NEAR(ctx.image_means[0], 0.2, 1e-12);
  EXPECT_NEAR(ctx.image_means[1], 0.8, 1e-12);
  EXPECT_NEAR(ctx.luma_scale, kLumaToUnit, 0.0);
  EXPECT_EQ(compute_exposure_context(ExposureSequence({Image(8, 8, 1, 0.2)})).luma_scale,
            1.0);
}

TEST(FuseSequence, IdenticalCopiesAreIdentity) {
  const Image scene = testing::textured_scene(48, 40, 1);
  for (int K : {1, 2, 4}) {
    const ExposureSequence seq(std::vector<Image>(static_cast<std::size_t>(K), scene));
    EXPECT_LE(testing::max_abs_diff(fuse_sequence(seq, fuse_config()), scene), 1e-6)
        << "K=" << K;
  }
}

TEST(FuseSequence, GrayscaleIdentity) {
  const Image img = testing::random_image(33, 21, 1, 2);
  const ExposureSequence seq({img, img});
  EXPECT_LE(testing::max_abs_diff(fuse_sequence(seq, fuse_config()), img), 1e-6);
}

TEST(FuseSequence, OddSizesAndStepsCoverEveryPixel) {
  for (int step : {1, 3, 8}) {
    PipelineConfig cfg = fuse_config();
    cfg.step = step;
    const auto seq = testing::random_sequence(19, 27, 3, 2, 3);
    const Image out = fuse_sequence(seq, cfg);
    EXPECT_EQ(out.width(), 19);
    for (double v : out.data()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(FuseSequence, RaisesContrastOfClippedBracket) {
  const Image scene = testing::textured_scene(96, 96, 4);
  const std::vector<double> gains{0.25, 2.0};
  const auto seq = testing::exposure_bracket(scene, gains);
  const Image fused = fuse_sequence(seq, fuse_config());
  // Region where the bright exposure saturates in some channel.
  std::vector<char> clipped(96 * 96, 0);
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    for (int c = 0; c < 3; ++c) clipped[i] |= seq[1].plane(c)[i] >= 1.0;
  }
  ASSERT_GT(std::count(clipped.begin(), clipped.end(), 1), 1000);
  EXPECT_GE(luma_std(fused, clipped),
            std::max(luma_std(seq[0], clipped), luma_std(seq[1], clipped)));
}

TEST(FuseSequence, ParallelMatchesDeterministic) {
  const auto seq = testing::random_sequence(70, 50, 3, 3, 5);
  PipelineConfig seq_cfg = fuse_config();
  seq_cfg.deterministic = true;
  PipelineConfig par_cfg = fuse_config();
  par_cfg.threads = 4;
  const Image a = fuse_sequence(seq, seq_cfg);
  EXPECT_TRUE(testing::bit_equal(a, fuse_sequence(seq, seq_cfg)));
  EXPECT_LE(testing::max_abs_diff(a, fuse_sequence(seq, par_cfg)), 1e-6);
}

TEST(FuseSequence, ExposurePermutationInvariance) {
  const auto seq = testing::random_sequence(40, 40, 3, 3, 6);
  const ExposureSequence perm({seq[2], seq[0], seq[1]});
  PipelineConfig cfg = fuse_config();
  cfg.fusion.sigma = 0.05;
  EXPECT_LE(testing::max_abs_diff(fuse_sequence(seq, cfg), fuse_sequence(perm, cfg)),
            1e-9);
}

TEST(DenoiseAndFuse, RequiresPositiveSigma) {
  const auto seq = testing::random_sequence(16, 16, 3, 2, 7);
  PipelineConfig cfg = joint_config(0.0);
  EXPECT_THROW(denoise_and_fuse(seq, cfg), std::invalid_argument);
}

TEST(DenoiseAndFuse, ParallelMatchesDeterministic) {
  const Image scene = testing::textured_scene(64, 48, 8);
  const std::vector<double> gains{0.5, 1.5};
  const auto clean = testing::exposure_bracket(scene, gains);
  const ExposureSequence seq({add_gaussian_noise(clean[0], 15, 1),
                              add_gaussian_noise(clean[1], 15, 2)});
  PipelineConfig a = joint_config(15.0 / 255.0);
  a.deterministic = true;
  PipelineConfig b = joint_config(15.0 / 255.0);
  b.threads = 4;
  const Image out = denoise_and_fuse(seq, a);
  EXPECT_TRUE(testing::bit_equal(out, denoise_and_fuse(seq, a)));
  EXPECT_LE(testing::max_abs_diff(out, denoise_and_fuse(seq, b)), 1e-6);
}

TEST(DenoiseAndFuse, ExposurePermutationInvariance) {
  const Image scene = testing::textured_scene(48, 48, 9);
  const std::vector<double> gains{0.3, 1.0, 1.8};
  const auto clean = testing::exposure_bracket(scene, gains);
  std::vector<Image> noisy;
  for (int k = 0; k < 3; ++k) noisy.push_back(add_gaussian_noise(clean[k], 20, 10 + k));
  const ExposureSequence seq(noisy);
  const ExposureSequence perm({noisy[1], noisy[2], noisy[0]});
  const PipelineConfig cfg = joint_config(20.0 / 255.0);
  EXPECT_LE(testing::max_abs_diff(denoise_and_fuse(seq, cfg), denoise_and_fuse(perm, cfg)),
            1e-9);
}

TEST(DenoiseAndFuse, SingleExposureDenoisesByThreeDb) {
  const Image clean = testing::textured_scene(128, 128, 11);
  const Image noisy = add_gaussian_noise(clean, 25, 12);
  PipelineConfig cfg = joint_config(25.0 / 255.0);
  cfg.match = MatchParams{};
  const Image out = denoise_and_fuse(ExposureSequence({noisy}), cfg);
  Image noisy_clamped = noisy;
  for (double& v : noisy_clamped.data()) v = std::clamp(v, 0.0, 1.0);
  const double before = psnr(noisy, clean);
  const double after = psnr(out, clean);
  EXPECT_GE(after, before + 3.0) << "before " << before << " after " << after;
  EXPECT_GE(after, psnr(noisy_clamped, clean) + 3.0);
}

TEST(DenoiseAndFuse, ObserverSeesDenoisedDctGroups) {
  const auto seq = testing::random_sequence(24, 24, 3, 2, 13);
  PipelineConfig cfg = joint_config(0.1);
  cfg.fusion_sigma = 0.05;
  std::set<std::pair<int, int>> refs;
  int events = 0;
  cfg.observer = [&](const FusionEvent& e) {
    ++events;
    EXPECT_EQ(e.inputs.size(), 2u);
    EXPECT_NEAR(e.threshold, 2.7 * 0.05, 1e-15);
    EXPECT_EQ(e.fused.origin, e.position);
    if (e.is_reference && e.channel == 0) refs.insert({e.position.x, e.position.y});
  };
  denoise_and_fuse(seq, cfg);
  EXPECT_EQ(refs.size(), reference_grid(24, 24, 8, 2).size());
  EXPECT_EQ(events, static_cast<int>(refs.size()) * 3 * 8);
}

TEST(Process, DispatchesOnMode) {
  const auto seq = testing::random_sequence(16, 16, 3, 2, 14);
  PipelineConfig cfg = fuse_config();
  EXPECT_TRUE(testing::bit_equal(process(seq, cfg), fuse_sequence(seq, cfg)));
  cfg = joint_config(0.05);
  cfg.deterministic = true;
  EXPECT_TRUE(testing::bit_equal(process(seq, cfg), denoise_and_fuse(seq, cfg)));
}

}  // namespace
}  // namespace dctfuse
