#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dctfuse/image.hpp"
#include "synthetic.hpp"

namespace dctfuse {
namespace {

std::set<int> xs_of(const std::vector<Position>& grid) {
  std::set<int> xs;
  for (const auto& p : grid) xs.insert(p.x);
  return xs;
}

TEST(Image, RejectsUnsupportedShapes) {
  EXPECT_THROW(Image(0, 4, 1), std::invalid_argument);
  EXPECT_THROW(Image(4, 4, 2), std::invalid_argument);
  EXPECT_EQ(Image(5, 4, 3).data().size(), 60u);
}

TEST(ExposureSequence, RequiresMatchingShapes) {
  EXPECT_THROW(ExposureSequence({}), std::invalid_argument);
  EXPECT_THROW(ExposureSequence({Image(8, 8, 3), Image(8, 9, 3)}),
               std::invalid_argument);
  EXPECT_NO_THROW(ExposureSequence({Image(8, 8, 1)}));
}

TEST(ExtractPatch, ConstantImage) {
  const Image img(8, 8, 1, 0.5);
  const Patch p = extract_patch(img, 0, {0, 0}, 8);
  ASSERT_EQ(p.values.size(), 64u);
  for (double v : p.values) EXPECT_EQ(v, 0.5);
}

TEST(ExtractPatch, RampQuadrant) {
  Image img(16, 16, 1);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) img.at(x, y, 0) = y * 16 + x;
  }
  const Patch p = extract_patch(img, 0, {8, 8}, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) EXPECT_EQ(p.values[r * 8 + c], (8 + r) * 16 + 8 + c);
  }
}

TEST(ExtractPatch, OutOfBounds) {
  const Image img(16, 16, 1);
  try {
    extract_patch(img, 0, {9, 9}, 8);
    FAIL() << "expected an exception";
  } catch (const std::out_of_range& e) {
    EXPECT_STREQ(e.what(), "patch exceeds image bounds");
  }
  EXPECT_THROW(extract_patch(img, 0, {-1, 0}, 8), std::out_of_range);
  EXPECT_THROW(extract_patch(img, 1, {0, 0}, 8), std::out_of_range);
}

TEST(ReferenceGrid, SinglePatch) {
  for (int step : {1, 2, 8}) {
    const auto grid = reference_grid(8, 8, 8, step);
    ASSERT_EQ(grid.size(), 1u);
    EXPECT_EQ(grid[0], (Position{0, 0}));
  }
}

TEST(ReferenceGrid, ClampsLastPosition) {
  // Enumerated: 0, 2 and 4 -> clamped to 11 - 8 = 3; [0,8) U [2,10) U [3,11).
  EXPECT_EQ(xs_of(reference_grid(11, 8, 8, 2)), (std::set<int>{0, 2, 3}));
}

TEST(ReferenceGrid, ExactTiling) {
  EXPECT_EQ(xs_of(reference_grid(16, 16, 8, 8)), (std::set<int>{0, 8}));
}

TEST(ReferenceGrid, Errors) {
  EXPECT_THROW(reference_grid(7, 16, 8, 2), std::invalid_argument);
  EXPECT_THROW(reference_grid(16, 16, 8, 0), std::invalid_argument);
  EXPECT_THROW(reference_grid(16, 16, 8, 9), std::invalid_argument);
}

TEST(ReferenceGrid, CoversEveryPixelProperty) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int b = 1 + static_cast<int>(rng() % 16);
    const int w = b + static_cast<int>(rng() % 40);
    const int h = b + static_cast<int>(rng() % 40);
    const int step = 1 + static_cast<int>(rng() % b);
    const auto grid = reference_grid(w, h, b, step);
    std::vector<int> hits(static_cast<std::size_t>(w) * h, 0);
    std::set<std::pair<int, int>> unique;
    for (const auto& p : grid) {
      ASSERT_GE(p.x, 0);
      ASSERT_LE(p.x + b, w);
      ASSERT_LE(p.y + b, h);
      unique.insert({p.x, p.y});
      for (int y = p.y; y < p.y + b; ++y) {
        for (int x = p.x; x < p.x + b; ++x) ++hits[static_cast<std::size_t>(y) * w + x];
      }
    }
    EXPECT_EQ(unique.size(), grid.size()) << "duplicate grid origins";
    for (int v : hits) ASSERT_GE(v, 1) << "w=" << w << " h=" << h << " b=" << b;
  }
}

TEST(Accumulator, AveragesOverlappingWrites) {
  Accumulator acc(8, 8, 1);
  acc.accumulate(Patch{{0, 0}, 8, std::vector<double>(64, 0.0)}, 0);
  acc.accumulate(Patch{{0, 0}, 8, std::vector<double>(64, 1.0)}, 0);
  const Image half = acc.finalize();
  for (double v : half.data()) EXPECT_EQ(v, 0.5);

  Accumulator same(8, 8, 1);
  Patch p{{0, 0}, 8, std::vector<double>(64)};
  for (std::size_t i = 0; i < 64; ++i) p.values[i] = 0.01 * static_cast<double>(i);
  same.accumulate(p, 0);
  same.accumulate(p, 0);
  const Image out = same.finalize();
  for (std::size_t i = 0; i < 64; ++i) EXPECT_DOUBLE_EQ(out.data()[i], p.values[i]);
}

TEST(Accumulator, ThreeWritesDivideExactly) {
  Accumulator acc(4, 4, 1);
  for (int i = 0; i < 3; ++i) {
    acc.accumulate(Patch{{0, 0}, 4, std::vector<double>(16, 0.7)}, 0);
  }
  const double expected = (0.7 + 0.7 + 0.7) / 3.0;
  const Image out = acc.finalize();
  for (double v : out.data()) EXPECT_EQ(v, expected);
}

TEST(Accumulator, UncoveredPixelNamesCoordinate) {
  Accumulator empty(4, 4, 1);
  EXPECT_THROW(empty.finalize(), std::runtime_error);

  Accumulator partial(10, 8, 1);
  partial.accumulate(Patch{{0, 0}, 8, std::vector<double>(64, 1.0)}, 0);
  try {
    partial.finalize();
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("uncovered pixels"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("(8, 0)"), std::string::npos);
  }
}

TEST(Accumulator, RejectsOutOfBoundsPatch) {
  Accumulator acc(8, 8, 1);
  EXPECT_THROW(acc.accumulate(Patch{{4, 4}, 8, std::vector<double>(64)}, 0),
               std::out_of_range);
}

TEST(Accumulator, ExactAveragingProperty) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Accumulator acc(1, 1, 1);
    const int n = 1 + static_cast<int>(rng() % 20);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = u(rng);
      sum += v;
      acc.accumulate(Patch{{0, 0}, 1, {v}}, 0);
    }
    EXPECT_NEAR(acc.finalize().data()[0], sum / n, 1e-12);
  }
}

TEST(Accumulator, MergeOfWorkersMatchesSequential) {
  const Image img = testing::random_image(20, 13, 3, 4);
  const auto grid = reference_grid(20, 13, 4, 3);
  Accumulator seq(20, 13, 3);
  Accumulator a(20, 13, 3);
  Accumulator b(20, 13, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const Patch p = extract_patch(img, c, grid[i], 4);
      seq.accumulate(p, c);
      (i % 2 == 0 ? a : b).accumulate(p, c);
    }
  }
  a.merge(b);
  EXPECT_LE(testing::max_abs_diff(a.finalize(), seq.finalize()), 1e-12);
}

TEST(Accumulator, IdentityPipelineProperty) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int b = 1 + static_cast<int>(rng() % 12);
    const int w = b + static_cast<int>(rng() % 25);
    const int h = b + static_cast<int>(rng() % 25);
    const int step = 1 + static_cast<int>(rng() % b);
    const int channels = trial % 2 == 0 ? 1 : 3;
    const Image img = testing::random_image(w, h, channels, 100 + trial);
    Accumulator acc(w, h, channels);
    for (const auto& p : reference_grid(w, h, b, step)) {
      for (int c = 0; c < channels; ++c) acc.accumulate(extract_patch(img, c, p, b), c);
    }
    EXPECT_LE(testing::max_abs_diff(acc.finalize(), img), 1e-12);
  }
}

}  // namespace
}  // namespace dctfuse
