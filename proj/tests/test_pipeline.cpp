#include <gtest/gtest.h>

#include <random>

#include "mdseg/evalmetrics.hpp"
#include "mdseg/pipeline.hpp"
#include "mdseg/synthgen.hpp"

using namespace mdseg;

namespace {

Image random_image(std::mt19937_64& gen, std::size_t w, std::size_t h, int levels = 0) {
  Image img(w, h);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> l(0, levels);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = levels ? l(gen) / static_cast<double>(levels) : u(gen);
  return img;
}

Mask random_mask(std::mt19937_64& gen, std::size_t w, std::size_t h) {
  Mask m(w, h);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < m.size(); ++i) m.set(i, coin(gen));
  return m;
}

}  // namespace

TEST(ExtractPatches, CountsForEveryPublishedLength) {
  const std::vector<std::pair<std::size_t, std::size_t>> table{{4, 9801},  {8, 9409},  {16, 8649}, {32, 7225},
                                                               {36, 6889}, {40, 6561}, {44, 6241}, {48, 5929}};
  for (auto [L, n] : table) {
    EXPECT_EQ(extract_patches(200, 200, L, 2).size(), n) << "L=" << L;
    const std::size_t side = (200 - L) / 2 + 1;
    EXPECT_EQ(n, side * side);
  }
}

TEST(ExtractPatches, SingleWindowAndErrors) {
  const PatchGrid g = extract_patches(30, 30, 30, 2);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.windows[0].top, 0u);
  EXPECT_EQ(g.windows[0].left, 0u);
  EXPECT_THROW(extract_patches(30, 30, 31, 2), InvalidArgument);
  EXPECT_THROW(extract_patches(30, 30, 4, 0), InvalidArgument);
}

TEST(ExtractPatches, OddRemainderIsClampedForFullCoverage) {
  const PatchGrid g = extract_patches(11, 7, 4, 2);
  std::vector<int> cover(77, 0);
  for (const Window& w : g.windows) {
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) cover[(w.top + r) * 11 + w.left + c]++;
    }
  }
  for (int c : cover) EXPECT_GE(c, 1);
  EXPECT_EQ(g.windows.back().top, 3u);
  EXPECT_EQ(g.windows.back().left, 7u);
}

TEST(MedianFilter, Examples) {
  const Mask ones(9, 9, true);
  EXPECT_EQ(median_filter(ones, 3), ones);
  Mask dot(9, 9);
  dot.set(40, true);
  EXPECT_EQ(median_filter(dot, 3).count(), 0u);
  std::mt19937_64 gen(5);
  const Mask m = random_mask(gen, 12, 8);
  EXPECT_EQ(median_filter(m, 1), m);
  EXPECT_THROW(median_filter(m, 2), InvalidArgument);
  EXPECT_THROW(median_filter(m, 0), InvalidArgument);
}

TEST(MedianFilter, MatchesDirectMajority) {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 20; ++t) {
    const Mask m = random_mask(gen, 13, 9);
    for (std::size_t win : {3u, 5u}) {
      const Mask f = median_filter(m, win);
      const int half = static_cast<int>(win / 2);
      for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 13; ++c) {
          std::size_t ones = 0;
          for (int dr = -half; dr <= half; ++dr) {
            for (int dc = -half; dc <= half; ++dc) {
              ones += m.at(static_cast<std::size_t>(std::clamp(r + dr, 0, 8)),
                           static_cast<std::size_t>(std::clamp(c + dc, 0, 12)));
            }
          }
          ASSERT_EQ(f.at(r, c), ones > win * win / 2);
        }
      }
    }
  }
}

TEST(MedianFilter, Monotone) {
  std::mt19937_64 gen(9);
  for (int t = 0; t < 50; ++t) {
    const Mask a = random_mask(gen, 10, 10);
    Mask b = a;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (gen() % 4 == 0) b.set(i, true);
    }
    const Mask fa = median_filter(a, 3);
    const Mask fb = median_filter(b, 3);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_TRUE(!fa[i] || fb[i]);
  }
}

TEST(MedianFilter, StableWhereFirstPassChangedNothing) {
  std::mt19937_64 gen(10);
  for (int t = 0; t < 50; ++t) {
    const Mask m = random_mask(gen, 16, 16);
    const Mask once = median_filter(m, 3);
    if (once == m) {
      EXPECT_EQ(median_filter(once, 3), once);
    }
  }
  const Mask blob = make_shape(default_shape(ShapeKind::circle, 40, 40)).truth;
  const Mask smoothed = median_filter(blob, 3);
  EXPECT_EQ(median_filter(smoothed, 3), smoothed);
}

TEST(SortTransform, SortedInputGivesIdentityMapping) {
  Image img(3, 2, std::vector<double>{0.0, 0.1, 0.1, 0.5, 0.7, 0.9});
  const SortedImage s = sort_transform(img);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(s.mapping.forward[i], i);
  EXPECT_EQ(s.image, img);
}

TEST(SortTransform, UniqueMinimumMovesToFirstEntry) {
  // 4 rows x 5 columns, the smallest value sits in the last entry
  std::vector<double> v(20);
  for (std::size_t i = 0; i < 20; ++i) v[i] = 0.05 * static_cast<double>(20 - i) + 0.01;
  v[19] = 0.0;
  v[3] = 0.5;
  const Image img(5, 4, v);
  const SortedImage s = sort_transform(img);
  EXPECT_EQ(s.mapping.forward[0], 19u);
  EXPECT_EQ(s.mapping.inverse[19], 0u);
  EXPECT_EQ(s.image.at(0, 0), 0.0);
}

TEST(SortTransform, BijectionStableAndMultisetPreserving) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 100; ++t) {
    const Image img = random_image(gen, 7, 5, t % 2 ? 3 : 0);
    const SortedImage s = sort_transform(img);
    for (std::size_t i = 0; i < img.size(); ++i) {
      ASSERT_EQ(s.mapping.inverse[s.mapping.forward[i]], i);
      ASSERT_EQ(s.image[i], img[s.mapping.forward[i]]);
      if (i > 0) {
        ASSERT_LE(s.image[i - 1], s.image[i]);
        if (s.image[i - 1] == s.image[i]) {
          ASSERT_LT(s.mapping.forward[i - 1], s.mapping.forward[i]);
        }
      }
    }
  }
}

TEST(Restore, RoundTripsAndTopK) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 100; ++t) {
    const Image img = random_image(gen, 6, 6);
    const SortedImage s = sort_transform(img);
    const Mask m = random_mask(gen, 6, 6);
    // push the original mask into the sorted domain, then restore
    Mask in_sorted(6, 6);
    for (std::size_t i = 0; i < m.size(); ++i) in_sorted.set(i, m[s.mapping.forward[i]]);
    ASSERT_EQ(restore(in_sorted, s.mapping), m);

    const std::size_t k = static_cast<std::size_t>(t % 36);
    Mask top(6, 6);
    for (std::size_t i = 36 - k; i < 36; ++i) top.set(i, true);
    const Mask back = restore(top, s.mapping);
    std::vector<double> sorted(img.values().begin(), img.values().end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 36; ++i) ASSERT_EQ(back[i], k > 0 && img[i] >= sorted[36 - k]);
  }
  EXPECT_EQ(restore(Mask(4, 4, true), sort_transform(Image(4, 4)).mapping), Mask(4, 4, true));
  EXPECT_EQ(restore(Mask(4, 4), sort_transform(Image(4, 4)).mapping), Mask(4, 4));
}

TEST(Patchwise, NoiselessImageMatchesFullRunAndTruth) {
  const Synthetic s = make_shape(default_shape(ShapeKind::star, 60, 60));
  SegConfig c;
  c.patch_len = 8;
  const Mask patch = segment_patchwise(s.image, c);
  const RunResult full = run(s.image, c);
  EXPECT_EQ(patch, s.truth);
  EXPECT_EQ(full.partition.to_mask(60, 60), s.truth);
}

TEST(Patchwise, SingleWindowEqualsRun) {
  const Image img = add_noise(make_shape(default_shape(ShapeKind::circle, 32, 32)).image, {0.2, 21});
  SegConfig c;
  c.init_seed = 77;
  c.patch_len = 32;
  const Mask patch = segment_patchwise(img, c);
  EXPECT_EQ(patch, run(img, c).partition.to_mask(32, 32));
}

TEST(Patchwise, ConstantImagesFollowTheirLevel) {
  SegConfig c;
  c.patch_len = 4;
  EXPECT_EQ(segment_patchwise(Image(10, 10, 0.5), c).count(), 0u);
  EXPECT_EQ(segment_patchwise(Image(10, 10, 0.0), c).count(), 0u);
  EXPECT_EQ(segment_patchwise(Image(10, 10, 1.0), c).count(), 100u);
}

TEST(Patchwise, StricterThresholdGivesFewerFalsePositives) {
  const Synthetic s = make_shape(default_shape(ShapeKind::circle, 60, 60));
  const Image img = add_noise(s.image, {0.5, 2});
  SegConfig c;
  c.patch_len = 8;
  auto false_pos = [&](const Mask& m) {
    std::size_t fp = 0;
    for (std::size_t i = 0; i < m.size(); ++i) fp += m[i] && !s.truth[i];
    return fp;
  };
  const std::size_t loose = false_pos(segment_patchwise(img, c));
  c.vote_threshold = 1.0;
  const std::size_t strict = false_pos(segment_patchwise(img, c));
  EXPECT_LT(strict, loose);
}

TEST(Patchwise, RequiresPatchLength) {
  EXPECT_THROW(segment_patchwise(Image(8, 8), SegConfig{}), InvalidArgument);
  SegConfig c;
  c.patch_len = 9;
  EXPECT_THROW(segment_patchwise(Image(8, 8), c), InvalidArgument);
}

TEST(Patchwise, PatchFailureNamesTheWindow) {
  const Image img = add_noise(make_shape(default_shape(ShapeKind::circle, 16, 16)).image, {0.5, 1});
  SegConfig c;
  c.patch_len = 8;
  c.max_sweeps = 1;
  try {
    segment_patchwise(img, c);
    FAIL() << "expected a patch failure";
  } catch (const PatchError& e) {
    EXPECT_EQ(e.kind(), "patch_failure");
    EXPECT_NE(std::string(e.what()).find("window ("), std::string::npos);
  }
}

TEST(Together, NoiselessShapeIsExact) {
  const Synthetic s = make_shape(default_shape(ShapeKind::triangle, 50, 50));
  SegConfig c;
  c.patch_len = 8;
  EXPECT_EQ(segment_together(s.image, c), s.truth);
}

TEST(Together, SingleBrightPixelIsTheForeground) {
  Image img(12, 12, 0.2);
  img[77] = 0.9;
  SegConfig c;
  c.patch_len = 4;
  c.median_window = 1;
  const Mask m = segment_together(img, c);
  EXPECT_EQ(m.count(), 1u);
  EXPECT_TRUE(m[77]);
}

TEST(Together, CleanPseudoQr) {
  const Synthetic s = make_pseudo_qr(100, 100, 5000, 0);
  SegConfig c;
  c.patch_len = 8;
  EXPECT_GE(dsc(segment_together(s.image, c), s.truth), 0.9);
}

TEST(Segment, ModesAgreeOnNoiselessInput) {
  const Synthetic s = make_shape(default_shape(ShapeKind::square, 40, 40));
  SegConfig c;
  c.median_window = 1;
  EXPECT_EQ(segment(s.image, c, SegmentMode::full).mask, s.truth);
  c.patch_len = 8;
  const Segmentation p = segment(s.image, c, SegmentMode::patch);
  EXPECT_EQ(p.mask, s.truth);
  EXPECT_EQ(p.patches, extract_patches(40, 40, 8, 2).size());
  EXPECT_EQ(segment(s.image, c, SegmentMode::together).mask, s.truth);
  EXPECT_EQ(parse_segment_mode("together"), SegmentMode::together);
  EXPECT_THROW(parse_segment_mode("blocks"), InvalidArgument);
}
