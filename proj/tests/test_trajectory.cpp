#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "tmcsig/csv_io.hpp"
#include "tmcsig/trajectory.hpp"

using namespace tmcsig;

namespace {

// Brute-force LCSS: the longest pair of equal-length index subsequences whose
// points match position by position.
std::size_t lcss_brute(const PointSeq& a, const PointSeq& b, double eps) {
  auto close = [&](const Point& p, const Point& q) {
    return std::abs(p.x - q.x) <= eps && std::abs(p.y - q.y) <= eps;
  };
  std::size_t best = 0;
  const unsigned na = 1u << a.size();
  const unsigned nb = 1u << b.size();
  for (unsigned ma = 0; ma < na; ++ma) {
    const int k = std::popcount(ma);
    if (static_cast<std::size_t>(k) <= best) continue;
    for (unsigned mb = 0; mb < nb; ++mb) {
      if (std::popcount(mb) != k) continue;
      std::size_t i = 0, j = 0;
      bool ok = true;
      for (int n = 0; n < k && ok; ++n) {
        while (!(ma >> i & 1u)) ++i;
        while (!(mb >> j & 1u)) ++j;
        ok = close(a[i], b[j]);
        ++i;
        ++j;
      }
      if (ok) {
        best = static_cast<std::size_t>(k);
        break;
      }
    }
  }
  return best;
}

PointSeq random_seq(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> c(0, 10);
  PointSeq s(n);
  for (auto& p : s) p = {static_cast<double>(c(rng)), static_cast<double>(c(rng))};
  return s;
}

std::vector<TypicalPath> fixture_paths() {
  std::istringstream in(read_file(std::string(TMCSIG_DATA_DIR) + "/typical_paths.csv"));
  return read_typical_paths(in);
}

}  // namespace

TEST(Iou, Examples) {
  EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {0, 0, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {5, 5, 2, 2}), 0.0);
  EXPECT_NEAR(iou({0, 0, 2, 2}, {1, 0, 2, 2}), 2.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(iou({0, 0, 2, 2}, {2, 0, 2, 2}), 0.0);
}

TEST(Iou, MatchThresholdIsStrict) {
  // Boxes offset so the overlap is exactly one half of the union is not a match.
  EXPECT_FALSE(iou_match({0, 0, 3, 1}, {1, 0, 3, 1}));  // 2 / 4
  EXPECT_TRUE(iou_match({0, 0, 10, 1}, {1, 0, 10, 1}));
  EXPECT_TRUE(iou_match({0, 0, 3, 1}, {1, 0, 3, 1}, 0.4));
}

TEST(Iou, RejectsDegenerateBoxes) {
  EXPECT_THROW(iou({0, 0, 0, 1}, {0, 0, 1, 1}), std::invalid_argument);
  EXPECT_THROW(iou({0, 0, 1, 1}, {0, 0, 1, -1}), std::invalid_argument);
}

TEST(Iou, SymmetricAndBounded) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(-10, 10), ext(0.1, 8);
  for (int i = 0; i < 1000; ++i) {
    const BBox a{pos(rng), pos(rng), ext(rng), ext(rng)};
    const BBox b{pos(rng), pos(rng), ext(rng), ext(rng)};
    const double v = iou(a, b);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_DOUBLE_EQ(v, iou(b, a));
  }
}

TEST(Lcss, Examples) {
  const PointSeq s{{0, 0}, {3, 4}, {9, 1}, {12, 12}};
  EXPECT_EQ(lcss(s, s, 0.5), s.size());
  const PointSeq far{{100, 100}, {200, 200}};
  EXPECT_EQ(lcss(s, far, 5.0), 0u);
  const PointSeq a{{0, 0}, {5, 0}, {10, 0}};
  const PointSeq b{{0, 1}, {20, 0}, {10, 1}};
  EXPECT_EQ(lcss(a, b, 2.0), 2u);
  EXPECT_EQ(lcss(a, PointSeq{}, 2.0), 0u);
}

TEST(Lcss, RejectsNonPositiveEps) {
  const PointSeq s{{0, 0}};
  EXPECT_THROW(lcss(s, s, 0.0), std::invalid_argument);
  EXPECT_THROW(lcss(s, s, -1.0), std::invalid_argument);
}

TEST(Lcss, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(0, 8);
  for (int i = 0; i < 500; ++i) {
    const PointSeq a = random_seq(rng, len(rng));
    const PointSeq b = random_seq(rng, len(rng));
    ASSERT_EQ(lcss(a, b, 2.0), lcss_brute(a, b, 2.0)) << "pair " << i;
  }
}

TEST(Lcss, WindowRestrictsMatches) {
  const PointSeq a{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  const PointSeq b{{9, 9}, {9, 9}, {9, 9}, {0, 0}};
  EXPECT_EQ(lcss(a, b, LcssOptions{0.5, std::nullopt}), 1u);
  EXPECT_EQ(lcss(a, b, LcssOptions{0.5, 2}), 0u);
}

TEST(Lcss, SymmetricAndBoundedByShorter) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> len(0, 30);
  for (int i = 0; i < 300; ++i) {
    const PointSeq a = random_seq(rng, len(rng));
    const PointSeq b = random_seq(rng, len(rng));
    const auto v = lcss(a, b, 3.0);
    ASSERT_EQ(v, lcss(b, a, 3.0));
    ASSERT_LE(v, std::min(a.size(), b.size()));
  }
}

TEST(Classify, ExactPathAndUnmatched) {
  const auto paths = fixture_paths();
  ASSERT_EQ(paths.size(), 12u);
  const ClassifyOptions opts;
  for (const auto& p : paths) {
    const auto c = classify(p.points, paths, opts);
    ASSERT_TRUE(c.movement);
    EXPECT_EQ(*c.movement, p.movement);
    EXPECT_DOUBLE_EQ(c.similarity, 1.0);
  }
  const PointSeq nowhere{{-500, -500}, {-520, -520}, {-540, -540}};
  const auto c = classify(nowhere, paths, opts);
  EXPECT_FALSE(c.movement);
  EXPECT_LT(c.similarity, 0.6);
}

TEST(Classify, TiesGoToEarlierMovement) {
  const PointSeq pts{{0, 0}, {10, 0}};
  const std::vector<TypicalPath> paths{{Movement::SBT, pts}, {Movement::NBL, pts}};
  EXPECT_EQ(classify(pts, paths, {}).movement, Movement::NBL);
}

TEST(Classify, EmptyPathSetRejected) {
  EXPECT_THROW(classify(PointSeq{{0, 0}}, std::vector<TypicalPath>{}, {}), std::invalid_argument);
}

TEST(Classify, NoisyCloneOfEbt) {
  const auto paths = fixture_paths();
  const ClassifyOptions opts;
  const double sigma = opts.lcss.eps / 3.0;
  const auto ebt = std::find_if(paths.begin(), paths.end(),
                                [](const TypicalPath& p) { return p.movement == Movement::EBT; });
  ASSERT_NE(ebt, paths.end());
  int hits = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    std::mt19937_64 rng(1000 + trial);
    std::normal_distribution<double> noise(0.0, sigma);
    PointSeq clone = ebt->points;
    for (auto& p : clone) {
      p.x += noise(rng);
      p.y += noise(rng);
    }
    const auto c = classify(clone, paths, opts);
    hits += c.movement == Movement::EBT;
  }
  EXPECT_GE(hits, 95);
}

TEST(CountMovements, ExcludesPedestriansAndUnmatched) {
  const auto paths = fixture_paths();
  std::vector<Trajectory> trajs;
  for (const auto& p : paths) trajs.push_back({"v" + std::string(movement_name(p.movement)), 1, p.points});
  trajs.push_back({"ped", 0, paths[0].points});
  trajs.push_back({"lost", 1, {{-900, -900}, {-950, -950}}});
  const auto mc = count_movements(trajs, paths, {});
  EXPECT_EQ(mc.matched, 12u);
  EXPECT_EQ(mc.pedestrians, 1u);
  EXPECT_EQ(mc.unmatched, 1u);
  for (Movement m : kMovements) EXPECT_EQ(mc.tmc[m], 1);
  EXPECT_LE(static_cast<std::size_t>(mc.tmc.total()), trajs.size());
}

TEST(CountMovements, SampleFileIsFullyMatched) {
  std::istringstream in(read_file(std::string(TMCSIG_DATA_DIR) + "/sample_trajectories.csv"));
  const auto trajs = read_trajectories(in);
  const auto mc = count_movements(trajs, fixture_paths(), {});
  EXPECT_EQ(mc.pedestrians, 1u);
  EXPECT_EQ(mc.unmatched, 0u);
  for (Movement m : kMovements) EXPECT_EQ(mc.tmc[m], 3) << movement_name(m);
}
