#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "pa2d/archive.hpp"

namespace {

using namespace pa2d;

Vector vec(std::initializer_list<double> xs) {
  Vector v(xs.size());
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

PolicyEntry entry(const Vector& j, const std::string& id = "") {
  return PolicyEntry{id, j, 0, Source::warmup};
}

std::vector<Vector> sorted(std::vector<Vector> pts) {
  std::sort(pts.begin(), pts.end(), detail::lex_less);
  return pts;
}

void expect_mutually_non_dominated(const NonDominatedSet<>& s) {
  for (const auto& a : s.entries())
    for (const auto& b : s.entries()) {
      EXPECT_FALSE(dominates(a.objectives, b.objectives));
      if (&a != &b) EXPECT_NE(a.objectives, b.objectives);
    }
}

// --- dominates --------------------------------------------------------------

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates(vec({2, 2}), vec({1, 1})));
  EXPECT_FALSE(dominates(vec({2, 1}), vec({1, 2})));
  EXPECT_FALSE(dominates(vec({1, 1}), vec({1, 1})));
}

TEST(Dominates, WeakImprovementOnOneObjective) {
  EXPECT_TRUE(dominates(vec({1, 2, 3}), vec({1, 2, 2.5})));
  EXPECT_FALSE(dominates(vec({1, 2, 2.5}), vec({1, 2, 3})));
}

TEST(Dominates, LengthMismatchIsAnError) {
  EXPECT_THROW(dominates(vec({1, 2}), vec({1, 2, 3})), Error);
}

// --- insert -----------------------------------------------------------------

TEST(Insert, DominatedCandidateRejected) {
  NonDominatedSet<> s;
  ASSERT_TRUE(s.insert(entry(vec({2, 2}))));
  EXPECT_FALSE(s.insert(entry(vec({1, 1}))));
  EXPECT_EQ(s.size(), 1u);
}

TEST(Insert, IncomparableCandidateAccepted) {
  NonDominatedSet<> s;
  s.insert(entry(vec({2, 2})));
  EXPECT_TRUE(s.insert(entry(vec({3, 0.5}))));
  EXPECT_EQ(sorted(s.points()), sorted({vec({2, 2}), vec({3, 0.5})}));
}

TEST(Insert, DominatingCandidateEvictsMembers) {
  NonDominatedSet<> s;
  s.insert(entry(vec({2, 2})));
  s.insert(entry(vec({1, 4})));
  EXPECT_TRUE(s.insert(entry(vec({3, 3}))));
  EXPECT_EQ(sorted(s.points()), sorted({vec({3, 3}), vec({1, 4})}));
}

TEST(Insert, DuplicateKeepsEarlierEntry) {
  NonDominatedSet<> s;
  s.insert(entry(vec({1, 2}), "first"));
  EXPECT_FALSE(s.insert(entry(vec({1, 2}), "second")));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entries().front().params_ref, "first");
}

TEST(Insert, NonFiniteObjectivesRejected) {
  NonDominatedSet<> s;
  EXPECT_THROW(s.insert(entry(vec({1, std::nan("")}))), Error);
}

TEST(Insert, RandomStreamsStayMutuallyNonDominated) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coarse(0, 20);
  NonDominatedSet<> s;
  for (int i = 0; i < 20000; ++i) {
    const int m = 2 + (i / 10000);
    Vector j(m);
    for (auto& x : j) x = coarse(rng) / 4.0;  // many ties and duplicates
    if (i == 10000) s = NonDominatedSet<>{};
    s.insert(entry(j));
  }
  expect_mutually_non_dominated(s);
}

TEST(Insert, OrderInsensitive) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vector> stream;
    for (int i = 0; i < 100; ++i) stream.push_back(vec({std::round(u(rng) * 10), std::round(u(rng) * 10)}));
    NonDominatedSet<> ref;
    for (const auto& j : stream) ref.insert(entry(j));
    for (int perm = 0; perm < 5; ++perm) {
      std::shuffle(stream.begin(), stream.end(), rng);
      NonDominatedSet<> s;
      for (const auto& j : stream) s.insert(entry(j));
      EXPECT_EQ(sorted(s.points()), sorted(ref.points()));
    }
  }
}

TEST(Insert, ContainsReportsMembers) {
  NonDominatedSet<> s;
  s.insert(entry(vec({1, 2})));
  EXPECT_TRUE(s.contains(vec({1, 2})));
  EXPECT_FALSE(s.contains(vec({2, 1})));
}

// --- hypervolume ------------------------------------------------------------

TEST(Hypervolume, ThreeRectangleStaircase) {
  const std::vector<Vector> pts{vec({1, 3}), vec({2, 2}), vec({3, 1})};
  EXPECT_DOUBLE_EQ(hypervolume(pts, vec({0, 0})), 6.0);
  // Inclusion-exclusion: 3 + 4 + 3 - 2 - 1 - 2 + 1.
  EXPECT_DOUBLE_EQ(3 + 4 + 3 - 2 - 1 - 2 + 1, 6.0);
}

TEST(Hypervolume, SingleBox) {
  EXPECT_DOUBLE_EQ(hypervolume(std::vector<Vector>{vec({2.5, 4})}, vec({0, 0})), 10.0);
  EXPECT_DOUBLE_EQ(hypervolume(std::vector<Vector>{vec({1, 1, 1})}, vec({0, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(hypervolume(std::vector<Vector>{}, vec({0, 0})), 0.0);
}

TEST(Hypervolume, ThreeDimensionalInclusionExclusion) {
  // Two boxes [0,2]x[0,1]x[0,1] and [0,1]x[0,2]x[0,1] overlap in a unit cube.
  const std::vector<Vector> pts{vec({2, 1, 1}), vec({1, 2, 1})};
  EXPECT_DOUBLE_EQ(hypervolume(pts, vec({0, 0, 0})), 3.0);
  const std::vector<Vector> stacked{vec({1, 1, 2}), vec({2, 2, 1})};
  EXPECT_DOUBLE_EQ(hypervolume(stacked, vec({0, 0, 0})), 2.0 + 4.0 - 1.0);
}

TEST(Hypervolume, PointNotDominatingReferenceIsAnError) {
  EXPECT_THROW(hypervolume(std::vector<Vector>{vec({1, -0.5})}, vec({0, 0})), Error);
  EXPECT_THROW(hypervolume(std::vector<Vector>{vec({0, 0})}, vec({0, 0})), Error);
  EXPECT_THROW(hypervolume(std::vector<Vector>{vec({1, 1, 1, 1})}, vec({0, 0, 0, 0})), Error);
}

TEST(Hypervolume, DominatedPointsDoNotChangeIt) {
  const std::vector<Vector> a{vec({1, 3, 2}), vec({3, 1, 1})};
  auto b = a;
  b.push_back(vec({0.5, 0.5, 0.5}));
  b.push_back(vec({1, 3, 2}));
  EXPECT_DOUBLE_EQ(hypervolume(a, vec({0, 0, 0})), hypervolume(b, vec({0, 0, 0})));
}

TEST(Hypervolume, OrderIndependent) {
  std::mt19937_64 rng(4);
  auto pts = oracle::random_front(30, 3, rng);
  const double ref = hypervolume(pts, vec({0, 0, 0}));
  for (int i = 0; i < 5; ++i) {
    std::shuffle(pts.begin(), pts.end(), rng);
    EXPECT_DOUBLE_EQ(hypervolume(pts, vec({0, 0, 0})), ref);
  }
}

TEST(Hypervolume, MatchesMonteCarlo) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> count(1, 20);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + trial % 2;
    std::vector<Vector> pts;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = count(rng); i > 0; --i) {
      Vector p(m);
      for (auto& x : p) x = u(rng) + 1e-3;
      pts.push_back(p);
    }
    const Vector z = Vector::Zero(m);
    const auto [est, se] = oracle::hypervolume_mc(pts, z, 200000, rng);
    EXPECT_LE(std::abs(hypervolume(pts, z) - est), 4.0 * se + 1e-12);
  }
}

TEST(Hypervolume, ParetoCompliance) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    // B is a random front; A improves a random subset of B and adds one
    // point dominating some member strictly.
    const auto b = oracle::random_front(8, 2, rng);
    std::vector<Vector> a = b;
    for (auto& p : a)
      if (u(rng) < 0.5) p += Vector::Constant(2, 0.1 * u(rng));
    a[trial % a.size()] += Vector::Constant(2, 0.01);
    for (const auto& q : b)
      EXPECT_TRUE(std::any_of(a.begin(), a.end(), [&](const Vector& p) {
        return dominates(p, q) || p == q;
      }));
    EXPECT_GT(hypervolume(a, vec({0, 0})), hypervolume(b, vec({0, 0})));
  }
}

TEST(Hypervolume, AnalyticQuadraticFront) {
  // r(s) = (-2 s^2, -2 (1 - s)^2), Z = (-3, -3): area 9 - 2/3.
  std::vector<Vector> pts;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double s = double(i) / n;
    pts.push_back(vec({-2 * s * s, -2 * (1 - s) * (1 - s)}));
  }
  EXPECT_NEAR(hypervolume(pts, vec({-3, -3})), 25.0 / 3.0, 1e-3);
}

// --- sparsity ---------------------------------------------------------------

TEST(Sparsity, Examples) {
  EXPECT_DOUBLE_EQ(*sparsity(std::vector<Vector>{vec({1, 3}), vec({2, 2}), vec({3, 1})}), 2.0);
  EXPECT_FALSE(sparsity(std::vector<Vector>{vec({1, 2}), vec({1, 2})}).has_value());
  EXPECT_DOUBLE_EQ(*sparsity(std::vector<Vector>{vec({0, 0}), vec({1, 1})}), 2.0);
}

TEST(Sparsity, UndefinedForEmptyAndSingleton) {
  EXPECT_FALSE(sparsity(std::vector<Vector>{}).has_value());
  EXPECT_FALSE(sparsity(std::vector<Vector>{vec({1, 1})}).has_value());
}

TEST(Sparsity, TranslationInvariant) {
  std::mt19937_64 rng(9);
  const auto pts = oracle::random_front(12, 3, rng);
  auto moved = pts;
  for (auto& p : moved) p += vec({5, -2, 0.25});
  EXPECT_NEAR(*sparsity(pts), *sparsity(moved), 1e-12);
}

TEST(Sparsity, FillingTheLargestGapDoesNotIncreaseIt) {
  const std::vector<Vector> pts{vec({0, 4}), vec({1, 3}), vec({3, 1}), vec({4, 0})};
  auto filled = pts;
  filled.push_back(vec({2, 2}));
  EXPECT_LE(*sparsity(filled), *sparsity(pts));
}

}  // namespace
