#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cluster_sense/dataset.hpp"
#include "cluster_sense/error.hpp"
#include "cluster_sense/kmeans.hpp"
#include "cluster_sense/metrics.hpp"
#include "cluster_sense/scale.hpp"

namespace cs = cluster_sense;

namespace {

cs::Matrix column(std::initializer_list<double> v) {
  cs::Matrix m(v.size(), 1);
  std::size_t i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

cs::Matrix rows_at(const cs::Matrix& m, const std::vector<std::size_t>& idx) {
  cs::Matrix out(idx.size(), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(idx[i], j);
  return out;
}

void expect_result_invariants(const cs::Matrix& m, const cs::ClusteringResult& r) {
  ASSERT_EQ(r.assignments.size(), m.rows());
  double inertia = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const int a = r.assignments[i];
    ASSERT_GE(a, 0);
    ASSERT_LT(static_cast<std::size_t>(a), r.centroids.rows());
    const double own = cs::squared_distance(m.row(i), r.centroids.row(static_cast<std::size_t>(a)));
    inertia += own;
    for (std::size_t c = 0; c < r.centroids.rows(); ++c) {
      ASSERT_LE(own, cs::squared_distance(m.row(i), r.centroids.row(c)) + 1e-12 * (1 + own));
    }
  }
  EXPECT_NEAR(r.inertia, inertia, 1e-6 * std::max(1.0, inertia));
  ASSERT_FALSE(r.inertia_history.empty());
  EXPECT_EQ(r.inertia_history.back(), r.inertia);
}

}  // namespace

TEST(KMeansPlusPlus, KEqualsNIsPermutation) {
  const auto m = cs::Matrix::from_rows({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {2, 3}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cs::Rng rng(seed);
    auto idx = cs::kmeanspp_indices(m, 5, rng);
    std::sort(idx.begin(), idx.end());
    EXPECT_EQ(idx, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  }
}

TEST(KMeansPlusPlus, KOneIsUniform) {
  const auto m = column({0, 1, 2, 3});
  std::vector<int> hits(4, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    cs::Rng rng(seed);
    const auto c = cs::kmeanspp_init(m, 1, rng);
    ASSERT_EQ(c.rows(), 1u);
    ++hits[static_cast<std::size_t>(c(0, 0))];
  }
  for (int h : hits) EXPECT_NEAR(h, 1000, 120);
}

TEST(KMeansPlusPlus, SecondCenterCrossesBlobs) {
  cs::Matrix m(200, 2);
  for (std::size_t i = 100; i < 200; ++i) m(i, 0) = m(i, 1) = 100.0;
  int cross = 0;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    cs::Rng rng(static_cast<std::uint64_t>(seed));
    const auto idx = cs::kmeanspp_indices(m, 2, rng, 1);
    cross += (idx[0] < 100) != (idx[1] < 100);
  }
  EXPECT_GE(cross, static_cast<int>(0.999 * trials));
}

TEST(KMeansPlusPlus, DistinctRowsWithDuplicates) {
  const auto m = column({1, 1, 1, 2, 2, 3});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cs::Rng rng(seed);
    const auto c = cs::kmeanspp_init(m, 3, rng, static_cast<int>(seed % 3));
    std::set<double> values{c(0, 0), c(1, 0), c(2, 0)};
    EXPECT_EQ(values.size(), 3u);
  }
}

TEST(KMeansPlusPlus, Errors) {
  cs::Rng rng(0);
  EXPECT_THROW(cs::kmeanspp_indices(column({1, 2}), 3, rng), cs::Error);
  try {
    cs::kmeanspp_indices(column({4, 4, 4}), 2, rng);
    FAIL();
  } catch (const cs::Error& e) {
    EXPECT_EQ(e.code(), cs::ErrorCode::degenerate_data);
  }
  EXPECT_NO_THROW(cs::kmeanspp_indices(column({4, 4, 4}), 1, rng));
  EXPECT_THROW(cs::kmeanspp_indices(cs::Matrix(), 1, rng), cs::Error);
}

TEST(KMeansPlusPlus, ResolveLocalTrials) {
  EXPECT_EQ(cs::resolve_local_trials(0, 16), 2 + 2);
  EXPECT_EQ(cs::resolve_local_trials(0, 1), 2);
  EXPECT_EQ(cs::resolve_local_trials(1, 16), 1);
  EXPECT_EQ(cs::resolve_local_trials(5, 16), 5);
}

TEST(Fit, TwoPairs) {
  const auto m = column({0, 0.1, 10, 10.1});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cs::KMeansConfig cfg;
    cfg.k = 2;
    cfg.seed = seed;
    const auto r = cs::fit(m, cfg);
    EXPECT_EQ(r.assignments[0], r.assignments[1]);
    EXPECT_EQ(r.assignments[2], r.assignments[3]);
    EXPECT_NE(r.assignments[0], r.assignments[2]);
    EXPECT_NEAR(r.inertia, 0.01, 1e-12);
    EXPECT_TRUE(r.converged);
    expect_result_invariants(m, r);
  }
}

TEST(Fit, TwoPairsMatchesExhaustiveOptimum) {
  const std::vector<double> xs{0, 0.1, 10, 10.1};
  double best = INFINITY;
  for (int mask = 1; mask < 15; ++mask) {
    double s[2] = {0, 0}, n[2] = {0, 0}, ss = 0;
    for (int i = 0; i < 4; ++i) {
      const int g = (mask >> i) & 1;
      s[g] += xs[static_cast<std::size_t>(i)];
      n[g] += 1;
    }
    for (int i = 0; i < 4; ++i) {
      const int g = (mask >> i) & 1;
      const double d = xs[static_cast<std::size_t>(i)] - s[g] / n[g];
      ss += d * d;
    }
    best = std::min(best, ss);
  }
  EXPECT_NEAR(best, 0.01, 1e-12);
}

TEST(Fit, KEqualsN) {
  const auto m = cs::Matrix::from_rows({{0, 1}, {3, 4}, {-2, 7}, {1, 1}});
  cs::KMeansConfig cfg;
  cfg.k = 4;
  const auto r = cs::fit(m, cfg);
  EXPECT_EQ(r.inertia, 0.0);
  std::set<int> used(r.assignments.begin(), r.assignments.end());
  EXPECT_EQ(used.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = r.centroids.row(static_cast<std::size_t>(r.assignments[i]));
    EXPECT_EQ(c[0], m(i, 0));
    EXPECT_EQ(c[1], m(i, 1));
  }
}

TEST(Fit, DimLikeBestOfTenSeeds) {
  const auto d = cs::generate_dim_like({32, 16, 64, 10.0, 7});
  const auto m = cs::apply_scaling(d.points(), cs::ScalingKind::standardized);
  double best_ari = -1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cs::KMeansConfig cfg;
    cfg.seed = seed;
    const auto r = cs::fit(m, cfg);
    best_ari = std::max(best_ari, cs::adjusted_rand_index(cs::PartitionPair(r.assignments, d.labels())));
  }
  EXPECT_GE(best_ari, 0.99);
}

TEST(Fit, Deterministic) {
  const auto d = cs::generate_dim_like({8, 6, 20, 3.0, 4});
  cs::KMeansConfig cfg;
  cfg.k = 6;
  cfg.seed = 31;
  cfg.n_init = 3;
  const auto a = cs::fit(d.points(), cfg);
  const auto b = cs::fit(d.points(), cfg);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.inertia, b.inertia);
  EXPECT_EQ(a.initial_indices, b.initial_indices);
}

TEST(Fit, BestOfNInitNeverWorseThanFirst) {
  const auto d = cs::generate_dim_like({4, 8, 15, 2.0, 9});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cs::KMeansConfig one;
    one.k = 8;
    one.seed = seed;
    cs::KMeansConfig many = one;
    many.n_init = 5;
    EXPECT_LE(cs::fit(d.points(), many).inertia, cs::fit(d.points(), one).inertia);
  }
}

TEST(Fit, EmptyClusterIsReseeded) {
  // Two initial centers far from every point: the second never wins and is
  // re-seeded at the farthest point.
  const auto m = column({0, 1, 2, 100});
  cs::KMeansConfig cfg;
  cfg.k = 2;
  const auto r = cs::fit_from(m, column({1, 1000}), cfg);
  std::set<int> used(r.assignments.begin(), r.assignments.end());
  EXPECT_EQ(used.size(), 2u);
  EXPECT_EQ(r.assignments[0], r.assignments[1]);
  EXPECT_NE(r.assignments[0], r.assignments[3]);
  expect_result_invariants(m, r);
}

TEST(Fit, TiesGoToLowerIndex) {
  // Point 2 is equidistant from both initial centers; taking the lower index
  // pulls centroid 0 to 1 and keeps the point there.
  const auto m = column({0, 2, 4});
  cs::KMeansConfig cfg;
  cfg.k = 2;
  cfg.max_iterations = 1;
  const auto r = cs::fit_from(m, column({1, 3}), cfg);
  EXPECT_EQ(r.inertia_history.front(), 3.0);
  EXPECT_EQ(r.assignments, (std::vector<int>{0, 0, 1}));
}

TEST(Fit, Errors) {
  cs::KMeansConfig cfg;
  cfg.k = 3;
  EXPECT_THROW(cs::fit(cs::Matrix(), cfg), cs::Error);
  EXPECT_THROW(cs::fit(column({1, 2}), cfg), cs::Error);
  cfg.k = 1;
  cfg.max_iterations = 0;
  EXPECT_THROW(cs::fit(column({1, 2}), cfg), cs::Error);
  cfg.max_iterations = 10;
  cfg.n_init = 0;
  EXPECT_THROW(cs::fit(column({1, 2}), cfg), cs::Error);
  cfg.n_init = 1;
  EXPECT_THROW(cs::fit_from(column({1, 2}), column({1, 2}), cfg), cs::Error);
}

TEST(Fit, MaxIterationsCap) {
  const auto d = cs::generate_dim_like({2, 10, 30, 0.5, 2});
  cs::KMeansConfig cfg;
  cfg.k = 10;
  cfg.max_iterations = 2;
  cfg.tolerance = 0.0;
  const auto r = cs::fit(d.points(), cfg);
  EXPECT_LE(r.iterations, 2);
  expect_result_invariants(d.points(), r);
}

TEST(Fit, EffectiveTolerance) {
  const auto m = cs::Matrix::from_rows({{0, 0}, {2, 4}});
  cs::KMeansConfig cfg;
  cfg.tolerance = 0.5;
  EXPECT_DOUBLE_EQ(cs::effective_tolerance(m, cfg), 0.5 * (1.0 + 4.0) / 2.0);
  cfg.relative_tolerance = false;
  EXPECT_DOUBLE_EQ(cs::effective_tolerance(m, cfg), 0.5);
}

TEST(FitProperty, InvariantsAndMonotoneInertia) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int k = 2 + static_cast<int>(seed % 7);
    const auto d = cs::generate_dim_like({1 + static_cast<int>(seed % 5), k, 12, 1.5, seed});
    cs::KMeansConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    cfg.tolerance = 0.0;
    cfg.local_trials = static_cast<int>(seed % 3);
    const auto r = cs::fit(d.points(), cfg);
    expect_result_invariants(d.points(), r);
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
      EXPECT_LE(r.inertia_history[i], r.inertia_history[i - 1] * (1 + 1e-12)) << "seed " << seed;
    }
  }
}

TEST(FitProperty, PermutationEquivariance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = cs::generate_dim_like({3, 4, 10, 2.0, seed});
    const auto& m = d.points();
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    cs::Rng rng(seed + 1000);
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const auto permuted = rows_at(m, perm);

    cs::Rng init_rng(seed);
    const auto idx = cs::kmeanspp_indices(m, 4, init_rng);
    const auto centers = rows_at(m, idx);
    cs::KMeansConfig cfg;
    cfg.k = 4;
    const auto a = cs::fit_from(m, centers, cfg);
    const auto b = cs::fit_from(permuted, centers, cfg);
    for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(b.assignments[i], a.assignments[perm[i]]);
  }
}

TEST(FitProperty, ScaleFreeAssignments) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = cs::generate_dim_like({5, 5, 10, 1.0, seed});
    const double factor = std::ldexp(1.0, static_cast<int>(seed % 9) - 4) * (seed % 2 ? 1.0 : 3.0);
    cs::Matrix scaled = d.points();
    for (double& v : scaled.values()) v *= factor;
    cs::Rng rng(seed);
    const auto idx = cs::kmeanspp_indices(d.points(), 5, rng);
    cs::KMeansConfig cfg;
    cfg.k = 5;
    const auto a = cs::fit_from(d.points(), rows_at(d.points(), idx), cfg);
    const auto b = cs::fit_from(scaled, rows_at(scaled, idx), cfg);
    EXPECT_EQ(a.assignments, b.assignments) << "seed " << seed;
  }
}
