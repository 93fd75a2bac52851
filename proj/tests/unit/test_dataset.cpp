#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "cluster_sense/dataset.hpp"
#include "cluster_sense/error.hpp"
#include "cluster_sense/kmeans.hpp"
#include "cluster_sense/metrics.hpp"

namespace cs = cluster_sense;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("cs_dataset_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(LabeledDataset, RejectsLabelCountMismatch) {
  EXPECT_THROW(cs::LabeledDataset(cs::Matrix(3, 2), {0, 1}, 2, "x"), cs::Error);
}

TEST(LabeledDataset, RejectsUnusedClusterId) {
  EXPECT_THROW(cs::LabeledDataset(cs::Matrix(2, 1), {0, 0}, 2, "x"), cs::Error);
}

TEST(LabeledDataset, RejectsNonFinite) {
  cs::Matrix m(2, 1);
  m(1, 0) = NAN;
  EXPECT_THROW(cs::LabeledDataset(m, {0, 0}, 1, "x"), cs::Error);
}

TEST(GenerateDimLike, PaperSizedSet) {
  const auto d = cs::generate_dim_like({32, 16, 64, 10.0, 7});
  EXPECT_EQ(d.size(), 1024u);
  EXPECT_EQ(d.dims(), 32u);
  EXPECT_EQ(d.n_clusters(), 16);
  std::vector<int> counts(16, 0);
  for (int l : d.labels()) ++counts[static_cast<std::size_t>(l)];
  for (int c : counts) EXPECT_EQ(c, 64);
  EXPECT_EQ(d.name(), "dim32");
}

TEST(GenerateDimLike, SingleCluster) {
  const auto d = cs::generate_dim_like({1, 1, 5, 10.0, 0});
  EXPECT_EQ(d.size(), 5u);
  for (int l : d.labels()) EXPECT_EQ(l, 0);
}

TEST(GenerateDimLike, Deterministic) {
  const auto a = cs::generate_dim_like({8, 4, 10, 10.0, 42});
  const auto b = cs::generate_dim_like({8, 4, 10, 10.0, 42});
  EXPECT_EQ(a.points(), b.points());
  const auto c = cs::generate_dim_like({8, 4, 10, 10.0, 43});
  EXPECT_NE(a.points(), c.points());
}

TEST(GenerateDimLike, CentersSeparatedOnEveryAxis) {
  const int k = 6;
  const double sep = 10.0;
  const auto d = cs::generate_dim_like({5, k, 200, sep, 3});
  // Cluster means estimate centers to ~1/sqrt(200); jitter keeps gaps >= 0.8 sep.
  cs::Matrix means(k, 5);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < 5; ++j) means(d.labels()[i], j) += d.points()(i, j) / 200.0;
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_GT(std::abs(means(a, j) - means(b, j)), 0.8 * sep - 0.5);
      }
    }
  }
}

TEST(GenerateDimLike, TwoWellSeparatedBlobsAreRecovered) {
  const auto d = cs::generate_dim_like({2, 2, 50, 20.0, 1});
  cs::KMeansConfig cfg;
  cfg.k = 2;
  cfg.seed = 5;
  const auto r = cs::fit(d.points(), cfg);
  EXPECT_EQ(cs::adjusted_rand_index(cs::PartitionPair(r.assignments, d.labels())), 1.0);
}

TEST(GenerateDimLike, RejectsBadArguments) {
  EXPECT_THROW(cs::generate_dim_like({0, 16, 64, 10.0, 0}), cs::Error);
  EXPECT_THROW(cs::generate_dim_like({4, 0, 64, 10.0, 0}), cs::Error);
  EXPECT_THROW(cs::generate_dim_like({4, 2, 0, 10.0, 0}), cs::Error);
  EXPECT_THROW(cs::generate_dim_like({4, 2, 3, 0.0, 0}), cs::Error);
  EXPECT_THROW(cs::generate_dim_like({4, 2, 3, -1.0, 0}), cs::Error);
}

TEST(LoadDataset, SmallestWellFormedInput) {
  TempDir dir;
  write_text(dir / "d.txt", "0 0\n1 1\n");
  write_text(dir / "l.txt", "1\n2\n");
  const auto d = cs::load_dataset(dir / "d.txt", dir / "l.txt");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.dims(), 2u);
  EXPECT_EQ(d.labels(), (std::vector<int>{0, 1}));
  EXPECT_EQ(d.n_clusters(), 2);
  EXPECT_EQ(d.points()(1, 1), 1.0);
}

TEST(LoadDataset, RemapsLabelsInFirstAppearanceOrder) {
  TempDir dir;
  write_text(dir / "d.txt", "1\t2\n3   4e0\n-5 6.5E1\n7 8\n");
  write_text(dir / "l.txt", "9\n-3\n9\n4\n");
  const auto d = cs::load_dataset(dir / "d.txt", dir / "l.txt");
  EXPECT_EQ(d.labels(), (std::vector<int>{0, 1, 0, 2}));
  EXPECT_EQ(d.points()(2, 1), 65.0);
}

TEST(LoadDataset, RaggedRowNamesLine) {
  TempDir dir;
  write_text(dir / "d.txt", "1 2 3\n4 5\n");
  write_text(dir / "l.txt", "0\n1\n");
  try {
    cs::load_dataset(dir / "d.txt", dir / "l.txt");
    FAIL() << "expected ParseError";
  } catch (const cs::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("ragged"), std::string::npos);
  }
}

TEST(LoadDataset, NonNumericTokenNamesLine) {
  TempDir dir;
  write_text(dir / "d.txt", "1 2\n3 x\n5 6\n");
  write_text(dir / "l.txt", "0\n0\n0\n");
  try {
    cs::load_dataset(dir / "d.txt", dir / "l.txt");
    FAIL() << "expected ParseError";
  } catch (const cs::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadDataset, LineCountMismatch) {
  TempDir dir;
  write_text(dir / "d.txt", "1\n2\n3\n");
  write_text(dir / "l.txt", "0\n1\n");
  try {
    cs::load_dataset(dir / "d.txt", dir / "l.txt");
    FAIL() << "expected ParseError";
  } catch (const cs::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("mismatch"), std::string::npos);
  }
}

TEST(LoadDataset, EmptyFile) {
  TempDir dir;
  write_text(dir / "d.txt", "");
  write_text(dir / "l.txt", "0\n");
  EXPECT_THROW(cs::load_dataset(dir / "d.txt", dir / "l.txt"), cs::ParseError);
}

TEST(LoadDataset, BadLabel) {
  TempDir dir;
  write_text(dir / "d.txt", "1\n2\n");
  write_text(dir / "l.txt", "0\n1.5\n");
  try {
    cs::load_dataset(dir / "d.txt", dir / "l.txt");
    FAIL() << "expected ParseError";
  } catch (const cs::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadDataset, MissingFile) {
  EXPECT_THROW(cs::load_dataset("/nonexistent/d.txt", "/nonexistent/l.txt"), cs::Error);
}

TEST(LoadDataset, RoundTripIsExact) {
  TempDir dir;
  const auto d = cs::generate_dim_like({7, 3, 11, 3.5, 99});
  cs::write_dataset(d, dir / "d.txt", dir / "l.txt");
  const auto back = cs::load_dataset(dir / "d.txt", dir / "l.txt");
  EXPECT_EQ(back.points(), d.points());
  EXPECT_EQ(back.labels(), d.labels());
  EXPECT_EQ(back.n_clusters(), d.n_clusters());
}

TEST(ComputeStats, TwoPoints) {
  const auto s = cs::compute_stats(cs::Matrix::from_rows({{0}, {2}}));
  EXPECT_DOUBLE_EQ(s.mu, 1.0);
  EXPECT_DOUBLE_EQ(s.sigma, 1.0);
}

TEST(ComputeStats, ConstantData) {
  const auto s = cs::compute_stats(cs::Matrix::from_rows({{1, 1}, {1, 1}}));
  EXPECT_DOUBLE_EQ(s.mu, 1.0);
  EXPECT_DOUBLE_EQ(s.sigma, 0.0);
  EXPECT_EQ(s.per_feature_sigma, (std::vector<double>{0.0, 0.0}));
}

TEST(ComputeStats, NeedsTwoRows) {
  EXPECT_THROW(cs::compute_stats(cs::Matrix(1, 3)), cs::Error);
}

TEST(ComputeStats, PerFeatureMatchesDirectColumnwise) {
  const auto d = cs::generate_dim_like({32, 16, 64, 10.0, 7});
  const auto s = cs::compute_stats(d);
  // Within-cluster sd is 1, so each feature's spread is dominated by the
  // grid; compare against a direct column computation instead.
  for (std::size_t c = 0; c < d.dims(); ++c) {
    const auto col = d.points().column(c);
    double mean = 0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(col.size());
    double ss = 0;
    for (double v : col) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(s.per_feature_mu[c], mean, 1e-9 * std::abs(mean) + 1e-12);
    EXPECT_NEAR(s.per_feature_sigma[c], std::sqrt(ss / col.size()), 1e-9);
  }
}

TEST(ComputeStats, PerFeatureSigmaOfUnitBlobIsNearOne) {
  const auto d = cs::generate_dim_like({32, 1, 1024, 10.0, 7});
  const auto s = cs::compute_stats(d);
  for (double sd : s.per_feature_sigma) EXPECT_NEAR(sd, 1.0, 0.1);
}

TEST(ComputeStatsProperty, TranslationEquivariant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = cs::generate_dim_like({4, 3, 7, 5.0, seed});
    const double shift = -50.0 + static_cast<double>(seed) * 7.3;
    cs::Matrix moved = d.points();
    for (double& v : moved.values()) v += shift;
    const auto a = cs::compute_stats(d.points());
    const auto b = cs::compute_stats(moved);
    EXPECT_NEAR(b.mu, a.mu + shift, 1e-9 * (std::abs(a.mu) + std::abs(shift)));
    EXPECT_NEAR(b.sigma, a.sigma, 1e-9 * a.sigma);
  }
}

TEST(ComputeStatsProperty, CenteredCopyHasZeroFeatureMeans) {
  const auto d = cs::generate_dim_like({6, 4, 9, 10.0, 12});
  const auto s = cs::compute_stats(d);
  cs::Matrix centered = d.points();
  for (std::size_t r = 0; r < centered.rows(); ++r)
    for (std::size_t c = 0; c < centered.cols(); ++c) centered(r, c) -= s.per_feature_mu[c];
  const auto t = cs::compute_stats(centered);
  for (double m : t.per_feature_mu) EXPECT_NEAR(m, 0.0, 1e-9 * (std::abs(s.mu) + 1));
}
