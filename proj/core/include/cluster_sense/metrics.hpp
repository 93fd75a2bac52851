#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cluster_sense/matrix.hpp"

namespace cluster_sense {

/// Predicted (X) and ground-truth (Y) labelings of the same n points, with
/// both sides remapped to dense ids in order of first appearance.
class PartitionPair {
 public:
  PartitionPair(std::span<const int> predicted, std::span<const int> truth);

  const std::vector<int>& predicted() const noexcept { return predicted_; }
  const std::vector<int>& truth() const noexcept { return truth_; }
  std::size_t size() const noexcept { return predicted_.size(); }
  int predicted_clusters() const noexcept { return kx_; }
  int truth_clusters() const noexcept { return ky_; }

 private:
  std::vector<int> predicted_;
  std::vector<int> truth_;
  int kx_ = 0;
  int ky_ = 0;
};

/// Remaps arbitrary ids to [0, k) in order of first appearance; returns k.
int densify_labels(std::span<const int> labels, std::vector<int>& out);

/// k_x by k_y count table, row-major.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> counts;

  std::int64_t operator()(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
  std::vector<std::int64_t> row_sums() const;
  std::vector<std::int64_t> col_sums() const;
};

ContingencyTable contingency(const PartitionPair& pair);

struct PairCounts {
  std::int64_t a = 0;  // pairs together in both partitions
  std::int64_t b = 0;  // pairs apart in both partitions
  std::int64_t total_pairs = 0;
};

/// Requires n >= 2.
PairCounts pair_counts(const PartitionPair& pair);

/// MI / arithmetic mean of the natural-log entropies. 1 when both sides are
/// a single cluster, 0 when MI vanishes.
double nmi(const PartitionPair& pair);

/// (a + b) / C(n, 2). Requires n >= 2.
double rand_index(const PartitionPair& pair);

/// Rand index corrected by its permutation-model expectation. Requires n >= 2.
double adjusted_rand_index(const PartitionPair& pair);

/// Symmetric n x n Euclidean distance table, row-major.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(const Matrix& points);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {d_.data() + i * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

struct SilhouetteTerms {
  std::vector<double> d_w;  // mean distance to own cluster (0 for singletons)
  std::vector<double> d_n;  // mean distance to nearest other cluster
  std::vector<double> score;
};

SilhouetteTerms silhouette_terms(const DistanceMatrix& distances, std::span<const int> assignments);

/// Mean silhouette over points; singleton members contribute 0. Requires
/// n >= 2 and at least two clusters.
double silhouette(const Matrix& points, std::span<const int> assignments);
double silhouette(const DistanceMatrix& distances, std::span<const int> assignments);

struct DaviesBouldinTerms {
  Matrix centroids;            // one row per cluster present
  std::vector<double> delta;   // mean member-to-centroid distance
  Matrix separation;           // centroid-to-centroid distances
  std::vector<std::pair<int, int>> coincident;  // pairs with zero separation
};

DaviesBouldinTerms davies_bouldin_terms(const Matrix& points, std::span<const int> assignments);

/// Mean over clusters of the worst (delta_i + delta_j) / Delta_ij. Returns
/// +infinity when two clusters share a centroid; the offending pairs are in
/// davies_bouldin_terms().coincident. Requires at least two clusters.
double davies_bouldin(const Matrix& points, std::span<const int> assignments);

enum class Metric { nmi, ri, ari, silhouette, davies_bouldin };

inline constexpr Metric kAllMetrics[] = {Metric::nmi, Metric::ri, Metric::ari, Metric::silhouette,
                                         Metric::davies_bouldin};

std::string_view to_token(Metric metric);
/// Throws Error(invalid_argument) naming the token when unknown.
Metric parse_metric(std::string_view token);

struct MetricReport {
  double nmi = 0.0;
  double ri = 0.0;
  double ari = 0.0;
  double silhouette = 0.0;
  double davies_bouldin = 0.0;

  double get(Metric metric) const noexcept;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

/// All five metrics for one clustering against ground truth.
MetricReport evaluate(const Matrix& points, std::span<const int> assignments,
                      std::span<const int> truth);
/// Same, reusing a precomputed distance table for the silhouette.
MetricReport evaluate(const Matrix& points, const DistanceMatrix& distances,
                      std::span<const int> assignments, std::span<const int> truth);

}  // namespace cluster_sense
