#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cluster_sense/matrix.hpp"

namespace cluster_sense {

/// Point matrix with ground-truth cluster labels.
///
/// Invariants (checked on construction): one label per row, labels dense in
/// [0, n_clusters) with every id present, all entries finite.
class LabeledDataset {
 public:
  LabeledDataset(Matrix points, std::vector<int> labels, int n_clusters, std::string name);

  const Matrix& points() const noexcept { return points_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  int n_clusters() const noexcept { return n_clusters_; }
  const std::string& name() const noexcept { return name_; }

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dims() const noexcept { return points_.cols(); }

 private:
  Matrix points_;
  std::vector<int> labels_;
  int n_clusters_;
  std::string name_;
};

struct DatasetStats {
  double mu = 0.0;     // mean over all n*D entries
  double sigma = 0.0;  // population std over all n*D entries
  std::vector<double> per_feature_mu;
  std::vector<double> per_feature_sigma;
};

struct GeneratorParams {
  int dims = 32;
  int n_clusters = 16;
  int points_per_cluster = 64;
  double separation = 10.0;
  std::uint64_t seed = 0;
};

/// Synthetic stand-in for the Dim-D benchmark sets: isotropic unit-variance
/// Gaussian blobs whose centers sit on a jittered per-axis grid. On each axis
/// the k centers take a random permutation of the levels {0, s, ..., (k-1)s},
/// each jittered by Uniform(-0.1s, 0.1s), so any two centers differ by at
/// least 0.8s in every coordinate. Rows are grouped by cluster.
LabeledDataset generate_dim_like(const GeneratorParams& params);

/// Conventional name for a generated set, e.g. "dim32".
std::string dim_like_name(int dims);

/// Reads whitespace-separated rows and one integer label per line. Labels are
/// remapped to [0, k) in order of first appearance. Throws ParseError naming
/// the offending line.
LabeledDataset load_dataset(const std::filesystem::path& data_path,
                            const std::filesystem::path& labels_path,
                            std::string name = {});

/// Writes the text format read by load_dataset. Values use the shortest
/// representation that round-trips exactly.
void write_dataset(const LabeledDataset& data, const std::filesystem::path& data_path,
                   const std::filesystem::path& labels_path);

/// Requires at least two rows.
DatasetStats compute_stats(const Matrix& points);
inline DatasetStats compute_stats(const LabeledDataset& data) { return compute_stats(data.points()); }

}  // namespace cluster_sense
