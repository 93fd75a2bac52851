#pragma once

#include <cstdint>
#include <vector>

#include "cluster_sense/matrix.hpp"
#include "cluster_sense/random.hpp"

namespace cluster_sense {

struct KMeansConfig {
  int k = 16;
  int max_iterations = 300;
  /// Convergence threshold on the total squared centroid shift. When
  /// relative_tolerance is set it is multiplied by the mean per-feature
  /// variance of the input.
  double tolerance = 1e-4;
  bool relative_tolerance = true;
  /// Candidates drawn per seeding step; the one that lowers the potential
  /// most is kept. 1 is plain k-means++, 0 picks 2 + floor(ln k).
  int local_trials = 0;
  /// Independent seedings; the run with the lowest final inertia is kept
  /// (earliest wins ties). All draw from one stream seeded by `seed`.
  int n_init = 1;
  std::uint64_t seed = 0;
};

struct ClusteringResult {
  std::vector<int> assignments;
  Matrix centroids;  // k x D
  double inertia = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Inertia after every assignment step, in order.
  std::vector<double> inertia_history;
  /// Row indices picked by the seeding step (empty when centers were given).
  std::vector<std::size_t> initial_indices;
};

/// k-means++ seeding: first center uniform over rows, each next one drawn
/// with probability proportional to the squared distance to the nearest
/// chosen center. Returns the chosen row indices, all with distinct values.
/// Throws when k > n or when fewer than k distinct rows exist.
///
/// With local_trials > 1 each step draws that many D^2-weighted candidates
/// and keeps the one giving the smallest total squared distance afterwards
/// (greedy k-means++). 0 selects 2 + floor(ln k).
std::vector<std::size_t> kmeanspp_indices(const Matrix& matrix, int k, Rng& rng,
                                          int local_trials = 1);

/// Centers picked by kmeanspp_indices, as a k x D matrix.
Matrix kmeanspp_init(const Matrix& matrix, int k, Rng& rng, int local_trials = 1);

/// Number of candidates per step that local_trials resolves to.
int resolve_local_trials(int local_trials, int k) noexcept;

/// Lloyd iterations from k-means++ seeding driven by config.seed, best of
/// config.n_init seedings.
ClusteringResult fit(const Matrix& matrix, const KMeansConfig& config);

/// Lloyd iterations from explicit initial centers (config.seed unused).
ClusteringResult fit_from(const Matrix& matrix, Matrix initial_centers, const KMeansConfig& config);

/// Absolute shift threshold the fit would use for this matrix.
double effective_tolerance(const Matrix& matrix, const KMeansConfig& config);

}  // namespace cluster_sense
