#include "cluster_sense/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "cluster_sense/error.hpp"

namespace cluster_sense {

namespace {

void check_input(const Matrix& matrix, int k, const char* op) {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    throw Error(ErrorCode::invalid_argument, std::string(op) + ": empty matrix");
  }
  if (k < 1) throw Error(ErrorCode::invalid_argument, std::string(op) + ": k must be positive");
  if (static_cast<std::size_t>(k) > matrix.rows()) {
    throw Error(ErrorCode::invalid_argument, std::string(op) + ": k = " + std::to_string(k) +
                                                 " exceeds " + std::to_string(matrix.rows()) +
                                                 " points");
  }
}

// Squared distance that gives up once the running sum reaches `bound`;
// returns a value >= bound in that case. Terms are nonnegative, so a
// bailed-out candidate could never have been strictly closer.
double squared_distance_bounded(std::span<const double> a, std::span<const double> b,
                                double bound) noexcept {
  constexpr std::size_t kBlock = 64;
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t len = std::min(kBlock, n - start);
    total += squared_distance(a.subspan(start, len), b.subspan(start, len));
    if (total >= bound) return total;
  }
  return total;
}

struct Assignment {
  double inertia = 0.0;
  bool changed = false;
};

// Nearest centroid per point; ties go to the lower index.
Assignment assign(const Matrix& matrix, const Matrix& centroids, std::vector<int>& labels,
                  std::vector<double>& distances) {
  Assignment out;
  const std::size_t k = centroids.rows();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    auto point = matrix.row(i);
    int best = 0;
    double best_d = squared_distance(point, centroids.row(0));
    for (std::size_t c = 1; c < k; ++c) {
      const double d = squared_distance_bounded(point, centroids.row(c), best_d);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    if (labels[i] != best) {
      out.changed = true;
      labels[i] = best;
    }
    distances[i] = best_d;
    out.inertia += best_d;
  }
  return out;
}

// Recomputes means; empty clusters are re-seeded at the points farthest
// from their assigned centroids. Returns the total squared centroid shift.
double update(const Matrix& matrix, const std::vector<int>& labels,
              const std::vector<double>& distances, Matrix& centroids) {
  const std::size_t k = centroids.rows();
  const std::size_t d = centroids.cols();
  Matrix sums(k, d);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    ++counts[c];
    auto src = matrix.row(i);
    auto dst = sums.row(c);
    for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
  }

  std::vector<std::size_t> empties;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) empties.push_back(c);
  }
  std::vector<std::size_t> donors;
  if (!empties.empty()) {
    std::vector<std::size_t> order(matrix.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances[a] > distances[b]; });
    donors.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(empties.size()));
  }

  double shift = 0.0;
  Matrix next(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    auto dst = next.row(c);
    if (counts[c] > 0) {
      auto src = sums.row(c);
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (std::size_t j = 0; j < d; ++j) dst[j] = src[j] * inv;
    }
  }
  for (std::size_t e = 0; e < empties.size(); ++e) {
    auto src = matrix.row(donors[e]);
    std::copy(src.begin(), src.end(), next.row(empties[e]).begin());
  }
  for (std::size_t c = 0; c < k; ++c) shift += squared_distance(next.row(c), centroids.row(c));
  centroids = std::move(next);
  return shift;
}

}  // namespace

int resolve_local_trials(int local_trials, int k) noexcept {
  if (local_trials > 0) return local_trials;
  return 2 + static_cast<int>(std::floor(std::log(static_cast<double>(std::max(k, 1)))));
}

namespace {

// D^2 draw: index whose cumulative weight first exceeds u * total. Zero-weight
// rows (copies of chosen centers) are never returned.
std::size_t weighted_pick(const std::vector<double>& weights, double total, Rng& rng) {
  const double target = rng.uniform() * total;
  double running = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    running += weights[i];
    if (running > target) return i;
  }
  return last_positive;  // rounding at the top end
}

}  // namespace

std::vector<std::size_t> kmeanspp_indices(const Matrix& matrix, int k, Rng& rng,
                                          int local_trials) {
  check_input(matrix, k, "kmeanspp_init");
  const int trials = resolve_local_trials(local_trials, k);
  const std::size_t n = matrix.rows();
  std::vector<std::size_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  chosen.push_back(static_cast<std::size_t>(rng.below(n)));

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) {
    nearest[i] = squared_distance(matrix.row(i), matrix.row(chosen[0]));
  }
  std::vector<double> candidate(n);
  std::vector<double> best(n);
  while (chosen.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double w : nearest) total += w;
    // Rows equal to a chosen center have zero weight, so a positive total
    // guarantees the pick is a new distinct row.
    if (!(total > 0.0)) {
      throw Error(ErrorCode::degenerate_data,
                  "kmeanspp_init: only " + std::to_string(chosen.size()) +
                      " distinct points available for k = " + std::to_string(k));
    }
    std::size_t pick = n;
    double best_potential = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      const std::size_t c = weighted_pick(nearest, total, rng);
      auto center = matrix.row(c);
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate[i] = std::min(nearest[i], squared_distance(matrix.row(i), center));
        potential += candidate[i];
      }
      if (potential < best_potential) {
        best_potential = potential;
        pick = c;
        best.swap(candidate);
      }
    }
    chosen.push_back(pick);
    nearest.swap(best);
  }
  return chosen;
}

Matrix kmeanspp_init(const Matrix& matrix, int k, Rng& rng, int local_trials) {
  const auto idx = kmeanspp_indices(matrix, k, rng, local_trials);
  Matrix centers(idx.size(), matrix.cols());
  for (std::size_t c = 0; c < idx.size(); ++c) {
    auto src = matrix.row(idx[c]);
    std::copy(src.begin(), src.end(), centers.row(c).begin());
  }
  return centers;
}

double effective_tolerance(const Matrix& matrix, const KMeansConfig& config) {
  if (!config.relative_tolerance) return config.tolerance;
  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.cols();
  if (n == 0 || d == 0) return 0.0;
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = matrix.row(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = matrix.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - mean[j];
      var += diff * diff;
    }
  }
  return config.tolerance * var / static_cast<double>(n * d);
}

ClusteringResult fit_from(const Matrix& matrix, Matrix initial_centers,
                          const KMeansConfig& config) {
  check_input(matrix, config.k, "fit");
  if (config.max_iterations < 1) {
    throw Error(ErrorCode::invalid_argument, "fit: max_iterations must be >= 1");
  }
  if (initial_centers.rows() != static_cast<std::size_t>(config.k) ||
      initial_centers.cols() != matrix.cols()) {
    throw Error(ErrorCode::invalid_argument, "fit: initial centers must be k x D");
  }
  const double tol = effective_tolerance(matrix, config);
  const std::size_t n = matrix.rows();

  ClusteringResult result;
  result.centroids = std::move(initial_centers);
  result.assignments.assign(n, -1);
  std::vector<double> distances(n, 0.0);

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const auto step = assign(matrix, result.centroids, result.assignments, distances);
    result.inertia_history.push_back(step.inertia);
    result.iterations = iter + 1;
    if (iter > 0 && !step.changed) {
      result.converged = true;
      break;
    }
    const double shift = update(matrix, result.assignments, distances, result.centroids);
    if (shift <= tol) {
      result.converged = true;
      break;
    }
  }
  // Final assignment against the final centroids keeps the nearest-centroid
  // invariant and makes inertia match what is reported.
  const auto last = assign(matrix, result.centroids, result.assignments, distances);
  if (last.inertia != result.inertia_history.back() || last.changed) {
    result.inertia_history.push_back(last.inertia);
  }
  result.inertia = last.inertia;
  return result;
}

ClusteringResult fit(const Matrix& matrix, const KMeansConfig& config) {
  check_input(matrix, config.k, "fit");
  if (config.n_init < 1) throw Error(ErrorCode::invalid_argument, "fit: n_init must be >= 1");
  Rng rng(config.seed);
  std::optional<ClusteringResult> best;
  for (int run = 0; run < config.n_init; ++run) {
    auto indices = kmeanspp_indices(matrix, config.k, rng, config.local_trials);
    Matrix centers(indices.size(), matrix.cols());
    for (std::size_t c = 0; c < indices.size(); ++c) {
      auto src = matrix.row(indices[c]);
      std::copy(src.begin(), src.end(), centers.row(c).begin());
    }
    auto result = fit_from(matrix, std::move(centers), config);
    result.initial_indices = std::move(indices);
    if (!best || result.inertia < best->inertia) best = std::move(result);
  }
  return std::move(*best);
}

}  // namespace cluster_sense
