#include "cluster_sense/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <unordered_map>

#include "cluster_sense/error.hpp"

namespace cluster_sense {

int densify_labels(std::span<const int> labels, std::vector<int>& out) {
  out.resize(labels.size());
  std::unordered_map<int, int> dense;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [it, inserted] = dense.try_emplace(labels[i], static_cast<int>(dense.size()));
    out[i] = it->second;
  }
  return static_cast<int>(dense.size());
}

PartitionPair::PartitionPair(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::invalid_argument, "PartitionPair: " + std::to_string(predicted.size()) +
                                                 " predicted vs " + std::to_string(truth.size()) +
                                                 " true labels");
  }
  kx_ = densify_labels(predicted, predicted_);
  ky_ = densify_labels(truth, truth_);
}

std::vector<std::int64_t> ContingencyTable::row_sums() const {
  std::vector<std::int64_t> out(rows, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i] += (*this)(i, j);
  return out;
}

std::vector<std::int64_t> ContingencyTable::col_sums() const {
  std::vector<std::int64_t> out(cols, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j] += (*this)(i, j);
  return out;
}

ContingencyTable contingency(const PartitionPair& pair) {
  ContingencyTable t;
  t.rows = static_cast<std::size_t>(pair.predicted_clusters());
  t.cols = static_cast<std::size_t>(pair.truth_clusters());
  t.counts.assign(t.rows * t.cols, 0);
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const auto x = static_cast<std::size_t>(pair.predicted()[i]);
    const auto y = static_cast<std::size_t>(pair.truth()[i]);
    ++t.counts[x * t.cols + y];
  }
  return t;
}

namespace {

constexpr std::int64_t choose2(std::int64_t m) { return m * (m - 1) / 2; }

struct PairSums {
  std::int64_t index = 0;  // sum_ij C(n_ij, 2)
  std::int64_t rows = 0;   // sum_i C(a_i, 2)
  std::int64_t cols = 0;   // sum_j C(b_j, 2)
  std::int64_t total = 0;  // C(n, 2)
};

PairSums pair_sums(const PartitionPair& pair, const char* op) {
  if (pair.size() < 2) {
    throw Error(ErrorCode::invalid_argument, std::string(op) + ": need at least 2 points");
  }
  const auto table = contingency(pair);
  PairSums s;
  for (std::int64_t c : table.counts) s.index += choose2(c);
  for (std::int64_t a : table.row_sums()) s.rows += choose2(a);
  for (std::int64_t b : table.col_sums()) s.cols += choose2(b);
  s.total = choose2(static_cast<std::int64_t>(pair.size()));
  return s;
}

double entropy(const std::vector<std::int64_t>& counts, double n) {
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

PairCounts pair_counts(const PartitionPair& pair) {
  const auto s = pair_sums(pair, "pair_counts");
  return PairCounts{s.index, s.total + s.index - s.rows - s.cols, s.total};
}

double rand_index(const PartitionPair& pair) {
  const auto c = pair_counts(pair);
  return static_cast<double>(c.a + c.b) / static_cast<double>(c.total_pairs);
}

double adjusted_rand_index(const PartitionPair& pair) {
  const auto s = pair_sums(pair, "adjusted_rand_index");
  // ARI = (index - rows*cols/T) / ((rows+cols)/2 - rows*cols/T), scaled by
  // 2T so numerator and denominator are exact integers.
  __extension__ typedef __int128 wide;
  const wide num = 2 * static_cast<wide>(s.total) * s.index - 2 * static_cast<wide>(s.rows) * s.cols;
  const wide den = static_cast<wide>(s.total) * (s.rows + s.cols) -
                   2 * static_cast<wide>(s.rows) * s.cols;
  if (den == 0) return num == 0 ? 1.0 : 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

double nmi(const PartitionPair& pair) {
  if (pair.size() == 0) throw Error(ErrorCode::invalid_argument, "nmi: empty partition");
  const auto table = contingency(pair);
  const double n = static_cast<double>(pair.size());
  const auto rows = table.row_sums();
  const auto cols = table.col_sums();
  const double hx = entropy(rows, n);
  const double hy = entropy(cols, n);
  if (hx == 0.0 && hy == 0.0) return 1.0;

  double mi = 0.0;
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      const auto c = table(i, j);
      if (c == 0) continue;
      const double nij = static_cast<double>(c);
      mi += nij / n *
            std::log(n * nij / (static_cast<double>(rows[i]) * static_cast<double>(cols[j])));
    }
  }
  if (mi <= 0.0) return 0.0;
  return std::clamp(mi / (0.5 * (hx + hy)), 0.0, 1.0);
}

DistanceMatrix::DistanceMatrix(const Matrix& points) : n_(points.rows()), d_(n_ * n_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    auto pi = points.row(i);
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double d = std::sqrt(squared_distance(pi, points.row(j)));
      d_[i * n_ + j] = d;
      d_[j * n_ + i] = d;
    }
  }
}

namespace {

int check_clusters(std::size_t n, std::span<const int> assignments, std::vector<int>& dense,
                   const char* op) {
  if (assignments.size() != n) {
    throw Error(ErrorCode::invalid_argument, std::string(op) + ": " +
                                                 std::to_string(assignments.size()) +
                                                 " assignments for " + std::to_string(n) + " points");
  }
  if (n < 2) throw Error(ErrorCode::invalid_argument, std::string(op) + ": need at least 2 points");
  const int k = densify_labels(assignments, dense);
  if (k < 2) {
    throw Error(ErrorCode::degenerate_data, std::string(op) + ": need at least 2 clusters");
  }
  return k;
}

}  // namespace

SilhouetteTerms silhouette_terms(const DistanceMatrix& distances, std::span<const int> assignments) {
  std::vector<int> labels;
  const std::size_t n = distances.size();
  const auto k = static_cast<std::size_t>(check_clusters(n, assignments, labels, "silhouette"));
  std::vector<std::size_t> sizes(k, 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];

  SilhouetteTerms t;
  t.d_w.assign(n, 0.0);
  t.d_n.assign(n, 0.0);
  t.score.assign(n, 0.0);
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    auto row = distances.row(i);
    for (std::size_t j = 0; j < n; ++j) sums[static_cast<std::size_t>(labels[j])] += row[j];
    const auto own = static_cast<std::size_t>(labels[i]);
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own) continue;
      nearest = std::min(nearest, sums[c] / static_cast<double>(sizes[c]));
    }
    t.d_n[i] = nearest;
    if (sizes[own] > 1) {
      t.d_w[i] = sums[own] / static_cast<double>(sizes[own] - 1);
      const double denom = std::max(t.d_w[i], t.d_n[i]);
      t.score[i] = denom > 0.0 ? (t.d_n[i] - t.d_w[i]) / denom : 0.0;
    }
  }
  return t;
}

double silhouette(const DistanceMatrix& distances, std::span<const int> assignments) {
  const auto t = silhouette_terms(distances, assignments);
  double total = 0.0;
  for (double s : t.score) total += s;
  return total / static_cast<double>(t.score.size());
}

double silhouette(const Matrix& points, std::span<const int> assignments) {
  std::vector<int> labels;
  check_clusters(points.rows(), assignments, labels, "silhouette");
  return silhouette(DistanceMatrix(points), assignments);
}

DaviesBouldinTerms davies_bouldin_terms(const Matrix& points, std::span<const int> assignments) {
  std::vector<int> labels;
  const auto k =
      static_cast<std::size_t>(check_clusters(points.rows(), assignments, labels, "davies_bouldin"));
  const std::size_t d = points.cols();

  DaviesBouldinTerms t;
  t.centroids = Matrix(k, d);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    ++sizes[c];
    auto src = points.row(i);
    auto dst = t.centroids.row(c);
    for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    auto row = t.centroids.row(c);
    for (double& v : row) v /= static_cast<double>(sizes[c]);
  }

  t.delta.assign(k, 0.0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    t.delta[c] += std::sqrt(squared_distance(points.row(i), t.centroids.row(c)));
  }
  for (std::size_t c = 0; c < k; ++c) t.delta[c] /= static_cast<double>(sizes[c]);

  t.separation = Matrix(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double dist = std::sqrt(squared_distance(t.centroids.row(a), t.centroids.row(b)));
      t.separation(a, b) = dist;
      t.separation(b, a) = dist;
      if (dist == 0.0) t.coincident.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return t;
}

double davies_bouldin(const Matrix& points, std::span<const int> assignments) {
  const auto t = davies_bouldin_terms(points, assignments);
  if (!t.coincident.empty()) {
    std::cerr << "davies_bouldin: clusters " << t.coincident.front().first << " and "
              << t.coincident.front().second << " share a centroid; reporting +inf\n";
    return std::numeric_limits<double>::infinity();
  }
  const std::size_t k = t.delta.size();
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      worst = std::max(worst, (t.delta[a] + t.delta[b]) / t.separation(a, b));
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

std::string_view to_token(Metric metric) {
  switch (metric) {
    case Metric::nmi: return "nmi";
    case Metric::ri: return "ri";
    case Metric::ari: return "ari";
    case Metric::silhouette: return "silhouette";
    case Metric::davies_bouldin: return "davies_bouldin";
  }
  return "nmi";
}

Metric parse_metric(std::string_view token) {
  for (Metric m : kAllMetrics) {
    if (to_token(m) == token) return m;
  }
  throw Error(ErrorCode::invalid_argument, "unknown metric '" + std::string(token) + "'");
}

double MetricReport::get(Metric metric) const noexcept {
  switch (metric) {
    case Metric::nmi: return nmi;
    case Metric::ri: return ri;
    case Metric::ari: return ari;
    case Metric::silhouette: return silhouette;
    case Metric::davies_bouldin: return davies_bouldin;
  }
  return nmi;
}

MetricReport evaluate(const Matrix& points, const DistanceMatrix& distances,
                      std::span<const int> assignments, std::span<const int> truth) {
  const PartitionPair pair(assignments, truth);
  MetricReport r;
  r.nmi = cluster_sense::nmi(pair);
  r.ri = rand_index(pair);
  r.ari = adjusted_rand_index(pair);
  r.silhouette = cluster_sense::silhouette(distances, assignments);
  r.davies_bouldin = cluster_sense::davies_bouldin(points, assignments);
  return r;
}

MetricReport evaluate(const Matrix& points, std::span<const int> assignments,
                      std::span<const int> truth) {
  return evaluate(points, DistanceMatrix(points), assignments, truth);
}

}  // namespace cluster_sense
