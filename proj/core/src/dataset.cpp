#include "cluster_sense/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include "cluster_sense/error.hpp"
#include "cluster_sense/random.hpp"

namespace cluster_sense {

LabeledDataset::LabeledDataset(Matrix points, std::vector<int> labels, int n_clusters,
                               std::string name)
    : points_(std::move(points)),
      labels_(std::move(labels)),
      n_clusters_(n_clusters),
      name_(std::move(name)) {
  if (labels_.size() != points_.rows()) {
    throw Error(ErrorCode::invalid_argument, "dataset '" + name_ + "': " +
                                                 std::to_string(labels_.size()) + " labels for " +
                                                 std::to_string(points_.rows()) + " rows");
  }
  if (n_clusters_ < 1) {
    throw Error(ErrorCode::invalid_argument, "dataset '" + name_ + "': n_clusters must be >= 1");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_clusters_), false);
  for (int label : labels_) {
    if (label < 0 || label >= n_clusters_) {
      throw Error(ErrorCode::invalid_argument,
                  "dataset '" + name_ + "': label " + std::to_string(label) + " outside [0, " +
                      std::to_string(n_clusters_) + ")");
    }
    seen[static_cast<std::size_t>(label)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorCode::invalid_argument, "dataset '" + name_ + "': some cluster id is unused");
  }
  if (!points_.all_finite()) {
    throw Error(ErrorCode::non_finite, "dataset '" + name_ + "': non-finite entry");
  }
}

std::string dim_like_name(int dims) { return "dim" + std::to_string(dims); }

LabeledDataset generate_dim_like(const GeneratorParams& p) {
  if (p.dims < 1 || p.n_clusters < 1 || p.points_per_cluster < 1) {
    throw Error(ErrorCode::invalid_argument,
                "generate_dim_like: dims, clusters and points per cluster must be positive");
  }
  if (!(p.separation > 0.0) || !std::isfinite(p.separation)) {
    throw Error(ErrorCode::invalid_argument, "generate_dim_like: separation must be positive");
  }
  const auto k = static_cast<std::size_t>(p.n_clusters);
  const auto d = static_cast<std::size_t>(p.dims);
  const auto per = static_cast<std::size_t>(p.points_per_cluster);

  Matrix centers(k, d);
  Rng center_rng(derive_seed({p.seed, 0x63656e74ULL}));
  std::vector<std::size_t> levels(k);
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::iota(levels.begin(), levels.end(), std::size_t{0});
    // Fisher-Yates with our own integer draw so the permutation is portable.
    for (std::size_t i = k; i > 1; --i) {
      std::swap(levels[i - 1], levels[center_rng.below(i)]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double jitter = center_rng.uniform(-0.1 * p.separation, 0.1 * p.separation);
      centers(c, axis) = static_cast<double>(levels[c]) * p.separation + jitter;
    }
  }

  Matrix points(k * per, d);
  std::vector<int> labels(k * per);
  Rng point_rng(derive_seed({p.seed, 0x706f696eULL}));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < per; ++i) {
      const std::size_t r = c * per + i;
      labels[r] = static_cast<int>(c);
      for (std::size_t axis = 0; axis < d; ++axis) {
        points(r, axis) = centers(c, axis) + point_rng.normal();
      }
    }
  }
  return LabeledDataset(std::move(points), std::move(labels), p.n_clusters, dim_like_name(p.dims));
}

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  // Trailing blank lines are not rows.
  while (!lines.empty() && split_fields(lines.back()).empty()) lines.pop_back();
  return lines;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

LabeledDataset load_dataset(const std::filesystem::path& data_path,
                            const std::filesystem::path& labels_path, std::string name) {
  const std::string data_file = data_path.string();
  const std::string label_file = labels_path.string();
  const auto data_lines = read_lines(data_path);
  const auto label_lines = read_lines(labels_path);
  if (data_lines.empty()) throw ParseError(data_file, 1, "empty data file");
  if (label_lines.empty()) throw ParseError(label_file, 1, "empty label file");

  std::size_t cols = 0;
  std::vector<double> values;
  for (std::size_t i = 0; i < data_lines.size(); ++i) {
    const auto fields = split_fields(data_lines[i]);
    if (fields.empty()) throw ParseError(data_file, i + 1, "empty line");
    if (i == 0) {
      cols = fields.size();
      values.reserve(cols * data_lines.size());
    } else if (fields.size() != cols) {
      throw ParseError(data_file, i + 1,
                       "ragged row: expected " + std::to_string(cols) + " values, found " +
                           std::to_string(fields.size()));
    }
    for (std::string_view f : fields) {
      double v = 0.0;
      if (!parse_number(f, v)) {
        throw ParseError(data_file, i + 1, "non-numeric token '" + std::string(f) + "'");
      }
      if (!std::isfinite(v)) {
        throw ParseError(data_file, i + 1, "non-finite value '" + std::string(f) + "'");
      }
      values.push_back(v);
    }
  }
  if (label_lines.size() != data_lines.size()) {
    throw ParseError(label_file, std::min(label_lines.size(), data_lines.size()) + 1,
                     "line-count mismatch: " + std::to_string(data_lines.size()) +
                         " data rows, " + std::to_string(label_lines.size()) + " labels");
  }

  std::vector<int> labels(label_lines.size());
  std::unordered_map<long long, int> dense;
  for (std::size_t i = 0; i < label_lines.size(); ++i) {
    const auto fields = split_fields(label_lines[i]);
    long long raw = 0;
    if (fields.size() != 1 || !parse_number(fields.front(), raw)) {
      throw ParseError(label_file, i + 1, "expected one integer label");
    }
    const auto [it, inserted] = dense.try_emplace(raw, static_cast<int>(dense.size()));
    labels[i] = it->second;
  }

  Matrix points(data_lines.size(), cols);
  std::copy(values.begin(), values.end(), points.values().begin());
  if (name.empty()) name = data_path.stem().string();
  return LabeledDataset(std::move(points), std::move(labels), static_cast<int>(dense.size()),
                        std::move(name));
}

void write_dataset(const LabeledDataset& data, const std::filesystem::path& data_path,
                   const std::filesystem::path& labels_path) {
  std::ofstream out(data_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + data_path.string());
  char buf[32];
  const Matrix& m = data.points();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out.put(' ');
      const auto res = std::to_chars(buf, buf + sizeof buf, m(r, c));
      out.write(buf, res.ptr - buf);
    }
    out.put('\n');
  }
  if (!out) throw Error(ErrorCode::io, "write failed: " + data_path.string());

  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw Error(ErrorCode::io, "cannot write " + labels_path.string());
  for (int label : data.labels()) lab << label << '\n';
  if (!lab) throw Error(ErrorCode::io, "write failed: " + labels_path.string());
}

DatasetStats compute_stats(const Matrix& points) {
  if (points.rows() < 2) {
    throw Error(ErrorCode::invalid_argument, "compute_stats: need at least 2 rows");
  }
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  DatasetStats s;
  s.per_feature_mu.assign(d, 0.0);
  s.per_feature_sigma.assign(d, 0.0);

  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    auto row = points.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      s.per_feature_mu[c] += row[c];
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    total += s.per_feature_mu[c];
    s.per_feature_mu[c] /= static_cast<double>(n);
  }
  const double count = static_cast<double>(n * d);
  s.mu = d ? total / count : 0.0;

  double global_ss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    auto row = points.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      const double dc = row[c] - s.per_feature_mu[c];
      const double dg = row[c] - s.mu;
      s.per_feature_sigma[c] += dc * dc;
      global_ss += dg * dg;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    s.per_feature_sigma[c] = std::sqrt(s.per_feature_sigma[c] / static_cast<double>(n));
  }
  s.sigma = d ? std::sqrt(global_ss / count) : 0.0;
  return s;
}

}  // namespace cluster_sense
