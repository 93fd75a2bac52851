#include "cluster_sense/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "cluster_sense/error.hpp"

namespace cluster_sense {

LabeledDataset resolve(const DatasetSource& source) {
  return std::visit(
      [](const auto& s) -> LabeledDataset {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FileSource>) {
          return load_dataset(s.data, s.labels, s.name);
        } else {
          auto data = generate_dim_like(s.params);
          if (s.name.empty()) return data;
          return LabeledDataset(data.points(), data.labels(), data.n_clusters(), s.name);
        }
      },
      source);
}

std::string source_name(const DatasetSource& source) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FileSource>) {
          return s.name.empty() ? s.data.stem().string() : s.name;
        } else {
          return s.name.empty() ? dim_like_name(s.params.dims) : s.name;
        }
      },
      source);
}

std::size_t RatioStep::resolve(std::size_t dims) const noexcept {
  if (per_dim_divisor > 0) {
    return std::max<std::size_t>(1, dims / static_cast<std::size_t>(per_dim_divisor));
  }
  return static_cast<std::size_t>(std::max(columns, 1));
}

void SweepConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  if (datasets.empty()) fail("sweep needs at least one dataset");
  if (noise_kinds.empty()) fail("sweep needs at least one noise kind");
  if (scalings.empty()) fail("sweep needs at least one scaling");
  if (repeats < 1) fail("repeats must be >= 1");
  if (max_ratio_num <= 0 || max_ratio_den <= 0) fail("max_ratio must be positive");
  if (ratio_step.per_dim_divisor < 0 || (ratio_step.per_dim_divisor == 0 && ratio_step.columns < 1)) {
    fail("ratio_step must be >= 1");
  }
  if (max_iterations < 1) fail("max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) fail("tolerance must be nonnegative");
  if (n_init < 1) fail("n_init must be >= 1");
  if (local_trials < 0) fail("local_trials must be >= 0");
  if (threads < 0) fail("threads must be >= 0");
  std::vector<std::string> names;
  for (const auto& s : datasets) names.push_back(source_name(s));
  std::sort(names.begin(), names.end());
  if (auto it = std::adjacent_find(names.begin(), names.end()); it != names.end()) {
    fail("duplicate dataset name '" + *it + "'");
  }
}

std::vector<std::size_t> augmentation_levels(const SweepConfig& config, std::size_t dims) {
  const auto num = static_cast<std::size_t>(config.max_ratio_num);
  const auto den = static_cast<std::size_t>(config.max_ratio_den);
  const std::size_t top = (num * dims + den - 1) / den;
  const std::size_t step = config.ratio_step.resolve(dims);
  std::vector<std::size_t> levels;
  for (std::size_t m = 0; m <= top; m += step) levels.push_back(m);
  if (levels.back() != top) levels.push_back(top);
  return levels;
}

namespace {

constexpr std::uint64_t kNoiseTag = 0x4e4f495345ULL;
constexpr std::uint64_t kClusterTag = 0x4b4d45414e53ULL;
constexpr std::uint64_t kNoNoise = 0xffffULL;

}  // namespace

std::uint64_t noise_stream_seed(const SweepConfig& config, std::size_t dataset_index,
                                NoiseKind noise, std::optional<int> repeat) {
  const std::uint64_t rep = repeat ? static_cast<std::uint64_t>(*repeat) + 1 : 0;
  return derive_seed({config.master_seed, kNoiseTag, dataset_index,
                      static_cast<std::uint64_t>(noise), rep});
}

std::uint64_t clustering_seed(const SweepConfig& config, const CellKey& key, int repeat) {
  const std::uint64_t noise = key.appended == 0 ? kNoNoise : static_cast<std::uint64_t>(key.noise);
  return derive_seed({config.master_seed, kClusterTag, key.dataset_index, noise,
                      static_cast<std::uint64_t>(key.scaling), key.appended,
                      static_cast<std::uint64_t>(repeat)});
}

RepeatStats summarize_repeats(std::span<const double> values) {
  RepeatStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (!std::isfinite(s.mean)) {
    s.std = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

namespace {

NoiseSpec make_noise_spec(const SweepConfig& config, const DatasetStats& stats,
                          std::size_t dataset_index, NoiseKind kind, std::optional<int> repeat) {
  NoiseSpec spec;
  spec.kind = kind;
  if (config.noise_stats == NoiseStatsSource::pooled) {
    spec.mu = stats.mu;
    spec.sigma = stats.sigma;
  } else {
    double mu = 0.0;
    double sigma = 0.0;
    for (double m : stats.per_feature_mu) mu += m;
    for (double s : stats.per_feature_sigma) sigma += s;
    const auto d = static_cast<double>(stats.per_feature_mu.size());
    spec.mu = mu / d;
    spec.sigma = sigma / d;
  }
  spec.seed = noise_stream_seed(config, dataset_index, kind, repeat);
  return spec;
}

Matrix prepared_matrix(const SweepConfig& config, const LabeledDataset& data,
                       const DatasetStats& stats, const CellKey& key, std::optional<int> repeat) {
  const auto spec = make_noise_spec(config, stats, key.dataset_index, key.noise, repeat);
  return apply_scaling(append_noise_columns(data.points(), spec, key.appended), key.scaling);
}

KMeansConfig kmeans_config(const SweepConfig& config, const LabeledDataset& data,
                           std::uint64_t seed) {
  KMeansConfig k;
  k.k = data.n_clusters();
  k.max_iterations = config.max_iterations;
  k.tolerance = config.tolerance;
  k.relative_tolerance = true;
  k.n_init = config.n_init;
  k.local_trials = config.local_trials;
  k.seed = seed;
  return k;
}

std::vector<ClusteringResult> cell_clusterings(const SweepConfig& config,
                                               const LabeledDataset& data,
                                               const DatasetStats& stats, const CellKey& key,
                                               std::vector<MetricReport>* reports) {
  std::vector<ClusteringResult> results;
  results.reserve(static_cast<std::size_t>(config.repeats));
  if (reports) reports->clear();

  // Noise fixed per level: one matrix and one distance table serve all repeats.
  std::optional<Matrix> shared;
  std::optional<DistanceMatrix> shared_distances;
  if (!config.redraw_noise_per_repeat || key.appended == 0) {
    shared = prepared_matrix(config, data, stats, key, std::nullopt);
    if (reports) shared_distances.emplace(*shared);
  }
  for (int r = 0; r < config.repeats; ++r) {
    std::optional<Matrix> own;
    if (!shared) own = prepared_matrix(config, data, stats, key, r);
    const Matrix& m = shared ? *shared : *own;
    auto result = fit(m, kmeans_config(config, data, clustering_seed(config, key, r)));
    if (reports) {
      reports->push_back(shared_distances
                             ? evaluate(m, *shared_distances, result.assignments, data.labels())
                             : evaluate(m, result.assignments, data.labels()));
    }
    results.push_back(std::move(result));
  }
  return results;
}

struct PreparedDataset {
  LabeledDataset data;
  DatasetStats stats;
  std::vector<std::size_t> levels;
};

struct CellTask {
  CellKey key;
  std::size_t first_cell = 0;  // index into SweepResult::cells
};

struct CellOutcome {
  std::vector<MetricReport> reports;
  std::vector<int> iterations;
  std::vector<double> inertia;
  std::string status = "ok";
  std::string warning;
};

CellOutcome run_task(const SweepConfig& config, const PreparedDataset& prepared,
                     const CellKey& key) {
  CellOutcome out;
  try {
    const auto results = cell_clusterings(config, prepared.data, prepared.stats, key, &out.reports);
    for (const auto& r : results) {
      out.iterations.push_back(r.iterations);
      out.inertia.push_back(r.inertia);
    }
  } catch (const Error& e) {
    out.status = "error:" + std::string(to_token(e.code()));
    out.warning = e.what();
  } catch (const std::exception& e) {
    out.status = "error:runtime";
    out.warning = e.what();
  }
  return out;
}

}  // namespace

int default_thread_count() {
  if (const char* env = std::getenv("CLUSTER_SENSE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<ClusteringResult> run_cell_clusterings(const SweepConfig& config,
                                                  const LabeledDataset& data, const CellKey& key,
                                                  std::vector<MetricReport>* reports) {
  return cell_clusterings(config, data, compute_stats(data), key, reports);
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();

  std::vector<PreparedDataset> prepared;
  prepared.reserve(config.datasets.size());
  for (const auto& source : config.datasets) {
    auto data = resolve(source);
    if (source_name(source) != data.name()) {
      data = LabeledDataset(data.points(), data.labels(), data.n_clusters(), source_name(source));
    }
    auto stats = compute_stats(data);
    auto levels = augmentation_levels(config, data.dims());
    prepared.push_back({std::move(data), std::move(stats), std::move(levels)});
  }

  SweepResult result;
  result.config = config;
  std::vector<CellTask> tasks;
  constexpr std::size_t kMetrics = std::size(kAllMetrics);
  for (std::size_t di = 0; di < prepared.size(); ++di) {
    const auto& p = prepared[di];
    for (NoiseKind noise : config.noise_kinds) {
      for (ScalingKind scaling : config.scalings) {
        for (std::size_t appended : p.levels) {
          tasks.push_back({CellKey{di, noise, scaling, appended}, result.cells.size()});
          for (Metric metric : kAllMetrics) {
            SweepCell cell;
            cell.dataset = p.data.name();
            cell.noise = noise;
            cell.scaling = scaling;
            cell.appended = appended;
            cell.base_dims = p.data.dims();
            cell.ratio = static_cast<double>(appended) / static_cast<double>(p.data.dims());
            cell.metric = metric;
            cell.repeats = config.repeats;
            result.cells.push_back(std::move(cell));
          }
        }
      }
    }
  }

  std::vector<CellOutcome> outcomes(tasks.size());
  const int workers = std::max(
      1, std::min(config.threads > 0 ? config.threads : default_thread_count(),
                  static_cast<int>(tasks.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
      outcomes[t] = run_task(config, prepared[tasks[t].key.dataset_index], tasks[t].key);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  // Ordered reduction: independent of which worker ran which task.
  std::vector<double> values;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& outcome = outcomes[t];
    const auto& key = tasks[t].key;
    if (!outcome.warning.empty()) {
      result.warnings.push_back(prepared[key.dataset_index].data.name() + "/" +
                                std::string(to_token(key.noise)) + "/" +
                                std::string(to_token(key.scaling)) + "/+" +
                                std::to_string(key.appended) + ": " + outcome.warning);
    }
    for (std::size_t m = 0; m < kMetrics; ++m) {
      auto& cell = result.cells[tasks[t].first_cell + m];
      cell.status = outcome.status;
      if (!cell.ok()) {
        cell.mean = std::numeric_limits<double>::quiet_NaN();
        cell.std = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      values.clear();
      for (const auto& r : outcome.reports) values.push_back(r.get(cell.metric));
      const auto stats = summarize_repeats(values);
      cell.mean = stats.mean;
      cell.std = stats.std;
    }
    if (config.retain_raw && outcome.status == "ok") {
      for (std::size_t r = 0; r < outcome.reports.size(); ++r) {
        RawRecord rec;
        rec.dataset = prepared[key.dataset_index].data.name();
        rec.noise = key.noise;
        rec.scaling = key.scaling;
        rec.appended = key.appended;
        rec.ratio = result.cells[tasks[t].first_cell].ratio;
        rec.repeat = static_cast<int>(r);
        rec.metrics = outcome.reports[r];
        rec.iterations = outcome.iterations[r];
        rec.inertia = outcome.inertia[r];
        result.raw.push_back(std::move(rec));
      }
    }
  }
  return result;
}

std::vector<SweepCell> SweepResult::curve(const std::string& dataset, NoiseKind noise,
                                          ScalingKind scaling, Metric metric) const {
  std::vector<SweepCell> out;
  for (const auto& c : cells) {
    if (c.dataset == dataset && c.noise == noise && c.scaling == scaling && c.metric == metric) {
      out.push_back(c);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SweepCell& a, const SweepCell& b) { return a.ratio < b.ratio; });
  return out;
}

std::optional<double> tipping_ratio(std::span<const std::pair<double, double>> curve,
                                    double threshold) {
  std::optional<double> tip;
  for (auto it = curve.rbegin(); it != curve.rend(); ++it) {
    if (!(it->second < threshold)) break;
    tip = it->first;
  }
  return tip;
}

std::vector<TippingPoint> summarize_tipping(const SweepResult& result, Metric metric,
                                            double threshold) {
  // Curves in first-appearance order.
  std::vector<std::tuple<std::string, NoiseKind, ScalingKind>> order;
  std::map<std::tuple<std::string, NoiseKind, ScalingKind>, std::vector<std::pair<double, double>>>
      curves;
  for (const auto& c : result.cells) {
    const auto key = std::make_tuple(c.dataset, c.noise, c.scaling);
    auto [it, inserted] = curves.try_emplace(key);
    if (inserted) order.push_back(key);
    if (c.metric == metric && c.ok()) it->second.emplace_back(c.ratio, c.mean);
  }
  std::vector<TippingPoint> out;
  for (const auto& key : order) {
    auto& points = curves[key];
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                   tipping_ratio(points, threshold)});
  }
  return out;
}

std::vector<TippingPoint> summarize_tipping(const SweepResult& result, std::string_view metric,
                                            double threshold) {
  return summarize_tipping(result, parse_metric(metric), threshold);
}

}  // namespace cluster_sense
