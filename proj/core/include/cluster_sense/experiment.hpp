#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cluster_sense/dataset.hpp"
#include "cluster_sense/kmeans.hpp"
#include "cluster_sense/metrics.hpp"
#include "cluster_sense/perturb.hpp"
#include "cluster_sense/scale.hpp"

namespace cluster_sense {

struct FileSource {
  std::string name;
  std::filesystem::path data;
  std::filesystem::path labels;
};

struct GeneratedSource {
  std::string name;  // defaults to dim<D> when empty
  GeneratorParams params;
};

using DatasetSource = std::variant<FileSource, GeneratedSource>;

LabeledDataset resolve(const DatasetSource& source);
std::string source_name(const DatasetSource& source);

/// Columns appended per augmentation level: either a fixed count or D / divisor.
struct RatioStep {
  int columns = 1;
  int per_dim_divisor = 0;  // > 0 selects D / divisor (at least 1)

  std::size_t resolve(std::size_t dims) const noexcept;
  friend bool operator==(const RatioStep&, const RatioStep&) = default;
};

/// Where noise mu and sigma come from.
enum class NoiseStatsSource {
  pooled,       // mean and population std over all n*D entries
  per_feature,  // mean of per-feature means and mean of per-feature stds
};

struct SweepConfig {
  std::vector<DatasetSource> datasets;
  std::vector<NoiseKind> noise_kinds{NoiseKind::gaussian, NoiseKind::uniform};
  std::vector<ScalingKind> scalings{ScalingKind::none, ScalingKind::centered,
                                    ScalingKind::standardized};
  /// Largest appended:D ratio as a fraction (3:1 by default).
  std::int64_t max_ratio_num = 3;
  std::int64_t max_ratio_den = 1;
  RatioStep ratio_step;
  int repeats = 50;
  std::uint64_t master_seed = 0;
  bool redraw_noise_per_repeat = false;
  NoiseStatsSource noise_stats = NoiseStatsSource::pooled;
  int max_iterations = 300;
  double tolerance = 1e-4;
  /// Seedings per clustering run (best inertia kept) and D^2 candidates per
  /// seeding step; 0 trials means 2 + floor(ln k).
  int n_init = 10;
  int local_trials = 0;
  bool retain_raw = false;
  /// Worker count; 0 reads CLUSTER_SENSE_THREADS, falling back to hardware.
  int threads = 0;

  /// Throws Error(invalid_argument) on out-of-range settings.
  void validate() const;
};

/// Appended-column counts visited for a dataset of `dims` features:
/// 0, step, 2 step, ... up to and including ceil(max_ratio * dims).
std::vector<std::size_t> augmentation_levels(const SweepConfig& config, std::size_t dims);

struct CellKey {
  std::size_t dataset_index = 0;
  NoiseKind noise = NoiseKind::gaussian;
  ScalingKind scaling = ScalingKind::none;
  std::size_t appended = 0;
};

/// Stream seed for the noise columns of (dataset, noise) and, when noise is
/// redrawn, of a specific repeat.
std::uint64_t noise_stream_seed(const SweepConfig& config, std::size_t dataset_index,
                                NoiseKind noise, std::optional<int> repeat);

/// k-means seed for one repeat of a cell. The noise kind does not enter at
/// appended == 0, so the two baseline cells share their clusterings.
std::uint64_t clustering_seed(const SweepConfig& config, const CellKey& key, int repeat);

/// Mean and population std of one metric in one cell.
struct SweepCell {
  std::string dataset;
  NoiseKind noise = NoiseKind::gaussian;
  ScalingKind scaling = ScalingKind::none;
  std::size_t appended = 0;
  std::size_t base_dims = 0;
  double ratio = 0.0;
  Metric metric = Metric::nmi;
  double mean = 0.0;
  double std = 0.0;
  int repeats = 0;
  std::string status = "ok";  // "ok" or "error:<code>"

  bool ok() const noexcept { return status == "ok"; }
};

/// One clustering run.
struct RawRecord {
  std::string dataset;
  NoiseKind noise = NoiseKind::gaussian;
  ScalingKind scaling = ScalingKind::none;
  std::size_t appended = 0;
  double ratio = 0.0;
  int repeat = 0;
  MetricReport metrics;
  int iterations = 0;
  double inertia = 0.0;
};

struct SweepResult {
  /// Ordered by dataset, noise, scaling, level, then metric in kAllMetrics order.
  std::vector<SweepCell> cells;
  std::vector<RawRecord> raw;  // filled when config.retain_raw
  SweepConfig config;
  std::vector<std::string> warnings;

  /// Cells of one curve, ordered by ratio.
  std::vector<SweepCell> curve(const std::string& dataset, NoiseKind noise, ScalingKind scaling,
                               Metric metric) const;
};

/// Mean and population std of one cell's metric values.
struct RepeatStats {
  double mean = 0.0;
  double std = 0.0;
};
RepeatStats summarize_repeats(std::span<const double> values);

/// Clusters one cell (all repeats) exactly as run_sweep does.
std::vector<ClusteringResult> run_cell_clusterings(const SweepConfig& config,
                                                  const LabeledDataset& data, const CellKey& key,
                                                  std::vector<MetricReport>* reports = nullptr);

/// Full sweep over datasets x noise kinds x scalings x levels. Failing cells
/// are recorded with an error status instead of aborting.
SweepResult run_sweep(const SweepConfig& config);

/// Worker count used when config.threads == 0.
int default_thread_count();

struct TippingPoint {
  std::string dataset;
  NoiseKind noise = NoiseKind::gaussian;
  ScalingKind scaling = ScalingKind::none;
  std::optional<double> ratio;  // empty when the curve never settles below
};

/// Smallest sampled ratio from which the mean stays below threshold for all
/// larger ratios, per (dataset, noise, scaling) curve. Error cells are skipped.
std::vector<TippingPoint> summarize_tipping(const SweepResult& result, Metric metric,
                                            double threshold);
std::vector<TippingPoint> summarize_tipping(const SweepResult& result, std::string_view metric,
                                            double threshold);

/// Tipping point of a single (ratio, mean) curve sorted by ratio.
std::optional<double> tipping_ratio(std::span<const std::pair<double, double>> curve,
                                    double threshold);

}  // namespace cluster_sense
