#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cluster_sense/experiment.hpp"

namespace cluster_sense::cli {

inline constexpr std::string_view kSummaryHeader =
    "dataset,noise,scaling,ratio,metric,mean,std,repeats,status";
inline constexpr std::string_view kRawHeader =
    "dataset,noise,scaling,ratio,repeat,nmi,ri,ari,silhouette,davies_bouldin,iterations,inertia";

/// Shortest decimal that round-trips; "nan"/"inf"/"-inf" for non-finite.
std::string format_number(double value);

void write_summary_csv(std::ostream& out, const SweepResult& result);
void write_raw_csv(std::ostream& out, const SweepResult& result);

/// One parsed summary row.
struct SummaryRow {
  std::string dataset;
  NoiseKind noise = NoiseKind::gaussian;
  ScalingKind scaling = ScalingKind::none;
  double ratio = 0.0;
  Metric metric = Metric::nmi;
  double mean = 0.0;
  double std = 0.0;
  int repeats = 0;
  std::string status;

  bool ok() const noexcept { return status == "ok"; }
};

/// Validates the header and every field. Throws ParseError naming the line
/// (and the offending value for unknown metric / noise / scaling tokens).
std::vector<SummaryRow> read_summary_csv(std::istream& in, const std::string& origin);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

}  // namespace cluster_sense::cli
