#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cli/summary_csv.hpp"

namespace cluster_sense::cli {

enum class PanelKind { mean, std };

struct PanelSelection {
  std::optional<Metric> metric;
  std::optional<NoiseKind> noise;
  std::optional<ScalingKind> scaling;
};

struct Series {
  std::string dataset;
  std::vector<double> ratio;
  std::vector<double> mean;
  std::vector<double> std;
};

struct Panel {
  PanelKind kind = PanelKind::mean;
  Metric metric = Metric::nmi;
  NoiseKind noise = NoiseKind::gaussian;
  ScalingKind scaling = ScalingKind::none;
  std::vector<Series> series;  // one per dataset, first-appearance order

  std::string file_name() const;
};

/// Groups ok rows into mean panels and matching std panels, one pair per
/// (metric, noise, scaling) present in the selection.
std::vector<Panel> build_panels(const std::vector<SummaryRow>& rows, const PanelSelection& selection);

/// Self-contained SVG line chart. Mean panels carry +-1 std bands.
std::string render_svg(const Panel& panel);

}  // namespace cluster_sense::cli
