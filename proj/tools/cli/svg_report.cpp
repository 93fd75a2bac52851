#include "cli/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "cluster_sense/error.hpp"

namespace cluster_sense::cli {

std::string Panel::file_name() const {
  std::string name = kind == PanelKind::mean ? "mean_" : "std_";
  name += to_token(metric);
  name += '_';
  name += to_token(noise);
  name += '_';
  name += to_token(scaling);
  return name + ".svg";
}

std::vector<Panel> build_panels(const std::vector<SummaryRow>& rows,
                                const PanelSelection& selection) {
  using Key = std::tuple<Metric, NoiseKind, ScalingKind>;
  std::vector<Key> order;
  std::map<Key, std::vector<const SummaryRow*>> groups;
  for (const auto& row : rows) {
    if (!row.ok()) continue;
    if (selection.metric && row.metric != *selection.metric) continue;
    if (selection.noise && row.noise != *selection.noise) continue;
    if (selection.scaling && row.scaling != *selection.scaling) continue;
    const Key key{row.metric, row.noise, row.scaling};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }
  if (order.empty()) throw Error(ErrorCode::invalid_argument, "selection matches no ok rows");
  std::sort(order.begin(), order.end());

  std::vector<Panel> panels;
  for (PanelKind kind : {PanelKind::mean, PanelKind::std}) {
    for (const auto& key : order) {
      Panel p;
      p.kind = kind;
      std::tie(p.metric, p.noise, p.scaling) = key;
      for (const SummaryRow* row : groups[key]) {
        auto it = std::find_if(p.series.begin(), p.series.end(),
                               [&](const Series& s) { return s.dataset == row->dataset; });
        if (it == p.series.end()) {
          p.series.push_back(Series{row->dataset, {}, {}, {}});
          it = std::prev(p.series.end());
        }
        it->ratio.push_back(row->ratio);
        it->mean.push_back(row->mean);
        it->std.push_back(row->std);
      }
      for (auto& s : p.series) {
        std::vector<std::size_t> idx(s.ratio.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return s.ratio[a] < s.ratio[b]; });
        Series sorted{s.dataset, {}, {}, {}};
        for (std::size_t i : idx) {
          sorted.ratio.push_back(s.ratio[i]);
          sorted.mean.push_back(s.mean[i]);
          sorted.std.push_back(s.std[i]);
        }
        s = std::move(sorted);
      }
      panels.push_back(std::move(p));
    }
  }
  return panels;
}

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Panel& panel) {
  const bool mean_panel = panel.kind == PanelKind::mean;
  double x_max = 0.0;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  auto widen = [&](double v) {
    if (!std::isfinite(v)) return;
    y_lo = std::min(y_lo, v);
    y_hi = std::max(y_hi, v);
  };
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.ratio.size(); ++i) {
      x_max = std::max(x_max, s.ratio[i]);
      if (mean_panel) {
        widen(s.mean[i] - s.std[i]);
        widen(s.mean[i] + s.std[i]);
      } else {
        widen(s.std[i]);
      }
    }
  }
  if (!std::isfinite(y_lo)) y_lo = y_hi = 0.0;
  if (!mean_panel) y_lo = std::min(y_lo, 0.0);
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;
  if (x_max <= 0.0) x_max = 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + x / x_max * plot_w; };
  auto py = [&](double y) {
    const double clamped = std::clamp(y, y_lo, y_hi);
    return kTop + (y_hi - clamped) / (y_hi - y_lo) * plot_h;
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string title = std::string(mean_panel ? "mean " : "std ") +
                            std::string(to_token(panel.metric)) + " | " +
                            std::string(to_token(panel.noise)) + " | " +
                            std::string(to_token(panel.scaling));
  o << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" "
    << "font-size=\"15\">" << escape(title) << "</text>\n";

  // Axes and ticks.
  o << "<g stroke=\"#444\" stroke-width=\"1\">\n";
  o << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\""
    << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(kTop + plot_h) << "\"/>\n";
  o << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
    << "\" y2=\"" << fmt(kTop + plot_h) << "\"/>\n";
  o << "</g>\n<g font-size=\"11\" fill=\"#222\">\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x_max * t / kTicks;
    const double yv = y_lo + (y_hi - y_lo) * t / kTicks;
    o << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(kTop + plot_h + 16)
      << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(yv) + 4)
      << "\" text-anchor=\"end\">" << fmt(yv, 3) << "</text>\n";
    o << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(yv)) << "\" x2=\""
      << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(py(yv)) << "\" stroke=\"#eee\"/>\n";
  }
  o << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 12)
    << "\" text-anchor=\"middle\">random : informative features</text>\n";
  o << "</g>\n";

  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const auto& s = panel.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    const auto& ys = mean_panel ? s.mean : s.std;
    if (mean_panel && !s.ratio.empty()) {
      o << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.ratio.size(); ++i) {
        o << fmt(px(s.ratio[i])) << ',' << fmt(py(s.mean[i] + s.std[i])) << ' ';
      }
      for (std::size_t i = s.ratio.size(); i-- > 0;) {
        o << fmt(px(s.ratio[i])) << ',' << fmt(py(s.mean[i] - s.std[i])) << ' ';
      }
      o << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.ratio.size(); ++i) {
      o << fmt(px(s.ratio[i])) << ',' << fmt(py(ys[i])) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(si);
    o << "<line x1=\"" << fmt(kWidth - kRight + 14) << "\" y1=\"" << fmt(ly) << "\" x2=\""
      << fmt(kWidth - kRight + 34) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fmt(kWidth - kRight + 40) << "\" y=\"" << fmt(ly + 4)
      << "\" font-size=\"12\">" << escape(s.dataset) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace cluster_sense::cli
