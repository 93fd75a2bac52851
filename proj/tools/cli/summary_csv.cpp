#include "cli/summary_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "cluster_sense/error.hpp"

namespace cluster_sense::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

// Dataset names come from configs; quote them if they would break the row.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s == "nan") {
    v = std::nan("");
    return true;
  }
  if (s == "inf") {
    v = INFINITY;
    return true;
  }
  if (s == "-inf") {
    v = -INFINITY;
    return true;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

void write_summary_csv(std::ostream& out, const SweepResult& result) {
  out << kSummaryHeader << '\n';
  for (const auto& c : result.cells) {
    out << csv_field(c.dataset) << ',' << to_token(c.noise) << ',' << to_token(c.scaling) << ','
        << format_number(c.ratio) << ',' << to_token(c.metric) << ',';
    if (c.ok()) out << format_number(c.mean) << ',' << format_number(c.std);
    else out << ',';
    out << ',' << c.repeats << ',' << c.status << '\n';
  }
}

void write_raw_csv(std::ostream& out, const SweepResult& result) {
  out << kRawHeader << '\n';
  for (const auto& r : result.raw) {
    out << csv_field(r.dataset) << ',' << to_token(r.noise) << ',' << to_token(r.scaling) << ','
        << format_number(r.ratio) << ',' << r.repeat << ',' << format_number(r.metrics.nmi) << ','
        << format_number(r.metrics.ri) << ',' << format_number(r.metrics.ari) << ','
        << format_number(r.metrics.silhouette) << ',' << format_number(r.metrics.davies_bouldin)
        << ',' << r.iterations << ',' << format_number(r.inertia) << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin, 1, "empty summary file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSummaryHeader) {
    const auto got = split_csv(line);
    const auto want = split_csv(std::string(kSummaryHeader));
    for (const auto& col : want) {
      if (std::find(got.begin(), got.end(), col) == got.end()) {
        throw ParseError(origin, 1, "missing column '" + col + "'");
      }
    }
    throw ParseError(origin, 1, "header must be exactly '" + std::string(kSummaryHeader) + "'");
  }

  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) {
      throw ParseError(origin, line_no, "expected 9 fields, found " + std::to_string(f.size()));
    }
    SummaryRow row;
    row.dataset = f[0];
    const auto noise = parse_noise_kind(f[1]);
    if (!noise) throw ParseError(origin, line_no, "unknown noise kind '" + f[1] + "'");
    row.noise = *noise;
    const auto scaling = parse_scaling_kind(f[2]);
    if (!scaling) throw ParseError(origin, line_no, "unknown scaling '" + f[2] + "'");
    row.scaling = *scaling;
    if (!parse_double(f[3], row.ratio)) throw ParseError(origin, line_no, "bad ratio '" + f[3] + "'");
    try {
      row.metric = parse_metric(f[4]);
    } catch (const Error&) {
      throw ParseError(origin, line_no, "unknown metric '" + f[4] + "'");
    }
    row.status = f[8];
    if (row.status != "ok" && !row.status.starts_with("error:")) {
      throw ParseError(origin, line_no, "bad status '" + row.status + "'");
    }
    if (row.ok()) {
      if (!parse_double(f[5], row.mean)) throw ParseError(origin, line_no, "bad mean '" + f[5] + "'");
      if (!parse_double(f[6], row.std)) throw ParseError(origin, line_no, "bad std '" + f[6] + "'");
    } else {
      row.mean = row.std = std::nan("");
    }
    const auto [ptr, ec] = std::from_chars(f[7].data(), f[7].data() + f[7].size(), row.repeats);
    if (ec != std::errc() || ptr != f[7].data() + f[7].size()) {
      throw ParseError(origin, line_no, "bad repeats '" + f[7] + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_summary_csv(in, path.string());
}

}  // namespace cluster_sense::cli
