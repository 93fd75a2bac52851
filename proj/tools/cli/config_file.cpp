#include "cli/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cluster_sense/error.hpp"

namespace cluster_sense::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string_view::npos ? value.size() : comma;
    out.push_back(trim(value.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Section = std::map<std::string, Entry>;

class Reader {
 public:
  Reader(std::string origin, const Section& section) : origin_(std::move(origin)), s_(section) {}

  bool has(const std::string& key) const { return s_.count(key) != 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const auto it = s_.find(key);
    throw ParseError(origin_, it == s_.end() ? 0 : it->second.line, key + ": " + msg);
  }

  template <typename T>
  std::optional<T> integer(const std::string& key) const {
    const auto it = s_.find(key);
    if (it == s_.end()) return std::nullopt;
    T v{};
    const auto& text = it->second.value;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) fail(key, "expected an integer");
    return v;
  }

  std::optional<double> real(const std::string& key) const {
    const auto it = s_.find(key);
    if (it == s_.end()) return std::nullopt;
    double v = 0.0;
    const auto& text = it->second.value;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) fail(key, "expected a number");
    return v;
  }

  std::optional<bool> boolean(const std::string& key) const {
    const auto it = s_.find(key);
    if (it == s_.end()) return std::nullopt;
    const auto& v = it->second.value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key, "expected true or false");
  }

  std::optional<std::string> text(const std::string& key) const {
    const auto it = s_.find(key);
    if (it == s_.end()) return std::nullopt;
    return it->second.value;
  }

 private:
  std::string origin_;
  const Section& s_;
};

const std::set<std::string> kSweepKeys = {
    "noise_kinds",    "scalings",   "max_ratio", "ratio_step",   "repeats",
    "master_seed",    "redraw_noise_per_repeat", "noise_stats",  "max_iterations",
    "tolerance",      "n_init",     "local_trials", "threads"};
const std::set<std::string> kDatasetKeys = {"name", "data",        "labels",     "dims",
                                            "clusters", "per_cluster", "separation", "seed"};

// "3", "3:1", "3/2" or a plain decimal such as "1.5".
std::optional<std::pair<std::int64_t, std::int64_t>> parse_ratio(std::string_view text) {
  auto parse_int = [](std::string_view s, std::int64_t& v) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  const auto sep = text.find_first_of(":/");
  if (sep != std::string_view::npos) {
    std::int64_t num = 0, den = 0;
    if (!parse_int(trim(text.substr(0, sep)), num) || !parse_int(trim(text.substr(sep + 1)), den)) {
      return std::nullopt;
    }
    return std::make_pair(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    std::int64_t num = 0;
    if (!parse_int(text, num)) return std::nullopt;
    return std::make_pair(num, std::int64_t{1});
  }
  std::string digits(text.substr(0, dot));
  const auto frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 9) return std::nullopt;
  digits += frac;
  std::int64_t num = 0;
  if (!parse_int(digits, num)) return std::nullopt;
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const auto g = std::gcd(num, den);
  return std::make_pair(num / g, den / g);
}

DatasetSource parse_dataset(const Reader& r, std::size_t index, const std::string& origin,
                            std::size_t header_line, const std::filesystem::path& base_dir) {
  const bool file = r.has("data") || r.has("labels");
  const bool generated = r.has("dims") || r.has("clusters") || r.has("per_cluster") ||
                         r.has("separation") || r.has("seed");
  if (file && generated) {
    throw ParseError(origin, header_line, "[dataset] mixes file keys with generator keys");
  }
  if (file) {
    if (!r.has("data") || !r.has("labels")) {
      throw ParseError(origin, header_line, "[dataset] needs both data and labels");
    }
    FileSource s;
    s.data = *r.text("data");
    s.labels = *r.text("labels");
    if (s.data.is_relative()) s.data = base_dir / s.data;
    if (s.labels.is_relative()) s.labels = base_dir / s.labels;
    s.name = r.text("name").value_or(std::filesystem::path(*r.text("data")).stem().string());
    return s;
  }
  if (!r.has("dims")) {
    throw ParseError(origin, header_line,
                     "[dataset] #" + std::to_string(index + 1) + " needs data/labels or dims");
  }
  GeneratedSource s;
  s.params.dims = *r.integer<int>("dims");
  s.params.n_clusters = r.integer<int>("clusters").value_or(16);
  s.params.points_per_cluster = r.integer<int>("per_cluster").value_or(64);
  s.params.separation = r.real("separation").value_or(10.0);
  s.params.seed = r.integer<std::uint64_t>("seed").value_or(index);
  if (s.params.dims < 1) r.fail("dims", "must be positive");
  if (s.params.n_clusters < 1) r.fail("clusters", "must be positive");
  if (s.params.points_per_cluster < 1) r.fail("per_cluster", "must be positive");
  if (!(s.params.separation > 0.0)) r.fail("separation", "must be positive");
  s.name = r.text("name").value_or(dim_like_name(s.params.dims));
  return s;
}

void apply_sweep(SweepConfig& c, const Reader& r) {
  if (auto v = r.text("noise_kinds")) {
    c.noise_kinds.clear();
    for (auto tok : split_list(*v)) {
      auto kind = parse_noise_kind(tok);
      if (!kind) r.fail("noise_kinds", "unknown noise kind '" + std::string(tok) + "'");
      if (std::find(c.noise_kinds.begin(), c.noise_kinds.end(), *kind) == c.noise_kinds.end()) {
        c.noise_kinds.push_back(*kind);
      }
    }
  }
  if (auto v = r.text("scalings")) {
    c.scalings.clear();
    for (auto tok : split_list(*v)) {
      auto kind = parse_scaling_kind(tok);
      if (!kind) r.fail("scalings", "unknown scaling '" + std::string(tok) + "'");
      if (std::find(c.scalings.begin(), c.scalings.end(), *kind) == c.scalings.end()) {
        c.scalings.push_back(*kind);
      }
    }
  }
  if (auto v = r.text("max_ratio")) {
    const auto ratio = parse_ratio(*v);
    if (!ratio || ratio->first <= 0 || ratio->second <= 0) {
      r.fail("max_ratio", "expected a positive ratio such as 3:1 or 1.5");
    }
    c.max_ratio_num = ratio->first;
    c.max_ratio_den = ratio->second;
  }
  if (auto v = r.text("ratio_step")) {
    std::string_view text = *v;
    if (text.starts_with("D/")) {
      int divisor = 0;
      const auto tail = text.substr(2);
      const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), divisor);
      if (ec != std::errc() || ptr != tail.data() + tail.size() || divisor < 1) {
        r.fail("ratio_step", "expected D/<positive integer>");
      }
      c.ratio_step = RatioStep{1, divisor};
    } else {
      const auto cols = r.integer<int>("ratio_step");
      if (*cols < 1) r.fail("ratio_step", "must be >= 1");
      c.ratio_step = RatioStep{*cols, 0};
    }
  }
  if (auto v = r.integer<int>("repeats")) {
    if (*v < 1) r.fail("repeats", "must be >= 1");
    c.repeats = *v;
  }
  if (auto v = r.integer<std::uint64_t>("master_seed")) c.master_seed = *v;
  if (auto v = r.boolean("redraw_noise_per_repeat")) c.redraw_noise_per_repeat = *v;
  if (auto v = r.text("noise_stats")) {
    if (*v == "pooled") {
      c.noise_stats = NoiseStatsSource::pooled;
    } else if (*v == "per_feature") {
      c.noise_stats = NoiseStatsSource::per_feature;
    } else {
      r.fail("noise_stats", "expected pooled or per_feature");
    }
  }
  if (auto v = r.integer<int>("max_iterations")) {
    if (*v < 1) r.fail("max_iterations", "must be >= 1");
    c.max_iterations = *v;
  }
  if (auto v = r.real("tolerance")) {
    if (!(*v >= 0.0)) r.fail("tolerance", "must be nonnegative");
    c.tolerance = *v;
  }
  if (auto v = r.integer<int>("n_init")) {
    if (*v < 1) r.fail("n_init", "must be >= 1");
    c.n_init = *v;
  }
  if (auto v = r.integer<int>("local_trials")) {
    if (*v < 0) r.fail("local_trials", "must be >= 0");
    c.local_trials = *v;
  }
  if (auto v = r.integer<int>("threads")) {
    if (*v < 0) r.fail("threads", "must be >= 0");
    c.threads = *v;
  }
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in, const std::string& origin,
                               const std::filesystem::path& base_dir) {
  Section sweep;
  std::vector<std::pair<std::size_t, Section>> datasets;  // header line, keys
  Section* current = &sweep;
  const std::set<std::string>* allowed = &kSweepKeys;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[dataset]") {
        datasets.emplace_back(line_no, Section{});
        current = &datasets.back().second;
        allowed = &kDatasetKeys;
      } else if (line == "[sweep]") {
        current = &sweep;
        allowed = &kSweepKeys;
      } else {
        throw ParseError(origin, line_no, "unknown section " + std::string(line));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(origin, line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!allowed->count(key)) throw ParseError(origin, line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ParseError(origin, line_no, "empty value for '" + key + "'");
    if (!current->emplace(key, Entry{value, line_no}).second) {
      throw ParseError(origin, line_no, "duplicate key '" + key + "'");
    }
  }

  SweepConfig config;
  apply_sweep(config, Reader(origin, sweep));
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    config.datasets.push_back(
        parse_dataset(Reader(origin, datasets[i].second), i, origin, datasets[i].first, base_dir));
  }
  if (config.datasets.empty()) throw ParseError(origin, line_no, "no [dataset] section");
  try {
    config.validate();
  } catch (const Error& e) {
    throw ParseError(origin, line_no, e.what());
  }
  return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config " + path.string());
  return parse_sweep_config(in, path.string(), path.parent_path());
}

std::string format_sweep_config(const SweepConfig& c) {
  std::ostringstream out;
  auto join = [](const auto& items) {
    std::string s;
    for (const auto& item : items) {
      if (!s.empty()) s += ", ";
      s += to_token(item);
    }
    return s;
  };
  out << "noise_kinds = " << join(c.noise_kinds) << '\n';
  out << "scalings = " << join(c.scalings) << '\n';
  out << "max_ratio = " << c.max_ratio_num << ':' << c.max_ratio_den << '\n';
  if (c.ratio_step.per_dim_divisor > 0) {
    out << "ratio_step = D/" << c.ratio_step.per_dim_divisor << '\n';
  } else {
    out << "ratio_step = " << c.ratio_step.columns << '\n';
  }
  out << "repeats = " << c.repeats << '\n';
  out << "master_seed = " << c.master_seed << '\n';
  out << "redraw_noise_per_repeat = " << (c.redraw_noise_per_repeat ? "true" : "false") << '\n';
  out << "noise_stats = " << (c.noise_stats == NoiseStatsSource::pooled ? "pooled" : "per_feature")
      << '\n';
  out << "max_iterations = " << c.max_iterations << '\n';
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, c.tolerance);
  out << "tolerance = " << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  out << "n_init = " << c.n_init << '\n';
  out << "local_trials = " << c.local_trials << '\n';
  out << "threads = " << c.threads << '\n';
  for (const auto& source : c.datasets) {
    out << "\n[dataset]\n";
    if (const auto* f = std::get_if<FileSource>(&source)) {
      out << "name = " << f->name << '\n';
      out << "data = " << f->data.string() << '\n';
      out << "labels = " << f->labels.string() << '\n';
    } else {
      const auto& g = std::get<GeneratedSource>(source);
      out << "name = " << source_name(source) << '\n';
      out << "dims = " << g.params.dims << '\n';
      out << "clusters = " << g.params.n_clusters << '\n';
      out << "per_cluster = " << g.params.points_per_cluster << '\n';
      const auto sep = std::to_chars(buf, buf + sizeof buf, g.params.separation);
      out << "separation = " << std::string_view(buf, static_cast<std::size_t>(sep.ptr - buf))
          << '\n';
      out << "seed = " << g.params.seed << '\n';
    }
  }
  return out.str();
}

}  // namespace cluster_sense::cli
