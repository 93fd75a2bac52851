#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/config_file.hpp"
#include "cli/summary_csv.hpp"
#include "cli/svg_report.hpp"
#include "cluster_sense/dataset.hpp"
#include "cluster_sense/error.hpp"
#include "cluster_sense/experiment.hpp"

namespace cluster_sense::cli {

namespace fs = std::filesystem;

const char* version() noexcept { return CLUSTER_SENSE_VERSION; }

namespace {

// CLI11 parse errors become exit status 2; --help prints and returns 0.
std::optional<int> parse_args(CLI::App& app, const std::vector<std::string>& args,
                              std::ostream& out, std::ostream& err) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << '\n';
    err << "run with --help for usage\n";
    return kExitUsage;
  }
  return std::nullopt;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::io, "cannot create output directory " + dir.string());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  return out;
}

void write_manifest(RunManifest& manifest, const std::string& command,
                    const std::string& config_text) {
  const fs::path path = manifest.output_dir / "manifest.json";
  manifest.emitted_files.emplace_back("manifest", path);
  nlohmann::ordered_json j;
  j["tool"] = "cluster-sense";
  j["version"] = version();
  j["command"] = command;
  j["created_utc"] = utc_timestamp();
  j["config_path"] = manifest.config_path.string();
  j["output_dir"] = manifest.output_dir.string();
  if (!config_text.empty()) j["config"] = config_text;
  auto files = nlohmann::ordered_json::array();
  for (const auto& [kind, p] : manifest.emitted_files) {
    files.push_back({{"kind", kind}, {"path", p.string()}});
  }
  j["emitted_files"] = files;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io, "write failed: " + path.string());
}

}  // namespace

int cmd_generate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Write a synthetic Dim-D style dataset (data.txt, labels.txt)", "generate"};
  GeneratorParams params;
  params.n_clusters = 16;
  params.points_per_cluster = 64;
  params.separation = 10.0;
  std::string out_dir;
  app.add_option("--dims", params.dims, "Number of features")->required()->check(CLI::Range(1, std::numeric_limits<int>::max()));
  app.add_option("--clusters", params.n_clusters, "Number of clusters")
      ->capture_default_str()
      ->check(CLI::Range(1, std::numeric_limits<int>::max()));
  app.add_option("--per-cluster", params.points_per_cluster, "Points per cluster")
      ->capture_default_str()
      ->check(CLI::Range(1, std::numeric_limits<int>::max()));
  app.add_option("--separation", params.separation, "Grid spacing between cluster centers")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", params.seed, "Random seed")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->required();
  if (auto code = parse_args(app, args, out, err)) return *code;

  try {
    const auto data = generate_dim_like(params);
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_dataset(data, dir / "data.txt", dir / "labels.txt");
    out << "wrote " << data.size() << " points x " << data.dims() << " features, "
        << data.n_clusters() << " clusters to " << dir.string() << '\n';
  } catch (const std::exception& e) {
    err << "generate: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run an irrelevant-feature sweep and write summary CSV", "run"};
  std::string config_path;
  std::string out_dir;
  bool raw = false;
  std::optional<int> threads;
  app.add_option("--config", config_path, "Sweep configuration file")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_flag("--raw", raw, "Also write per-repeat raw.csv");
  app.add_option("--threads", threads, "Worker count (overrides config and CLUSTER_SENSE_THREADS)")
      ->check(CLI::NonNegativeNumber);
  if (auto code = parse_args(app, args, out, err)) return *code;

  try {
    auto config = load_sweep_config(config_path);
    if (threads) config.threads = *threads;
    config.retain_raw = raw;
    const auto result = run_sweep(config);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';

    RunManifest manifest{config_path, out_dir, {}};
    ensure_dir(manifest.output_dir);
    const fs::path summary = manifest.output_dir / "summary.csv";
    {
      auto f = open_out(summary);
      write_summary_csv(f, result);
      if (!f) throw Error(ErrorCode::io, "write failed: " + summary.string());
    }
    manifest.emitted_files.emplace_back("summary_csv", summary);
    if (raw) {
      const fs::path raw_path = manifest.output_dir / "raw.csv";
      auto f = open_out(raw_path);
      write_raw_csv(f, result);
      if (!f) throw Error(ErrorCode::io, "write failed: " + raw_path.string());
      manifest.emitted_files.emplace_back("raw_csv", raw_path);
    }
    write_manifest(manifest, "run", format_sweep_config(config));

    const auto failed = std::count_if(result.cells.begin(), result.cells.end(),
                                      [](const SweepCell& c) { return !c.ok(); });
    out << "wrote " << result.cells.size() << " summary rows to " << summary.string();
    if (failed) out << " (" << failed << " error-marked)";
    out << '\n';
  } catch (const std::exception& e) {
    err << "run: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Render SVG metric-vs-ratio panels from a summary CSV", "report"};
  std::string summary_path;
  std::string out_dir;
  std::string metric, noise, scaling;
  app.add_option("--summary", summary_path, "summary.csv written by run")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--metric", metric, "Only this metric");
  app.add_option("--noise", noise, "Only this noise kind");
  app.add_option("--scaling", scaling, "Only this scaling");
  if (auto code = parse_args(app, args, out, err)) return *code;

  PanelSelection selection;
  try {
    if (!metric.empty()) selection.metric = parse_metric(metric);
  } catch (const Error& e) {
    err << "report: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!noise.empty()) {
    selection.noise = parse_noise_kind(noise);
    if (!selection.noise) {
      err << "report: unknown noise kind '" << noise << "'\n";
      return kExitUsage;
    }
  }
  if (!scaling.empty()) {
    selection.scaling = parse_scaling_kind(scaling);
    if (!selection.scaling) {
      err << "report: unknown scaling '" << scaling << "'\n";
      return kExitUsage;
    }
  }

  try {
    const auto rows = read_summary_csv(fs::path(summary_path));
    const auto panels = build_panels(rows, selection);
    RunManifest manifest{summary_path, out_dir, {}};
    ensure_dir(manifest.output_dir);
    for (const auto& panel : panels) {
      const fs::path path = manifest.output_dir / panel.file_name();
      auto f = open_out(path);
      f << render_svg(panel);
      if (!f) throw Error(ErrorCode::io, "write failed: " + path.string());
      manifest.emitted_files.emplace_back("svg_panel", path);
    }
    write_manifest(manifest, "report", {});
    out << "wrote " << panels.size() << " panels to " << manifest.output_dir.string() << '\n';
  } catch (const std::exception& e) {
    err << "report: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static constexpr const char* kUsage =
      "usage: cluster-sense <command> [options]\n"
      "\n"
      "commands:\n"
      "  generate   write a synthetic labeled dataset\n"
      "  run        run a noise-injection sweep from a config file\n"
      "  report     render SVG panels from a summary CSV\n"
      "\n"
      "Run `cluster-sense <command> --help` for command options.\n"
      "CLUSTER_SENSE_THREADS caps the sweep worker count (0 = auto).\n";
  if (args.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  const std::string& command = args.front();
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (command == "generate") return cmd_generate(rest, out, err);
  if (command == "run") return cmd_run(rest, out, err);
  if (command == "report") return cmd_report(rest, out, err);
  if (command == "--help" || command == "-h" || command == "help") {
    out << kUsage;
    return kExitOk;
  }
  if (command == "--version") {
    out << "cluster-sense " << version() << '\n';
    return kExitOk;
  }
  err << "cluster-sense: unknown command '" << command << "'\n\n" << kUsage;
  return kExitUsage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cluster_sense::cli
