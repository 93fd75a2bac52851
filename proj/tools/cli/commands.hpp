#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cluster_sense::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct RunManifest {
  std::filesystem::path config_path;
  std::filesystem::path output_dir;
  /// (kind, path); kind is summary_csv, raw_csv, svg_panel or manifest.
  std::vector<std::pair<std::string, std::filesystem::path>> emitted_files;
};

/// Subcommands take the arguments after the subcommand name.
int cmd_generate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_report(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches `cluster-sense <generate|run|report> ...`.
int main(int argc, char** argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* version() noexcept;

}  // namespace cluster_sense::cli
