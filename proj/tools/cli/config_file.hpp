#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cluster_sense/experiment.hpp"

namespace cluster_sense::cli {

/// Parses the line-oriented sweep configuration:
///
///   # comment
///   repeats = 10
///   noise_kinds = gaussian, uniform
///   ratio_step = D/8
///
///   [dataset]
///   dims = 32            # generated ...
///   [dataset]
///   data = dim32/data.txt  # ... or loaded; paths relative to the config file
///   labels = dim32/labels.txt
///
/// Unknown keys, duplicate keys and malformed values throw ParseError.
SweepConfig parse_sweep_config(std::istream& in, const std::string& origin,
                               const std::filesystem::path& base_dir);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Canonical text form of a config, accepted back by parse_sweep_config.
std::string format_sweep_config(const SweepConfig& config);

}  // namespace cluster_sense::cli
