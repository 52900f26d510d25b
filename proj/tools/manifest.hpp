#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace mllab::cli {

/// Record of one seeded run: enough to reproduce every CSV/SVG artifact
/// byte for byte via the replay subcommand.
struct RunManifest {
  std::string tool_version;
  std::string scenario;  // subcommand name
  std::uint64_t seed = 0;
  nlohmann::json config;   // full snapshot after defaults
  nlohmann::json options;  // per-command options (which, rounds, criterion, ...)
  std::vector<std::string> artifacts;  // filenames relative to the out dir
  std::string timestamp;
};

void write_manifest(const RunManifest& manifest, const std::string& out_dir);
RunManifest read_manifest(const std::string& path);

}  // namespace mllab::cli
