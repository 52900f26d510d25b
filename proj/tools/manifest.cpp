#include "manifest.hpp"

#include <ctime>
#include <fstream>

#include "mllab/errors.hpp"

namespace mllab::cli {

using nlohmann::json;

void write_manifest(const RunManifest& manifest, const std::string& out_dir) {
  json j;
  j["tool_version"] = manifest.tool_version;
  j["scenario"] = manifest.scenario;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config;
  j["options"] = manifest.options;
  j["artifacts"] = manifest.artifacts;
  if (manifest.timestamp.empty()) {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  } else {
    j["timestamp"] = manifest.timestamp;
  }
  std::ofstream os(out_dir + "/manifest.json", std::ios::binary);
  if (!os) throw DataError("cannot write manifest in " + out_dir);
  os << j.dump(2) << "\n";
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open manifest: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("manifest parse failure: " + std::string(e.what()));
  }
  RunManifest m;
  try {
    m.tool_version = j.value("tool_version", "");
    m.scenario = j.at("scenario").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.value("config", json::object());
    m.options = j.value("options", json::object());
    m.artifacts = j.value("artifacts", std::vector<std::string>{});
    m.timestamp = j.value("timestamp", "");
  } catch (const json::exception& e) {
    throw DataError("manifest field error: " + std::string(e.what()));
  }
  return m;
}

}  // namespace mllab::cli
