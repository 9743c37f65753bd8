#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rlab/experiments.hpp"

namespace rlab {

inline constexpr const char* kToolVersion = "1.0.0";

struct ManifestEntry {
  std::string path;  ///< relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  Json config = Json::object();
  std::string config_hash;
  std::string started_at;
  std::string finished_at;
  std::vector<ManifestEntry> outputs;

  Json to_json() const;
};

/// Current UTC time as ISO 8601 with seconds.
std::string utc_timestamp();

/// Writes a new file under `dir` and records its digest in the manifest.
/// Refuses to overwrite an existing file.
void write_output(const std::filesystem::path& dir, const std::string& name, const std::string& content,
                  RunManifest& manifest);

/// Writes manifest.json next to the outputs.
void write_manifest(const std::filesystem::path& dir, RunManifest& manifest);

/// Line chart of log10 frequency against degree, one polyline per event
/// series, with Wilson whiskers. Records without event rows chart observable
/// medians instead. Throws InvalidArgument when there is nothing to plot.
std::string chart_svg(const ExperimentRecord& record);
void write_chart(const ExperimentRecord& record, const std::filesystem::path& path);

}  // namespace rlab
