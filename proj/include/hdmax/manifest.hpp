#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace hdmax::cli {

inline constexpr const char *kToolVersion = "1.0.0";

/// Everything needed to re-run a command and reproduce its table.
struct RunManifest {
  std::string command; // e.g. "mc chisq"
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  long long wall_time_ms = 0;
  std::map<std::string, double> tolerance_set;
};

std::string to_json(const RunManifest &m);

/// Throws std::runtime_error on malformed input.
RunManifest manifest_from_json(const std::string &text);

void write_manifest(const RunManifest &m, const std::string &path);
RunManifest read_manifest(const std::string &path);

} // namespace hdmax::cli
