#include "hdmax/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hdmax::cli {

using nlohmann::json;

std::string to_json(const RunManifest &m) {
  json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  j["wall_time_ms"] = m.wall_time_ms;
  j["tolerance_set"] = m.tolerance_set;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.wall_time_ms = j.at("wall_time_ms").get<long long>();
    m.tolerance_set = j.at("tolerance_set").get<std::map<std::string, double>>();
    return m;
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("manifest is missing a field: ") + e.what());
  }
}

void write_manifest(const RunManifest &m, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write manifest " + path);
  out << to_json(m);
}

RunManifest read_manifest(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read manifest " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return manifest_from_json(buf.str());
}

} // namespace hdmax::cli
