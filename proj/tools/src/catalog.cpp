#include "qpmcli/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qpm::cli {

namespace fs = std::filesystem;

namespace {

CatalogEntry describe(const fs::path& path, bool user) {
  CatalogEntry e{path.stem().string(), path, user, {}, {}};
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_object()) {
    if (doc.contains("aliases") && doc["aliases"].is_array()) {
      for (const auto& a : doc["aliases"]) {
        if (a.is_string()) e.aliases.push_back(a.get<std::string>());
      }
    }
    if (doc.contains("description") && doc["description"].is_string()) {
      e.description = doc["description"].get<std::string>();
    }
  }
  return e;
}

std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<fs::path> user_scenario_dirs() {
  std::vector<fs::path> dirs;
  const char* env = std::getenv("QPMSIM_PATH");
  if (!env) return dirs;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ':')) {
    if (!item.empty()) dirs.emplace_back(item);
  }
  return dirs;
}

std::vector<CatalogEntry> scenario_catalog(const fs::path& bundled_dir,
                                           const std::vector<fs::path>& user_dirs) {
  std::map<std::string, CatalogEntry> by_name;
  for (const auto& p : json_files(bundled_dir)) by_name.insert_or_assign(p.stem().string(), describe(p, false));
  for (auto it = user_dirs.rbegin(); it != user_dirs.rend(); ++it) {
    for (const auto& p : json_files(*it)) by_name.insert_or_assign(p.stem().string(), describe(p, true));
  }
  std::vector<CatalogEntry> out;
  for (auto& [_, e] : by_name) out.push_back(std::move(e));
  return out;
}

std::optional<fs::path> resolve_scenario(const std::string& name,
                                         const std::vector<CatalogEntry>& catalog) {
  std::error_code ec;
  if (fs::is_regular_file(name, ec)) return fs::path(name);
  for (const auto& e : catalog) {
    if (e.name == name) return e.path;
  }
  for (const auto& e : catalog) {
    if (std::find(e.aliases.begin(), e.aliases.end(), name) != e.aliases.end()) return e.path;
  }
  return std::nullopt;
}

}  // namespace qpm::cli
