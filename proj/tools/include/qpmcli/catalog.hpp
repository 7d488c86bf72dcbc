#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qpm::cli {

struct CatalogEntry {
  std::string name;
  std::filesystem::path path;
  bool user = false;
  std::vector<std::string> aliases;
  std::string description;
};

/// Directories listed in $QPMSIM_PATH (':'-separated), in order.
std::vector<std::filesystem::path> user_scenario_dirs();

/// Bundled scenarios plus *.json files found in `user_dirs`. A user file whose stem
/// matches a bundled name replaces it; earlier user dirs win over later ones.
std::vector<CatalogEntry> scenario_catalog(const std::filesystem::path& bundled_dir,
                                           const std::vector<std::filesystem::path>& user_dirs);

/// An existing file path is taken as is; otherwise `name` is looked up by name, then alias.
std::optional<std::filesystem::path> resolve_scenario(const std::string& name,
                                                      const std::vector<CatalogEntry>& catalog);

}  // namespace qpm::cli
