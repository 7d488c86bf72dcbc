#include "qpmsim/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include "qpmsim/errors.hpp"
#include "qpmsim/units.hpp"

namespace qpm {
namespace {

void warn_once(const std::string& key, const std::string& message) {
  static std::mutex mutex;
  static std::set<std::string> seen;
  std::lock_guard lock(mutex);
  if (seen.insert(key).second) std::cerr << "warning: " << message << '\n';
}

template <typename T>
T require(const nlohmann::json& entry, const char* field, const std::string& context) {
  if (!entry.contains(field)) {
    throw ConfigError(context + ": missing field '" + field + "'");
  }
  try {
    return entry.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(context + ": field '" + field + "' has the wrong type");
  }
}

double index_squared(const Medium& m, double lambda, double t) {
  const auto& c = m.coefficients;
  const double l2 = lambda * lambda;
  switch (m.form) {
    case SellmeierForm::standard: {
      double n2 = 1.0;
      for (std::size_t i = 0; i + 1 < c.size(); i += 2) n2 += c[i] * l2 / (l2 - c[i + 1]);
      return n2;
    }
    case SellmeierForm::temperature_extended: {
      const double b = c[1] + c[8] * t * t;
      const double pole = c[2] + c[9] * t * t;
      return c[0] + b / (l2 - pole * pole) + c[4] / (l2 - c[5] * c[5]) +
             c[6] / (l2 - c[7] * c[7]) + c[3] * l2;
    }
  }
  return 0.0;
}

}  // namespace

std::size_t required_coefficient_count(SellmeierForm form) {
  return form == SellmeierForm::temperature_extended ? 10 : 0;
}

SellmeierForm parse_sellmeier_form(const std::string& tag) {
  if (tag == "standard") return SellmeierForm::standard;
  if (tag == "temperature_extended") return SellmeierForm::temperature_extended;
  throw ConfigError("unknown Sellmeier form '" + tag + "'");
}

std::string to_string(SellmeierForm form) {
  return form == SellmeierForm::standard ? "standard" : "temperature_extended";
}

Medium load_medium(const nlohmann::json& entry) {
  if (!entry.is_object()) throw ConfigError("medium entry must be an object");
  Medium m;
  m.name = require<std::string>(entry, "name", "medium");
  const std::string ctx = "medium '" + m.name + "'";
  m.form = parse_sellmeier_form(require<std::string>(entry, "form", ctx));
  m.coefficients = require<std::vector<double>>(entry, "coefficients", ctx);
  const auto range = require<std::vector<double>>(entry, "valid_range_um", ctx);
  if (range.size() != 2) throw ConfigError(ctx + ": valid_range_um must be [min, max]");
  m.valid_range = {range[0], range[1]};
  if (entry.contains("reference_temperature_k")) {
    m.reference_temperature_k = require<double>(entry, "reference_temperature_k", ctx);
  }
  if (entry.contains("source")) m.source = require<std::string>(entry, "source", ctx);

  const std::size_t need = required_coefficient_count(m.form);
  const bool count_ok = need != 0 ? m.coefficients.size() == need
                                  : (m.coefficients.size() >= 2 && m.coefficients.size() % 2 == 0);
  if (!count_ok) {
    std::ostringstream msg;
    msg << ctx << ": coefficient count mismatch (form " << to_string(m.form) << ", got "
        << m.coefficients.size() << ")";
    throw ConfigError(msg.str());
  }
  if (!(m.valid_range.min_um > 0.0) || !(m.valid_range.max_um > m.valid_range.min_um)) {
    throw ConfigError(ctx + ": empty valid range");
  }
  for (double c : m.coefficients) {
    if (!std::isfinite(c)) throw ConfigError(ctx + ": non-finite coefficient");
  }
  return m;
}

MediaLibrary MediaLibrary::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("media") || !doc["media"].is_array()) {
    throw ConfigError("media document: expected an object with a 'media' array");
  }
  MediaLibrary lib;
  lib.version_ = doc.value("version", 0);
  for (const auto& entry : doc["media"]) {
    Medium m = load_medium(entry);
    const std::string key = m.name;
    if (!lib.media_.emplace(key, std::move(m)).second) {
      throw ConfigError("media document: duplicate medium '" + key + "'");
    }
  }
  return lib;
}

MediaLibrary MediaLibrary::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open media file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("media file " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

const Medium& MediaLibrary::at(const std::string& name) const {
  auto it = media_.find(name);
  if (it == media_.end()) throw ConfigError("unknown medium '" + name + "'");
  return it->second;
}

std::vector<std::string> MediaLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : media_) out.push_back(name);
  return out;
}

double refractive_index(const Medium& medium, double wavelength_um, double temperature_k) {
  if (!medium.valid_range.contains(wavelength_um)) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_um << " um outside valid range of '" << medium.name
        << "' [" << medium.valid_range.min_um << ", " << medium.valid_range.max_um << "] um";
    throw DomainError(msg.str());
  }
  if (medium.form == SellmeierForm::standard && temperature_k != medium.reference_temperature_k) {
    warn_once("temperature:" + medium.name,
              "medium '" + medium.name + "' has no temperature terms; temperature ignored");
  }
  const double n2 = index_squared(medium, wavelength_um, temperature_k);
  if (!(n2 > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive n^2 for '" << medium.name << "' at " << wavelength_um << " um";
    throw DomainError(msg.str());
  }
  return std::sqrt(n2);
}

double wavevector(const Medium& medium, double omega, double temperature_k) {
  return refractive_index(medium, wavelength_from_omega(omega), temperature_k) * omega /
         kSpeedOfLight;
}

}  // namespace qpm
