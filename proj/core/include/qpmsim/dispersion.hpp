#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qpm {

enum class SellmeierForm {
  /// n^2 = 1 + sum_i B_i l^2 / (l^2 - C_i); coefficients are (B_1, C_1, B_2, C_2, ...),
  /// C_i in um^2. Has no temperature dependence.
  standard,
  /// n^2 = A + (B + b T^2) / (l^2 - (C + c T^2)^2) + E / (l^2 - F^2) + G / (l^2 - H^2) + D l^2,
  /// coefficients (A, B, C, D, E, F, G, H, b, c), T in kelvin.
  temperature_extended,
};

struct WavelengthRange {
  double min_um = 0.0;
  double max_um = 0.0;
  bool contains(double wavelength_um) const {
    return wavelength_um >= min_um && wavelength_um <= max_um;
  }
};

/// A dispersive material. Immutable after construction.
struct Medium {
  std::string name;
  SellmeierForm form = SellmeierForm::standard;
  std::vector<double> coefficients;
  WavelengthRange valid_range;
  double reference_temperature_k = 293.0;
  std::string source;
};

/// Number of coefficients `form` requires, or 0 if any even count >= 2 is allowed.
std::size_t required_coefficient_count(SellmeierForm form);

SellmeierForm parse_sellmeier_form(const std::string& tag);
std::string to_string(SellmeierForm form);

/// Validates and builds a medium from one key-value entry:
/// {"name", "form", "coefficients", "valid_range_um": [min, max],
///  optional "reference_temperature_k", optional "source"}.
Medium load_medium(const nlohmann::json& entry);

/// A versioned document holding several media, keyed by name.
class MediaLibrary {
 public:
  static MediaLibrary from_json(const nlohmann::json& doc);
  static MediaLibrary from_file(const std::filesystem::path& path);

  const Medium& at(const std::string& name) const;
  bool contains(const std::string& name) const { return media_.count(name) != 0; }
  std::vector<std::string> names() const;
  int version() const { return version_; }

 private:
  int version_ = 0;
  std::map<std::string, Medium> media_;
};

/// Extraordinary refractive index at vacuum wavelength `wavelength_um` and temperature `temperature_k`.
/// Throws DomainError outside the medium's valid range.
double refractive_index(const Medium& medium, double wavelength_um, double temperature_k);

/// k = n(omega) omega / c0 [rad/um].
double wavevector(const Medium& medium, double omega, double temperature_k);

}  // namespace qpm
