#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpmsim/device.hpp"

namespace qpm {

/// Range of external emission angles collected by the detection optics.
struct AcceptanceWindow {
  double phi_min_deg = 0.11;
  double phi_max_deg = 0.39;
  std::size_t samples = 33;

  void validate() const;
};

/// Spectral resolution of the tunable bandpass filter.
struct BandpassResolution {
  enum class Mode { constant, two_segment };
  Mode mode = Mode::constant;
  double delta_lambda_nm = 5.0;
  // two_segment: below_nm under split_nm, above_nm from split_nm on
  double below_nm = 4.0;
  double above_nm = 6.0;
  double split_nm = 1100.0;

  double at(double wavelength_nm) const;
};

struct DetectedSpectrum {
  std::vector<double> wavelength_nm;
  /// peak-normalised S(lambda); empty where some angle sample was undefined
  std::vector<std::optional<double>> normalized;
  /// S(lambda) before normalisation
  std::vector<std::optional<double>> raw;
  std::size_t excluded = 0;
};

/// Composite Simpson rule on uniformly spaced samples (Simpson 3/8 closes an odd
/// number of intervals). Needs at least 3 samples.
double simpson(std::span<const double> f, double h);

/// S(lambda) = d_omega(lambda) * int_{phi_min}^{phi_max} |psi(omega(lambda), L; phi)|^2 d phi with
/// d_omega = 2 pi c0 d_lambda / lambda^2; phi integrated in degrees.
DetectedSpectrum detected_spectrum(const QpmDevice& device, const AcceptanceWindow& window,
                                   const std::vector<double>& wavelength_nm,
                                   const BandpassResolution& resolution = {}, double kappa = 1.0);

/// Outermost wavelengths [nm] where `values` crosses fraction x its peak.
std::pair<double, double> support_edges(std::span<const double> wavelength_nm,
                                        std::span<const double> values, double fraction);

struct DetectorModel {
  enum class Interpolation { log_linear, linear };
  std::string name;
  /// (wavelength nm, efficiency fraction), wavelengths increasing
  std::vector<std::pair<double, double>> points;
  Interpolation interpolation = Interpolation::log_linear;

  void validate() const;
};

/// Reads "wavelength_nm,efficiency" rows; '#' lines and a non-numeric header are skipped.
DetectorModel parse_detector_csv(std::istream& in, std::string name,
                                 DetectorModel::Interpolation interpolation =
                                     DetectorModel::Interpolation::log_linear);
DetectorModel load_detector_csv(const std::filesystem::path& path,
                                DetectorModel::Interpolation interpolation =
                                    DetectorModel::Interpolation::log_linear);

/// Efficiency at `wavelength_nm`, interpolated inside the tabulated hull only.
double detector_efficiency(const DetectorModel& detector, double wavelength_nm);

/// spectrum x efficiency(lambda) x coupling, elementwise.
std::vector<double> raw_counts_model(std::span<const double> spectrum,
                                     std::span<const double> wavelength_nm,
                                     const DetectorModel& detector, double coupling);

}  // namespace qpm
