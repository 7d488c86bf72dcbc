#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpmsim/dispersion.hpp"

namespace qpm {

/// Emission direction of signal and idler, measured in air relative to the pump.
struct Geometry {
  double phi_deg = 0.0;

  bool collinear() const { return phi_deg == 0.0; }
};

/// Chirped quasi-phase-matched crystal. The grating wavevector falls linearly from
/// 2 pi / period0 at the input face:  K(z) = 2 pi / period0 - chirp_rate * z.
class QpmDevice {
 public:
  /// Throws ConfigError when the grating period would become non-positive inside
  /// the crystal or a length is not positive, DomainError when the pump lies
  /// outside the medium's Sellmeier range.
  QpmDevice(Medium medium, double length_um, double period0_um, double chirp_rate,
            double pump_wavelength_um, double temperature_k = 293.0, std::string tag = {});

  const Medium& medium() const { return medium_; }
  double length_um() const { return length_um_; }
  double period0_um() const { return period0_um_; }
  /// [rad/um^2]
  double chirp_rate() const { return chirp_rate_; }
  double pump_wavelength_um() const { return pump_wavelength_um_; }
  double pump_omega() const { return pump_omega_; }
  double degenerate_omega() const { return 0.5 * pump_omega_; }
  double temperature_k() const { return temperature_k_; }
  const std::string& tag() const { return tag_; }

  /// k(omega) in this crystal at its operating temperature.
  double k(double omega) const;

 private:
  Medium medium_;
  double length_um_;
  double period0_um_;
  double chirp_rate_;
  double pump_wavelength_um_;
  double pump_omega_;
  double temperature_k_;
  std::string tag_;
};

/// Builds a device from {"medium", "length_um", "period0_um", one of "chirp_rate"
/// [rad/um^2], "chirp_rate_rad_per_cm2" or "period_end_um", "pump_wavelength_um",
/// optional "temperature_k", optional "tag"}.
QpmDevice load_device(const nlohmann::json& entry, const MediaLibrary& media);

/// K(z) [rad/um]; z must lie in [0, L].
double grating_wavevector(const QpmDevice& device, double z_um);

/// Poling period at depth z [um].
double poling_period(const QpmDevice& device, double z_um);

/// Linear-in-K chirp rate [rad/um^2] taking the period from period_start to period_end over `length_um`.
double design_chirp(double period_start_um, double period_end_um, double length_um);

/// Noncollinear phase mismatch dk(omega, z; phi) [rad/um] for signal frequency
/// `omega` and idler omega_p - omega. The sine of the external angle is divided by
/// each photon's own index inside the square roots. Throws DomainError naming the
/// signal or idler branch when that square root has a negative argument.
double phase_mismatch(const QpmDevice& device, double omega, double z_um, const Geometry& geom);

enum class TuningQuantity {
  photon_number,   ///< |psi|^2 / 2 pi
  phase_mismatch,  ///< raw dk(omega, 0; phi), for debugging
};

/// Angle-resolved emission map. values[i * phi_deg.size() + j] belongs to
/// (wavelength_um[i], phi_deg[j]); cells where the physics is undefined are empty.
struct TuningCurve {
  std::vector<double> wavelength_um;
  std::vector<double> phi_deg;
  std::vector<std::optional<double>> values;
  TuningQuantity quantity = TuningQuantity::photon_number;

  const std::optional<double>& at(std::size_t i, std::size_t j) const {
    return values[i * phi_deg.size() + j];
  }
  std::size_t missing() const;
};

TuningCurve tuning_curve(const QpmDevice& device, const std::vector<double>& wavelength_um,
                         const std::vector<double>& phi_deg,
                         TuningQuantity quantity = TuningQuantity::photon_number,
                         double kappa = 1.0);

}  // namespace qpm
