#include "qpmsim/device.hpp"

#include <cmath>
#include <sstream>

#include "qpmsim/biphoton.hpp"
#include "qpmsim/errors.hpp"
#include "qpmsim/parallel.hpp"
#include "qpmsim/units.hpp"

namespace qpm {

QpmDevice::QpmDevice(Medium medium, double length_um, double period0_um, double chirp_rate,
                     double pump_wavelength_um, double temperature_k, std::string tag)
    : medium_(std::move(medium)),
      length_um_(length_um),
      period0_um_(period0_um),
      chirp_rate_(chirp_rate),
      pump_wavelength_um_(pump_wavelength_um),
      pump_omega_(omega_from_wavelength(pump_wavelength_um)),
      temperature_k_(temperature_k),
      tag_(std::move(tag)) {
  if (!(length_um_ > 0.0)) throw ConfigError("device length must be positive");
  if (!(period0_um_ > 0.0)) throw ConfigError("input poling period must be positive");
  if (!(chirp_rate_ >= 0.0) || !std::isfinite(chirp_rate_)) {
    throw ConfigError("chirp rate must be finite and non-negative");
  }
  if (!(kTwoPi / period0_um_ - chirp_rate_ * length_um_ > 0.0)) {
    throw ConfigError("grating wavevector becomes non-positive inside the crystal");
  }
  if (!(temperature_k_ > 0.0)) throw ConfigError("temperature must be positive");
  if (!medium_.valid_range.contains(pump_wavelength_um_)) {
    throw DomainError("pump wavelength outside the Sellmeier range of '" + medium_.name + "'");
  }
}

double QpmDevice::k(double omega) const { return wavevector(medium_, omega, temperature_k_); }

QpmDevice load_device(const nlohmann::json& entry, const MediaLibrary& media) {
  if (!entry.is_object()) throw ConfigError("device must be an object");
  auto number = [&](const char* key) -> double {
    if (!entry.contains(key)) throw ConfigError(std::string("device: missing field '") + key + "'");
    if (!entry[key].is_number()) throw ConfigError(std::string("device: '") + key + "' must be a number");
    return entry[key].get<double>();
  };
  if (!entry.contains("medium") || !entry["medium"].is_string()) {
    throw ConfigError("device: missing field 'medium'");
  }
  const Medium& medium = media.at(entry["medium"].get<std::string>());
  const double length = number("length_um");
  const double period0 = number("period0_um");
  const int chirp_keys = static_cast<int>(entry.contains("chirp_rate")) +
                         static_cast<int>(entry.contains("chirp_rate_rad_per_cm2")) +
                         static_cast<int>(entry.contains("period_end_um"));
  if (chirp_keys != 1) {
    throw ConfigError(
        "device: give exactly one of 'chirp_rate', 'chirp_rate_rad_per_cm2', 'period_end_um'");
  }
  double eta = 0.0;
  if (entry.contains("chirp_rate")) {
    eta = number("chirp_rate");
  } else if (entry.contains("chirp_rate_rad_per_cm2")) {
    eta = number("chirp_rate_rad_per_cm2") / kRadPerCm2PerRadPerUm2;
  } else {
    eta = design_chirp(period0, number("period_end_um"), length);
  }
  const double temperature = entry.contains("temperature_k") ? number("temperature_k") : 293.0;
  return QpmDevice(medium, length, period0, eta, number("pump_wavelength_um"), temperature,
                   entry.value("tag", std::string{}));
}

double grating_wavevector(const QpmDevice& device, double z_um) {
  if (!(z_um >= 0.0 && z_um <= device.length_um())) {
    std::ostringstream msg;
    msg << "z = " << z_um << " um outside the crystal [0, " << device.length_um() << "]";
    throw DomainError(msg.str());
  }
  return kTwoPi / device.period0_um() - device.chirp_rate() * z_um;
}

double poling_period(const QpmDevice& device, double z_um) {
  return kTwoPi / grating_wavevector(device, z_um);
}

double design_chirp(double period_start_um, double period_end_um, double length_um) {
  if (!(period_start_um > 0.0 && period_end_um > 0.0 && length_um > 0.0)) {
    throw ConfigError("design_chirp: periods and length must be positive");
  }
  return (kTwoPi / period_start_um - kTwoPi / period_end_um) / length_um;
}

double phase_mismatch(const QpmDevice& device, double omega, double z_um, const Geometry& geom) {
  const double wp = device.pump_omega();
  if (!(omega > 0.0 && omega < wp)) {
    throw DomainError("signal frequency must lie strictly between 0 and the pump frequency");
  }
  if (!(std::abs(geom.phi_deg) < 90.0)) throw DomainError("emission angle must satisfy |phi| < 90 deg");
  const double T = device.temperature_k();
  const Medium& m = device.medium();
  const double wi = wp - omega;
  const double n_s = refractive_index(m, wavelength_from_omega(omega), T);
  const double n_i = refractive_index(m, wavelength_from_omega(wi), T);
  const double k_s = n_s * omega / kSpeedOfLight;
  const double k_i = n_i * wi / kSpeedOfLight;
  const double s = std::sin(geom.phi_deg * kDegree);

  const double arg_s = 1.0 - (s / n_s) * (s / n_s);
  const double ratio = omega / wi;
  const double arg_i = 1.0 - ratio * ratio * (s / n_i) * (s / n_i);
  if (arg_s < 0.0) throw DomainError("phase_mismatch: signal branch square root is negative");
  if (arg_i < 0.0) throw DomainError("phase_mismatch: idler branch square root is negative");

  return device.k(wp) - k_s * std::sqrt(arg_s) - k_i * std::sqrt(arg_i) -
         grating_wavevector(device, z_um);
}

std::size_t TuningCurve::missing() const {
  std::size_t n = 0;
  for (const auto& v : values) n += v.has_value() ? 0 : 1;
  return n;
}

TuningCurve tuning_curve(const QpmDevice& device, const std::vector<double>& wavelength_um,
                         const std::vector<double>& phi_deg, TuningQuantity quantity,
                         double kappa) {
  if (wavelength_um.empty() || phi_deg.empty()) throw ConfigError("tuning curve grids must be nonempty");
  TuningCurve out{wavelength_um, phi_deg, {}, quantity};
  out.values.resize(wavelength_um.size() * phi_deg.size());
  const std::size_t cols = phi_deg.size();
  parallel_for(out.values.size(), [&](std::size_t cell) {
    const double omega = omega_from_wavelength(wavelength_um[cell / cols]);
    const Geometry geom{phi_deg[cell % cols]};
    try {
      if (quantity == TuningQuantity::phase_mismatch) {
        out.values[cell] = phase_mismatch(device, omega, 0.0, geom);
      } else {
        const auto psi = spectral_amplitude(device, omega, geom, kappa);
        out.values[cell] = std::norm(psi) / kTwoPi;
      }
    } catch (const DomainError&) {
      out.values[cell] = std::nullopt;
    }
  });
  return out;
}

}  // namespace qpm
