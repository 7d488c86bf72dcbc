#include "qpmsim/biphoton.hpp"

#include <algorithm>
#include <cmath>

#include "qpmsim/erfi.hpp"
#include "qpmsim/errors.hpp"
#include "qpmsim/parallel.hpp"

namespace qpm {
namespace {

struct Crossings {
  double low_omega;
  double high_omega;
};

Crossings outer_crossings(const SpectralAmplitude& amp, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("threshold fraction must lie in (0, 1)");
  const auto I = mean_photon_number(amp);
  const double peak = *std::max_element(I.begin(), I.end());
  if (!(peak > 0.0)) throw DomainError("spectrum is identically zero");
  const double level = fraction * peak;
  std::size_t lo = 0;
  while (I[lo] < level) ++lo;
  std::size_t hi = I.size() - 1;
  while (I[hi] < level) --hi;
  if (lo == 0 || hi == I.size() - 1) {
    throw DomainError("emission band reaches the end of the scanned grid; widen the scan");
  }
  auto cross = [&](std::size_t a, std::size_t b) {
    const double t = (level - I[a]) / (I[b] - I[a]);
    return amp.omega[a] + t * (amp.omega[b] - amp.omega[a]);
  };
  return {cross(lo - 1, lo), cross(hi + 1, hi)};
}

}  // namespace

cplx AmplitudeParts::value() const {
  return prefactor * std::polar(1.0, propagation_phase + chirp_phase) * bracket;
}

AmplitudeParts spectral_amplitude_parts(const QpmDevice& device, double omega,
                                        const Geometry& geom, double kappa) {
  const double eta = device.chirp_rate();
  if (eta == 0.0) {
    throw DomainError("unchirped device (eta = 0): the chirped-grating amplitude is undefined");
  }
  const double dk0 = phase_mismatch(device, omega, 0.0, geom);
  const double L = device.length_um();
  const cplx i{0.0, 1.0};
  const cplx a = cplx{1.0, 1.0} / (2.0 * std::sqrt(eta));

  AmplitudeParts parts;
  parts.prefactor = -std::sqrt(i * (kappa * kappa * kPi / (2.0 * eta)));
  parts.propagation_phase = (device.k(omega) + device.k(device.pump_omega() - omega)) * L;
  parts.chirp_phase = -dk0 * dk0 / (2.0 * eta);
  parts.bracket = erfi(a * dk0) - erfi(a * (dk0 + eta * L));
  return parts;
}

cplx spectral_amplitude(const QpmDevice& device, double omega, const Geometry& geom, double kappa) {
  return spectral_amplitude_parts(device, omega, geom, kappa).value();
}

std::size_t SpectralAmplitude::flagged() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{0}));
}

std::vector<double> mean_photon_number(const SpectralAmplitude& amp) {
  std::vector<double> out(amp.size());
  std::transform(amp.values.begin(), amp.values.end(), out.begin(),
                 [](cplx v) { return std::norm(v) / kTwoPi; });
  return out;
}

SpectralAmplitude spectrum_scan_omega(const QpmDevice& device, const UniformGrid& omega,
                                      const Geometry& geom, double kappa) {
  if (omega.size < 2) throw ConfigError("spectrum scan needs at least 2 points");
  if (device.chirp_rate() == 0.0) {
    throw DomainError("unchirped device (eta = 0): the chirped-grating amplitude is undefined");
  }
  SpectralAmplitude amp;
  amp.omega = omega;
  amp.values.assign(omega.size, cplx{});
  amp.valid.assign(omega.size, 1);
  amp.geometry = geom;
  amp.device_tag = device.tag();
  amp.kappa = kappa;
  amp.pump_omega = device.pump_omega();
  parallel_for(omega.size, [&](std::size_t j) {
    try {
      amp.values[j] = spectral_amplitude(device, omega[j], geom, kappa);
    } catch (const DomainError&) {
      amp.valid[j] = 0;
    }
  });
  return amp;
}

SpectralAmplitude spectrum_scan(const QpmDevice& device, double lambda_min_um, double lambda_max_um,
                                std::size_t n_points, const Geometry& geom, double kappa) {
  if (!(lambda_min_um > 0.0 && lambda_max_um > lambda_min_um)) {
    throw ConfigError("spectrum scan needs 0 < lambda_min < lambda_max");
  }
  const auto grid = UniformGrid::spanning(omega_from_wavelength(lambda_max_um),
                                          omega_from_wavelength(lambda_min_um), n_points);
  return spectrum_scan_omega(device, grid, geom, kappa);
}

double spectral_phase(const QpmDevice& device, double omega, const Geometry& geom) {
  const double dk0 = phase_mismatch(device, omega, 0.0, geom);
  return (device.k(omega) + device.k(device.pump_omega() - omega)) * device.length_um() -
         dk0 * dk0 / (2.0 * device.chirp_rate());
}

SpectralPhaseCurve unwrap_phase(const UniformGrid& omega, std::span<const double> wrapped) {
  if (wrapped.size() != omega.size) throw ConfigError("phase samples do not match the grid");
  SpectralPhaseCurve curve{omega, std::vector<double>(wrapped.begin(), wrapped.end())};
  double offset = 0.0;
  for (std::size_t j = 1; j < wrapped.size(); ++j) {
    const double jump = wrapped[j] - wrapped[j - 1];
    offset -= kTwoPi * std::round(jump / kTwoPi);
    curve.phase[j] = wrapped[j] + offset;
  }
  return curve;
}

SpectralPhaseCurve sample_spectral_phase(const QpmDevice& device, const UniformGrid& omega,
                                         const Geometry& geom) {
  SpectralPhaseCurve curve{omega, std::vector<double>(omega.size)};
  parallel_for(omega.size, [&](std::size_t j) { curve.phase[j] = spectral_phase(device, omega[j], geom); });
  return curve;
}

SpectralPhaseCurve amplitude_phase(const SpectralAmplitude& amp) {
  std::vector<double> wrapped(amp.size());
  std::transform(amp.values.begin(), amp.values.end(), wrapped.begin(),
                 [](cplx v) { return std::arg(v); });
  return unwrap_phase(amp.omega, wrapped);
}

BandEdges band_edges(const SpectralAmplitude& amp, double fraction) {
  const auto c = outer_crossings(amp, fraction);
  // high frequency -> short wavelength
  return {wavelength_from_omega(c.high_omega) * 1e3, wavelength_from_omega(c.low_omega) * 1e3};
}

double bandwidth_thz(const SpectralAmplitude& amp, double fraction) {
  const auto c = outer_crossings(amp, fraction);
  return thz_from_omega(c.high_omega - c.low_omega);
}

}  // namespace qpm
