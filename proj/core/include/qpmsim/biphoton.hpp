#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpmsim/device.hpp"
#include "qpmsim/units.hpp"

namespace qpm {

using cplx = std::complex<double>;

/// The factors of the two-photon amplitude at the crystal output face:
///   psi = prefactor * exp(i propagation_phase) * exp(i chirp_phase) * bracket
/// with prefactor = -sqrt(i kappa^2 pi / 2 eta) (principal branch),
/// propagation_phase = [k(w) + k(wp - w)] L, chirp_phase = -dk0^2 / 2 eta and
/// bracket = erfi(a dk0) - erfi(a (dk0 + eta L)), a = (1 + i) / (2 sqrt(eta)),
/// dk0 = dk(w, 0; phi).
struct AmplitudeParts {
  cplx prefactor;
  double propagation_phase = 0.0;
  double chirp_phase = 0.0;
  cplx bracket;

  cplx value() const;
};

/// Throws DomainError for an unchirped device (eta = 0 divides by zero) and
/// propagates phase_mismatch domain errors.
AmplitudeParts spectral_amplitude_parts(const QpmDevice& device, double omega,
                                        const Geometry& geom, double kappa = 1.0);

cplx spectral_amplitude(const QpmDevice& device, double omega, const Geometry& geom,
                        double kappa = 1.0);

/// psi sampled on a uniform angular-frequency grid. Cells where the physics is
/// undefined keep a zero amplitude and are marked invalid.
struct SpectralAmplitude {
  UniformGrid omega;
  std::vector<cplx> values;
  std::vector<std::uint8_t> valid;
  Geometry geometry;
  std::string device_tag;
  double kappa = 1.0;
  double pump_omega = 0.0;

  std::size_t size() const { return values.size(); }
  std::size_t flagged() const;
};

/// |psi|^2 / 2 pi, the mean photon number per mode.
std::vector<double> mean_photon_number(const SpectralAmplitude& amp);

SpectralAmplitude spectrum_scan_omega(const QpmDevice& device, const UniformGrid& omega,
                                      const Geometry& geom, double kappa = 1.0);

/// Uniform omega grid running from omega(lambda_max) to omega(lambda_min).
SpectralAmplitude spectrum_scan(const QpmDevice& device, double lambda_min_um,
                                double lambda_max_um, std::size_t n_points, const Geometry& geom,
                                double kappa = 1.0);

/// Emission phase phi_spec(w) = [k(w) + k(wp - w)] L - dk(w, 0; phi)^2 / 2 eta [rad].
double spectral_phase(const QpmDevice& device, double omega, const Geometry& geom = {});

struct SpectralPhaseCurve {
  UniformGrid omega;
  std::vector<double> phase;
};

/// Removes 2 pi jumps so adjacent samples differ by less than pi.
SpectralPhaseCurve unwrap_phase(const UniformGrid& omega, std::span<const double> wrapped);

/// phi_spec sampled on `omega`; continuous by construction.
SpectralPhaseCurve sample_spectral_phase(const QpmDevice& device, const UniformGrid& omega,
                                         const Geometry& geom = {});

/// Unwrapped arg psi of a sampled amplitude.
SpectralPhaseCurve amplitude_phase(const SpectralAmplitude& amp);

struct BandEdges {
  double short_nm = 0.0;
  double long_nm = 0.0;
};

/// Outermost crossings of `fraction` x peak mean photon number, linearly
/// interpolated in omega. Throws DomainError if the band touches the grid ends.
BandEdges band_edges(const SpectralAmplitude& amp, double fraction = 0.01);

/// Frequency separation [THz] of the outermost `fraction` x peak crossings.
double bandwidth_thz(const SpectralAmplitude& amp, double fraction = 0.5);

}  // namespace qpm
