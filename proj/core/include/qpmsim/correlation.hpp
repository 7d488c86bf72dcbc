#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qpmsim/biphoton.hpp"
#include "qpmsim/compensation.hpp"

namespace qpm {

/// Sampled sum-frequency correlation R(tau). tau spacing is 2 pi / (M d_omega)
/// for a spectrum zero-padded to M points.
struct CorrelationTrace {
  UniformGrid tau;
  std::vector<double> values;
  bool normalized = true;
  double center_frequency_thz = 0.0;
  /// max |psi~|^2 before normalisation
  double raw_peak = 0.0;
};

/// psi~(tau) = (1 / 2 pi) sum_k psi(w_k) exp(i w_k tau) d_omega, sampled on the FFT grid.
struct TimeDomainAmplitude {
  UniformGrid tau;
  std::vector<cplx> values;
};

struct SfgOptions {
  /// spectral zero padding before the transform (M = pad_factor * N)
  std::size_t pad_factor = 8;
  /// cross-check the FFT against direct quadrature at `verify_points` delays
  bool verify = true;
  std::size_t verify_points = 16;
  /// evenly spaced check delays instead of seeded random ones
  bool seedless = false;
  std::uint64_t seed = 0x5fd1c0ffee;
  double verify_tolerance = 1e-8;
};

/// Integrand restricted to omega >= lower_cutoff_omega.
TimeDomainAmplitude time_domain_amplitude(const SpectralAmplitude& amp, std::size_t pad_factor,
                                          double lower_cutoff_omega = -std::numeric_limits<double>::infinity());

/// Direct (non-FFT) evaluation of psi~ at one delay, summed in extended precision.
cplx direct_time_amplitude(const SpectralAmplitude& amp, double tau_fs,
                           double lower_cutoff_omega = -std::numeric_limits<double>::infinity());

/// Noncollinear SFG signal: the whole spectrum reaches the SFG crystal.
/// Throws ConfigError when cells are flagged invalid.
CorrelationTrace sfg_noncollinear(const SpectralAmplitude& amp, const SfgOptions& options = {});

/// Collinear SFG signal: only omega >= omega_p / 2 passes the dichroic split.
CorrelationTrace sfg_collinear(const SpectralAmplitude& amp, double pump_omega,
                               const SfgOptions& options = {});

enum class FwhmMode {
  outermost,     ///< outermost half-maximum crossings
  central_lobe,  ///< crossings adjacent to the global peak
};

/// Width [fs] at half maximum with linear interpolation between samples.
double fwhm(const CorrelationTrace& trace, FwhmMode mode = FwhmMode::outermost);

/// Width expressed in optical cycles, width * nu_c.
double cycles(double width_fs, double center_frequency_thz);

/// Separation in [min_mm, max_mm] maximising the noncollinear SFG peak of
/// `amp` after the prism sequence (coarse scan, then golden-section refinement).
PrismPairModel tune_separation_for_peak(PrismPairModel prism, const SpectralAmplitude& amp,
                                        double min_mm, double max_mm, std::size_t pad_factor = 8);

}  // namespace qpm
