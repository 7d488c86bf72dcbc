#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qpmsim/biphoton.hpp"
#include "qpmsim/dispersion.hpp"

namespace qpm {

struct IdentityModel {};

/// H = exp(-i arg psi_ref): flattens the reference amplitude's phase exactly.
struct PerfectModel {
  SpectralAmplitude reference;
};

/// H = exp(i gdd (w - wc)^2 / 2).
struct QuadraticModel {
  double gdd_fs2 = 0.0;
  double center_omega = 0.0;
};

enum class PrismIncidence { brewster, minimum_deviation };

/// Two identical prisms, apex to apex `separation_mm` apart, the second one
/// antiparallel to the first. Defaults: apex cut for Brewster incidence at the
/// design wavelength, no glass beyond the apex ray, a single pass.
struct PrismPairModel {
  Medium glass;
  double separation_mm = 500.0;
  double design_wavelength_um = 1.064;
  std::optional<double> apex_angle_rad;
  PrismIncidence incidence = PrismIncidence::brewster;
  double insertion_mm = 0.0;
  int passes = 1;
  double temperature_k = 293.0;

  double apex_angle() const;
  double incidence_angle() const;
};

using CompensatorModel = std::variant<IdentityModel, PerfectModel, QuadraticModel, PrismPairModel>;

/// A loss-free spectral phase filter.
struct Compensator {
  CompensatorModel model;
  std::string label;

  static Compensator identity() { return {IdentityModel{}, "identity"}; }
  static Compensator perfect(SpectralAmplitude reference) {
    return {PerfectModel{std::move(reference)}, "perfect"};
  }
  static Compensator quadratic(double gdd_fs2, double center_omega) {
    return {QuadraticModel{gdd_fs2, center_omega}, "quadratic"};
  }
  static Compensator prism_pair(PrismPairModel prism) { return {std::move(prism), "prism_pair"}; }
};

/// Full optical phase of the prism sequence, passes * (w / c0) * P(w), with
/// P = l cos(beta) + n(w) * insertion and beta the exit-ray angle relative to the
/// design ray. Throws DomainError on total internal reflection or when the design
/// geometry cannot be refracted.
double prism_pair_phase(const PrismPairModel& prism, double omega);

/// Transfer function H(w) on a grid; |H| = 1 everywhere. The prism phase is
/// referenced to the design frequency: its value and slope there are removed, which
/// only translates a correlation trace.
std::vector<cplx> transfer_on_grid(const Compensator& comp, const UniformGrid& omega);

/// Phase of H sampled on a grid (unwrapped for the perfect model).
SpectralPhaseCurve compensator_phase(const Compensator& comp, const UniformGrid& omega);

/// H(w) psi(w) pointwise. The perfect model requires the amplitude to sit on the
/// reference grid.
SpectralAmplitude apply_compensator(const Compensator& comp, const SpectralAmplitude& amp);

/// Second derivative d^2 phase / d omega^2 [fs^2] at omega_c from the five-point
/// central stencil, linearly interpolated between the bracketing grid points.
double measure_gdd(const SpectralPhaseCurve& curve, double omega_c);

/// GDD [fs^2] of the prism sequence at `omega_c`, evaluated with the same stencil.
double prism_pair_gdd(const PrismPairModel& prism, double omega_c);

/// Separation that makes the prism sequence's GDD at omega_c equal `target_gdd_fs2`.
PrismPairModel tune_separation_for_gdd(PrismPairModel prism, double target_gdd_fs2,
                                       double omega_c);

}  // namespace qpm
