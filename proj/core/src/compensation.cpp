#include "qpmsim/compensation.hpp"

#include <cmath>
#include <sstream>

#include "qpmsim/errors.hpp"

namespace qpm {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double exit_angle(const PrismPairModel& p, double wavelength_um) {
  const double n = refractive_index(p.glass, wavelength_um, p.temperature_k);
  const double inside = std::asin(std::sin(p.incidence_angle()) / n);
  const double at_exit = n * std::sin(p.apex_angle() - inside);
  if (!(std::abs(at_exit) < 1.0)) {
    std::ostringstream msg;
    msg << "prism pair: total internal reflection at " << wavelength_um << " um";
    throw DomainError(msg.str());
  }
  return std::asin(at_exit);
}

// Prism phase referenced to the design frequency: value and slope there removed.
class ReferencedPrismPhase {
 public:
  explicit ReferencedPrismPhase(const PrismPairModel& p)
      : prism_(p), wd_(omega_from_wavelength(p.design_wavelength_um)) {
    const double h = 1e-3 * wd_;
    slope_ = (prism_pair_phase(p, wd_ - 2 * h) - 8 * prism_pair_phase(p, wd_ - h) +
              8 * prism_pair_phase(p, wd_ + h) - prism_pair_phase(p, wd_ + 2 * h)) /
             (12 * h);
    offset_ = prism_pair_phase(p, wd_);
  }
  double operator()(double omega) const {
    return prism_pair_phase(prism_, omega) - offset_ - slope_ * (omega - wd_);
  }

 private:
  PrismPairModel prism_;
  double wd_;
  double slope_ = 0.0;
  double offset_ = 0.0;
};

double stencil(const std::vector<double>& f, std::size_t j, double h) {
  return (-f[j - 2] + 16 * f[j - 1] - 30 * f[j] + 16 * f[j + 1] - f[j + 2]) / (12 * h * h);
}

bool same_grid(const UniformGrid& a, const UniformGrid& b) {
  return a.size == b.size && std::abs(a.start - b.start) <= 1e-12 * std::abs(a.start) &&
         std::abs(a.step - b.step) <= 1e-12 * std::abs(a.step);
}

}  // namespace

double PrismPairModel::apex_angle() const {
  if (apex_angle_rad) return *apex_angle_rad;
  const double n0 = refractive_index(glass, design_wavelength_um, temperature_k);
  return kPi - 2.0 * std::atan(n0);
}

double PrismPairModel::incidence_angle() const {
  const double n0 = refractive_index(glass, design_wavelength_um, temperature_k);
  if (incidence == PrismIncidence::brewster) return std::atan(n0);
  const double s = n0 * std::sin(0.5 * apex_angle());
  if (!(s < 1.0)) throw DomainError("prism pair: no minimum-deviation geometry for this apex angle");
  return std::asin(s);
}

double prism_pair_phase(const PrismPairModel& prism, double omega) {
  if (prism.passes < 1) throw ConfigError("prism pair: passes must be >= 1");
  if (!(prism.separation_mm >= 0.0) || !(prism.insertion_mm >= 0.0)) {
    throw ConfigError("prism pair: separation and insertion must be non-negative");
  }
  const double lambda = wavelength_from_omega(omega);
  const double beta = exit_angle(prism, lambda) - exit_angle(prism, prism.design_wavelength_um);
  const double n = refractive_index(prism.glass, lambda, prism.temperature_k);
  const double path_um = prism.separation_mm * 1e3 * std::cos(beta) + n * prism.insertion_mm * 1e3;
  return prism.passes * omega / kSpeedOfLight * path_um;
}

std::vector<cplx> transfer_on_grid(const Compensator& comp, const UniformGrid& omega) {
  std::vector<cplx> H(omega.size, cplx{1.0, 0.0});
  std::visit(overloaded{
                 [](const IdentityModel&) {},
                 [&](const PerfectModel& m) {
                   if (!same_grid(m.reference.omega, omega)) {
                     throw ConfigError("perfect compensator: amplitude grid differs from the reference grid");
                   }
                   for (std::size_t j = 0; j < omega.size; ++j) {
                     const cplx v = m.reference.values[j];
                     if (std::abs(v) > 0.0) H[j] = std::conj(v) / std::abs(v);
                   }
                 },
                 [&](const QuadraticModel& m) {
                   for (std::size_t j = 0; j < omega.size; ++j) {
                     const double d = omega[j] - m.center_omega;
                     H[j] = std::polar(1.0, 0.5 * m.gdd_fs2 * d * d);
                   }
                 },
                 [&](const PrismPairModel& m) {
                   const ReferencedPrismPhase phase(m);
                   for (std::size_t j = 0; j < omega.size; ++j) H[j] = std::polar(1.0, phase(omega[j]));
                 },
             },
             comp.model);
  return H;
}

SpectralPhaseCurve compensator_phase(const Compensator& comp, const UniformGrid& omega) {
  if (const auto* q = std::get_if<QuadraticModel>(&comp.model)) {
    SpectralPhaseCurve c{omega, std::vector<double>(omega.size)};
    for (std::size_t j = 0; j < omega.size; ++j) {
      const double d = omega[j] - q->center_omega;
      c.phase[j] = 0.5 * q->gdd_fs2 * d * d;
    }
    return c;
  }
  if (const auto* p = std::get_if<PrismPairModel>(&comp.model)) {
    SpectralPhaseCurve c{omega, std::vector<double>(omega.size)};
    const ReferencedPrismPhase phase(*p);
    for (std::size_t j = 0; j < omega.size; ++j) c.phase[j] = phase(omega[j]);
    return c;
  }
  const auto H = transfer_on_grid(comp, omega);
  std::vector<double> wrapped(H.size());
  for (std::size_t j = 0; j < H.size(); ++j) wrapped[j] = std::arg(H[j]);
  return unwrap_phase(omega, wrapped);
}

SpectralAmplitude apply_compensator(const Compensator& comp, const SpectralAmplitude& amp) {
  SpectralAmplitude out = amp;
  if (std::holds_alternative<IdentityModel>(comp.model)) return out;
  const auto H = transfer_on_grid(comp, amp.omega);
  for (std::size_t j = 0; j < out.size(); ++j) out.values[j] *= H[j];
  return out;
}

double measure_gdd(const SpectralPhaseCurve& curve, double omega_c) {
  const auto& g = curve.omega;
  if (curve.phase.size() != g.size) throw ConfigError("phase curve does not match its grid");
  const double x = (omega_c - g.start) / g.step;
  const double lower = std::floor(x);
  const double frac = x - lower;
  if (lower < 2.0 || lower + (frac > 0.0 ? 3.0 : 2.0) > static_cast<double>(g.size) - 1.0) {
    throw DomainError("measure_gdd: omega_c needs two grid neighbours on each side");
  }
  const auto j = static_cast<std::size_t>(lower);
  const double at_j = stencil(curve.phase, j, g.step);
  if (frac == 0.0) return at_j;
  return (1.0 - frac) * at_j + frac * stencil(curve.phase, j + 1, g.step);
}

double prism_pair_gdd(const PrismPairModel& prism, double omega_c) {
  const double h = 2e-3;
  SpectralPhaseCurve c{UniformGrid{omega_c - 2 * h, h, 5}, std::vector<double>(5)};
  for (std::size_t j = 0; j < 5; ++j) c.phase[j] = prism_pair_phase(prism, c.omega[j]);
  return stencil(c.phase, 2, h);
}

PrismPairModel tune_separation_for_gdd(PrismPairModel prism, double target_gdd_fs2, double omega_c) {
  // GDD is affine in the separation at fixed insertion.
  prism.separation_mm = 0.0;
  const double fixed = prism_pair_gdd(prism, omega_c);
  prism.separation_mm = 1000.0;
  const double per_metre = prism_pair_gdd(prism, omega_c) - fixed;
  const double sep = 1000.0 * (target_gdd_fs2 - fixed) / per_metre;
  if (!(sep >= 0.0)) {
    throw DomainError("prism pair: target GDD is not reachable with a non-negative separation");
  }
  prism.separation_mm = sep;
  return prism;
}

}  // namespace qpm
