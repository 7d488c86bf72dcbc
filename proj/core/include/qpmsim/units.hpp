#pragma once

// Internal unit system: length in um, time in fs, angular frequency in rad/fs,
// wavevectors in rad/um and chirp rates in rad/um^2.

#include <cstddef>
#include <numbers>
#include <vector>

namespace qpm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Vacuum speed of light [um/fs].
inline constexpr double kSpeedOfLight = 0.299792458;

inline constexpr double kDegree = kPi / 180.0;

/// rad/um^2 -> rad/cm^2
inline constexpr double kRadPerCm2PerRadPerUm2 = 1e8;

constexpr double omega_from_wavelength(double wavelength_um) {
  return kTwoPi * kSpeedOfLight / wavelength_um;
}

constexpr double wavelength_from_omega(double omega) {
  return kTwoPi * kSpeedOfLight / omega;
}

/// Angular frequency [rad/fs] to ordinary frequency [THz].
constexpr double thz_from_omega(double omega) { return omega / kTwoPi * 1e3; }

/// Uniformly spaced, strictly increasing sample positions.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t size = 0;

  double operator[](std::size_t i) const { return start + step * static_cast<double>(i); }
  double front() const { return start; }
  double back() const { return (*this)[size - 1]; }

  /// `n` points spanning [first, last] inclusive.
  static UniformGrid spanning(double first, double last, std::size_t n);

  std::vector<double> samples() const;
};

}  // namespace qpm
