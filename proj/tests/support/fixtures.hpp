#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qpmsim/device.hpp"
#include "qpmsim/dispersion.hpp"

namespace qpm::fixture {

inline const MediaLibrary& bundled_media() {
  static const MediaLibrary lib = MediaLibrary::from_file(std::string(QPMSIM_TEST_DATA_DIR) + "/media.json");
  return lib;
}

/// 20 mm MgSLT, period 8.000 -> 8.825 um, 532 nm pump: the fabricated 10 % device.
inline QpmDevice fabricated_device() {
  return QpmDevice(bundled_media().at("MgSLT"), 20000.0, 8.0, design_chirp(8.0, 8.825, 20000.0),
                   0.532, 293.0, "fabricated");
}

/// Same crystal chirped 8.000 -> 11.765 um for collinear operation.
inline QpmDevice collinear_design_device() {
  return QpmDevice(bundled_media().at("MgSLT"), 20000.0, 8.0, design_chirp(8.0, 11.765, 20000.0),
                   0.532, 293.0, "collinear47");
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace qpm::fixture
