#include "qpmsim/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qpmsim/biphoton.hpp"
#include "qpmsim/errors.hpp"
#include "qpmsim/parallel.hpp"

namespace qpm {

void AcceptanceWindow::validate() const {
  if (!(phi_min_deg < phi_max_deg)) throw ConfigError("acceptance window needs phi_min < phi_max");
  if (samples < 3) throw ConfigError("acceptance window needs at least 3 angle samples");
  if (!(std::abs(phi_min_deg) < 90.0 && std::abs(phi_max_deg) < 90.0)) {
    throw ConfigError("acceptance window angles must satisfy |phi| < 90 deg");
  }
}

double BandpassResolution::at(double wavelength_nm) const {
  if (mode == Mode::constant) return delta_lambda_nm;
  return wavelength_nm < split_nm ? below_nm : above_nm;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw ConfigError("simpson needs at least 3 samples");
  std::size_t intervals = n - 1;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    const std::size_t k = n - 4;
    tail = 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    intervals -= 3;
  }
  double sum = 0.0;
  if (intervals > 0) {
    sum = f[0] + f[intervals];
    for (std::size_t i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    sum *= h / 3.0;
  }
  return sum + tail;
}

DetectedSpectrum detected_spectrum(const QpmDevice& device, const AcceptanceWindow& window,
                                   const std::vector<double>& wavelength_nm,
                                   const BandpassResolution& resolution, double kappa) {
  window.validate();
  if (wavelength_nm.empty()) throw ConfigError("detected spectrum needs a wavelength grid");
  const std::size_t na = window.samples;
  const double h = (window.phi_max_deg - window.phi_min_deg) / static_cast<double>(na - 1);

  DetectedSpectrum out;
  out.wavelength_nm = wavelength_nm;
  out.raw.resize(wavelength_nm.size());
  parallel_for(wavelength_nm.size(), [&](std::size_t i) {
    const double lambda_um = wavelength_nm[i] * 1e-3;
    const double omega = omega_from_wavelength(lambda_um);
    std::vector<double> f(na);
    try {
      for (std::size_t j = 0; j < na; ++j) {
        const Geometry g{window.phi_min_deg + h * static_cast<double>(j)};
        f[j] = std::norm(spectral_amplitude(device, omega, g, kappa));
      }
    } catch (const DomainError&) {
      return;
    }
    const double d_omega = kTwoPi * kSpeedOfLight * (resolution.at(wavelength_nm[i]) * 1e-3) /
                           (lambda_um * lambda_um);
    out.raw[i] = d_omega * simpson(f, h);
  });

  double peak = 0.0;
  for (const auto& v : out.raw) {
    if (v) peak = std::max(peak, *v);
    else ++out.excluded;
  }
  out.normalized.resize(out.raw.size());
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    if (out.raw[i] && peak > 0.0) out.normalized[i] = *out.raw[i] / peak;
  }
  return out;
}

std::pair<double, double> support_edges(std::span<const double> x, std::span<const double> v,
                                        double fraction) {
  if (x.size() != v.size() || v.size() < 3) throw ConfigError("support_edges: bad input sizes");
  const double level = fraction * *std::max_element(v.begin(), v.end());
  std::size_t lo = 0;
  while (v[lo] < level) ++lo;
  std::size_t hi = v.size() - 1;
  while (v[hi] < level) --hi;
  if (lo == 0 || hi == v.size() - 1) throw DomainError("support reaches the end of the wavelength grid");
  auto cross = [&](std::size_t below, std::size_t above) {
    const double t = (level - v[below]) / (v[above] - v[below]);
    return x[below] + t * (x[above] - x[below]);
  };
  return {cross(lo - 1, lo), cross(hi + 1, hi)};
}

void DetectorModel::validate() const {
  if (points.size() < 2) throw ConfigError("detector '" + name + "' needs at least 2 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [l, e] = points[i];
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("detector '" + name + "': efficiency outside (0, 1]");
    if (i > 0 && !(l > points[i - 1].first)) {
      throw ConfigError("detector '" + name + "': wavelengths must increase");
    }
  }
}

DetectorModel parse_detector_csv(std::istream& in, std::string name,
                                 DetectorModel::Interpolation interpolation) {
  DetectorModel det{std::move(name), {}, interpolation};
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double l = 0.0;
    double e = 0.0;
    if (!(fields >> l >> e)) {
      if (det.points.empty()) continue;  // header row
      throw ConfigError("detector '" + det.name + "': malformed row " + std::to_string(row));
    }
    det.points.emplace_back(l, e);
  }
  det.validate();
  return det;
}

DetectorModel load_detector_csv(const std::filesystem::path& path,
                                DetectorModel::Interpolation interpolation) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open detector file " + path.string());
  return parse_detector_csv(in, path.stem().string(), interpolation);
}

double detector_efficiency(const DetectorModel& det, double wavelength_nm) {
  const auto& p = det.points;
  if (!(wavelength_nm >= p.front().first && wavelength_nm <= p.back().first)) {
    std::ostringstream msg;
    msg << "detector '" << det.name << "': " << wavelength_nm << " nm outside the tabulated range ["
        << p.front().first << ", " << p.back().first << "] nm";
    throw DomainError(msg.str());
  }
  auto it = std::lower_bound(p.begin(), p.end(), wavelength_nm,
                             [](const auto& pt, double l) { return pt.first < l; });
  if (it->first == wavelength_nm) return it->second;
  const auto& [l1, e1] = *it;
  const auto& [l0, e0] = *(it - 1);
  const double t = (wavelength_nm - l0) / (l1 - l0);
  if (det.interpolation == DetectorModel::Interpolation::linear) return e0 + t * (e1 - e0);
  return std::exp(std::log(e0) + t * (std::log(e1) - std::log(e0)));
}

std::vector<double> raw_counts_model(std::span<const double> spectrum,
                                     std::span<const double> wavelength_nm,
                                     const DetectorModel& detector, double coupling) {
  if (spectrum.size() != wavelength_nm.size()) {
    throw ConfigError("raw_counts_model: spectrum and wavelength grid differ in length");
  }
  std::vector<double> out(spectrum.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = spectrum[i] * detector_efficiency(detector, wavelength_nm[i]) * coupling;
  }
  return out;
}

}  // namespace qpm
