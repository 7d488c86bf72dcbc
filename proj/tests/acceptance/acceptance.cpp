// Acceptance suite: one PASS/FAIL line per criterion, sub-checks indented below it.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "erfi_oracle.hpp"
#include "fixtures.hpp"
#include "qpmsim/biphoton.hpp"
#include "qpmsim/compensation.hpp"
#include "qpmsim/correlation.hpp"
#include "qpmsim/device.hpp"
#include "qpmsim/erfi.hpp"
#include "qpmsim/instrument.hpp"

using namespace qpm;

namespace {

struct Check {
  std::string what;
  bool ok;
};

class Report {
 public:
  void check(const std::string& what, bool ok) { checks_.push_back({what, ok}); }

  /// `value` in [lo, hi]
  void within(const std::string& name, double value, double lo, double hi, const std::string& unit) {
    std::ostringstream s;
    s << name << " = " << fmt(value) << unit << "  (want [" << fmt(lo) << ", " << fmt(hi) << "]" << unit << ")";
    check(s.str(), value >= lo && value <= hi);
  }

  void below(const std::string& name, double value, double limit) {
    std::ostringstream s;
    s << name << " = " << fmt(value) << "  (want <= " << fmt(limit) << ")";
    check(s.str(), value <= limit);
  }

  void info(const std::string& line) { info_.push_back(line); }

  bool passed() const {
    return !checks_.empty() && std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.ok; });
  }

  void print(int id, const std::string& title) const {
    std::cout << (passed() ? "PASS" : "FAIL") << " criterion " << id << ": " << title << '\n';
    for (const auto& c : checks_) std::cout << "    [" << (c.ok ? "ok" : "red") << "] " << c.what << '\n';
    for (const auto& line : info_) std::cout << "    [info] " << line << '\n';
  }

  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
  }

 private:
  std::vector<Check> checks_;
  std::vector<std::string> info_;
};

constexpr std::size_t kPoints = std::size_t{1} << 14;
constexpr double kPhiDeg = 0.25;

const SpectralAmplitude& fabricated_spectrum() {
  static const SpectralAmplitude amp =
      spectrum_scan(fixture::fabricated_device(), 0.70, 2.2, kPoints, Geometry{kPhiDeg});
  return amp;
}

double compressed_width(const Compensator& comp, const SfgOptions& opt = {}) {
  return fwhm(sfg_noncollinear(apply_compensator(comp, fabricated_spectrum()), opt));
}

void device_arithmetic(Report& r) {
  const double eta = design_chirp(8.0, 8.825, 20000.0);
  const double per_cm2 = eta * kRadPerCm2PerRadPerUm2;
  std::ostringstream s;
  s << "design_chirp(8.000 um, 8.825 um, 20 mm) = " << Report::fmt(per_cm2)
    << " rad/cm^2, 3 significant figures vs 367.112";
  r.check(s.str(), std::round(per_cm2) == std::round(367.112));
  const QpmDevice dev = fixture::fabricated_device();
  r.below("relative error of period at z = L vs 8.825 um",
          std::abs(poling_period(dev, dev.length_um()) - 8.825) / 8.825, 1e-12);
  r.below("relative error of period at z = 0 vs 8.000 um", std::abs(poling_period(dev, 0.0) - 8.0) / 8.0, 1e-15);
}

void noncollinear_spectrum(Report& r) {
  const auto& amp = fabricated_spectrum();
  r.within("50% bandwidth", bandwidth_thz(amp, 0.5), 194.0 * 0.95, 194.0 * 1.05, " THz");
  const auto edges = band_edges(amp, 0.01);
  r.within("1% short edge", edges.short_nm, 760.0, 820.0, " nm");
  r.within("1% long edge", edges.long_nm, 1580.0, 1640.0, " nm");
}

void collinear_design(Report& r) {
  const auto amp = spectrum_scan(fixture::collinear_design_device(), 0.6137, 4.0, kPoints, Geometry{0.0});
  const auto edges = band_edges(amp, 0.01);
  r.within("1% short edge", edges.short_nm, 600.0, 700.0, " nm");
  r.within("1% long edge", edges.long_nm, 3450.0, 3550.0, " nm");
  r.info("flagged cells on the scan: " + std::to_string(amp.flagged()));
}

void spectral_phase_gdd(Report& r) {
  const QpmDevice dev = fixture::fabricated_device();
  const auto curve = sample_spectral_phase(dev, fabricated_spectrum().omega, Geometry{kPhiDeg});
  r.within("GDD of phi_spec at 1064 nm", measure_gdd(curve, omega_from_wavelength(1.064)), 7.4e3 * 0.9,
           7.4e3 * 1.1, " fs^2");
}

void correlation_ladder(Report& r) {
  const QpmDevice dev = fixture::fabricated_device();
  const auto& amp = fabricated_spectrum();
  const double wc = dev.degenerate_omega();
  const double device_gdd = measure_gdd(sample_spectral_phase(dev, amp.omega, Geometry{kPhiDeg}), wc);

  const double identity = compressed_width(Compensator::identity());
  const auto perfect_trace = sfg_noncollinear(apply_compensator(Compensator::perfect(amp), amp));
  const double perfect = fwhm(perfect_trace);
  const double quadratic = compressed_width(Compensator::quadratic(-7.4e3, omega_from_wavelength(1.064)));

  PrismPairModel prism;
  prism.glass = fixture::bundled_media().at("SF14");
  prism = tune_separation_for_gdd(prism, -device_gdd, wc);
  const double prism_width = compressed_width(Compensator::prism_pair(prism));

  r.within("identity FWHM", identity, 3600.0 * 0.85, 3600.0 * 1.15, " fs");
  r.within("perfect FWHM", perfect, 4.4 * 0.9, 4.4 * 1.1, " fs");
  r.within("perfect cycles", cycles(perfect, perfect_trace.center_frequency_thz), 1.05, 1.35, "");
  r.within("quadratic -7.4e3 fs^2 FWHM", quadratic, 18.0, 40.0, " fs");
  r.within("SF14 prism pair (GDD cancelled, l = " + Report::fmt(prism.separation_mm) + " mm) FWHM",
           prism_width, 18.0, 40.0, " fs");
  r.within("ratio perfect/identity", perfect / identity, 0.75 * 4.4 / 3600.0, 1.25 * 4.4 / 3600.0, "");
  r.within("ratio prism/identity", prism_width / identity, 0.75 * 7.54e-3, 1.25 * 7.54e-3, "");

  PrismPairModel best = prism;
  best = tune_separation_for_peak(best, amp, 500.0, 2000.0);
  r.info("SF14 prism pair tuned for peak SFG: l = " + Report::fmt(best.separation_mm) +
         " mm, FWHM = " + Report::fmt(compressed_width(Compensator::prism_pair(best))) + " fs");
  r.info("device GDD at the degenerate frequency: " + Report::fmt(device_gdd) + " fs^2");
}

void collinear_vs_noncollinear(Report& r) {
  const auto& amp = fabricated_spectrum();
  const auto flat = apply_compensator(Compensator::perfect(amp), amp);
  const double non = fwhm(sfg_noncollinear(flat));
  const auto col_trace = sfg_collinear(flat, amp.pump_omega);
  const double col = fwhm(col_trace);
  r.within("collinear FWHM", col, 8.8 * 0.9, 8.8 * 1.1, " fs");
  r.within("collinear / noncollinear", col / non, 1.9, 2.1, "");
  r.info("noncollinear FWHM " + Report::fmt(non) + " fs; collinear " +
         Report::fmt(cycles(col, col_trace.center_frequency_thz)) + " cycles");
}

void property_suites(Report& r) {
  {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rad(0.0, 6.0);
    std::uniform_real_distribution<double> arg(-kPi, kPi);
    double worst = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const std::complex<double> z = std::polar(rad(rng), arg(rng));
      worst = std::max(worst, fixture::erfi_error(erfi(z), fixture::erfi_series_oracle(z)));
    }
    r.below("erfi vs 50-digit series, |z| <= 6, 4000 points", worst, 1e-12);
  }
  const QpmDevice dev = fixture::fabricated_device();
  {
    const double wc = dev.degenerate_omega();
    const double half = wc - omega_from_wavelength(2.4);
    const auto grid = UniformGrid::spanning(wc - half, wc + half, 4001);
    auto asymmetry = [&](double phi_deg) {
      const auto amp = spectrum_scan_omega(dev, grid, Geometry{phi_deg});
      double peak = 0.0;
      for (const auto& v : amp.values) peak = std::max(peak, std::abs(v));
      double worst = 0.0;
      for (std::size_t i = 0; i < amp.size(); ++i) {
        const double a = std::abs(amp.values[i]);
        const double b = std::abs(amp.values[amp.size() - 1 - i]);
        worst = std::max(worst, std::abs(a - b) / std::max(a, 1e-6 * peak));
      }
      return worst;
    };
    r.below("|psi| signal/idler exchange asymmetry, phi = 0", asymmetry(0.0), 1e-9);
    // the printed phase-mismatch formula is not exchange symmetric off axis
    r.info("|psi| exchange asymmetry at phi = 0.25 deg (not a symmetry of the model): " +
           Report::fmt(asymmetry(kPhiDeg)));
  }
  const auto& amp = fabricated_spectrum();
  {
    const auto td = time_domain_amplitude(amp, 8);
    double spectral = 0.0;
    for (const auto& v : amp.values) spectral += std::norm(v);
    spectral *= amp.omega.step;
    double temporal = 0.0;
    for (const auto& v : td.values) temporal += std::norm(v);
    temporal *= kTwoPi * td.tau.step;
    r.below("Parseval relative mismatch", std::abs(temporal - spectral) / spectral, 1e-9);
  }
  {
    const auto flat = apply_compensator(Compensator::perfect(amp), amp);
    const auto td = time_domain_amplitude(flat, 8);
    double peak = 0.0;
    for (const auto& v : td.values) peak = std::max(peak, std::norm(v));
    double worst = 0.0;
    const std::size_t n = td.values.size();
    for (std::size_t k = 0; k < 16; ++k) {
      // half the delays around the peak, half spread over the window
      const std::size_t m = k < 8 ? n / 2 - 8 + 2 * k : (k - 8) * n / 8 + n / 32;
      const double direct = std::norm(direct_time_amplitude(flat, td.tau[m]));
      worst = std::max(worst, std::abs(direct - std::norm(td.values[m])) / std::max(direct, 1e-6 * peak));
    }
    r.below("FFT vs direct quadrature, 16 delays", worst, 1e-8);
  }
  {
    std::vector<double> lam;
    for (double l = 760.0; l <= 1700.0; l += 4.0) lam.push_back(l);
    const auto a = detected_spectrum(dev, AcceptanceWindow{0.11, 0.39, 33}, lam);
    const auto b = detected_spectrum(dev, AcceptanceWindow{0.11, 0.39, 65}, lam);
    double worst = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) worst = std::max(worst, std::abs(*a.raw[i] / *b.raw[i] - 1.0));
    r.below("angular quadrature 33 vs 65 samples", worst, 1e-3);
  }
  {
    const auto coarse = spectrum_scan(dev, 0.70, 2.2, kPoints / 2, Geometry{kPhiDeg});
    auto band_sum = [](const SpectralAmplitude& s) {
      const double w0 = omega_from_wavelength(1.9);
      const double w1 = omega_from_wavelength(0.72);
      double sum = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.omega[i] >= w0 && s.omega[i] <= w1) sum += std::norm(s.values[i]);
      }
      return sum * s.omega.step;
    };
    const double fine = band_sum(amp);
    r.below("spectral grid 2^13 vs 2^14, band photon number", std::abs(band_sum(coarse) - fine) / fine, 5e-4);
  }
  {
    const auto flat = apply_compensator(Compensator::perfect(amp), amp);
    SfgOptions sixteen;
    sixteen.pad_factor = 16;
    const double w8 = fwhm(sfg_noncollinear(flat));
    const double w16 = fwhm(sfg_noncollinear(flat, sixteen));
    r.below("zero padding 8 vs 16, compressed FWHM", std::abs(w8 - w16) / w16, 1e-2);
  }
}

void instrument_model(Report& r) {
  const QpmDevice dev = fixture::fabricated_device();
  std::vector<double> lam;
  for (double l = 600.0; l <= 1800.0 + 1e-9; l += 2.0) lam.push_back(l);
  const auto ds = detected_spectrum(dev, AcceptanceWindow{}, lam);
  std::vector<double> xs;
  std::vector<double> s;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (!ds.normalized[i]) continue;
    xs.push_back(lam[i]);
    s.push_back(*ds.normalized[i]);
  }
  const auto [lo, hi] = support_edges(xs, s, 0.01);
  r.within("detected 1% short edge", lo, 760.0, 820.0, " nm");
  r.within("detected 1% long edge", hi, 1580.0, 1640.0, " nm");

  const auto det = load_detector_csv(std::string(QPMSIM_TEST_DATA_DIR) + "/detectors/snspd.csv");
  auto s_at = [&](double nm) {
    const auto it = std::find(lam.begin(), lam.end(), nm);
    return *ds.raw[static_cast<std::size_t>(it - lam.begin())];
  };
  const double c800 = s_at(800.0) * detector_efficiency(det, 800.0);
  const double c1550 = s_at(1550.0) * detector_efficiency(det, 1550.0);
  r.within("SNSPD counts ratio 1550/800 nm", c1550 / c800, 7e-3 / 3.0, 7e-3 * 3.0, "");
  r.info("excluded wavelengths (idler outside the Sellmeier range): " + std::to_string(ds.excluded));
  r.info("detector table ends at 1550 nm; no extrapolation to 1600 nm");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<void(Report&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "device arithmetic", device_arithmetic},
      {2, "noncollinear spectrum of the fabricated device", noncollinear_spectrum},
      {3, "collinear design spectrum", collinear_design},
      {4, "device spectral phase GDD", spectral_phase_gdd},
      {5, "temporal correlation ladder", correlation_ladder},
      {6, "collinear vs noncollinear SFG", collinear_vs_noncollinear},
      {7, "property suites", property_suites},
      {8, "instrument forward model", instrument_model},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Report r;
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.check(std::string("exception: ") + e.what(), false);
    }
    r.print(c.id, c.title);
    std::cout.flush();
    failed += r.passed() ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
