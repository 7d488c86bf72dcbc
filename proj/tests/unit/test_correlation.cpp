#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "qpmsim/biphoton.hpp"
#include "qpmsim/compensation.hpp"
#include "qpmsim/correlation.hpp"
#include "qpmsim/errors.hpp"

using namespace qpm;

namespace {

const SpectralAmplitude& device_spectrum() {
  static const SpectralAmplitude amp =
      spectrum_scan(fixture::fabricated_device(), 0.70, 2.2, 1 << 13, Geometry{0.25});
  return amp;
}

CorrelationTrace trace_of(const std::vector<double>& v, double step = 0.5) {
  CorrelationTrace t;
  t.tau = UniformGrid{-step * static_cast<double>(v.size() / 2), step, v.size()};
  t.values = v;
  t.raw_peak = 1.0;
  return t;
}

/// Every level crossing of the half maximum, found by scanning all adjacent pairs.
double brute_force_width(const CorrelationTrace& t) {
  const double half = 0.5 * *std::max_element(t.values.begin(), t.values.end());
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
    const double a = t.values[i] - half;
    const double b = t.values[i + 1] - half;
    if ((a < 0) != (b < 0)) crossings.push_back(t.tau[i] + t.tau.step * a / (a - b));
  }
  return crossings.back() - crossings.front();
}

SpectralAmplitude synthetic(const std::vector<cplx>& values, const UniformGrid& grid, double pump) {
  return SpectralAmplitude{grid, values, std::vector<std::uint8_t>(values.size(), 1), Geometry{}, "synthetic", 1.0, pump};
}

}  // namespace

TEST(Fwhm, Rectangle) {
  std::vector<double> v(2001, 0.0);
  for (std::size_t i = 900; i <= 1100; ++i) v[i] = 1.0;
  const auto t = trace_of(v, 0.25);
  EXPECT_NEAR(fwhm(t), 200 * 0.25, 0.25);
}

TEST(Fwhm, Gaussian) {
  const double sigma = 12.0;
  std::vector<double> v(4001);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = (static_cast<double>(i) - 2000.0) * 0.1;
    v[i] = std::exp(-x * x / (2 * sigma * sigma));
  }
  EXPECT_LT(fixture::rel_err(fwhm(trace_of(v, 0.1)), 2 * std::sqrt(2 * std::log(2.0)) * sigma), 1e-3);
}

TEST(Fwhm, SideLobesUseOutermostCrossings) {
  std::vector<double> v(4001);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = (static_cast<double>(i) - 2000.0) * 0.1;
    v[i] = std::exp(-x * x / 8.0) + 0.6 * std::exp(-(x - 30) * (x - 30) / 8.0) +
           0.6 * std::exp(-(x + 42) * (x + 42) / 8.0);
  }
  const auto t = trace_of(v, 0.1);
  EXPECT_NEAR(fwhm(t), brute_force_width(t), 1e-9);
  EXPECT_GT(fwhm(t), 70.0);
  EXPECT_LT(fwhm(t, FwhmMode::central_lobe), 5.0);
}

TEST(Fwhm, Errors) {
  std::vector<double> edge(101, 0.0);
  edge[0] = 1.0;
  EXPECT_THROW(fwhm(trace_of(edge)), DomainError);
  std::vector<double> flat(101, 1.0);
  flat[50] = 1.2;
  EXPECT_THROW(fwhm(trace_of(flat)), DomainError);
}

TEST(Cycles, Conversions) {
  EXPECT_NEAR(cycles(4.4, 282.0), 1.24, 0.005);
  EXPECT_NEAR(cycles(26.6, 282.0), 7.5, 0.01);
  EXPECT_NEAR(cycles(1e3 / 281.76, 281.76), 1.0, 1e-15);
  EXPECT_THROW(cycles(-1.0, 282.0), DomainError);
}

TEST(Sfg, ParsevalAcrossTheTransform) {
  const auto& amp = device_spectrum();
  const auto td = time_domain_amplitude(amp, 8);
  double spectral = 0.0;
  for (const auto& v : amp.values) spectral += std::norm(v);
  spectral *= amp.omega.step;
  double temporal = 0.0;
  for (const auto& v : td.values) temporal += std::norm(v);
  temporal *= kTwoPi * td.tau.step;
  EXPECT_LT(fixture::rel_err(temporal, spectral), 1e-9);
  EXPECT_NEAR(td.tau.step, kTwoPi / (8.0 * amp.size() * amp.omega.step), 1e-15);
}

TEST(Sfg, FftMatchesDirectQuadrature) {
  const auto amp = apply_compensator(Compensator::perfect(device_spectrum()), device_spectrum());
  const auto td = time_domain_amplitude(amp, 8);
  double peak = 0.0;
  for (const auto& v : td.values) peak = std::max(peak, std::norm(v));
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> idx(0, td.values.size() - 1);
  int checked = 0;
  while (checked < 16) {
    const std::size_t m = idx(rng);
    if (std::norm(td.values[m]) < 1e-3 * peak && checked < 8) continue;  // half near the peak region
    const cplx direct = direct_time_amplitude(amp, td.tau[m]);
    EXPECT_LE(std::abs(std::norm(direct) - std::norm(td.values[m])), 1e-8 * std::norm(direct) + 1e-14 * peak);
    ++checked;
  }
}

TEST(Sfg, GlobalPhaseDoesNotMatter) {
  const auto& amp = device_spectrum();
  auto rotated = amp;
  for (auto& v : rotated.values) v *= std::polar(1.0, 1.234);
  const auto a = sfg_noncollinear(apply_compensator(Compensator::perfect(amp), amp));
  const auto b = sfg_noncollinear(apply_compensator(Compensator::perfect(amp), rotated));
  for (std::size_t i = 0; i < a.values.size(); ++i) ASSERT_NEAR(a.values[i], b.values[i], 1e-12);
}

TEST(Sfg, LinearPhaseTranslatesTrace) {
  const auto& amp = device_spectrum();
  const auto flat = apply_compensator(Compensator::perfect(amp), amp);
  auto delayed = flat;
  const double tau0 = 40.0;
  for (std::size_t i = 0; i < delayed.size(); ++i) delayed.values[i] *= std::polar(1.0, -delayed.omega[i] * tau0);
  const auto a = sfg_noncollinear(flat);
  const auto b = sfg_noncollinear(delayed);
  const auto pa = std::max_element(a.values.begin(), a.values.end()) - a.values.begin();
  const auto pb = std::max_element(b.values.begin(), b.values.end()) - b.values.begin();
  EXPECT_NEAR(b.tau[static_cast<std::size_t>(pb)] - a.tau[static_cast<std::size_t>(pa)], tau0, a.tau.step);
  EXPECT_NEAR(fwhm(a), fwhm(b), a.tau.step);
}

TEST(Sfg, CompressionIsMonotone) {
  const QpmDevice dev = fixture::fabricated_device();
  const auto& amp = device_spectrum();
  const double wc = dev.degenerate_omega();
  const double gdd = measure_gdd(sample_spectral_phase(dev, amp.omega, Geometry{0.25}), wc);
  PrismPairModel prism;
  prism.glass = fixture::bundled_media().at("SF14");
  prism = tune_separation_for_gdd(prism, -gdd, wc);
  const double perfect = fwhm(sfg_noncollinear(apply_compensator(Compensator::perfect(amp), amp)));
  const double prismed = fwhm(sfg_noncollinear(apply_compensator(Compensator::prism_pair(prism), amp)));
  const double none = fwhm(sfg_noncollinear(amp));
  EXPECT_LE(perfect, prismed);
  EXPECT_LE(prismed, none);
}

TEST(Sfg, CollinearEqualsHalfBandNoncollinearForSymmetricSpectrum) {
  const double pump = 3.54;
  const auto grid = UniformGrid::spanning(1.0, pump - 1.0, 2049);
  std::vector<cplx> values(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) values[i] = std::exp(-std::pow((grid[i] - pump / 2) / 0.3, 2));
  const auto amp = synthetic(values, grid, pump);
  auto half = amp;
  for (std::size_t i = 0; i < half.size(); ++i) {
    if (half.omega[i] < pump / 2) half.values[i] = 0.0;
  }
  const auto col = sfg_collinear(amp, pump);
  const auto non = sfg_noncollinear(half);
  for (std::size_t i = 0; i < col.values.size(); ++i) ASSERT_NEAR(col.values[i], non.values[i], 1e-12);
}

TEST(Sfg, CollinearNeedsTheDegeneratePoint) {
  const auto grid = UniformGrid::spanning(2.0, 2.5, 64);
  const auto amp = synthetic(std::vector<cplx>(64, 1.0), grid, 3.54);
  EXPECT_THROW(sfg_collinear(amp, 3.54), ConfigError);
}

TEST(Sfg, FlaggedCellsRejected) {
  const auto amp = spectrum_scan(fixture::fabricated_device(), 0.55, 1.0, 256, Geometry{0.25});
  ASSERT_GT(amp.flagged(), 0u);
  EXPECT_THROW(sfg_noncollinear(amp), ConfigError);
}

TEST(Sfg, PaddingResolvesTransformLimit) {
  // Doubling the zero padding moves the compressed width by well under 1 %.
  const auto flat = apply_compensator(Compensator::perfect(device_spectrum()), device_spectrum());
  SfgOptions eight;
  SfgOptions sixteen;
  sixteen.pad_factor = 16;
  EXPECT_LT(fixture::rel_err(fwhm(sfg_noncollinear(flat, eight)), fwhm(sfg_noncollinear(flat, sixteen))), 1e-2);
}

TEST(Sfg, SeedlessVerificationIsDeterministic) {
  SfgOptions opt;
  opt.seedless = true;
  const auto a = sfg_noncollinear(device_spectrum(), opt);
  const auto b = sfg_noncollinear(device_spectrum(), opt);
  EXPECT_EQ(a.values, b.values);
}

TEST(TuneSeparation, PeakSearchStaysInRangeAndImproves) {
  PrismPairModel prism;
  prism.glass = fixture::bundled_media().at("SF14");
  const auto& amp = device_spectrum();
  const auto tuned = tune_separation_for_peak(prism, amp, 500.0, 2000.0);
  EXPECT_GE(tuned.separation_mm, 500.0);
  EXPECT_LE(tuned.separation_mm, 2000.0);
  const double at500 = sfg_noncollinear(apply_compensator(Compensator::prism_pair(prism), amp)).raw_peak;
  const double best = sfg_noncollinear(apply_compensator(Compensator::prism_pair(tuned), amp)).raw_peak;
  EXPECT_GT(best, at500);
}
