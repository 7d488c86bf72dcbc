#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "qpmsim/biphoton.hpp"
#include "qpmsim/compensation.hpp"
#include "qpmsim/correlation.hpp"
#include "qpmsim/device.hpp"
#include "qpmsim/erfi.hpp"
#include "qpmsim/instrument.hpp"

namespace {

const qpm::MediaLibrary& media() {
  static const qpm::MediaLibrary lib =
      qpm::MediaLibrary::from_file(std::string(QPMSIM_BENCH_DATA_DIR) + "/media.json");
  return lib;
}

const qpm::QpmDevice& device() {
  static const qpm::QpmDevice dev(media().at("MgSLT"), 20000.0, 8.0, qpm::design_chirp(8.0, 8.825, 20000.0),
                                  0.532);
  return dev;
}

std::vector<std::complex<double>> erfi_arguments(double radius) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> r(0.0, radius);
  std::uniform_real_distribution<double> t(-3.14159, 3.14159);
  std::vector<std::complex<double>> z(1024);
  for (auto& v : z) v = std::polar(r(rng), t(rng));
  return z;
}

}  // namespace

static void BM_Erfi(benchmark::State& state) {
  const auto z = erfi_arguments(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    for (const auto& v : z) benchmark::DoNotOptimize(qpm::erfi(v));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(z.size()));
}
BENCHMARK(BM_Erfi)->Arg(1)->Arg(6)->Arg(20);

static void BM_SpectrumScan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpm::spectrum_scan(device(), 0.70, 2.2, n, qpm::Geometry{0.25}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpectrumScan)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);

static void BM_SfgTrace(benchmark::State& state) {
  const auto amp = qpm::spectrum_scan(device(), 0.70, 2.2, static_cast<std::size_t>(state.range(0)),
                                      qpm::Geometry{0.25});
  const auto flat = qpm::apply_compensator(qpm::Compensator::perfect(amp), amp);
  for (auto _ : state) benchmark::DoNotOptimize(qpm::sfg_noncollinear(flat));
}
BENCHMARK(BM_SfgTrace)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);

static void BM_DetectedSpectrum(benchmark::State& state) {
  std::vector<double> lam;
  for (double l = 700.0; l <= 1800.0; l += 2.0) lam.push_back(l);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpm::detected_spectrum(device(), qpm::AcceptanceWindow{}, lam));
  }
}
BENCHMARK(BM_DetectedSpectrum)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
