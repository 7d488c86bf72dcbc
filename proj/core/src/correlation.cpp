#include "qpmsim/correlation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qpmsim/errors.hpp"

namespace qpm {
namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using FftwPlan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// fftw_plan_* is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_usable(const SpectralAmplitude& amp) {
  if (amp.size() < 2 || !(amp.omega.step > 0.0)) throw ConfigError("SFG needs a uniform increasing grid");
  if (amp.flagged() != 0) {
    std::ostringstream msg;
    msg << "SFG needs the full band: " << amp.flagged() << " spectral cells are flagged invalid";
    throw ConfigError(msg.str());
  }
}

CorrelationTrace to_trace(const SpectralAmplitude& amp, const TimeDomainAmplitude& td,
                          double cutoff, const SfgOptions& options) {
  CorrelationTrace trace;
  trace.tau = td.tau;
  trace.values.resize(td.values.size());
  std::transform(td.values.begin(), td.values.end(), trace.values.begin(),
                 [](cplx v) { return std::norm(v); });
  trace.raw_peak = *std::max_element(trace.values.begin(), trace.values.end());
  if (!(trace.raw_peak > 0.0)) throw DomainError("SFG signal is identically zero");

  if (options.verify && options.verify_points > 0) {
    std::vector<std::size_t> candidates;
    for (std::size_t m = 0; m < trace.values.size(); ++m) {
      if (trace.values[m] >= 1e-3 * trace.raw_peak) candidates.push_back(m);
    }
    std::vector<std::size_t> picks;
    if (options.seedless) {
      const std::size_t n = std::min(options.verify_points, candidates.size());
      for (std::size_t i = 0; i < n; ++i) picks.push_back(candidates[i * candidates.size() / n]);
    } else {
      std::mt19937_64 rng(options.seed);
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      for (std::size_t i = 0; i < options.verify_points; ++i) picks.push_back(candidates[pick(rng)]);
    }
    for (std::size_t m : picks) {
      const double direct = std::norm(direct_time_amplitude(amp, trace.tau[m], cutoff));
      if (std::abs(direct - trace.values[m]) > options.verify_tolerance * direct) {
        std::ostringstream msg;
        msg << "FFT and direct quadrature disagree at tau = " << trace.tau[m] << " fs";
        throw std::runtime_error(msg.str());
      }
    }
  }

  for (double& v : trace.values) v /= trace.raw_peak;
  trace.normalized = true;
  trace.center_frequency_thz = thz_from_omega(0.5 * amp.pump_omega);
  return trace;
}

}  // namespace

TimeDomainAmplitude time_domain_amplitude(const SpectralAmplitude& amp, std::size_t pad_factor,
                                          double lower_cutoff_omega) {
  if (pad_factor < 1) throw ConfigError("pad factor must be >= 1");
  const std::size_t N = amp.size();
  const std::size_t M = N * pad_factor;
  const double dw = amp.omega.step;
  const double dtau = kTwoPi / (static_cast<double>(M) * dw);

  FftwBuffer buf(fftw_alloc_complex(M));
  if (!buf) throw std::bad_alloc();
  FftwPlan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(M), buf.get(), buf.get(), FFTW_BACKWARD,
                                FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < M; ++k) {
    const cplx v = (k < N && amp.omega[k] >= lower_cutoff_omega) ? amp.values[k] : cplx{};
    buf[k][0] = v.real();
    buf[k][1] = v.imag();
  }
  fftw_execute(plan.get());

  TimeDomainAmplitude out;
  const auto half = static_cast<std::ptrdiff_t>(M / 2);
  out.tau = UniformGrid{-static_cast<double>(half) * dtau, dtau, M};
  out.values.resize(M);
  const double scale = dw / kTwoPi;
  for (std::size_t i = 0; i < M; ++i) {
    // tau_i = (i - M/2) dtau  <->  FFT bin (i - M/2) mod M
    const std::size_t bin = (i + M - static_cast<std::size_t>(half)) % M;
    const double tau = out.tau[i];
    const cplx sum{buf[bin][0], buf[bin][1]};
    out.values[i] = scale * std::polar(1.0, amp.omega.start * tau) * sum;
  }
  return out;
}

cplx direct_time_amplitude(const SpectralAmplitude& amp, double tau_fs, double lower_cutoff_omega) {
  long double re = 0.0L;
  long double im = 0.0L;
  for (std::size_t k = 0; k < amp.size(); ++k) {
    if (amp.omega[k] < lower_cutoff_omega) continue;
    const long double w = static_cast<long double>(amp.omega.start) +
                          static_cast<long double>(amp.omega.step) * static_cast<long double>(k);
    const long double ph = w * static_cast<long double>(tau_fs);
    const long double c = std::cos(ph);
    const long double s = std::sin(ph);
    re += amp.values[k].real() * c - amp.values[k].imag() * s;
    im += amp.values[k].real() * s + amp.values[k].imag() * c;
  }
  const double scale = amp.omega.step / kTwoPi;
  return {scale * static_cast<double>(re), scale * static_cast<double>(im)};
}

CorrelationTrace sfg_noncollinear(const SpectralAmplitude& amp, const SfgOptions& options) {
  check_usable(amp);
  const double no_cutoff = -std::numeric_limits<double>::infinity();
  return to_trace(amp, time_domain_amplitude(amp, options.pad_factor), no_cutoff, options);
}

CorrelationTrace sfg_collinear(const SpectralAmplitude& amp, double pump_omega,
                               const SfgOptions& options) {
  check_usable(amp);
  const double cutoff = 0.5 * pump_omega;
  if (amp.omega.front() > cutoff || amp.omega.back() < cutoff) {
    throw ConfigError("collinear SFG: spectral grid must contain omega_p / 2");
  }
  return to_trace(amp, time_domain_amplitude(amp, options.pad_factor, cutoff), cutoff, options);
}

double fwhm(const CorrelationTrace& trace, FwhmMode mode) {
  const auto& v = trace.values;
  if (v.size() < 3) throw DomainError("fwhm: trace too short");
  const auto peak_it = std::max_element(v.begin(), v.end());
  const auto p = static_cast<std::size_t>(peak_it - v.begin());
  if (p == 0 || p == v.size() - 1) throw DomainError("fwhm: peak at grid boundary");
  const double half = 0.5 * *peak_it;

  std::size_t lo = 0;
  std::size_t hi = v.size() - 1;
  if (mode == FwhmMode::outermost) {
    while (v[lo] < half) ++lo;
    while (v[hi] < half) --hi;
  } else {
    lo = p;
    while (lo > 0 && v[lo - 1] >= half) --lo;
    hi = p;
    while (hi + 1 < v.size() && v[hi + 1] >= half) ++hi;
  }
  if (lo == 0 || hi == v.size() - 1) throw DomainError("fwhm: no half-maximum crossing inside the trace");
  auto cross = [&](std::size_t below, std::size_t above) {
    const double t = (half - v[below]) / (v[above] - v[below]);
    return trace.tau[below] + t * (trace.tau[above] - trace.tau[below]);
  };
  return cross(hi + 1, hi) - cross(lo - 1, lo);
}

double cycles(double width_fs, double center_frequency_thz) {
  if (!(width_fs > 0.0 && center_frequency_thz > 0.0)) {
    throw DomainError("cycles: width and centre frequency must be positive");
  }
  return width_fs * center_frequency_thz * 1e-3;
}

PrismPairModel tune_separation_for_peak(PrismPairModel prism, const SpectralAmplitude& amp,
                                        double min_mm, double max_mm, std::size_t pad_factor) {
  if (!(min_mm >= 0.0 && max_mm > min_mm)) throw ConfigError("separation search range is empty");
  check_usable(amp);
  auto peak = [&](double sep_mm) {
    prism.separation_mm = sep_mm;
    const auto td =
        time_domain_amplitude(apply_compensator(Compensator::prism_pair(prism), amp), pad_factor);
    double best = 0.0;
    for (const auto& v : td.values) best = std::max(best, std::norm(v));
    return best;
  };
  constexpr int kCoarse = 48;
  const double step = (max_mm - min_mm) / kCoarse;
  double best_sep = min_mm;
  double best_val = -1.0;
  for (int i = 0; i <= kCoarse; ++i) {
    const double s = min_mm + step * i;
    const double v = peak(s);
    if (v > best_val) {
      best_val = v;
      best_sep = s;
    }
  }
  double a = std::max(min_mm, best_sep - step);
  double b = std::min(max_mm, best_sep + step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = peak(c);
  double fd = peak(d);
  while (b - a > 1e-3) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = peak(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = peak(d);
    }
  }
  prism.separation_mm = 0.5 * (a + b);
  return prism;
}

}  // namespace qpm
