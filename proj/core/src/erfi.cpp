#include "qpmsim/erfi.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "qpmsim/errors.hpp"
#include "qpmsim/units.hpp"

namespace qpm {
namespace {

using cplx = std::complex<double>;

constexpr int kTerms = 64;
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);

struct Weideman {
  double L;
  // a[n] multiplies Z^n, n = 0 .. kTerms - 1
  std::array<double, kTerms> a;

  Weideman() : L(std::sqrt(kTerms / std::sqrt(2.0))), a{} {
    const int M = 2 * kTerms;
    for (int n = 1; n <= kTerms; ++n) {
      long double sum = 0.0L;
      for (int k = -M + 1; k < M; ++k) {
        const long double theta = static_cast<long double>(k) * std::numbers::pi_v<long double> / M;
        const long double t = L * std::tan(theta / 2);
        const long double f = std::exp(-t * t) * (L * L + t * t);
        sum += f * std::cos(n * theta);
      }
      a[n - 1] = static_cast<double>(sum / (2 * M));
    }
  }

  cplx operator()(cplx z) const {
    const cplx iz{-z.imag(), z.real()};
    const cplx denom = L - iz;
    const cplx Z = (L + iz) / denom;
    cplx p = a[kTerms - 1];
    for (int n = kTerms - 2; n >= 0; --n) p = p * Z + a[n];
    return 2.0 * p / (denom * denom) + kInvSqrtPi / denom;
  }
};

const Weideman& weideman() {
  static const Weideman table;
  return table;
}

[[noreturn]] void overflow(cplx z, const char* what) {
  std::ostringstream msg;
  msg << what << " overflows double precision at z = " << z
      << "; use erfi_scaled for arguments near the real axis";
  throw DomainError(msg.str());
}

}  // namespace

cplx faddeeva(cplx z) {
  if (z.imag() >= 0.0) return weideman()(z);
  const cplx z2 = z * z;
  if (-z2.real() > kErfiOverflowGuard) overflow(z, "w(z)");
  return 2.0 * std::exp(-z2) - weideman()(-z);
}

cplx erfi_series(cplx z) {
  const cplx z2 = z * z;
  cplx term = z;  // z^(2n+1) / n!
  cplx sum = z;
  for (int n = 1; n < 400; ++n) {
    term *= z2 / static_cast<double>(n);
    const cplx contrib = term / static_cast<double>(2 * n + 1);
    sum += contrib;
    if (std::abs(contrib) <= 1e-17 * std::abs(sum)) break;
  }
  return 2.0 * kInvSqrtPi * sum;
}

cplx erfi_from_faddeeva(cplx z) {
  // For z = x + iy in the first quadrant, erfi(z) = i conj(erf(u)) with u = y + ix,
  // and erf(u) = 1 - exp(-u^2) w(iu) where iu = -x + iy sits in the upper half plane.
  const double x = std::abs(z.real());
  const double y = std::abs(z.imag());
  const cplx u{y, x};
  const cplx erf_u = 1.0 - std::exp(-u * u) * weideman()(cplx{-x, y});
  cplx r{erf_u.imag(), erf_u.real()};  // i * conj(erf_u)
  if (z.real() < 0.0) r = -std::conj(r);
  if (z.imag() < 0.0) r = std::conj(r);
  return r;
}

cplx erfi(cplx z) {
  if ((z * z).real() > kErfiOverflowGuard) overflow(z, "erfi(z)");
  if (std::abs(z) <= kErfiSeriesRadius) return erfi_series(z);
  return erfi_from_faddeeva(z);
}

cplx erfi_scaled(cplx z) {
  const cplx i{0.0, 1.0};
  const cplx z2 = z * z;
  if (std::abs(z) <= kErfiSeriesRadius) return std::exp(-z2) * erfi_series(z);
  if (-z2.real() > kErfiOverflowGuard) overflow(z, "exp(-z^2)");
  if (z.imag() >= 0.0) return i * (std::exp(-z2) - weideman()(z));
  return i * (weideman()(-z) - std::exp(-z2));
}

}  // namespace qpm
