#pragma once

#include <complex>

namespace qpm {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
///
/// In the closed upper half plane this uses Weideman's rational approximation
/// (SIAM J. Numer. Anal. 31, 1497 (1994)) with 64 terms, accurate to ~1e-15
/// relative. The lower half plane follows from w(z) = 2 exp(-z^2) - w(-z) and
/// throws DomainError when exp(-z^2) overflows.
std::complex<double> faddeeva(std::complex<double> z);

/// Imaginary error function erfi(z) = -i erf(i z) = (2/sqrt(pi)) int_0^z exp(t^2) dt.
///
/// |z| <= kErfiSeriesRadius sums the Maclaurin series; elsewhere erfi is rebuilt from
/// w on the upper half plane after folding z into the first quadrant with
/// erfi(-z) = -erfi(z) and erfi(conj z) = conj erfi(z). Along the diagonals used by
/// the biphoton amplitude z^2 is purely imaginary and nothing grows.
///
/// Throws DomainError when Re(z^2) exceeds kErfiOverflowGuard; use erfi_scaled there.
std::complex<double> erfi(std::complex<double> z);

/// exp(-z^2) erfi(z), finite along the real axis where erfi itself overflows.
std::complex<double> erfi_scaled(std::complex<double> z);

/// Maclaurin series for erfi; exposed so tests can check the regime boundary.
std::complex<double> erfi_series(std::complex<double> z);

/// erfi assembled from the Faddeeva function regardless of |z|.
std::complex<double> erfi_from_faddeeva(std::complex<double> z);

inline constexpr double kErfiSeriesRadius = 1.5;
inline constexpr double kErfiOverflowGuard = 700.0;

}  // namespace qpm
