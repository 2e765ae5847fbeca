#pragma once

#include <complex>
#include <functional>

namespace regp::specfun {

using Complex = std::complex<double>;

/// Bessel functions of the first kind of order 0 and 1.
///
/// Power series near the origin, Miller backward recurrence (normalized by
/// J0 + 2 sum J_2k = 1) up to |x| = 25 and the Hankel asymptotic expansion
/// beyond. Absolute accuracy ~1e-15 for |x| <= 2000.
double bessel_j0(double x);
double bessel_j1(double x);

struct BesselPair {
  double j0;
  double j1;
};

/// J0(x) and J1(x) from one evaluation; the hot loops need both.
BesselPair bessel_j01(double x);

/// Order-dispatching front end; only nu = 0 and nu = 1 are supported.
double bessel_j(int nu, double x);

/// Largest polynomial degree accepted by laguerre().
inline constexpr int kLaguerreMaxDegree = 1'000'000;

/// Laguerre polynomial L_n(x) by the forward three-term recurrence.
/// Throws RangeError for n < 0 or n > kLaguerreMaxDegree.
double laguerre(int n, double x);

/// Evaluates L_0(x) ... L_{n_max}(x) in one recurrence pass.
void laguerre_sequence(int n_max, double x, double* out);

/// Gamma function for x > 0 (Lanczos, g = 7, with reflection below 1/2).
double gamma_fn(double x);

double erf_real(double x);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), valid for Im z >= 0.
///
/// Weideman's rational approximation with 40 terms; relative accuracy about
/// 2e-14 in the closed upper half plane. For Im z < 0 the reflection
/// w(z) = 2 exp(-z^2) - w(-z) is applied and may overflow.
Complex faddeeva_w(Complex z);

/// Scaled complementary error function erfcx(x) = exp(x^2) erfc(x), x >= 0.
double erfcx(double x);

/// Largest |Im z| accepted by erf_complex().
inline constexpr double kErfComplexMaxImag = 50.0;

/// Error function of complex argument.
///
/// Validated region: |Im z| <= 50. Outside it, or where the result itself
/// overflows (Im(z)^2 - Re(z)^2 > ~709), RangeError is thrown.
Complex erf_complex(Complex z);

/// Bisection on a monotone function with a sign change on [lo, hi].
/// Throws BracketError when f(lo) and f(hi) have the same strict sign.
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

} // namespace regp::specfun
