#include "regp/specfun.hpp"

#include "regp/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace regp::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMillerLimit = 25.0;
constexpr double kSeriesLimit = 1e-3;

struct J01 {
  double j0;
  double j1;
};

// |x| < kSeriesLimit: two terms of the power series are exact to double precision.
J01 bessel_series(double x) {
  const double q = 0.25 * x * x;
  return {1.0 - q * (1.0 - 0.25 * q), 0.5 * x * (1.0 - 0.5 * q * (1.0 - q / 6.0))};
}

J01 bessel_miller(double x) {
  // Start well above x so the backward recurrence has converged to the minimal solution.
  int m = static_cast<int>(x) + 40;
  if (m % 2 != 0) ++m;
  const double two_over_x = 2.0 / x;
  double jp1 = 0.0; // J_{k+1}
  double jk = 1e-300; // J_k
  double sum = 0.0;
  double j0 = 0.0;
  double j1 = 0.0;
  for (int k = m; k >= 1; --k) {
    const double jm1 = k * two_over_x * jk - jp1;
    jp1 = jk;
    jk = jm1;
    if (std::abs(jk) > 1e250) {
      jk *= 1e-250;
      jp1 *= 1e-250;
      sum *= 1e-250;
      j1 *= 1e-250;
    }
    // jk now holds J_{k-1}
    if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * jk;
    if (k - 1 == 1) j1 = jk;
  }
  j0 = jk;
  sum += j0;
  return {j0 / sum, j1 / sum};
}

// Hankel expansion: J_nu = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (nu/2 + 1/4) pi.
void hankel_pq(int nu, double x, double& p, double& q) {
  const double mu = 4.0 * nu * nu;
  const double inv8x = 1.0 / (8.0 * x);
  p = 1.0;
  q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) * inv8x / k;
    const double mag = std::abs(term);
    if (mag > prev) break; // asymptotic series started diverging
    prev = mag;
    // k odd contributes to Q with sign (-1)^((k-1)/2); k even to P with sign (-1)^(k/2)
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? term : -term);
    } else {
      p += ((k / 2) % 2 == 0 ? term : -term);
    }
    if (mag < 1e-17) break;
  }
}

J01 bessel_asymptotic(double x) {
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double r2 = std::numbers::sqrt2 / 2.0;
  double p0, q0, p1, q1;
  hankel_pq(0, x, p0, q0);
  hankel_pq(1, x, p1, q1);
  // cos/sin of x - pi/4 and x - 3pi/4 without forming the shifted argument
  const double c0 = r2 * (c + s), s0 = r2 * (s - c);
  const double c1 = r2 * (s - c), s1 = -r2 * (s + c);
  return {amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1)};
}

J01 bessel_pair(double x) {
  const double ax = std::abs(x);
  J01 r;
  if (ax == 0.0) {
    r = {1.0, 0.0};
  } else if (ax < kSeriesLimit) {
    r = bessel_series(ax);
  } else if (ax < kMillerLimit) {
    r = bessel_miller(ax);
  } else {
    r = bessel_asymptotic(ax);
  }
  if (x < 0.0) r.j1 = -r.j1;
  return r;
}

// Weideman (1994) coefficients for N = 40, computed once by a direct DFT.
struct WeidemanTable {
  static constexpr int N = 40;
  double L;
  std::array<double, N> a; // a[0] multiplies Z^(N-1) (Horner order)

  WeidemanTable() {
    const int M = 2 * N;
    const int M2 = 2 * M;
    L = std::sqrt(N / std::numbers::sqrt2);
    // f sampled at theta_k = k pi / M, k = -M+1 .. M-1, with f(-M) = 0
    std::array<double, M2> f{};
    for (int k = -M + 1; k < M; ++k) {
      const double t = L * std::tan(k * kPi / (2.0 * M));
      // sample k sits at index k + M; fftshift moves it by M2/2 = M
      const int pos = (k + 2 * M) % M2;
      f[static_cast<std::size_t>(pos)] = std::exp(-t * t) * (L * L + t * t);
    }
    std::array<double, N> coeff{};
    for (int n = 1; n <= N; ++n) {
      double re = 0.0;
      for (int j = 0; j < M2; ++j) re += f[static_cast<std::size_t>(j)] * std::cos(2.0 * kPi * n * j / M2);
      coeff[static_cast<std::size_t>(n - 1)] = re / M2;
    }
    for (int n = 0; n < N; ++n) a[static_cast<std::size_t>(n)] = coeff[static_cast<std::size_t>(N - 1 - n)];
  }
};

const WeidemanTable& weideman() {
  static const WeidemanTable table;
  return table;
}

// Written out in real arithmetic: std::complex multiplication without
// -ffast-math goes through the NaN-checking __muldc3. The degree-39
// polynomial runs as four interleaved Horner chains in Z^4 to cut latency.
Complex faddeeva_upper(Complex z) {
  const auto& t = weideman();
  const double x = z.real();
  const double y = z.imag();
  // denom = L - iz = (L + y) - i x,  Z = (L + iz) / denom = ((L - y) + i x) / denom
  const double c = t.L + y;
  const double d = -x;
  const double inv_norm = 1.0 / (c * c + d * d);
  const double a = t.L - y;
  const double zr = (a * c + x * d) * inv_norm;
  const double zi = (x * c - a * d) * inv_norm;
  const double z2r = zr * zr - zi * zi, z2i = 2.0 * zr * zi;
  const double z3r = z2r * zr - z2i * zi, z3i = z2r * zi + z2i * zr;
  const double z4r = z2r * z2r - z2i * z2i, z4i = 2.0 * z2r * z2i;
  // t.a[k] multiplies Z^(N-1-k); chain j collects the powers congruent to j mod 4
  constexpr int N = WeidemanTable::N;
  std::array<double, 4> pr{}, pi{};
  for (int m = N / 4 - 1; m >= 0; --m) {
    for (int j = 0; j < 4; ++j) {
      const double coeff = t.a[static_cast<std::size_t>(N - 1 - (4 * m + j))];
      const double nr = pr[static_cast<std::size_t>(j)] * z4r - pi[static_cast<std::size_t>(j)] * z4i + coeff;
      pi[static_cast<std::size_t>(j)] = pr[static_cast<std::size_t>(j)] * z4i + pi[static_cast<std::size_t>(j)] * z4r;
      pr[static_cast<std::size_t>(j)] = nr;
    }
  }
  const double sr = pr[0] + (pr[1] * zr - pi[1] * zi) + (pr[2] * z2r - pi[2] * z2i) + (pr[3] * z3r - pi[3] * z3i);
  const double si = pi[0] + (pr[1] * zi + pi[1] * zr) + (pr[2] * z2i + pi[2] * z2r) + (pr[3] * z3i + pi[3] * z3r);
  // 1 / denom
  const double ir = c * inv_norm;
  const double ii = -d * inv_norm;
  // inv * (2 p inv + 1/sqrt(pi))
  const double qr = 2.0 * (sr * ir - si * ii) + 1.0 / std::sqrt(kPi);
  const double qi = 2.0 * (sr * ii + si * ir);
  return {ir * qr - ii * qi, ir * qi + ii * qr};
}

// w(i x) for real x >= 0, where every intermediate is real.
double faddeeva_imag_axis(double x) {
  const auto& t = weideman();
  const double denom = t.L + x;
  const double zz = (t.L - x) / denom;
  const double z2 = zz * zz;
  const double z4 = z2 * z2;
  constexpr int N = WeidemanTable::N;
  std::array<double, 4> p{};
  for (int m = N / 4 - 1; m >= 0; --m) {
    for (int j = 0; j < 4; ++j) {
      p[static_cast<std::size_t>(j)] =
          p[static_cast<std::size_t>(j)] * z4 + t.a[static_cast<std::size_t>(N - 1 - (4 * m + j))];
    }
  }
  const double poly = p[0] + zz * p[1] + z2 * p[2] + z2 * zz * p[3];
  return (2.0 * poly / denom + 1.0 / std::sqrt(kPi)) / denom;
}

Complex erf_taylor(Complex z) {
  // 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1)), used for |z| < 0.5
  const Complex z2 = z * z;
  Complex term = z;
  Complex sum = z;
  for (int n = 1; n < 40; ++n) {
    term *= -z2 / static_cast<double>(n);
    const Complex add = term / static_cast<double>(2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return sum * (2.0 / std::sqrt(kPi));
}

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace

BesselPair bessel_j01(double x) {
  const J01 r = bessel_pair(x);
  return {r.j0, r.j1};
}

double bessel_j0(double x) { return bessel_pair(x).j0; }

double bessel_j1(double x) { return bessel_pair(x).j1; }

double bessel_j(int nu, double x) {
  if (nu == 0) return bessel_j0(x);
  if (nu == 1) return bessel_j1(x);
  throw InvalidArgument("bessel_j: only orders 0 and 1 are implemented, got " + std::to_string(nu));
}

double laguerre(int n, double x) {
  if (n < 0 || n > kLaguerreMaxDegree) {
    throw RangeError("laguerre: degree " + std::to_string(n) + " outside [0, " +
                     std::to_string(kLaguerreMaxDegree) + "]");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void laguerre_sequence(int n_max, double x, double* out) {
  if (n_max < 0 || n_max > kLaguerreMaxDegree) {
    throw RangeError("laguerre_sequence: degree " + std::to_string(n_max) + " out of range");
  }
  out[0] = 1.0;
  if (n_max == 0) return;
  out[1] = 1.0 - x;
  for (int k = 1; k < n_max; ++k) {
    out[k + 1] = ((2.0 * k + 1.0 - x) * out[k] - k * out[k - 1]) / (k + 1.0);
  }
}

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidArgument("gamma_fn: argument must be finite and positive");
  }
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  const double xm = x - 1.0;
  double acc = kLanczos[0];
  const double t = xm + 7.5;
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (xm + static_cast<double>(i));
  // split the power to delay overflow for large x
  const double half = std::pow(t, 0.5 * (xm + 0.5));
  return std::sqrt(2.0 * kPi) * half * half * std::exp(-t) * acc;
}

double erf_real(double x) { return std::erf(x); }

Complex faddeeva_w(Complex z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

double erfcx(double x) {
  if (x < 0.0) throw InvalidArgument("erfcx: implemented for x >= 0 only");
  return faddeeva_imag_axis(x);
}

Complex erf_complex(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
      std::abs(z.imag()) > kErfComplexMaxImag) {
    throw RangeError("erf_complex: argument outside validated region |Im z| <= 50");
  }
  if (std::abs(z) < 0.5) return erf_taylor(z);
  const bool flip = z.real() < 0.0;
  const Complex u = flip ? -z : z;
  // erf(u) = 1 - exp(-u^2) w(iu); Im(iu) = Re(u) >= 0
  const Complex e = std::exp(-u * u);
  const Complex r = 1.0 - e * faddeeva_upper(Complex(-u.imag(), u.real()));
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
    throw RangeError("erf_complex: result overflows double precision");
  }
  return flip ? -r : r;
}

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("find_root_monotone: tol must be positive");
  if (hi < lo) std::swap(lo, hi);
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("find_root_monotone: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace regp::specfun
