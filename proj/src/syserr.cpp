#include "regp/syserr.hpp"

#include "regp/errors.hpp"
#include "regp/parallel.hpp"
#include "regp/quadrature.hpp"
#include "regp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace regp::syserr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPatchHalfWidth = 1e-4;
// J1(r)^2 oscillates with period pi; the reduced kernel adds J0(2r), J1(2r).
constexpr double kPanel = kPi / 2.0;

void require_params(double w, double gamma_c, double b_c) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("syserr: w must be finite and positive");
  if (!(gamma_c > 0.0) || !std::isfinite(gamma_c)) throw InvalidArgument("syserr: gamma_c must be finite and positive");
  if (!(b_c > 0.0) || !std::isfinite(b_c)) throw InvalidArgument("syserr: b_c must be finite and positive");
}

double j1_sq_over_r(double r) {
  if (r < 1e-8) return 0.25 * r;
  const double j1 = specfun::bessel_j1(r);
  return j1 * j1 / r;
}

// I(k, l) = int_0^B b J0(k b) J0(l b) db with k = 2|gamma| fixed.
struct DiskOverlap {
  double k;
  double B;
  double j0kB;
  double j1kB;

  DiskOverlap(double k_, double B_) : k(k_), B(B_) {
    const auto j = specfun::bessel_j01(k * B);
    j0kB = j.j0;
    j1kB = j.j1;
  }

  double operator()(double l) const {
    const double scale = std::max(k, l);
    if (scale < 1e-12) return 0.5 * B * B;
    if (std::abs(l - k) <= kPatchHalfWidth * scale) {
      const double at_k = 0.5 * B * B * (j0kB * j0kB + j1kB * j1kB);
      if (k == 0.0) return at_k;
      const double slope = -B * B * j1kB * j1kB / (2.0 * k);
      return at_k + (l - k) * slope;
    }
    const auto jl = specfun::bessel_j01(l * B);
    return B * (k * j1kB * jl.j0 - l * j0kB * jl.j1) / (k * k - l * l);
  }
};

double reduced_form(double gamma_abs, double w, double gamma_c, double b_c) {
  const double X = 2.0 * w * gamma_c;
  const DiskOverlap overlap(2.0 * gamma_abs, b_c);
  auto integrand = [&](double r) { return j1_sq_over_r(r) * overlap(r / w); };
  const auto rule = quad::QuadratureRule::tolerance(1e-12, 1e-10);
  // the patched point r = 2 w |gamma| gets its own breakpoint
  const double rs = 2.0 * w * gamma_abs;
  double total = 0.0;
  if (rs > 0.0 && rs < X) {
    total = quad::integrate_panels(integrand, 0.0, rs, kPanel, rule).value +
            quad::integrate_panels(integrand, rs, X, kPanel, rule).value;
  } else {
    total = quad::integrate_panels(integrand, 0.0, X, kPanel, rule).value;
  }
  return (4.0 / kPi) * total;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double& fmin) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 60 && (b - a) > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  if (fc < fd) {
    fmin = fc;
    return c;
  }
  fmin = fd;
  return d;
}

} // namespace

double truncated_filter(double beta_abs, double w, double gamma_c) {
  require_params(w, gamma_c, 1.0);
  const double X = 2.0 * w * gamma_c;
  const double s = std::abs(beta_abs) / w;
  auto integrand = [s](double r) { return j1_sq_over_r(r) * specfun::bessel_j0(s * r); };
  const double panel = kPi / (2.0 + s);
  return 2.0 * quad::integrate_panels(integrand, 0.0, X, panel, quad::QuadratureRule::tolerance(1e-12, 1e-10)).value;
}

double total_filter_ft_direct(double gamma_abs, double w, double gamma_c, double b_c) {
  require_params(w, gamma_c, b_c);
  const double k = 2.0 * std::abs(gamma_abs);
  auto integrand = [&](double b) { return b * truncated_filter(b, w, gamma_c) * specfun::bessel_j0(k * b); };
  const double panel = std::min(b_c, kPi / std::max(k, 1.0));
  return (2.0 / kPi) *
         quad::integrate_panels(integrand, 0.0, b_c, panel, quad::QuadratureRule::tolerance(1e-10, 1e-9)).value;
}

double total_filter_ft(double gamma_abs, double w, double gamma_c, double b_c) {
  require_params(w, gamma_c, b_c);
  try {
    return reduced_form(std::abs(gamma_abs), w, gamma_c, b_c);
  } catch (const NumericError& reduced_failure) {
    try {
      return total_filter_ft_direct(gamma_abs, w, gamma_c, b_c);
    } catch (const NumericError& direct_failure) {
      throw NumericError(std::string("total_filter_ft: reduced form failed (") + reduced_failure.what() +
                         ") and direct double integral failed (" + direct_failure.what() + ")");
    }
  }
}

SysErrReport fake_negativity_bound(double w, double gamma_c, double b_c, double search_factor, int steps_per_w,
                                   unsigned threads) {
  require_params(w, gamma_c, b_c);
  if (!(search_factor > 0.0) || steps_per_w < 2) {
    throw InvalidArgument("fake_negativity_bound: search_factor must be positive and steps_per_w >= 2");
  }
  const double fine = w / steps_per_w;
  const double coarse = 10.0 * fine;
  const double half = search_factor * w;
  // Fine windows around the origin and around the cutoff shell |gamma| = gamma_c,
  // where the hard edge of the truncated field rings; coarse steps in between.
  std::vector<double> points;
  auto add_range = [&points](double lo, double hi, double step) {
    const int n = static_cast<int>(std::ceil((hi - lo) / step));
    for (int k = 0; k <= n; ++k) points.push_back(std::min(hi, lo + k * step));
  };
  const double shell_lo = std::max(half, gamma_c - half);
  add_range(0.0, half, fine);
  if (shell_lo > half) add_range(half, shell_lo, coarse);
  add_range(shell_lo, gamma_c + half, fine);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::vector<double> values(points.size());
  parallel::for_each_index(points.size(), threads,
                           [&](std::size_t i) { values[i] = total_filter_ft(points[i], w, gamma_c, b_c); });
  const auto i = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  double best_gamma = points[i];
  double best = values[i];
  if (i > 0 && i + 1 < points.size()) {
    double refined = best;
    const double g = golden_min([&](double x) { return total_filter_ft(x, w, gamma_c, b_c); }, points[i - 1],
                                points[i + 1], refined);
    if (refined < best) {
      best = refined;
      best_gamma = g;
    }
  }
  return {w, gamma_c, b_c, std::max(0.0, -best), best_gamma, best};
}

} // namespace regp::syserr
