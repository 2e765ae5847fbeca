#pragma once

// Adaptive 21-point Gauss-Kronrod quadrature used for every radial and
// angular integral in the library.

#include "regp/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace regp::quad {

struct QuadratureRule {
  enum class Kind { finite_interval, semi_infinite_with_decay };

  Kind kind = Kind::finite_interval;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
      throw InvalidArgument("QuadratureRule: tolerances must be positive and max_subdivisions >= 1");
    }
  }

  static QuadratureRule tolerance(double abs, double rel, int max_sub = 2000) {
    QuadratureRule r;
    r.abs_tol = abs;
    r.rel_tol = rel;
    r.max_subdivisions = max_sub;
    r.validate();
    return r;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

/// Integrand envelope ratio below which semi-infinite integrals are cut.
inline constexpr double kSemiInfiniteCutoff = 1e-16;

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077482554481085, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double resabs;
};

template <class F>
Segment gk21(F& f, double a, double b, double* max_abs = nullptr) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  double fmax = std::abs(fc);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[static_cast<std::size_t>(j)] = v1;
    f2[static_cast<std::size_t>(j)] = v2;
    const double w = kWgk[static_cast<std::size_t>(j)];
    resk += w * (v1 + v2);
    resabs += w * (std::abs(v1) + std::abs(v2));
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * (v1 + v2);
    fmax = std::max({fmax, std::abs(v1), std::abs(v2)});
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[static_cast<std::size_t>(j)] *
              (std::abs(f1[static_cast<std::size_t>(j)] - reskh) + std::abs(f2[static_cast<std::size_t>(j)] - reskh));
  }
  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (max_abs) *max_abs = fmax;
  return {a, b, result, err, resabs};
}

inline bool worse(const Segment& x, const Segment& y) { return x.error < y.error; }

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
///
/// Converges when the summed error estimate is below
/// max(abs_tol, rel_tol |I|, round-off floor). Throws NumericError with the
/// reached accuracy when max_subdivisions is exhausted.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureRule& rule = {}) {
  rule.validate();
  if (a == b) return {0.0, 0.0, 0};
  std::vector<detail::Segment> heap;
  heap.reserve(static_cast<std::size_t>(std::min(rule.max_subdivisions, 4096)) + 1);
  heap.push_back(detail::gk21(f, a, b));
  double total = heap.front().value;
  double total_err = heap.front().error;
  double total_abs = heap.front().resabs;
  const double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] { return std::max({rule.abs_tol, rule.rel_tol * std::abs(total), 64.0 * eps * total_abs}); };
  int intervals = 1;
  while (total_err > target()) {
    if (intervals >= rule.max_subdivisions) {
      std::ostringstream msg;
      msg << "integrate: no convergence on [" << a << ", " << b << "] after " << intervals
          << " subintervals; value " << total << ", error estimate " << total_err << " > tolerance "
          << target();
      throw NumericError(msg.str());
    }
    std::pop_heap(heap.begin(), heap.end(), detail::worse);
    const detail::Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NumericError("integrate: interval collapsed to machine precision near " + std::to_string(mid));
    }
    const detail::Segment left = detail::gk21(f, worst.a, mid);
    const detail::Segment right = detail::gk21(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), detail::worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), detail::worse);
    ++intervals;
    // re-sum rather than update incrementally: the result must not depend on drift
    total = 0.0;
    total_err = 0.0;
    total_abs = 0.0;
    for (const auto& s : heap) {
      total += s.value;
      total_err += s.error;
      total_abs += s.resabs;
    }
  }
  return {total, total_err, intervals};
}

/// Splits [a, b] into equal panels no wider than `panel_width` and integrates
/// each adaptively. Meant for oscillatory integrands whose period is known.
template <class F>
QuadratureResult integrate_panels(F&& f, double a, double b, double panel_width,
                                  const QuadratureRule& rule = {}) {
  rule.validate();
  if (!(panel_width > 0.0)) throw InvalidArgument("integrate_panels: panel_width must be positive");
  if (a == b) return {0.0, 0.0, 0};
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / panel_width)));
  QuadratureRule panel_rule = rule;
  panel_rule.abs_tol = rule.abs_tol / n;
  QuadratureResult out;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == n) ? b : a + (i + 1) * h;
    const auto r = integrate(f, lo, hi, panel_rule);
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.intervals += r.intervals;
  }
  return out;
}

/// Integrates f over [a, inf) by marching panels of width `panel_width` until
/// the integrand magnitude seen on two consecutive panels stays below
/// kSemiInfiniteCutoff times its running peak.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double a, double panel_width, const QuadratureRule& rule = {},
                                         int max_panels = 100000) {
  rule.validate();
  if (!(panel_width > 0.0)) throw InvalidArgument("integrate_semi_infinite: panel_width must be positive");
  QuadratureResult out;
  double peak = 0.0;
  int quiet = 0;
  QuadratureRule panel_rule = rule;
  panel_rule.abs_tol = rule.abs_tol / 64.0;
  for (int i = 0; i < max_panels; ++i) {
    const double lo = a + i * panel_width;
    const double hi = lo + panel_width;
    double fmax = 0.0;
    (void)detail::gk21(f, lo, hi, &fmax);
    peak = std::max(peak, fmax);
    const auto r = integrate(f, lo, hi, panel_rule);
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.intervals += r.intervals;
    if (peak > 0.0 && fmax <= kSemiInfiniteCutoff * peak) {
      if (++quiet >= 2) return out;
    } else if (peak == 0.0 && i > 8) {
      return out; // identically zero so far
    } else {
      quiet = 0;
    }
  }
  throw NumericError("integrate_semi_infinite: integrand did not decay within " + std::to_string(max_panels) +
                     " panels");
}

} // namespace regp::quad
