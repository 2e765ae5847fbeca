#include "regp/sampling.hpp"

#include "regp/errors.hpp"
#include "regp/numeric.hpp"
#include "regp/parallel.hpp"
#include "regp/quadrature.hpp"
#include "regp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace regp::sampling {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

// Radius beyond which the filter of `spec` vanishes (or is below 1e-17).
double filter_reach(const filters::FilterSpec& spec) {
  return spec.is_infinite() ? 2.0 * spec.width() : 2.0 * filters::omega_cutoff(spec);
}

double oscillation_panel(double freq, double reach) { return std::min(reach, kPi / std::max(freq, 1.0)); }

void require_bc(double b_c, const char* who) {
  if (!(b_c > 0.0) || !std::isfinite(b_c)) throw InvalidArgument(std::string(who) + ": b_c must be finite and positive");
}

// f(Lambda; b_c) with the b_c-dependent constants hoisted out of the event loop.
class PostPattern {
public:
  explicit PostPattern(double b_c) : b_c_(b_c), g_(std::exp(0.5 * b_c * b_c)) {}

  double operator()(double lambda) const {
    if (b_c_ == 0.0) return 0.0;
    const double l = std::abs(lambda);
    const double c = std::cos(l * b_c_);
    double value = (2.0 / kPi) * (g_ * c - 1.0);
    if (l > 0.0) {
      const double s = std::sin(l * b_c_);
      const Complex w = specfun::faddeeva_w(Complex(b_c_ / kSqrt2, l / kSqrt2));
      // Re[e^{i l b_c} w] without a complex multiply
      value += kSqrt2OverPi * l * (specfun::erfcx(l / kSqrt2) - g_ * (c * w.real() - s * w.imag()));
    }
    if (!std::isfinite(value)) return pattern_post_quadrature(lambda, b_c_);
    return value;
  }

private:
  double b_c_;
  double g_;
};

struct Trig {
  double c;
  double s;
};

template <class Pattern>
QuasiprobEstimate estimate_balanced(std::span<const states::QuadratureSample> samples, std::span<const Complex> grid,
                                    const Pattern& pattern, unsigned threads) {
  if (samples.size() < 2) throw InvalidArgument("estimate_Pw_balanced: need at least 2 quadrature events");
  std::vector<Trig> trig(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) trig[j] = {std::cos(samples[j].phi), std::sin(samples[j].phi)};
  QuasiprobEstimate est;
  est.grid.assign(grid.begin(), grid.end());
  est.value.resize(grid.size());
  est.std_error.resize(grid.size());
  parallel::for_each_index(grid.size(), threads, [&](std::size_t i) {
    const double ar = 2.0 * grid[i].real();
    const double ai = 2.0 * grid[i].imag();
    numeric::MeanAccumulator acc;
    for (std::size_t j = 0; j < samples.size(); ++j) {
      acc.add(pattern(samples[j].x - (ar * trig[j].c - ai * trig[j].s)));
    }
    est.value[i] = acc.mean();
    est.std_error[i] = acc.standard_error();
  });
  est.meta.n_events = samples.size();
  est.meta.detection = Detection::balanced;
  return est;
}

} // namespace

std::string to_string(Detection d) { return d == Detection::balanced ? "balanced" : "unbalanced"; }

double QuasiprobEstimate::significance(std::size_t i) const {
  if (i >= value.size()) throw InvalidArgument("QuasiprobEstimate::significance: index out of range");
  return std_error[i] > 0.0 ? -value[i] / std_error[i] : std::numeric_limits<double>::quiet_NaN();
}

std::size_t QuasiprobEstimate::argmax_significance() const {
  std::size_t best = value.size();
  double best_sig = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < value.size(); ++i) {
    const double s = significance(i);
    if (!std::isnan(s) && s > best_sig) {
      best_sig = s;
      best = i;
    }
  }
  return best;
}

double QuasiprobEstimate::max_significance() const {
  const std::size_t i = argmax_significance();
  return i < value.size() ? significance(i) : std::numeric_limits<double>::quiet_NaN();
}

std::vector<Complex> axis_grid(Axis axis, double half_width, double step) {
  if (!(half_width >= 0.0) || !(step > 0.0)) throw InvalidArgument("axis_grid: need half_width >= 0 and step > 0");
  const int m = static_cast<int>(std::floor(half_width / step + 1e-9));
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(2 * m + 1));
  for (int k = -m; k <= m; ++k) {
    const double t = k * step;
    out.push_back(axis == Axis::real ? Complex(t, 0.0) : Complex(0.0, t));
  }
  return out;
}

std::vector<Complex> cross_grid(double half_width, double step) {
  auto out = axis_grid(Axis::real, half_width, step);
  const auto im = axis_grid(Axis::imag, half_width, step);
  out.insert(out.end(), im.begin(), im.end());
  return out;
}

std::vector<Complex> square_grid(double half_width, int m) {
  if (!(half_width > 0.0) || m < 1) throw InvalidArgument("square_grid: need half_width > 0 and m >= 1");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>((2 * m + 1) * (2 * m + 1)));
  const double h = half_width / m;
  for (int i = -m; i <= m; ++i) {
    for (int k = -m; k <= m; ++k) out.emplace_back(i * h, k * h);
  }
  return out;
}

double lambda_arg(double x, double phi, Complex alpha) {
  return x - 2.0 * (alpha.real() * std::cos(phi) - alpha.imag() * std::sin(phi));
}

double pattern_post(double lambda, double b_c) {
  if (!(b_c >= 0.0)) throw InvalidArgument("pattern_post: b_c must be >= 0");
  return PostPattern(b_c)(lambda);
}

double pattern_post_quadrature(double lambda, double b_c) {
  if (!(b_c >= 0.0)) throw InvalidArgument("pattern_post_quadrature: b_c must be >= 0");
  if (b_c == 0.0) return 0.0;
  auto f = [lambda](double b) { return b * std::exp(0.5 * b * b) * std::cos(lambda * b); };
  const auto rule = quad::QuadratureRule::tolerance(1e-13, 1e-13);
  return (2.0 / kPi) * quad::integrate_panels(f, 0.0, b_c, oscillation_panel(std::abs(lambda), b_c), rule).value;
}

double pattern_filtered(double lambda, const filters::FilterSpec& spec) {
  if (spec.is_gaussian()) {
    throw Refusal("pattern_filtered: q = 2 does not make Omega(b) e^{b^2/2} square integrable; use q > 2");
  }
  const double reach = filter_reach(spec);
  auto f = [&](double b) { return b * std::exp(0.5 * b * b) * filters::filter_value(b, spec) * std::cos(lambda * b); };
  const auto rule = quad::QuadratureRule::tolerance(1e-11, 1e-11);
  return (2.0 / kPi) * quad::integrate_panels(f, 0.0, reach, oscillation_panel(std::abs(lambda), reach), rule).value;
}

FilteredPattern::FilteredPattern(const filters::FilterSpec& spec, int panels) : spec_(spec) {
  if (spec.is_gaussian()) {
    throw Refusal("FilteredPattern: q = 2 does not make Omega(b) e^{b^2/2} square integrable; use q > 2");
  }
  if (panels < 1) throw InvalidArgument("FilteredPattern: panels must be >= 1");
  const double reach = filter_reach(spec);
  const double h = reach / panels;
  const auto& xk = quad::detail::kXgk;
  const auto& wk = quad::detail::kWgk;
  for (int p = 0; p < panels; ++p) {
    const double center = (p + 0.5) * h;
    const double half = 0.5 * h;
    for (std::size_t j = 0; j < xk.size(); ++j) {
      const int signs = j + 1 == xk.size() ? 1 : 2;
      for (int s = 0; s < signs; ++s) {
        const double b = center + (s == 0 ? -1.0 : 1.0) * half * xk[j];
        const double omega = filters::filter_value(b, spec);
        nodes_.push_back(b);
        weights_.push_back((2.0 / kPi) * half * wk[j] * b * std::exp(0.5 * b * b) * omega);
      }
    }
  }
  build_table();
}

double FilteredPattern::direct(double lambda, double* slope) const {
  numeric::CompensatedSum sum, dsum;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double arg = lambda * nodes_[k];
    sum.add(weights_[k] * std::cos(arg));
    if (slope) dsum.add(-weights_[k] * nodes_[k] * std::sin(arg));
  }
  if (slope) *slope = dsum.value();
  return sum.value();
}

void FilteredPattern::build_table() {
  const int n = static_cast<int>(kTableMax / kTableStep);
  value_.resize(static_cast<std::size_t>(n) + 1);
  slope_.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    value_[k] = direct(i * kTableStep, &slope_[k]);
  }
}

double FilteredPattern::operator()(double lambda) const {
  const double a = std::abs(lambda);
  if (!(a < kTableMax)) return direct(a, nullptr);
  // cubic Hermite interpolation; f is even, so |lambda| indexes the table
  const double u = a / kTableStep;
  const auto i = static_cast<std::size_t>(u);
  const double t = u - static_cast<double>(i);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * value_[i] + h10 * kTableStep * slope_[i] + h01 * value_[i + 1] + h11 * kTableStep * slope_[i + 1];
}

QuasiprobEstimate estimate_Pw_balanced(std::span<const states::QuadratureSample> samples,
                                       std::span<const Complex> grid, double b_c, unsigned threads) {
  require_bc(b_c, "estimate_Pw_balanced");
  auto est = estimate_balanced(samples, grid, PostPattern(b_c), threads);
  est.meta.b_c = b_c;
  return est;
}

QuasiprobEstimate estimate_Pw_filtered(std::span<const states::QuadratureSample> samples,
                                       std::span<const Complex> grid, const FilteredPattern& pattern,
                                       unsigned threads) {
  auto est = estimate_balanced(samples, grid, pattern, threads);
  est.meta.b_c = std::numeric_limits<double>::infinity();
  est.meta.w = pattern.spec().width();
  est.meta.q = pattern.spec().q_label();
  return est;
}

double xi_filtered(int n, const filters::FilterSpec& spec) {
  if (n < 0) throw InvalidArgument("xi_filtered: n must be >= 0");
  const double reach = filter_reach(spec);
  auto f = [&](double b) { return b * filters::filter_value(b, spec) * specfun::laguerre(n, b * b); };
  const auto rule = quad::QuadratureRule::tolerance(1e-12, 1e-11);
  const double panel = oscillation_panel(2.0 * std::sqrt(n + 1.0) * std::max(1.0, reach), reach);
  return (2.0 / kPi) * quad::integrate_panels(f, 0.0, reach, panel, rule).value;
}

double xi_post(int n, double b_c) {
  if (n < 0) throw InvalidArgument("xi_post: n must be >= 0");
  if (!(b_c >= 0.0)) throw InvalidArgument("xi_post: b_c must be >= 0");
  const double x = b_c * b_c;
  return (specfun::laguerre(n, x) - specfun::laguerre(n + 1, x)) / kPi;
}

double xi_post_quadrature(int n, double b_c) {
  if (n < 0) throw InvalidArgument("xi_post_quadrature: n must be >= 0");
  if (!(b_c >= 0.0)) throw InvalidArgument("xi_post_quadrature: b_c must be >= 0");
  if (b_c == 0.0) return 0.0;
  auto f = [n](double b) { return b * specfun::laguerre(n, b * b); };
  const auto rule = quad::QuadratureRule::tolerance(1e-13, 1e-13);
  const double panel = oscillation_panel(2.0 * std::sqrt(n + 1.0) * b_c, b_c);
  return (2.0 / kPi) * quad::integrate_panels(f, 0.0, b_c, panel, rule).value;
}

XiTable::XiTable(double b_c, int n_max) : b_c_(b_c) {
  if (!(b_c >= 0.0)) throw InvalidArgument("XiTable: b_c must be >= 0");
  if (n_max < 0 || n_max >= specfun::kLaguerreMaxDegree) {
    throw RangeError("XiTable: n_max " + std::to_string(n_max) + " outside the Laguerre range");
  }
  std::vector<double> lag(static_cast<std::size_t>(n_max) + 2);
  specfun::laguerre_sequence(n_max + 1, b_c * b_c, lag.data());
  coeffs_.resize(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] = (lag[n] - lag[n + 1]) / kPi;
}

double XiTable::operator()(int n) const {
  if (n < 0 || n > n_max()) throw RangeError("XiTable: n = " + std::to_string(n) + " outside the table");
  return coeffs_[static_cast<std::size_t>(n)];
}

QuasiprobEstimate estimate_Pw_unbalanced(const std::vector<std::vector<std::uint32_t>>& counts,
                                         std::span<const Complex> grid, double b_c, unsigned threads) {
  require_bc(b_c, "estimate_Pw_unbalanced");
  if (counts.size() != grid.size()) {
    throw InvalidArgument("estimate_Pw_unbalanced: " + std::to_string(counts.size()) + " count lists for " +
                          std::to_string(grid.size()) + " grid points");
  }
  std::uint32_t n_max = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() < 2) {
      throw InvalidArgument("estimate_Pw_unbalanced: grid point " + std::to_string(i) + " has fewer than 2 counts");
    }
    total += counts[i].size();
    n_max = std::max(n_max, *std::max_element(counts[i].begin(), counts[i].end()));
  }
  const XiTable table(b_c, static_cast<int>(std::min<std::uint32_t>(n_max, specfun::kLaguerreMaxDegree - 1)));
  if (n_max > static_cast<std::uint32_t>(table.n_max())) {
    throw RangeError("estimate_Pw_unbalanced: photon count " + std::to_string(n_max) + " exceeds the Laguerre range");
  }
  QuasiprobEstimate est;
  est.grid.assign(grid.begin(), grid.end());
  est.value.resize(grid.size());
  est.std_error.resize(grid.size());
  parallel::for_each_index(grid.size(), threads, [&](std::size_t i) {
    numeric::MeanAccumulator acc;
    for (const auto n : counts[i]) acc.add(table.coeffs()[n]);
    est.value[i] = acc.mean();
    est.std_error[i] = acc.standard_error();
  });
  est.meta.n_events = total;
  est.meta.b_c = b_c;
  est.meta.detection = Detection::unbalanced;
  return est;
}

} // namespace regp::sampling
