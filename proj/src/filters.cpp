#include "regp/filters.hpp"

#include "regp/errors.hpp"
#include "regp/quadrature.hpp"
#include "regp/specfun.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace regp::filters {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-39.2) ~ 1e-17
constexpr double kOmegaTailExponent = 39.2;
// Below this |gamma|/w the quotient J1(2w gamma)^2 / gamma^2 is replaced by its limit.
constexpr double kFtOriginGuard = 1e-8;

double unit_omega_norm(double q) {
  return std::pow(2.0, 1.0 / q) * std::sqrt(q / (2.0 * kPi * specfun::gamma_fn(2.0 / q)));
}

double unit_omega(double b, double q, double norm) { return norm * std::exp(-std::pow(b, q)); }

double unit_autocorr(double b, double q) {
  if (q == 2.0) return std::exp(-0.5 * b * b);
  const double norm = unit_omega_norm(q);
  const double reach = std::pow(kOmegaTailExponent, 1.0 / q);
  if (b >= 2.0 * reach) return 0.0;
  const auto inner_rule = quad::QuadratureRule::tolerance(1e-14, 1e-12);
  const auto outer_rule = quad::QuadratureRule::tolerance(1e-12, 1e-11);
  auto radial = [&](double r) {
    const double wr = unit_omega(r, q, norm);
    if (wr == 0.0) return 0.0;
    auto angular = [&](double theta) {
      const double rho2 = b * b + r * r + 2.0 * b * r * std::cos(theta);
      return unit_omega(std::sqrt(std::max(rho2, 0.0)), q, norm);
    };
    return r * wr * quad::integrate(angular, 0.0, kPi, inner_rule).value;
  };
  // the kink of exp(-rho^q) at rho = 0 (r = b, theta = pi) gets its own breakpoint
  double total = 0.0;
  if (b > 0.0 && b < reach) {
    total = quad::integrate(radial, 0.0, b, outer_rule).value + quad::integrate(radial, b, reach, outer_rule).value;
  } else {
    total = quad::integrate(radial, 0.0, reach, outer_rule).value;
  }
  return 2.0 * total;
}

double unit_ft_q(double gamma_abs, double q) {
  const double norm = unit_omega_norm(q);
  const double reach = std::pow(kOmegaTailExponent, 1.0 / q);
  auto integrand = [&](double b) { return b * unit_omega(b, q, norm) * specfun::bessel_j0(2.0 * gamma_abs * b); };
  const double panel = gamma_abs > 0.0 ? std::min(reach, kPi / (2.0 * gamma_abs)) : reach;
  const auto rule = quad::QuadratureRule::tolerance(1e-14, 1e-12);
  const double hankel = quad::integrate_panels(integrand, 0.0, reach, panel, rule).value;
  return 4.0 * hankel * hankel;
}

void require_width(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("filter width w must be finite and positive");
}

void require_finite_q(const FilterSpec& spec, const char* who) {
  if (spec.is_infinite()) {
    throw InvalidArgument(std::string(who) + ": q = INF is not supported here; use the closed q = INF path");
  }
}

} // namespace

// ---- FilterSpec ---------------------------------------------------------------

FilterSpec FilterSpec::finite(double q, double w) {
  if (!(q >= 2.0) || !std::isfinite(q)) throw InvalidArgument("FilterSpec: q must be finite and >= 2 (or INF)");
  require_width(w);
  return FilterSpec(q, w);
}

FilterSpec FilterSpec::infinite(double w) {
  require_width(w);
  return FilterSpec(std::nullopt, w);
}

FilterSpec FilterSpec::parse(const std::string& q, double w) {
  std::string lower;
  std::transform(q.begin(), q.end(), std::back_inserter(lower), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity") return infinite(w);
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(q, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("FilterSpec: cannot parse q = '" + q + "'");
  }
  if (pos != q.size()) throw InvalidArgument("FilterSpec: cannot parse q = '" + q + "'");
  return finite(value, w);
}

double FilterSpec::q() const {
  if (!q_) throw InvalidArgument("FilterSpec::q: exponent is INF");
  return *q_;
}

std::string FilterSpec::q_label() const {
  if (!q_) return "inf";
  std::ostringstream os;
  os << *q_;
  return os.str();
}

FilterSpec FilterSpec::with_width(double w) const {
  require_width(w);
  return FilterSpec(q_, w);
}

SParam::SParam(double s) : s_(s) {
  if (!(s <= 1.0)) throw InvalidArgument("SParam: s must satisfy s <= 1");
}

MultimodeFilterSpec::MultimodeFilterSpec(std::vector<FilterSpec> modes) : per_mode(std::move(modes)) {
  if (per_mode.empty()) throw InvalidArgument("MultimodeFilterSpec: at least one mode required");
}

// ---- filter functions -----------------------------------------------------------

double omega_small(double beta_abs, const FilterSpec& spec) {
  require_finite_q(spec, "omega_small");
  const double w = spec.width();
  return unit_omega(std::abs(beta_abs) / w, spec.q(), unit_omega_norm(spec.q())) / w;
}

double omega_cutoff(const FilterSpec& spec) {
  require_finite_q(spec, "omega_cutoff");
  return spec.width() * std::pow(kOmegaTailExponent, 1.0 / spec.q());
}

double filter_autocorr(double beta_abs, const FilterSpec& spec) {
  require_finite_q(spec, "filter_autocorr");
  return unit_autocorr(std::abs(beta_abs) / spec.width(), spec.q());
}

double filter_infty(double beta_abs, double w) {
  require_width(w);
  const double x = std::abs(beta_abs) / (2.0 * w);
  if (x >= 1.0) return 0.0;
  return (2.0 / kPi) * (std::acos(x) - x * std::sqrt(1.0 - x * x));
}

double filter_value(double beta_abs, const FilterSpec& spec) {
  return spec.is_infinite() ? filter_infty(beta_abs, spec.width()) : filter_autocorr(beta_abs, spec);
}

double ft_filter_infty(double gamma_abs, double w) {
  require_width(w);
  const double g = std::abs(gamma_abs);
  if (g < kFtOriginGuard * w) return w * w / kPi;
  const double j1 = specfun::bessel_j1(2.0 * w * g);
  return j1 * j1 / (kPi * g * g);
}

double ft_filter_q(double gamma_abs, const FilterSpec& spec) {
  require_finite_q(spec, "ft_filter_q");
  const double w = spec.width();
  return w * w * unit_ft_q(std::abs(gamma_abs) * w, spec.q());
}

double ft_filter(double gamma_abs, const FilterSpec& spec) {
  return spec.is_infinite() ? ft_filter_infty(gamma_abs, spec.width()) : ft_filter_q(gamma_abs, spec);
}

double gaussian_kernel(double gamma_abs, SParam s) {
  const double d = 1.0 - s.value();
  if (d == 0.0) throw InvalidArgument("gaussian_kernel: s = 1 is the degenerate delta kernel");
  return 2.0 / (kPi * d) * std::exp(-2.0 * gamma_abs * gamma_abs / d);
}

double ft_multimode(std::span<const double> gammas, const MultimodeFilterSpec& spec) {
  if (gammas.size() != spec.modes()) {
    throw InvalidArgument("ft_multimode: got " + std::to_string(gammas.size()) + " amplitudes for " +
                          std::to_string(spec.modes()) + " modes");
  }
  double product = 1.0;
  for (std::size_t k = 0; k < gammas.size(); ++k) product *= ft_filter(gammas[k], spec.per_mode[k]);
  return product;
}

double rect_post_filter(double beta_abs, double b_c) { return std::abs(beta_abs) <= b_c ? 1.0 : 0.0; }

// ---- radial filter objects --------------------------------------------------------

RadialFilter make_radial_filter(const FilterSpec& spec) {
  if (spec.is_infinite()) {
    const double w = spec.width();
    return {[w](double b) { return filter_infty(b, w); }, 2.0 * w, "q=inf,w=" + std::to_string(w)};
  }
  return {[spec](double b) { return filter_autocorr(b, spec); }, 2.0 * omega_cutoff(spec),
          "q=" + spec.q_label() + ",w=" + std::to_string(spec.width())};
}

RadialFilter make_rect_filter(double b_c) {
  if (!(b_c > 0.0)) throw InvalidArgument("rect filter: b_c must be positive");
  return {[b_c](double b) { return rect_post_filter(b, b_c); }, b_c, "rect,b_c=" + std::to_string(b_c)};
}

RadialFilter make_identity_filter() {
  return {[](double) { return 1.0; }, std::numeric_limits<double>::infinity(), "identity"};
}

RadialFilter with_post_cutoff(RadialFilter base, double b_c) {
  if (!(b_c > 0.0)) throw InvalidArgument("with_post_cutoff: b_c must be positive");
  auto inner = base.value;
  return {[inner, b_c](double b) { return b <= b_c ? inner(b) : 0.0; }, std::min(base.support, b_c),
          base.label + "*rect(" + std::to_string(b_c) + ")"};
}

} // namespace regp::filters
