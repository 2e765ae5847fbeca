#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regp::filters {

/// Filter family selector: exponent q in [2, inf) or the symbolic q = INF,
/// plus the width w > 0.
class FilterSpec {
public:
  static FilterSpec finite(double q, double w);
  static FilterSpec infinite(double w);
  /// Accepts "inf"/"INF"/"infinity" or a number for q.
  static FilterSpec parse(const std::string& q, double w);

  bool is_infinite() const noexcept { return !q_.has_value(); }
  /// q = 2: Gaussian filtering, the s-parametrized regime.
  bool is_gaussian() const noexcept { return q_ && *q_ == 2.0; }
  /// q > 2 (including INF): a proper nonclassicality filter.
  bool is_nonclassicality_filter() const noexcept { return !q_ || *q_ > 2.0; }

  /// Throws InvalidArgument for q = INF.
  double q() const;
  /// q, or nullopt for INF.
  std::optional<double> exponent() const noexcept { return q_; }
  double width() const noexcept { return w_; }
  std::string q_label() const;

  FilterSpec with_width(double w) const;

private:
  FilterSpec(std::optional<double> q, double w) : q_(q), w_(w) {}
  std::optional<double> q_;
  double w_;
};

/// s-parameter of the Gaussian kernel, s <= 1.
class SParam {
public:
  explicit SParam(double s);
  double value() const noexcept { return s_; }

private:
  double s_;
};

struct MultimodeFilterSpec {
  std::vector<FilterSpec> per_mode;
  explicit MultimodeFilterSpec(std::vector<FilterSpec> modes);
  std::size_t modes() const noexcept { return per_mode.size(); }
};

/// Phase-independent filter in the characteristic-function domain, Omega(|beta|).
/// `support` is the radius beyond which the value is exactly zero (or
/// negligible below 1e-16 relative); +inf when unknown.
struct RadialFilter {
  std::function<double(double)> value;
  double support;
  std::string label;

  double operator()(double b) const { return value(b); }
};

// ---- filter functions -------------------------------------------------------

/// omega_w^(q)(beta) = (1/w) 2^(1/q) sqrt(q / (2 pi Gamma(2/q))) exp(-(|beta|/w)^q).
double omega_small(double beta_abs, const FilterSpec& spec);

/// Radius beyond which omega_w^(q) < 1e-17 of its peak.
double omega_cutoff(const FilterSpec& spec);

/// Autocorrelation filter Omega_w^(q)(beta) of omega_w^(q); Omega(0) = 1.
/// q = 2 returns the closed Gaussian form exp(-|beta|^2 / (2 w^2)).
double filter_autocorr(double beta_abs, const FilterSpec& spec);

/// Closed form of the q -> infinity filter; zero for |beta| > 2w.
double filter_infty(double beta_abs, double w);

/// Omega_w(beta) for either branch of FilterSpec.
double filter_value(double beta_abs, const FilterSpec& spec);

/// Fourier transform (1/pi) [J1(2 w |gamma|)]^2 / |gamma|^2, limit w^2/pi at 0.
double ft_filter_infty(double gamma_abs, double w);

/// Fourier transform 4 (int_0^inf b omega(b) J0(2|gamma| b) db)^2 evaluated on
/// the unit-width filter and rescaled: w^2 Omega~_1(w gamma).
double ft_filter_q(double gamma_abs, const FilterSpec& spec);

/// Omega~_w(gamma) for either branch.
double ft_filter(double gamma_abs, const FilterSpec& spec);

/// Gaussian kernel 2/(pi(1-s)) exp(-2|gamma|^2/(1-s)); s = 1 is degenerate.
double gaussian_kernel(double gamma_abs, SParam s);

/// Product of per-mode Fourier transforms.
double ft_multimode(std::span<const double> gammas, const MultimodeFilterSpec& spec);

/// rect(|beta|/b_c): 1 on the closed disk |beta| <= b_c.
double rect_post_filter(double beta_abs, double b_c);

// ---- radial filter objects ---------------------------------------------------

RadialFilter make_radial_filter(const FilterSpec& spec);
RadialFilter make_rect_filter(double b_c);
RadialFilter make_identity_filter();
/// Pointwise product with rect(|beta|/b_c); the support shrinks accordingly.
RadialFilter with_post_cutoff(RadialFilter base, double b_c);

} // namespace regp::filters
