#pragma once

#include "regp/filters.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace regp::ecf {

using Complex = std::complex<double>;

/// Recipe for the engineered classical field: a filter, the amplitude cutoff
/// gamma_c and the beam-splitter ratio |T|/|R|.
///
/// The untruncated q = INF field cannot be prepared, so gamma_c is always
/// finite and every sample obeys |gamma| <= gamma_c.
class ECFConfig {
public:
  ECFConfig(filters::FilterSpec filter, double gamma_c, double tr_ratio = 10.0);
  /// Builds the config from the dimensionless product w * gamma_c.
  static ECFConfig from_product(const filters::FilterSpec& filter, double w_gamma_c, double tr_ratio = 10.0);

  const filters::FilterSpec& filter() const noexcept { return filter_; }
  double gamma_c() const noexcept { return gamma_c_; }
  double tr_ratio() const noexcept { return tr_ratio_; }
  double w_gamma_c() const noexcept { return filter_.width() * gamma_c_; }
  double laser_amplitude() const noexcept { return tr_ratio_ * gamma_c_; }

private:
  filters::FilterSpec filter_;
  double gamma_c_;
  double tr_ratio_;
};

struct DisplacementSample {
  Complex gamma;
};

/// Unnormalized transmission statistics T_w(tau; gamma_c) on tau in [0, 1].
double transmission_pdf(double tau, const ECFConfig& cfg);

/// Closed-form cumulative 1 - J0(2 w gamma_c tau)^2 - J1(2 w gamma_c tau)^2 (q = INF only).
double transmission_cdf(double tau, const ECFConfig& cfg);

/// Probability mass E(w gamma_c) lost by cutting the field at gamma_c.
/// `q` = nullopt selects the closed q = INF form.
double truncation_error(double w_gamma_c, std::optional<double> q = std::nullopt);

/// Large-argument asymptote 1 / (pi w gamma_c) of the q = INF truncation error.
double truncation_error_asymptote(double w_gamma_c);

/// Inverse-CDF sampler for the normalized transmission statistics T / (1 - E).
///
/// q = INF inverts the closed CDF with a table bracket and safeguarded Newton
/// steps; finite q inverts a 4096-cell Simpson table of the pdf. Immutable
/// after construction and safe to share between threads.
class DisplacementSampler {
public:
  static constexpr int kTableCells = 4096;

  explicit DisplacementSampler(ECFConfig cfg);

  const ECFConfig& config() const noexcept { return cfg_; }
  /// Truncation error of the realized distribution (from the table for finite q).
  double truncation_error() const noexcept { return deficit_; }
  /// tau with F(tau) / (1 - E) = u, accurate to 1e-12 in tau.
  double invert(double u) const;
  /// Normalized CDF of tau.
  double normalized_cdf(double tau) const;

  std::vector<DisplacementSample> sample(std::size_t n, std::uint64_t seed, unsigned threads = 1) const;

private:
  double raw_cdf(double tau) const;
  double invert_infty(double target, double lo, double hi, std::size_t k) const;

  ECFConfig cfg_;
  double deficit_ = 0.0;
  std::vector<double> cum_;      // raw cumulative at the cell edges
  std::vector<double> pdf_edge_; // finite q: pdf at the cell edges
  std::vector<double> pdf_mid_;  // finite q: pdf at the cell midpoints
};

std::vector<DisplacementSample> sample_displacements(const ECFConfig& cfg, std::size_t n, std::uint64_t seed,
                                                     unsigned threads = 1);

/// Mean photon number (1 - s)/2 |T/R|^2 of the thermal field realizing Gaussian filtering.
double thermal_ecf_params(filters::SParam s, double tr_ratio);

/// Fourier-domain kernel the truncated field actually applies: Omega~(gamma) for |gamma| <= gamma_c, else 0.
double effective_filter_ft(double gamma_abs, const filters::FilterSpec& spec, double gamma_c);

} // namespace regp::ecf
