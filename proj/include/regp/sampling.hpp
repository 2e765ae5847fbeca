#pragma once

#include "regp/filters.hpp"
#include "regp/states.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regp::sampling {

using Complex = std::complex<double>;

enum class Detection { balanced, unbalanced };

std::string to_string(Detection d);

/// Run description stored next to an estimate. The estimator fills the
/// event count, b_c and the detection scheme; the caller adds the rest.
struct EstimateMeta {
  std::size_t n_events = 0;
  double b_c = 0.0;
  Detection detection = Detection::balanced;
  std::optional<double> w;
  std::optional<std::string> q;
  std::optional<double> gamma_c;
  std::optional<std::uint64_t> seed;
  std::optional<double> truncation_error;
};

/// Gridded estimate of the regularized P function with standard errors.
struct QuasiprobEstimate {
  std::vector<Complex> grid;
  std::vector<double> value;
  std::vector<double> std_error;
  EstimateMeta meta;

  std::size_t size() const noexcept { return grid.size(); }
  /// -value / std_error; NaN where the standard error vanishes.
  double significance(std::size_t i) const;
  /// Largest significance over the grid (NaN entries skipped).
  double max_significance() const;
  std::size_t argmax_significance() const;
};

// ---- grids --------------------------------------------------------------------

enum class Axis { real, imag };

/// Points t on one axis, t in [-half_width, half_width] with the given step.
std::vector<Complex> axis_grid(Axis axis, double half_width, double step);

/// Both axis cuts, real axis first; the default is the estimator grid of the
/// fig4 preset.
std::vector<Complex> cross_grid(double half_width = 3.0, double step = 0.05);

/// Square grid of (2 m + 1)^2 points covering [-half_width, half_width]^2.
std::vector<Complex> square_grid(double half_width, int m);

// ---- balanced detection -------------------------------------------------------

/// Lambda = x + 2 |alpha| sin(arg alpha + phi - pi/2), written as x - 2 Re(alpha e^{i phi}).
double lambda_arg(double x, double phi, Complex alpha);

/// f(Lambda; b_c) = (2/pi) int_0^b_c b e^{b^2/2} cos(Lambda b) db in closed form.
///
/// Uses -2/pi + (2/pi) e^{b^2/2} cos(b L)
///        + sqrt(2/pi) L Re[erfcx(L/sqrt2) - e^{b^2/2} e^{i L b} w((b + i L)/sqrt2)],
/// which stays finite for every Lambda (f is even, so |Lambda| is used).
double pattern_post(double lambda, double b_c);

/// The same integral by adaptive quadrature; the oracle for pattern_post.
double pattern_post_quadrature(double lambda, double b_c);

/// f_w(Lambda) = (2/pi) int_0^inf b e^{b^2/2} Omega_w(b) cos(Lambda b) db by
/// adaptive quadrature. Refuses q = 2, for which the integrand is not square
/// integrable in general.
double pattern_filtered(double lambda, const filters::FilterSpec& spec);

/// pattern_filtered with the filter tabulated once on Gauss-Kronrod nodes;
/// meant for estimators evaluating the pattern millions of times. For
/// |Lambda| < 32 the value is interpolated (cubic Hermite, step 1/128) from a
/// table of f and f'; beyond that the node sum is evaluated directly.
class FilteredPattern {
public:
  explicit FilteredPattern(const filters::FilterSpec& spec, int panels = 256);
  double operator()(double lambda) const;
  /// The node sum without interpolation.
  double exact(double lambda) const { return direct(std::abs(lambda), nullptr); }
  const filters::FilterSpec& spec() const noexcept { return spec_; }

private:
  static constexpr double kTableMax = 32.0;
  static constexpr double kTableStep = 1.0 / 128.0;

  double direct(double lambda, double* slope) const;
  void build_table();

  filters::FilterSpec spec_;
  std::vector<double> nodes_;
  std::vector<double> weights_; // (2/pi) w_k b_k e^{b_k^2/2} Omega(b_k)
  std::vector<double> value_;
  std::vector<double> slope_;
};

/// Direct sampling with the post-detection rect filter:
/// P(alpha) ~ (1/N) sum_j f(Lambda_j; b_c), sigma = sqrt(sum (f_j - P)^2 / (N (N - 1))).
/// Parallel over grid points; results do not depend on the thread count.
QuasiprobEstimate estimate_Pw_balanced(std::span<const states::QuadratureSample> samples,
                                       std::span<const Complex> grid, double b_c, unsigned threads = 1);

/// Same estimator with the analytic pattern function of a filter.
QuasiprobEstimate estimate_Pw_filtered(std::span<const states::QuadratureSample> samples,
                                       std::span<const Complex> grid, const FilteredPattern& pattern,
                                       unsigned threads = 1);

// ---- unbalanced detection -----------------------------------------------------

/// Xi_w(n) = (2/pi) int_0^inf b Omega_w(b) L_n(b^2) db.
double xi_filtered(int n, const filters::FilterSpec& spec);

/// Xi(n; b_c) = (1/pi) [L_n(b_c^2) - L_{n+1}(b_c^2)].
double xi_post(int n, double b_c);

/// The defining integral (2/pi) int_0^b_c b L_n(b^2) db by quadrature.
double xi_post_quadrature(int n, double b_c);

/// Xi(n; b_c) for n = 0 .. n_max from one Laguerre recurrence pass.
class XiTable {
public:
  XiTable(double b_c, int n_max);
  double b_c() const noexcept { return b_c_; }
  int n_max() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double operator()(int n) const;

private:
  double b_c_;
  std::vector<double> coeffs_;
};

/// counts[i] holds the photon counts recorded with displacement grid[i].
QuasiprobEstimate estimate_Pw_unbalanced(const std::vector<std::vector<std::uint32_t>>& counts,
                                         std::span<const Complex> grid, double b_c, unsigned threads = 1);

} // namespace regp::sampling
