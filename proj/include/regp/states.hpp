#pragma once

#include "regp/filters.hpp"
#include "regp/rng.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace regp::states {

using Complex = std::complex<double>;

struct Vacuum {};
/// Squeezed vacuum with real squeezing parameter; the squeezed quadrature is phi = 0.
struct SqueezedVacuum {
  double xi;
};
struct Coherent {
  Complex alpha0;
};
struct Thermal {
  double nbar;
};

enum class Classicality { classical, nonclassical };

class StateModel {
public:
  using Variant = std::variant<Vacuum, SqueezedVacuum, Coherent, Thermal>;

  static StateModel vacuum() { return StateModel(Vacuum{}); }
  static StateModel squeezed_vacuum(double xi);
  static StateModel coherent(Complex alpha0);
  static StateModel thermal(double nbar);

  const Variant& variant() const noexcept { return v_; }
  Classicality classify() const noexcept;
  std::string describe() const;

private:
  explicit StateModel(Variant v) : v_(v) {}
  Variant v_;
};

/// One balanced homodyne event. phi lies in [0, 2 pi).
struct QuadratureSample {
  double x;
  double phi;
};

class PhaseMode {
public:
  static PhaseMode uniform() { return PhaseMode(std::nullopt); }
  static PhaseMode fixed(double phi);

  bool is_uniform() const noexcept { return !phi_; }
  double phase() const { return phi_.value(); }

private:
  explicit PhaseMode(std::optional<double> phi) : phi_(phi) {}
  std::optional<double> phi_;
};

/// Variance of x_phi = a e^{i phi} + a^dagger e^{-i phi}; vacuum variance is 1.
double quad_variance(const StateModel& state, double phi);

/// Mean of x_phi, 2 Re(alpha0 e^{i phi}) for coherent states and 0 otherwise.
double quad_mean(const StateModel& state, double phi);

/// Draws n quadrature events from the state's (positive) Wigner function.
/// Bitwise reproducible from the seed for any thread count.
std::vector<QuadratureSample> sample_quadratures(const StateModel& state, std::size_t n, std::uint64_t seed,
                                                 PhaseMode mode, unsigned threads = 1);

/// Draws one coherent amplitude from the P function of a classical state.
/// Throws Refusal for nonclassical states.
Complex draw_p_amplitude(const StateModel& state, rng::Engine& engine);

/// Characteristic function of the P function, <D(beta)> in normal order:
///   vacuum 1, coherent exp(beta alpha0* - beta* alpha0), thermal exp(-nbar |beta|^2),
///   squeezed vacuum exp(((1 - e^{2 xi}) Re(beta)^2 + (1 - e^{-2 xi}) Im(beta)^2) / 2).
Complex char_fn_P(const StateModel& state, Complex beta);

/// Regularized P function by brute-force quadrature of
///   (1/pi^2) int d^2 beta  chi_P(beta) Omega(|beta|) exp(alpha beta* - alpha* beta).
///
/// Absolute accuracy about 1e-6. Throws NumericError when the integrand does
/// not decay inside the filter support (for instance a squeezed state under a
/// too-wide Gaussian filter, or any nondecaying state under the identity).
double reference_Pw(const StateModel& state, Complex alpha, const filters::RadialFilter& filter);

/// Same with the filter of `spec`, optionally multiplied by rect(|beta| / b_c).
double reference_Pw(const StateModel& state, Complex alpha, const filters::FilterSpec& spec,
                    std::optional<double> post_bc = std::nullopt);

} // namespace regp::states
