#include "regp/states.hpp"

#include "regp/errors.hpp"
#include "regp/parallel.hpp"
#include "regp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace regp::states {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Integrand peaks above this cannot be integrated to 1e-6 absolute.
constexpr double kEnvelopeLimit = 1e12;

struct WignerGaussian {
  Complex mean;
  double sd_re;
  double sd_im;
};

WignerGaussian wigner_of(const StateModel& state) {
  return std::visit(
      [](const auto& s) -> WignerGaussian {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Vacuum>) {
          return {0.0, 0.5, 0.5};
        } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
          return {0.0, 0.5 * std::exp(-s.xi), 0.5 * std::exp(s.xi)};
        } else if constexpr (std::is_same_v<T, Coherent>) {
          return {s.alpha0, 0.5, 0.5};
        } else {
          const double sd = 0.5 * std::sqrt(1.0 + 2.0 * s.nbar);
          return {0.0, sd, sd};
        }
      },
      state.variant());
}

// Largest c with |chi_P(beta)| <= exp(c |beta|^2) in every direction.
double growth_rate(const StateModel& state) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SqueezedVacuum>) {
          return std::max({0.0, 0.5 * (1.0 - std::exp(2.0 * s.xi)), 0.5 * (1.0 - std::exp(-2.0 * s.xi))});
        } else if constexpr (std::is_same_v<T, Thermal>) {
          return -s.nbar;
        } else {
          return 0.0;
        }
      },
      state.variant());
}

double displacement_scale(const StateModel& state) {
  if (const auto* c = std::get_if<Coherent>(&state.variant())) return std::abs(c->alpha0);
  return 0.0;
}

double wrap_phase(double phi) {
  double p = std::fmod(phi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  return p >= kTwoPi ? 0.0 : p;
}

} // namespace

StateModel StateModel::squeezed_vacuum(double xi) {
  if (!std::isfinite(xi)) throw InvalidArgument("squeezed vacuum: xi must be finite");
  return StateModel(SqueezedVacuum{xi});
}

StateModel StateModel::coherent(Complex alpha0) {
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag())) {
    throw InvalidArgument("coherent state: alpha0 must be finite");
  }
  return StateModel(Coherent{alpha0});
}

StateModel StateModel::thermal(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw InvalidArgument("thermal state: nbar must be finite and >= 0");
  return StateModel(Thermal{nbar});
}

Classicality StateModel::classify() const noexcept {
  if (const auto* s = std::get_if<SqueezedVacuum>(&v_)) {
    return s->xi != 0.0 ? Classicality::nonclassical : Classicality::classical;
  }
  return Classicality::classical;
}

std::string StateModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Vacuum>) {
          os << "vacuum";
        } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
          os << "squeezed(xi=" << s.xi << ")";
        } else if constexpr (std::is_same_v<T, Coherent>) {
          os << "coherent(alpha0=" << s.alpha0.real() << (s.alpha0.imag() < 0 ? "" : "+") << s.alpha0.imag()
             << "i)";
        } else {
          os << "thermal(nbar=" << s.nbar << ")";
        }
      },
      v_);
  return os.str();
}

PhaseMode PhaseMode::fixed(double phi) {
  if (!std::isfinite(phi)) throw InvalidArgument("PhaseMode::fixed: phase must be finite");
  return PhaseMode(wrap_phase(phi));
}

double quad_variance(const StateModel& state, double phi) {
  const auto g = wigner_of(state);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return 4.0 * (g.sd_re * g.sd_re * c * c + g.sd_im * g.sd_im * s * s);
}

double quad_mean(const StateModel& state, double phi) {
  return 2.0 * (wigner_of(state).mean * std::polar(1.0, phi)).real();
}

std::vector<QuadratureSample> sample_quadratures(const StateModel& state, std::size_t n, std::uint64_t seed,
                                                 PhaseMode mode, unsigned threads) {
  std::vector<QuadratureSample> out(n);
  const auto g = wigner_of(state);
  parallel::for_each_index(rng::chunk_count(n), threads, [&](std::size_t chunk) {
    auto engine = rng::chunk_engine(seed, rng::Stream::signal, chunk);
    std::normal_distribution<double> normal;
    const std::size_t begin = chunk * rng::kChunkEvents;
    const std::size_t end = std::min(n, begin + rng::kChunkEvents);
    for (std::size_t i = begin; i < end; ++i) {
      const double phi = mode.is_uniform() ? kTwoPi * rng::uniform01(engine) : mode.phase();
      const double re = g.mean.real() + g.sd_re * normal(engine);
      const double im = g.mean.imag() + g.sd_im * normal(engine);
      out[i] = {2.0 * (re * std::cos(phi) - im * std::sin(phi)), phi};
    }
  });
  return out;
}

Complex draw_p_amplitude(const StateModel& state, rng::Engine& engine) {
  if (state.classify() != Classicality::classical) {
    throw Refusal("draw_p_amplitude: " + state.describe() +
                  " has no positive P function; only classical states can be simulated this way");
  }
  return std::visit(
      [&engine](const auto& s) -> Complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          return s.alpha0;
        } else if constexpr (std::is_same_v<T, Thermal>) {
          if (s.nbar == 0.0) return 0.0;
          std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * s.nbar));
          const double re = normal(engine);
          return {re, normal(engine)};
        } else {
          return 0.0; // vacuum, or squeezed vacuum with xi = 0
        }
      },
      state.variant());
}

Complex char_fn_P(const StateModel& state, Complex beta) {
  return std::visit(
      [beta](const auto& s) -> Complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Vacuum>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, SqueezedVacuum>) {
          const double br = beta.real();
          const double bi = beta.imag();
          return std::exp(0.5 * ((1.0 - std::exp(2.0 * s.xi)) * br * br + (1.0 - std::exp(-2.0 * s.xi)) * bi * bi));
        } else if constexpr (std::is_same_v<T, Coherent>) {
          return std::exp(beta * std::conj(s.alpha0) - std::conj(beta) * s.alpha0);
        } else {
          return std::exp(-s.nbar * std::norm(beta));
        }
      },
      state.variant());
}

double reference_Pw(const StateModel& state, Complex alpha, const filters::RadialFilter& filter) {
  const double c = growth_rate(state);
  double reach = filter.support;
  if (!std::isfinite(reach)) {
    if (c >= 0.0) {
      throw NumericError("reference_Pw: filter '" + filter.label + "' has unbounded support and the characteristic "
                         "function of " + state.describe() + " does not decay; the integral diverges");
    }
    reach = std::sqrt(40.0 / -c);
  }

  double peak = 0.0;
  constexpr int kProbe = 256;
  for (int i = 1; i <= kProbe; ++i) {
    const double b = reach * i / kProbe;
    const double env = b * std::abs(filter(b)) * std::exp(c * b * b);
    if (!std::isfinite(env)) {
      peak = env;
      break;
    }
    peak = std::max(peak, env);
  }
  if (!(peak <= kEnvelopeLimit)) {
    std::ostringstream msg;
    msg << "reference_Pw: integrand for " << state.describe() << " with filter '" << filter.label
        << "' reaches " << peak << " before the filter cuts it off; the regularized P function does not exist "
        << "(filter too wide for this state)";
    throw NumericError(msg.str());
  }

  const auto inner_rule = quad::QuadratureRule::tolerance(1e-13, 1e-11);
  const auto outer_rule = quad::QuadratureRule::tolerance(1e-9, 1e-10);
  // Re[chi(beta) e^{2i Im(alpha beta*)}] is even under beta -> -beta, so theta runs over [0, pi].
  auto radial = [&](double b) {
    const double omega = filter(b);
    if (omega == 0.0) return 0.0;
    auto angular = [&](double theta) {
      const Complex beta = std::polar(b, theta);
      const Complex chi = char_fn_P(state, beta);
      const double ph = 2.0 * (alpha * std::conj(beta)).imag();
      return chi.real() * std::cos(ph) - chi.imag() * std::sin(ph);
    };
    return b * omega * quad::integrate(angular, 0.0, kPi, inner_rule).value;
  };
  const double freq = std::max(1.0, 2.0 * (std::abs(alpha) + displacement_scale(state)));
  const double total = quad::integrate_panels(radial, 0.0, reach, kPi / freq, outer_rule).value;
  return 2.0 * total / (kPi * kPi);
}

double reference_Pw(const StateModel& state, Complex alpha, const filters::FilterSpec& spec,
                    std::optional<double> post_bc) {
  if (spec.is_gaussian()) {
    const double w = spec.width();
    const double c = growth_rate(state);
    if (c >= 1.0 / (2.0 * w * w) && !post_bc) {
      std::ostringstream msg;
      msg << "reference_Pw: Gaussian filter with w = " << w << " cannot regularize " << state.describe()
          << " (needs w < " << std::sqrt(0.5 / c) << ")";
      throw NumericError(msg.str());
    }
  }
  auto filter = filters::make_radial_filter(spec);
  if (post_bc) filter = filters::with_post_cutoff(std::move(filter), *post_bc);
  return reference_Pw(state, alpha, filter);
}

} // namespace regp::states
