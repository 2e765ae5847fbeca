#include "regp/ecf.hpp"

#include "regp/errors.hpp"
#include "regp/parallel.hpp"
#include "regp/quadrature.hpp"
#include "regp/rng.hpp"
#include "regp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace regp::ecf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTauTol = 1e-12;

void require_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("transmission: tau must lie in [0, 1], got " + std::to_string(tau));
}

double pdf_infty(double tau, double x) {
  const double y = 2.0 * x * tau;
  if (y < 1e-8) return 2.0 * x * x * tau;
  const double j1 = specfun::bessel_j1(y);
  return 2.0 * j1 * j1 / tau;
}

double cdf_infty(double tau, double x) {
  const auto j = specfun::bessel_j01(2.0 * x * tau);
  return 1.0 - j.j0 * j.j0 - j.j1 * j.j1;
}

double pdf_finite(double tau, double x, double q) {
  return 2.0 * kPi * x * x * tau * filters::ft_filter_q(x * tau, filters::FilterSpec::finite(q, 1.0));
}

} // namespace

ECFConfig::ECFConfig(filters::FilterSpec filter, double gamma_c, double tr_ratio)
    : filter_(std::move(filter)), gamma_c_(gamma_c), tr_ratio_(tr_ratio) {
  if (!(gamma_c > 0.0) || !std::isfinite(gamma_c)) {
    throw InvalidArgument("ECFConfig: gamma_c must be finite and positive (the untruncated field is unphysical)");
  }
  if (!(tr_ratio > 0.0) || !std::isfinite(tr_ratio)) throw InvalidArgument("ECFConfig: tr_ratio must be positive");
}

ECFConfig ECFConfig::from_product(const filters::FilterSpec& filter, double w_gamma_c, double tr_ratio) {
  return ECFConfig(filter, w_gamma_c / filter.width(), tr_ratio);
}

double transmission_pdf(double tau, const ECFConfig& cfg) {
  require_tau(tau);
  const double x = cfg.w_gamma_c();
  const auto q = cfg.filter().exponent();
  return q ? pdf_finite(tau, x, *q) : pdf_infty(tau, x);
}

double transmission_cdf(double tau, const ECFConfig& cfg) {
  require_tau(tau);
  if (!cfg.filter().is_infinite()) {
    throw InvalidArgument("transmission_cdf: closed form exists for q = INF only; use DisplacementSampler");
  }
  return cdf_infty(tau, cfg.w_gamma_c());
}

double truncation_error(double w_gamma_c, std::optional<double> q) {
  if (!(w_gamma_c > 0.0)) throw InvalidArgument("truncation_error: w*gamma_c must be positive");
  if (!q) {
    const auto j = specfun::bessel_j01(2.0 * w_gamma_c);
    return j.j0 * j.j0 + j.j1 * j.j1;
  }
  const auto unit = filters::FilterSpec::finite(*q, 1.0);
  auto integrand = [&](double r) { return 2.0 * kPi * r * filters::ft_filter_q(r, unit); };
  const double mass =
      quad::integrate_panels(integrand, 0.0, w_gamma_c, 1.0, quad::QuadratureRule::tolerance(1e-12, 1e-12)).value;
  return std::max(0.0, 1.0 - mass);
}

double truncation_error_asymptote(double w_gamma_c) {
  if (!(w_gamma_c > 0.0)) throw InvalidArgument("truncation_error_asymptote: w*gamma_c must be positive");
  return 1.0 / (kPi * w_gamma_c);
}

// ---- sampler -------------------------------------------------------------------

DisplacementSampler::DisplacementSampler(ECFConfig cfg) : cfg_(std::move(cfg)) {
  const double x = cfg_.w_gamma_c();
  const int n = kTableCells;
  const double h = 1.0 / n;
  cum_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  if (const auto q = cfg_.filter().exponent()) {
    pdf_edge_.resize(static_cast<std::size_t>(n) + 1);
    pdf_mid_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i <= n; ++i) pdf_edge_[static_cast<std::size_t>(i)] = pdf_finite(i * h, x, *q);
    for (int i = 0; i < n; ++i) pdf_mid_[static_cast<std::size_t>(i)] = pdf_finite((i + 0.5) * h, x, *q);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      acc += h / 6.0 * (pdf_edge_[k] + 4.0 * pdf_mid_[k] + pdf_edge_[k + 1]);
      cum_[k + 1] = acc;
    }
    deficit_ = std::max(0.0, 1.0 - cum_.back());
  } else {
    for (int i = 0; i <= n; ++i) cum_[static_cast<std::size_t>(i)] = cdf_infty(i * h, x);
    // the closed cdf can wiggle by an ulp; the bracket search needs it sorted
    for (std::size_t i = 1; i < cum_.size(); ++i) cum_[i] = std::max(cum_[i], cum_[i - 1]);
    deficit_ = ecf::truncation_error(x);
  }
  if (!(cum_.back() > 0.0)) throw NumericError("DisplacementSampler: transmission statistics carry no mass");
}

double DisplacementSampler::raw_cdf(double tau) const {
  if (cfg_.filter().is_infinite()) return cdf_infty(tau, cfg_.w_gamma_c());
  const double h = 1.0 / kTableCells;
  const int i = std::min(kTableCells - 1, static_cast<int>(tau / h));
  const auto k = static_cast<std::size_t>(i);
  const double t = tau / h - i;
  const double p0 = pdf_edge_[k], pm = pdf_mid_[k], p1 = pdf_edge_[k + 1];
  const double b = -3.0 * p0 + 4.0 * pm - p1;
  const double c = 2.0 * p0 - 4.0 * pm + 2.0 * p1;
  return cum_[k] + h * t * (p0 + t * (b / 2.0 + t * c / 3.0));
}

double DisplacementSampler::normalized_cdf(double tau) const {
  require_tau(tau);
  return raw_cdf(tau) / cum_.back();
}

double DisplacementSampler::invert(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidArgument("DisplacementSampler::invert: u must lie in [0, 1]");
  if (u == 0.0) return 0.0;
  const double target = u * cum_.back();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  if (it == cum_.begin()) return 0.0;
  if (it == cum_.end()) return 1.0;
  const auto k = static_cast<std::size_t>(it - cum_.begin() - 1);
  const double h = 1.0 / kTableCells;
  double lo = static_cast<double>(k) * h;
  double hi = std::min(1.0, lo + h);
  if (cfg_.filter().is_infinite()) return invert_infty(target, lo, hi, k);
  double tau = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200 && hi - lo > kTauTol; ++iter) {
    if (raw_cdf(tau) > target) {
      hi = tau;
    } else {
      lo = tau;
    }
    tau = 0.5 * (lo + hi);
  }
  return tau;
}

double DisplacementSampler::invert_infty(double target, double lo, double hi, std::size_t k) const {
  const double x = cfg_.w_gamma_c();
  // start from the chord through the bracketing table entries
  const double span = cum_[k + 1] - cum_[k];
  double tau = span > 0.0 ? lo + (hi - lo) * (target - cum_[k]) / span : 0.5 * (lo + hi);
  for (int iter = 0; iter < 200 && hi - lo > kTauTol; ++iter) {
    const double y = 2.0 * x * tau;
    const auto j = specfun::bessel_j01(y);
    const double f = 1.0 - j.j0 * j.j0 - j.j1 * j.j1 - target;
    if (f > 0.0) {
      hi = tau;
    } else {
      lo = tau;
    }
    const double slope = y < 1e-8 ? 2.0 * x * x * tau : 2.0 * j.j1 * j.j1 / tau;
    double next = 0.5 * (lo + hi);
    if (slope > 0.0) {
      const double newton = tau - f / slope;
      if (newton > lo && newton < hi) {
        if (std::abs(newton - tau) < 0.25 * kTauTol) return newton;
        next = newton;
      }
    }
    tau = next;
  }
  return tau;
}

std::vector<DisplacementSample> DisplacementSampler::sample(std::size_t n, std::uint64_t seed, unsigned threads) const {
  std::vector<DisplacementSample> out(n);
  const double gc = cfg_.gamma_c();
  parallel::for_each_index(rng::chunk_count(n), threads, [&](std::size_t chunk) {
    auto engine = rng::chunk_engine(seed, rng::Stream::ecf, chunk);
    const std::size_t begin = chunk * rng::kChunkEvents;
    const std::size_t end = std::min(n, begin + rng::kChunkEvents);
    for (std::size_t i = begin; i < end; ++i) {
      const double tau = invert(rng::uniform01(engine));
      const double phi = 2.0 * kPi * rng::uniform01(engine);
      out[i] = {std::polar(gc * tau, phi)};
    }
  });
  return out;
}

std::vector<DisplacementSample> sample_displacements(const ECFConfig& cfg, std::size_t n, std::uint64_t seed,
                                                     unsigned threads) {
  return DisplacementSampler(cfg).sample(n, seed, threads);
}

double thermal_ecf_params(filters::SParam s, double tr_ratio) {
  if (!(tr_ratio > 0.0)) throw InvalidArgument("thermal_ecf_params: tr_ratio must be positive");
  return 0.5 * (1.0 - s.value()) * tr_ratio * tr_ratio;
}

double effective_filter_ft(double gamma_abs, const filters::FilterSpec& spec, double gamma_c) {
  if (!(gamma_c > 0.0)) throw InvalidArgument("effective_filter_ft: gamma_c must be positive");
  return std::abs(gamma_abs) <= gamma_c ? filters::ft_filter(gamma_abs, spec) : 0.0;
}

} // namespace regp::ecf
