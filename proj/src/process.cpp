#include "regp/process.hpp"

#include "regp/errors.hpp"
#include "regp/parallel.hpp"
#include "regp/rng.hpp"
#include "regp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace regp::process {

void ProcessConfig::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("ProcessConfig: eta must lie in (0, 1]");
}

std::vector<states::QuadratureSample> apply_process_bhd(std::span<const states::QuadratureSample> signal,
                                                        std::span<const ecf::DisplacementSample> displacements,
                                                        double eta, std::uint64_t loss_seed) {
  if (signal.size() != displacements.size()) {
    throw InvalidArgument("apply_process_bhd: " + std::to_string(signal.size()) + " signal events but " +
                          std::to_string(displacements.size()) + " displacements");
  }
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("apply_process_bhd: eta must lie in (0, 1]");
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  std::vector<states::QuadratureSample> out(signal.size());
  for (std::size_t chunk = 0; chunk < rng::chunk_count(signal.size()); ++chunk) {
    auto engine = rng::chunk_engine(loss_seed, rng::Stream::loss, chunk);
    std::normal_distribution<double> normal;
    const std::size_t begin = chunk * rng::kChunkEvents;
    const std::size_t end = std::min(signal.size(), begin + rng::kChunkEvents);
    for (std::size_t i = begin; i < end; ++i) {
      const auto& s = signal[i];
      const Complex g = displacements[i].gamma;
      double x = t * s.x + 2.0 * (g * std::polar(1.0, s.phi)).real();
      if (eta < 1.0) x += r * normal(engine);
      out[i] = {x, s.phi};
    }
  }
  return out;
}

std::vector<std::uint32_t> apply_process_uhd(const states::StateModel& signal,
                                             std::span<const ecf::DisplacementSample> displacements, Complex alpha,
                                             std::uint64_t seed) {
  if (signal.classify() != states::Classicality::classical) {
    throw Refusal("apply_process_uhd: " + signal.describe() +
                  " is nonclassical; photon-counting simulation via sampled coherent amplitudes is only possible "
                  "for classical input states");
  }
  const std::size_t n = displacements.size();
  std::vector<std::uint32_t> counts(n);
  for (std::size_t chunk = 0; chunk < rng::chunk_count(n); ++chunk) {
    auto engine = rng::chunk_engine(seed, rng::Stream::detector, chunk);
    const std::size_t begin = chunk * rng::kChunkEvents;
    const std::size_t end = std::min(n, begin + rng::kChunkEvents);
    for (std::size_t i = begin; i < end; ++i) {
      const Complex gs = states::draw_p_amplitude(signal, engine);
      const double mean = std::norm(gs + displacements[i].gamma - alpha);
      if (mean == 0.0) {
        counts[i] = 0;
        continue;
      }
      std::poisson_distribution<std::uint32_t> poisson(mean);
      counts[i] = poisson(engine);
    }
  }
  return counts;
}

double output_min_variance(double v_in, const filters::FilterSpec& spec) {
  if (spec.is_infinite()) {
    throw InvalidArgument("output_min_variance: undefined for q = INF (the filtered state has no second moment)");
  }
  if (!(v_in > 0.0)) throw InvalidArgument("output_min_variance: v_in must be positive");
  const double q = spec.q();
  const double w = spec.width();
  return v_in + q * q * std::pow(2.0, 2.0 / q - 3.0) / (specfun::gamma_fn(2.0 / q) * w * w);
}

double critical_width(double q, double v_in) {
  if (!(q >= 2.0) || !std::isfinite(q)) throw InvalidArgument("critical_width: q must be finite and >= 2");
  if (!(v_in > 0.0)) throw InvalidArgument("critical_width: v_in must be positive");
  if (v_in >= 1.0) throw InvalidArgument("critical_width: input is not squeezed (v_in >= 1), no critical width exists");
  return q * std::pow(2.0, 1.0 / q - 1.5) / std::sqrt(specfun::gamma_fn(2.0 / q) * (1.0 - v_in));
}

double loss_compensated_width(double w, double eta) {
  if (!(w > 0.0)) throw InvalidArgument("loss_compensated_width: w must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("loss_compensated_width: eta must lie in (0, 1]");
  return w / std::sqrt(eta);
}

std::vector<std::vector<states::QuadratureSample>>
apply_process_multimode(const std::vector<std::vector<states::QuadratureSample>>& signals,
                        const std::vector<ecf::ECFConfig>& per_mode_ecf, const std::vector<std::uint64_t>& ecf_seeds,
                        unsigned threads) {
  const std::size_t modes = signals.size();
  if (modes == 0) throw InvalidArgument("apply_process_multimode: no modes given");
  if (per_mode_ecf.size() != modes || ecf_seeds.size() != modes) {
    throw InvalidArgument("apply_process_multimode: need one ECF config and one seed per mode");
  }
  if (std::set<std::uint64_t>(ecf_seeds.begin(), ecf_seeds.end()).size() != modes) {
    throw Refusal("apply_process_multimode: ECF seeds are shared between modes; the per-mode fields must be "
                  "statistically independent");
  }
  std::vector<std::vector<states::QuadratureSample>> out(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const auto disp = ecf::sample_displacements(per_mode_ecf[k], signals[k].size(), ecf_seeds[k], threads);
    out[k] = apply_process_bhd(signals[k], disp);
  }
  return out;
}

} // namespace regp::process
