#pragma once

#include "regp/ecf.hpp"
#include "regp/filters.hpp"
#include "regp/states.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace regp::process {

using Complex = std::complex<double>;

/// Settings of the regularization process: the field recipe and the signal
/// transmission eta in (0, 1].
struct ProcessConfig {
  ecf::ECFConfig ecf;
  double eta = 1.0;

  void validate() const;
};

/// Mixes each quadrature event with one displacement (index-wise pairing):
///   x' = sqrt(eta) x + sqrt(1 - eta) nu + 2 |gamma| cos(arg gamma + phi),
/// where nu is a standard normal vacuum-noise draw from `loss_seed`. For
/// eta = 1 no noise is drawn and the map is a pure displacement.
std::vector<states::QuadratureSample> apply_process_bhd(std::span<const states::QuadratureSample> signal,
                                                        std::span<const ecf::DisplacementSample> displacements,
                                                        double eta = 1.0, std::uint64_t loss_seed = 0);

/// Photon counts of the processed classical signal displaced by -alpha, one
/// count per displacement: n ~ Poisson(|gamma_s + gamma - alpha|^2) with
/// gamma_s drawn from the signal's P function. Refuses nonclassical signals.
std::vector<std::uint32_t> apply_process_uhd(const states::StateModel& signal,
                                             std::span<const ecf::DisplacementSample> displacements, Complex alpha,
                                             std::uint64_t seed);

/// Minimal quadrature variance after filtering: v_in + q^2 2^(2/q - 3) / (Gamma(2/q) w^2).
/// Defined for finite q only; q = INF has no second moment.
double output_min_variance(double v_in, const filters::FilterSpec& spec);

/// Width above which the output stays squeezed: q 2^(1/q - 3/2) / sqrt(Gamma(2/q) (1 - v_in)).
double critical_width(double q, double v_in);

/// Filter width w / sqrt(eta) that compensates a signal transmission eta.
double loss_compensated_width(double w, double eta);

/// Product-state multimode process: mode k is mixed with its own field drawn
/// from per_mode_ecf[k] and ecf_seeds[k]. Seeds must be pairwise distinct.
std::vector<std::vector<states::QuadratureSample>>
apply_process_multimode(const std::vector<std::vector<states::QuadratureSample>>& signals,
                        const std::vector<ecf::ECFConfig>& per_mode_ecf, const std::vector<std::uint64_t>& ecf_seeds,
                        unsigned threads = 1);

} // namespace regp::process
