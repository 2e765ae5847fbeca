#pragma once

// Systematic error caused by truncating the engineered field at gamma_c.

namespace regp::syserr {

struct SysErrReport {
  double w;
  double gamma_c;
  double b_c;
  /// Largest negativity the truncation can fake in P_w, |min(Omega~_total, 0)|.
  double bound;
  /// |gamma| at which the total filter transform is smallest.
  double minimizer_gamma_abs;
  /// The minimum itself (may be positive, then bound = 0).
  double minimum;
};

/// Filter realized by a q = INF field truncated at gamma_c:
///   2 int_0^{2 w gamma_c} dr J1(r)^2 J0(|beta| r / w) / r.
double truncated_filter(double beta_abs, double w, double gamma_c);

/// Fourier transform of rect(|beta| / b_c) times the truncated filter, from the
/// single-integral reduced form. The quotient's removable singularity at
/// r = 2 w |gamma| is bridged by a first-order Taylor patch; if that path
/// fails the direct double integral is used.
double total_filter_ft(double gamma_abs, double w, double gamma_c, double b_c);

/// The direct double integral (2/pi) int_0^b_c b Omega(b; gamma_c) J0(2 |gamma| b) db.
double total_filter_ft_direct(double gamma_abs, double w, double gamma_c, double b_c);

/// Minimizes total_filter_ft over |gamma| and reports the fake-negativity bound.
///
/// Step w / steps_per_w on [0, search_factor w] and on the shell
/// gamma_c -+ search_factor w around the cutoff, ten times coarser in between,
/// then golden-section refinement around the best grid point.
SysErrReport fake_negativity_bound(double w, double gamma_c, double b_c, double search_factor = 5.0,
                                   int steps_per_w = 200, unsigned threads = 1);

} // namespace regp::syserr
