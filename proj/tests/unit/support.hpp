#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace regp::test {

struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [a, b], nodes from Newton iteration on P_n.
inline NodeSet gauss_legendre(int n, double a, double b) {
  NodeSet r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[static_cast<std::size_t>(i)] = mid - half * z;
    r.w[static_cast<std::size_t>(i)] = 2.0 * half / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

/// Composite Gauss-Legendre rule: `panels` equal panels of n points each.
inline NodeSet composite_gauss(int n, int panels, double a, double b) {
  NodeSet all;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const auto g = gauss_legendre(n, a + p * h, a + (p + 1) * h);
    all.x.insert(all.x.end(), g.x.begin(), g.x.end());
    all.w.insert(all.w.end(), g.w.begin(), g.w.end());
  }
  return all;
}

/// Sample mean and variance (n - 1 denominator).
inline std::pair<double, double> mean_var(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, s / static_cast<double>(v.size() - 1)};
}

} // namespace regp::test
