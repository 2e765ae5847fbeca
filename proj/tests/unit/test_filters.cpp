#include "doctest.h"

#include "regp/errors.hpp"
#include "regp/filters.hpp"
#include "regp/quadrature.hpp"
#include "regp/specfun.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <vector>

using namespace regp;
using filters::FilterSpec;
using filters::SParam;

namespace {

constexpr double kPi = std::numbers::pi;

quad::QuadratureRule tight() { return quad::QuadratureRule::tolerance(1e-13, 1e-12); }

// 2 pi int_0^R r Omega~(r) dr by panels of the given width.
template <class F> double radial_mass(F&& ft, double R, double panel) {
  auto integrand = [&](double r) { return 2.0 * kPi * r * ft(r); };
  return quad::integrate_panels(integrand, 0.0, R, panel, tight()).value;
}

// Autocorrelation int d^2 b' omega(b') omega(|b' + beta|) straight from the 2-D
// definition in polar coordinates around the origin.
double autocorr_oracle(double beta, const FilterSpec& spec) {
  const double reach = filters::omega_cutoff(spec);
  auto outer = [&](double r) {
    auto inner = [&](double th) {
      const double d = std::hypot(r * std::cos(th) + beta, r * std::sin(th));
      return filters::omega_small(d, spec);
    };
    return r * filters::omega_small(r, spec) * 2.0 * quad::integrate(inner, 0.0, kPi, tight()).value;
  };
  return quad::integrate_panels(outer, 0.0, reach, reach / 16.0, tight()).value;
}

std::vector<double> dense_grid(double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = hi * i / (n - 1);
  return g;
}

} // namespace

TEST_SUITE("filters") {

TEST_CASE("FilterSpec validation and flags") {
  CHECK_THROWS_AS(FilterSpec::finite(1.9, 1.0), InvalidArgument);
  CHECK_THROWS_AS(FilterSpec::finite(3.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(FilterSpec::finite(3.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(FilterSpec::infinite(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(FilterSpec::parse("two", 1.0), InvalidArgument);
  CHECK_THROWS_AS(FilterSpec::parse("3x", 1.0), InvalidArgument);

  const auto g = FilterSpec::finite(2.0, 1.0);
  CHECK(g.is_gaussian());
  CHECK_FALSE(g.is_nonclassicality_filter());
  const auto q3 = FilterSpec::parse("3", 1.5);
  CHECK(q3.q() == 3.0);
  CHECK(q3.width() == 1.5);
  CHECK(q3.is_nonclassicality_filter());
  CHECK_FALSE(q3.is_gaussian());
  for (const char* label : {"inf", "INF", "infinity"}) {
    const auto s = FilterSpec::parse(label, 1.3);
    CHECK(s.is_infinite());
    CHECK(s.is_nonclassicality_filter());
    CHECK_THROWS_AS(s.q(), InvalidArgument);
    CHECK_FALSE(s.exponent().has_value());
  }
  CHECK(q3.with_width(2.0).width() == 2.0);
  CHECK_THROWS_AS(q3.with_width(0.0), InvalidArgument);

  CHECK_THROWS_AS(SParam(1.01), InvalidArgument);
  CHECK(SParam(1.0).value() == 1.0);
  CHECK_THROWS_AS(filters::MultimodeFilterSpec({}), InvalidArgument);
}

TEST_CASE("omega_small values and scaling") {
  const double peak = std::sqrt(2.0) * std::sqrt(1.0 / kPi);
  CHECK(filters::omega_small(0.0, FilterSpec::finite(2.0, 1.0)) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(peak == doctest::Approx(0.7979).epsilon(1e-4));
  CHECK(filters::omega_small(50.0, FilterSpec::finite(3.0, 1.0)) == 0.0);
  CHECK_THROWS_AS(filters::omega_small(0.1, FilterSpec::infinite(1.0)), InvalidArgument);

  for (double q : {2.0, 3.0, 4.5, 20.0}) {
    for (double w : {0.4, 1.3, 3.0}) {
      for (double b : {0.0, 0.3, 1.1, 2.7}) {
        const double lhs = filters::omega_small(b, FilterSpec::finite(q, w));
        const double rhs = filters::omega_small(b / w, FilterSpec::finite(q, 1.0)) / w;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("omega_small is unit-normalized in L2") {
  for (double q : {2.0, 3.0, 4.0, 20.0}) {
    const auto spec = FilterSpec::finite(q, 1.7);
    auto sq = [&](double r) {
      const double v = filters::omega_small(r, spec);
      return 2.0 * kPi * r * v * v;
    };
    const double l2 = quad::integrate_panels(sq, 0.0, filters::omega_cutoff(spec), 0.25, tight()).value;
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("filter_autocorr agrees with the 2-D autocorrelation oracle") {
  for (double q : {3.0, 4.0}) {
    const auto spec = FilterSpec::finite(q, 1.2);
    for (double b : {0.0, 0.4, 1.3, 2.5}) {
      CAPTURE(q);
      CAPTURE(b);
      CHECK(filters::filter_autocorr(b, spec) == doctest::Approx(autocorr_oracle(b, spec)).epsilon(1e-8));
    }
  }
  // Omega(0) is the squared L2 norm of omega, which is 1
  for (double q : {2.0, 3.0, 6.0, 20.0}) {
    CHECK(filters::filter_autocorr(0.0, FilterSpec::finite(q, 0.9)) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(filters::filter_autocorr(12.0, FilterSpec::finite(3.0, 1.0)) < 1e-12);
}

TEST_CASE("Gaussian autocorrelation closed form") {
  const auto spec = FilterSpec::finite(2.0, 1.4);
  for (double b : {0.0, 0.5, 1.0, 3.0}) {
    CHECK(filters::filter_autocorr(b, spec) == doctest::Approx(autocorr_oracle(b, spec)).epsilon(1e-8));
  }
}

TEST_CASE("filter_infty closed form") {
  CHECK(filters::filter_infty(0.0, 1.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(filters::filter_infty(2.0 * 1.7, 1.7) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(filters::filter_infty(5.0, 1.0) == 0.0);
  const double at_w = (2.0 / kPi) * (kPi / 3.0 - 0.5 * std::sqrt(0.75));
  CHECK(filters::filter_infty(1.3, 1.3) == doctest::Approx(at_w).epsilon(1e-14));
  CHECK(at_w == doctest::Approx(0.3910).epsilon(1e-4));
  CHECK(filters::filter_value(1.3, FilterSpec::infinite(1.3)) == doctest::Approx(at_w).epsilon(1e-14));
}

TEST_CASE("Omega^INF decays monotonically on [0, 2w]") {
  const double w = 1.3;
  double prev = filters::filter_infty(0.0, w);
  for (double b : dense_grid(2.0 * w, 2001)) {
    const double v = filters::filter_infty(b, w);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("q = 20 and q = INF: measured gap and monotone convergence") {
  std::vector<double> auto_gap, ft_gap;
  for (double q : {20.0, 50.0, 100.0, 200.0}) {
    const auto spec = FilterSpec::finite(q, 1.0);
    double ga = 0.0, gf = 0.0;
    for (double b = 0.0; b <= 2.5; b += 0.05) {
      ga = std::max(ga, std::abs(filters::filter_autocorr(b, spec) - filters::filter_infty(b, 1.0)));
    }
    for (double g = 0.0; g <= 3.0; g += 0.02) {
      gf = std::max(gf, std::abs(filters::ft_filter_q(g, spec) - filters::ft_filter_infty(g, 1.0)));
    }
    auto_gap.push_back(ga);
    ft_gap.push_back(gf * kPi); // relative to the peak 1/pi
  }
  CHECK(auto_gap[0] < 0.05);
  CHECK(ft_gap[0] < 0.025);
  for (std::size_t i = 1; i < auto_gap.size(); ++i) {
    CHECK(auto_gap[i] < auto_gap[i - 1]);
    CHECK(ft_gap[i] < ft_gap[i - 1]);
  }
  CHECK(auto_gap.back() < 0.01);
  CHECK(ft_gap.back() < 0.01);
}

TEST_CASE("ft_filter_infty limits") {
  CHECK(filters::ft_filter_infty(0.0, 1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(filters::ft_filter_infty(0.0, 2.0) == doctest::Approx(4.0 / kPi).epsilon(1e-15));
  CHECK(filters::ft_filter_infty(1e-9, 2.0) == doctest::Approx(4.0 / kPi).epsilon(1e-12));
  const double g = 0.77;
  const double j1 = specfun::bessel_j1(2.0 * 1.3 * g);
  CHECK(filters::ft_filter_infty(g, 1.3) == doctest::Approx(j1 * j1 / (kPi * g * g)).epsilon(1e-14));
}

TEST_CASE("ft_filter_q: Gaussian Hankel pair") {
  // omega = c e^{-b^2/w^2}: int_0^inf b omega J0(2 g b) db = c (w^2/2) e^{-g^2 w^2},
  // so Omega~ = 4 c^2 (w^4/4) e^{-2 g^2 w^2} = (2 w^2/pi) e^{-2 g^2 w^2} with c^2 = 2/(pi w^2).
  for (double w : {0.6, 1.0, 2.2}) {
    const auto spec = FilterSpec::finite(2.0, w);
    for (double g : {0.0, 0.3, 0.8, 1.5}) {
      const double exact = 2.0 * w * w / kPi * std::exp(-2.0 * g * g * w * w);
      CHECK(filters::ft_filter_q(g, spec) == doctest::Approx(exact).epsilon(1e-8));
    }
  }
}

TEST_CASE("ft_filter_q rescaling") {
  for (double q : {2.5, 3.0, 4.0, 20.0}) {
    for (double w : {0.5, 1.3, 2.0}) {
      for (double g : {0.0, 0.2, 0.9, 2.4}) {
        const double lhs = filters::ft_filter_q(g, FilterSpec::finite(q, w));
        const double rhs = w * w * filters::ft_filter_q(w * g, FilterSpec::finite(q, 1.0));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
      }
    }
  }
  CHECK_THROWS_AS(filters::ft_filter_q(0.1, FilterSpec::infinite(1.0)), InvalidArgument);
}

TEST_CASE("ft_filter_q is the Fourier transform of filter_autocorr") {
  // Omega~(g) = (2/pi) int_0^inf b Omega(b) J0(2 g b) db
  const auto spec = FilterSpec::finite(3.0, 1.0);
  const double reach = 2.0 * filters::omega_cutoff(spec);
  for (double g : {0.0, 0.5, 1.2}) {
    auto integrand = [&](double b) { return b * filters::filter_autocorr(b, spec) * specfun::bessel_j0(2.0 * g * b); };
    const double ft =
        (2.0 / kPi) *
        quad::integrate_panels(integrand, 0.0, reach, 0.5, quad::QuadratureRule::tolerance(1e-11, 1e-10)).value;
    CHECK(filters::ft_filter_q(g, spec) == doctest::Approx(ft).epsilon(1e-7));
  }
}

TEST_CASE("normalization of the Fourier transforms") {
  for (double q : {2.0, 3.0, 4.0}) {
    const auto spec = FilterSpec::finite(q, 1.0);
    CHECK(radial_mass([&](double r) { return filters::ft_filter_q(r, spec); }, 40.0, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    const auto spec = FilterSpec::finite(20.0, 1.0);
    CHECK(radial_mass([&](double r) { return filters::ft_filter_q(r, spec); }, 60.0, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  // q = INF decays like 1/r^3; beyond R the non-oscillating part of J1^2
  // contributes 2 int_X^inf dx / (pi x^2) = 2/(pi X), X = 2 w R.
  for (double w : {0.7, 1.3}) {
    const double R = 2000.0;
    const double body = radial_mass([&](double r) { return filters::ft_filter_infty(r, w); }, R, kPi / (4.0 * w));
    CHECK(body + 2.0 / (kPi * 2.0 * w * R) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("radial inverse transform recovers Omega^INF") {
  // Omega(b) = 2 pi int_0^inf r Omega~(r) J0(2 b r) dr. With b < 2w the tail beyond R
  // oscillates at frequency >= 4w - 2b and falls off as R^{-5/2}.
  const double w = 1.0;
  const double R = 1500.0;
  for (double b = 0.1; b <= 1.9 * w + 1e-12; b += 0.2) {
    auto integrand = [&](double r) { return 2.0 * kPi * r * filters::ft_filter_infty(r, w) * specfun::bessel_j0(2.0 * b * r); };
    const double back = quad::integrate_panels(integrand, 0.0, R, kPi / (4.0 * w + 2.0 * b), tight()).value;
    CAPTURE(b);
    CHECK(std::abs(back - filters::filter_infty(b, w)) < 1e-5);
  }
}

TEST_CASE("mass of Omega~^INF concentrates at the origin as w grows") {
  const double eps = 0.1;
  double prev = 0.0;
  for (double w : {10.0, 100.0, 1000.0}) {
    const double mass =
        radial_mass([&](double r) { return filters::ft_filter_infty(r, w); }, eps, kPi / (4.0 * w));
    CHECK(mass > prev);
    prev = mass;
  }
  CHECK(prev > 0.99);
}

TEST_CASE("non-negativity on dense grids") {
  const double w = 1.3;
  const int n = 10000;
  for (double a : dense_grid(10.0 * w, n)) {
    REQUIRE(filters::filter_infty(a, w) >= 0.0);
    REQUIRE(filters::ft_filter_infty(a, w) >= 0.0);
    REQUIRE(filters::gaussian_kernel(a, SParam(-0.5)) >= 0.0);
  }
  for (double q : {3.0, 20.0}) {
    const auto spec = FilterSpec::finite(q, w);
    for (double a : dense_grid(10.0 * w, n)) REQUIRE(filters::ft_filter_q(a, spec) >= 0.0);
  }
}

TEST_CASE("gaussian_kernel") {
  CHECK(filters::gaussian_kernel(0.0, SParam(-1.0)) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(filters::gaussian_kernel(1.0, SParam(0.0)) == doctest::Approx(2.0 / kPi * std::exp(-2.0)).epsilon(1e-15));
  CHECK(filters::gaussian_kernel(1.0, SParam(0.0)) == doctest::Approx(0.08616).epsilon(1e-4));
  CHECK_THROWS_AS(filters::gaussian_kernel(0.0, SParam(1.0)), InvalidArgument);
  for (double s : {-2.0, -0.3, 0.6}) {
    const SParam sp(s);
    CHECK(radial_mass([&](double r) { return filters::gaussian_kernel(r, sp); }, 20.0, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ft_multimode factorizes") {
  const filters::MultimodeFilterSpec one({FilterSpec::finite(3.0, 1.1)});
  const std::array<double, 1> g1{0.4};
  CHECK(filters::ft_multimode(g1, one) == filters::ft_filter(0.4, FilterSpec::finite(3.0, 1.1)));

  const filters::MultimodeFilterSpec inf3({FilterSpec::infinite(0.8), FilterSpec::infinite(1.3), FilterSpec::infinite(2.0)});
  const std::array<double, 3> zeros{0.0, 0.0, 0.0};
  CHECK(filters::ft_multimode(zeros, inf3) ==
        doctest::Approx(0.64 * 1.69 * 4.0 / (kPi * kPi * kPi)).epsilon(1e-12));

  const filters::MultimodeFilterSpec mixed({FilterSpec::finite(2.0, 0.7), FilterSpec::infinite(1.3), FilterSpec::finite(4.0, 1.0)});
  const std::array<double, 3> g3{0.3, 0.9, 1.7};
  double prod = 1.0;
  for (std::size_t k = 0; k < 3; ++k) prod *= filters::ft_filter(g3[k], mixed.per_mode[k]);
  CHECK(filters::ft_multimode(g3, mixed) == doctest::Approx(prod).epsilon(1e-12));

  const std::array<double, 2> wrong{0.1, 0.2};
  CHECK_THROWS_AS(filters::ft_multimode(wrong, mixed), InvalidArgument);
}

TEST_CASE("rect post filter and radial filter objects") {
  CHECK(filters::rect_post_filter(0.5, 1.0) == 1.0);
  CHECK(filters::rect_post_filter(1.5, 1.0) == 0.0);
  CHECK(filters::rect_post_filter(1.0, 1.0) == 1.0);
  CHECK(filters::rect_post_filter(2.6, 2.6) == 1.0);

  const auto rect = filters::make_rect_filter(2.0);
  CHECK(rect.support == 2.0);
  CHECK(rect(2.0) == 1.0);
  CHECK(rect(2.0001) == 0.0);

  const auto id = filters::make_identity_filter();
  CHECK(std::isinf(id.support));
  CHECK(id(1e6) == 1.0);

  const auto inf = filters::make_radial_filter(FilterSpec::infinite(1.3));
  CHECK(inf.support == doctest::Approx(2.6));
  const auto cut = filters::with_post_cutoff(inf, 1.0);
  CHECK(cut.support == 1.0);
  CHECK(cut(0.9) == filters::filter_infty(0.9, 1.3));
  CHECK(cut(1.1) == 0.0);

  const auto q3 = filters::make_radial_filter(FilterSpec::finite(3.0, 1.0));
  CHECK(q3(0.7) == doctest::Approx(filters::filter_autocorr(0.7, FilterSpec::finite(3.0, 1.0))).epsilon(1e-12));
}

} // TEST_SUITE
