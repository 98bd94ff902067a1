#include <cmath>
#include <vector>

#include "doctest.h"
#include "hdmax/bounds.hpp"

using namespace hdmax;

namespace {

double sphere_oracle(double r, int d) {
  const double nu = d / 2.0 - 1.0;
  const double x = 2.0 * kPi * r;
  if (x == 0.0)
    return 1.0;
  return std::exp(std::lgamma(nu + 1.0) - nu * std::log(x / 2.0)) * std::cyl_bessel_j(nu, x);
}

} // namespace

TEST_CASE("grids are sorted and cover their ranges") {
  for (int d : {3, 10, 1000}) {
    CAPTURE(d);
    const auto g = default_grid(d);
    REQUIRE(g.points.size() > 100);
    for (std::size_t i = 1; i < g.points.size(); ++i)
      CHECK(g.points[i] > g.points[i - 1]);
    CHECK(g.points.back() == doctest::Approx(r_max(d)));
    CHECK(g.descriptor.count == static_cast<long>(g.points.size()));
    CHECK(oscillatory_grid(d).points.back() <= d + 1e-12);
  }
  const auto lin = linear_grid(0.0, 1.0, 11);
  CHECK(lin.points.size() == 11);
  const auto lg = log_grid(1e-2, 1e2, 10);
  CHECK(lg.points.size() == 41);
}

TEST_CASE("|mu - 1| never exceeds 2 pi^2 r / sqrt(d)") {
  for (int d : {3, 10, 100}) {
    const auto reps = check_mu_estimates(d, default_grid(d));
    REQUIRE(reps.size() == 3);
    for (const auto &r : reps) {
      CHECK(r.evaluated > 0);
      CHECK(r.fitted_constant > 0.0);
      if (r.inequality_id == InequalityId::mu_near_one) {
        CHECK(r.declared_constant == doctest::Approx(2 * kPi * kPi));
        CHECK_FALSE(r.violated_at_threshold);
      }
    }
  }
}

TEST_CASE("fitted constants are grid maxima of the ratio") {
  // d = 3, far-field: |sin x / x| sqrt(3) / r ratio is |sin(2 pi r)| / (2 pi sqrt 3)
  const auto reps = check_mu_estimates(3, default_grid(3));
  for (const auto &r : reps)
    if (r.inequality_id == InequalityId::mu_far_decay)
      CHECK(r.fitted_constant <= 1.0 / (2 * kPi * std::sqrt(3.0)) + 1e-9);
}

TEST_CASE("difference reports cover three estimates") {
  const auto reps = check_difference_estimates(SymbolPair::mu_minus_g, 10, default_grid(10));
  REQUIRE(reps.size() == 3);
  for (const auto &r : reps) {
    CHECK(r.pair == SymbolPair::mu_minus_g);
    CHECK(r.declared_constant == 0.0);
  }
}

TEST_CASE("sup-norm of mu - g matches a Bessel-oracle scan") {
  for (int d : {3, 10}) {
    CAPTURE(d);
    double oracle = 0.0;
    for (int i = 1; i <= 40000; ++i) {
      const double r = i * 1e-4 * std::sqrt(d);
      oracle = std::max(oracle, std::abs(sphere_oracle(r, d) -
                                         std::exp(-2.0 * kPi * kPi * r * r / d)));
    }
    const auto sup = sup_norm_difference(SymbolPair::mu_minus_g, d, default_grid(d));
    CHECK(sup.value == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(sup.tail_bound < sup.value);
  }
}

TEST_CASE("decay fit recovers an exact power law") {
  const std::vector<int> dims = {10, 30, 100, 300};
  std::vector<double> s;
  for (int d : dims)
    s.push_back(0.7 * std::pow(d, -1.25));
  const auto f = fit_decay_exponent(dims, s);
  CHECK(f.slope == doctest::Approx(-1.25).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
}

TEST_CASE("dyadic sum") {
  CHECK(dyadic_min_sum(1.0) == doctest::Approx(3.0).epsilon(1e-12));
  for (double t : {1e-9, 0.37, 5.0, 1e11}) {
    CAPTURE(t);
    CHECK(dyadic_min_sum(t) <= 4.0);
    CHECK(dyadic_min_sum(t) == doctest::Approx(dyadic_min_sum(2.0 * t)).epsilon(1e-9));
  }
  CHECK(dyadic_certificate(1.0, 1.0) == doctest::Approx(2.0));
  CHECK(dyadic_certificate(16.0, 1.0 / 16.0) == doctest::Approx(2.0 * 8.0 * 0.5));
}

TEST_CASE("dyadic certificate combines reports and sup-norm") {
  const int d = 10;
  const auto reps = check_difference_estimates(SymbolPair::mu_minus_m, d, default_grid(d));
  double k = 0.0;
  for (const auto &r : reps)
    k = std::max(k, r.fitted_constant);
  const auto c = dyadic_maximal_certificate(d, reps, 0.08);
  CHECK(c.k_constant == doctest::Approx(k));
  CHECK(c.certificate == doctest::Approx(dyadic_certificate(k, 0.08)));
}

TEST_CASE("oscillatory core and Bessel decay") {
  const auto osc = check_oscillatory_core(10, oscillatory_grid(10));
  CHECK(osc.evaluated > 0);
  CHECK(std::isfinite(osc.fitted_constant));
  for (double nu : {0.5, 3.0, 20.0}) {
    for (double x : {2 * nu + 1.0, 3 * nu + 10.0}) {
      CAPTURE(nu);
      CAPTURE(x);
      const auto [j, noise] = bessel_j_via_symbol(nu, x);
      CHECK(noise >= 0.0);
      CHECK(std::abs(j - std::cyl_bessel_j(nu, x)) <= noise + 1e-12);
    }
  }
  std::vector<double> xs;
  for (int i = 0; i < 50; ++i)
    xs.push_back(8.0 + i);
  const auto rep = bessel_bound_check(4.0, xs);
  CHECK_FALSE(rep.violated_at_threshold);
  CHECK(rep.fitted_constant <= 1.0);
}
