#include "hdmax/multipliers.hpp"

namespace hdmax {

namespace {

void require_sphere_dimension(int d) {
  if (d < 3)
    throw DomainError("spherical symbols require d >= 3");
}

void require_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw DomainError("radius must be finite and non-negative");
}

// Breakpoints in u for int_0^1 f(r u^{1/d}) du: graded toward u = 0 where
// u^{1/d} is steep, uniform elsewhere to follow the oscillation in r.
std::vector<double> radial_average_breaks(double r) {
  const auto graded = graded_breaks(0.0, 1.0, 0.5, 1e-40);
  const long count = 4 * static_cast<long>(std::ceil(std::max(r, 1.0)));
  const auto uniform = uniform_breaks(0.0, 1.0, count);
  return merge_breaks(graded, uniform);
}

} // namespace

std::string_view to_string(Method method) {
  switch (method) {
  case Method::quadrature:
    return "quadrature";
  case Method::closed_form:
    return "closed_form";
  case Method::monte_carlo:
    return "monte_carlo";
  }
  return "unknown";
}

std::string_view to_string(SymbolPair pair) {
  switch (pair) {
  case SymbolPair::mu_minus_g:
    return "mu_minus_g";
  case SymbolPair::mu_minus_m:
    return "mu_minus_m";
  case SymbolPair::g_minus_m:
    return "g_minus_m";
  }
  return "unknown";
}

std::optional<SymbolPair> parse_symbol_pair(std::string_view name) {
  for (auto pair : {SymbolPair::mu_minus_g, SymbolPair::mu_minus_m,
                    SymbolPair::g_minus_m})
    if (to_string(pair) == name)
      return pair;
  return std::nullopt;
}

MultiplierPoint mu(double r, int d, const QuadratureSpec &spec) {
  require_sphere_dimension(d);
  require_radius(r);
  const auto q = weighted_oscillatory_integral(r, d, 0, spec);
  return {r, d, q.value, Method::quadrature, q.error_estimate};
}

MultiplierPoint ball_multiplier(double r, int d, const QuadratureSpec &spec) {
  require_sphere_dimension(d);
  require_radius(r);
  const auto q = weighted_oscillatory_integral(r, d + 2, 0, spec);
  return {r, d, q.value, Method::quadrature, q.error_estimate};
}

MultiplierPoint ball_multiplier_radial_average(double r, int d,
                                               const QuadratureSpec &spec) {
  require_sphere_dimension(d);
  require_radius(r);
  const double inv_d = 1.0 / d;
  const QuadratureSpec inner = spec.tightened(0.1);
  double inner_error = 0.0;
  auto f = [&](double u) {
    const auto p = mu(r * std::pow(u, inv_d), d, inner);
    inner_error = std::max(inner_error, p.error_estimate);
    return p.value;
  };
  const auto breaks = radial_average_breaks(r);
  QuadratureSpec outer = spec;
  outer.panel_count = 1;
  const auto q = integrate_breaks(f, breaks, outer);
  return {r, d, q.value, Method::quadrature, q.error_estimate + inner_error};
}

MultiplierPoint gaussian_multiplier(double r, int d) {
  if (d < 1)
    throw DomainError("heat symbol requires d >= 1");
  require_radius(r);
  return {r, d, std::exp(-2.0 * kPi * kPi * r * r / d), Method::closed_form, 0.0};
}

double mu_radial_derivative(double r, int d, const QuadratureSpec &spec) {
  require_sphere_dimension(d);
  require_radius(r);
  if (r == 0.0)
    return 0.0;
  const auto q = weighted_oscillatory_integral(r, d, 1, spec);
  return -2.0 * kPi * r * q.value;
}

double ball_radial_derivative(double r, int d, const QuadratureSpec &spec) {
  require_sphere_dimension(d);
  require_radius(r);
  if (r == 0.0)
    return 0.0;
  const auto q = weighted_oscillatory_integral(r, d + 2, 1, spec);
  return -2.0 * kPi * r * q.value;
}

double gaussian_radial_derivative(double r, int d) {
  const double g = gaussian_multiplier(r, d).value;
  return -4.0 * kPi * kPi * r * r / d * g;
}

MultiplierPoint difference(SymbolPair pair, double r, int d,
                           const QuadratureSpec &spec) {
  MultiplierPoint lhs;
  MultiplierPoint rhs;
  switch (pair) {
  case SymbolPair::mu_minus_g:
    lhs = mu(r, d, spec);
    rhs = gaussian_multiplier(r, d);
    break;
  case SymbolPair::mu_minus_m:
    lhs = mu(r, d, spec);
    rhs = ball_multiplier(r, d, spec);
    break;
  case SymbolPair::g_minus_m:
    lhs = gaussian_multiplier(r, d);
    rhs = ball_multiplier(r, d, spec);
    break;
  }
  return {r, d, lhs.value - rhs.value, Method::quadrature,
          lhs.error_estimate + rhs.error_estimate};
}

double difference_radial_derivative(SymbolPair pair, double r, int d,
                                    const QuadratureSpec &spec) {
  switch (pair) {
  case SymbolPair::mu_minus_g:
    return mu_radial_derivative(r, d, spec) - gaussian_radial_derivative(r, d);
  case SymbolPair::mu_minus_m:
    return mu_radial_derivative(r, d, spec) - ball_radial_derivative(r, d, spec);
  case SymbolPair::g_minus_m:
    return gaussian_radial_derivative(r, d) - ball_radial_derivative(r, d, spec);
  }
  return 0.0;
}

} // namespace hdmax
