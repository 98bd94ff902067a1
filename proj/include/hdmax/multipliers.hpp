#pragma once

// Radial profiles of the sphere, ball and heat multiplier symbols.
//
// All three symbols depend on xi only through r = |xi|, so every routine
// takes the radius and the dimension.

#include <optional>
#include <string_view>

#include "hdmax/numerics.hpp"

namespace hdmax {

enum class Method { quadrature, closed_form, monte_carlo };

struct MultiplierPoint {
  double r = 0.0;
  int d = 0;
  double value = 0.0;
  Method method = Method::quadrature;
  double error_estimate = 0.0;
};

enum class SymbolPair { mu_minus_g, mu_minus_m, g_minus_m };

std::string_view to_string(Method method);
std::string_view to_string(SymbolPair pair);
std::optional<SymbolPair> parse_symbol_pair(std::string_view name);

/// Sphere symbol mu(r) = N_d int_{-1}^{1} cos(2 pi r s) (1 - s^2)^{(d-3)/2} ds.
MultiplierPoint mu(double r, int d, const QuadratureSpec &spec = {});

/// Ball symbol m(r) = d int_0^1 mu(s r) s^{d-1} ds.
///
/// The first coordinate of a uniform point of the unit ball in R^d has
/// density proportional to (1 - s^2)^{(d-1)/2}, the same law as the first
/// coordinate on the sphere of R^{d+2}. So m_d = mu_{d+2}.
MultiplierPoint ball_multiplier(double r, int d, const QuadratureSpec &spec = {});

/// Ball symbol from its defining radial average, after s = u^{1/d}:
/// m(r) = int_0^1 mu(r u^{1/d}) du. Slow; used as an independent route.
MultiplierPoint ball_multiplier_radial_average(double r, int d,
                                               const QuadratureSpec &spec = {});

/// Heat symbol g(r) = exp(-2 pi^2 r^2 / d).
MultiplierPoint gaussian_multiplier(double r, int d);

/// r mu'(r) = -2 pi r N_d int s sin(2 pi r s) (1 - s^2)^{(d-3)/2} ds.
double mu_radial_derivative(double r, int d, const QuadratureSpec &spec = {});

/// r m'(r), through m_d = mu_{d+2}.
double ball_radial_derivative(double r, int d, const QuadratureSpec &spec = {});

/// r g'(r) = -(4 pi^2 r^2 / d) g(r).
double gaussian_radial_derivative(double r, int d);

/// mu - g, mu - m or g - m at radius r.
MultiplierPoint difference(SymbolPair pair, double r, int d,
                           const QuadratureSpec &spec = {});

/// r a'(r) for the selected difference a.
double difference_radial_derivative(SymbolPair pair, double r, int d,
                                    const QuadratureSpec &spec = {});

} // namespace hdmax
