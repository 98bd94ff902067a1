#pragma once

// Maximal functions of radial test inputs, their p-norm ratios, the
// eigenvalue s_{p,d} of the spherical maximal operator on |x|^{-d/p}, and
// the constants c_sharp(p), h(x), x_1.

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hdmax/numerics.hpp"

namespace hdmax {

class PNormParameter {
public:
  explicit PNormParameter(double p);
  double value() const noexcept { return p_; }
  double conjugate() const noexcept { return p_ / (p_ - 1.0); }

private:
  double p_;
};

enum class RadialInput { gaussian_1d, gaussian_dd, indicator_ball, homogeneous_1d };
enum class BoundKind { lower, upper };

std::string_view to_string(RadialInput input);
std::string_view to_string(BoundKind kind);

struct RadialRatioReport {
  RadialInput input_id = RadialInput::gaussian_1d;
  double p = 2.0;
  int d = 1;
  double ratio = 1.0;           // ||A_* f||_p / ||f||_p
  double ratio_minus_one = 0.0; // computed without cancellation
  double ratio_power = 1.0;     // ratio^p
  double bound = 0.0;       // on the ratio
  double bound_power = 0.0; // on ratio^p
  BoundKind bound_kind = BoundKind::lower;
  std::optional<double> v; // auxiliary tail term of the Gaussian input
  double error_estimate = 0.0;

  /// Whether the ratio sits on the right side of the bound, with slack `tol`.
  bool respects_bound(double tol) const;
};

/// sup_{t>0} of the heat semigroup applied to (4 pi)^{-1/2} e^{-x^2/4}.
double gauss_max_gaussian_1d(double x);

/// Ratio for the one-dimensional Gaussian input with the explicit lower bound
/// (2p/(pi e^p))^{1/(2p)} (p/(p-1))^{1/p}.
RadialRatioReport gauss_max_gaussian_ratio_1d(PNormParameter p);

/// v(p, d) = e^{-dp/2} (pd/2)^{d/2} (2 / Gamma(d/2)) / (d (p - 1)), in log space.
double gauss_tail_term(double p, int d);

/// Ratio for the d-dimensional Gaussian input. ratio^p = P + v with
/// P = P(d/2, pd/2); ratio^p - 1 = v - Q(d/2, pd/2).
RadialRatioReport gauss_max_gaussian_ratio_d(PNormParameter p, int d);

struct HomogeneousReport {
  double p = 2.0;
  double sup = 0.0;
  double argmax_t = 0.0;
  double bound = 0.0;           // 2^{(p-1)/p} / sqrt(2 e pi) p / (p - 1)
  double value_at_quarter = 0.0; // profile at t = 1/4
  int slope_sign_changes = 0;
};

/// (4 pi t)^{-1/2} int |1 - y|^{-1/p} e^{-y^2/(4t)} dy. The substitution
/// 1 - y = +-w^{p/(p-1)} removes the singularity exactly.
double homogeneous_profile(double p, double t, const QuadratureSpec &spec = {});

/// Log grid of t used when none is given: 40 points per decade on [1e-2, 1e2].
std::vector<double> default_t_grid();

HomogeneousReport homogeneous_lower_bound_1d(PNormParameter p,
                                             std::span<const double> t_grid,
                                             const QuadratureSpec &spec = {});

/// 1 inside the unit ball, (1/2) I_{1/(x^2+1)}((d-1)/2, 1/2) outside.
double spherical_max_indicator(double x_norm, int d);

/// ln of the cap area (1/2) r^{d-1} (2 pi^{d/2}/Gamma(d/2)) I_{sin^2}((d-1)/2, 1/2).
double spherical_cap_area(double r, double sin_theta, int d);

/// Upper bound on ratio^p for the indicator input, evaluated in log space.
double indicator_ratio_bound_power(double p, int d);

/// Ratio for the indicator of the unit ball. Requires d(p - 1) > p.
RadialRatioReport spherical_indicator_ratio(PNormParameter p, int d,
                                            const QuadratureSpec &spec = {});

/// N_d int_0^pi ((1-r)^2 + 4 r sin^2(phi/2))^{-d/(2p)} sin^{d-2}(phi) dphi.
double spd_profile(double p, int d, double r, const QuadratureSpec &spec = {});

/// r in [0, 2] at spacing 1/100, with r = 1 included.
std::vector<double> default_spd_grid();

struct SpdReport {
  double p = 2.0;
  int d = 3;
  double value = 1.0;
  double argmax_r = 0.0;
  int slope_sign_changes = 0;
};

/// sup_r spd_profile(p, d, r). Requires p > d/(d - 1).
SpdReport spd_eigenvalue(PNormParameter p, int d, std::span<const double> r_grid,
                         const QuadratureSpec &spec = {});

/// Smallest integer d >= 3 with p >= d/(d - 2).
int d_sharp(double p);

/// (2p/(pi e^p))^{1/(2p)} (p/(p-1))^{1/p} (p-1)/p.
double c_sharp(double p);

/// ((1-x)/2)(ln(2/pi) - ln(1-x)) + x ln x on (0, 1).
double h_function(double x);

struct ConstantsReport {
  std::vector<std::pair<double, double>> c_sharp_values; // (p, c_sharp(p))
  double c_infimum = 0.0;
  double p_at_infimum = 0.0;
  double x1_root = 0.0;
  double h_infimum = 0.0;
  double h_argmin = 0.0;
};

ConstantsReport compute_constants();

} // namespace hdmax
