#include "hdmax/radial.hpp"

#include <limits>
#include <string>

namespace hdmax {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void require_dimension(int d, int min_d) {
  if (d < min_d)
    throw DomainError("requires d >= " + std::to_string(min_d));
}

double ratio_minus_one_from_excess(double excess, double p) {
  return std::expm1(std::log1p(excess) / p);
}

RadialRatioReport make_ratio(RadialInput input, double p, int d, double excess,
                             double bound, double bound_power, BoundKind kind) {
  RadialRatioReport rep;
  rep.input_id = input;
  rep.p = p;
  rep.d = d;
  rep.ratio_power = 1.0 + excess;
  rep.ratio_minus_one = ratio_minus_one_from_excess(excess, p);
  rep.ratio = 1.0 + rep.ratio_minus_one;
  rep.bound = bound;
  rep.bound_power = bound_power;
  rep.bound_kind = kind;
  return rep;
}

double log_gaussian_1d_bound(double p) {
  return (std::log(2.0 * p / kPi) - p) / (2.0 * p) - std::log1p(-1.0 / p) / p;
}

double gaussian_1d_bound(double p) { return std::exp(log_gaussian_1d_bound(p)); }

} // namespace

PNormParameter::PNormParameter(double p) : p_(p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw DomainError("p-norm parameter requires 1 < p < infinity");
}

std::string_view to_string(RadialInput input) {
  switch (input) {
  case RadialInput::gaussian_1d:
    return "gaussian_1d";
  case RadialInput::gaussian_dd:
    return "gaussian_dd";
  case RadialInput::indicator_ball:
    return "indicator_ball";
  case RadialInput::homogeneous_1d:
    return "homogeneous_1d";
  }
  return "unknown";
}

std::string_view to_string(BoundKind kind) {
  return kind == BoundKind::lower ? "lower" : "upper";
}

bool RadialRatioReport::respects_bound(double tol) const {
  return bound_kind == BoundKind::lower ? ratio >= bound - tol
                                        : ratio_power <= bound_power + tol;
}

double gauss_max_gaussian_1d(double x) {
  const double ax = std::abs(x);
  if (ax <= std::sqrt(2.0))
    return std::exp(-0.25 * x * x) / std::sqrt(4.0 * kPi);
  return std::exp(-0.5) / std::sqrt(2.0 * kPi * x * x);
}

RadialRatioReport gauss_max_gaussian_ratio_1d(PNormParameter pp) {
  const double p = pp.value();
  // ||gamma||_p^p = (4 pi)^{-p/2} sqrt(4 pi / p).
  const double log_norm = -0.5 * p * std::log(4.0 * kPi) + 0.5 * std::log(4.0 * kPi / p);
  const double outer = reg_upper_gamma(0.5, 0.5 * p);
  const double log_tail = std::log(2.0) - 0.5 * p * std::log(2.0 * kPi * std::exp(1.0)) +
                          0.5 * (1.0 - p) * kLn2 - std::log(p - 1.0);
  const double v = std::exp(log_tail - log_norm);
  const double bound = gaussian_1d_bound(p);
  auto rep = make_ratio(RadialInput::gaussian_1d, p, 1, v - outer, bound,
                        std::pow(bound, p), BoundKind::lower);
  rep.v = v;
  return rep;
}

double gauss_tail_term(double p, int d) {
  if (!(p > 1.0))
    throw DomainError("tail term requires p > 1");
  require_dimension(d, 1);
  const double dd = d;
  return std::exp(-0.5 * dd * p + 0.5 * dd * std::log(0.5 * p * dd) + kLn2 -
                  log_gamma(0.5 * dd) - std::log(dd * (p - 1.0)));
}

RadialRatioReport gauss_max_gaussian_ratio_d(PNormParameter pp, int d) {
  require_dimension(d, 1);
  const double p = pp.value();
  const double v = gauss_tail_term(p, d);
  const double outer = reg_upper_gamma(0.5 * d, 0.5 * p * d);
  auto rep = make_ratio(RadialInput::gaussian_dd, p, d, v - outer, 1.0, 1.0,
                        BoundKind::lower);
  rep.v = v;
  return rep;
}

double homogeneous_profile(double p, double t, const QuadratureSpec &spec) {
  if (!(p > 1.0))
    throw DomainError("homogeneous input requires p > 1");
  if (!(t > 0.0) || !std::isfinite(t))
    throw DomainError("heat time must be positive");
  const double q = p / (p - 1.0);
  const double inv4t = 1.0 / (4.0 * t);
  auto f = [&](double w) {
    const double z = std::pow(w, q);
    const double a = 1.0 - z;
    const double b = 1.0 + z;
    return q * (std::exp(-a * a * inv4t) + std::exp(-b * b * inv4t));
  };
  // Beyond w^q = 1 + sqrt(160 t) the Gaussian factor is below e^{-40}.
  const double top = std::pow(1.0 + std::sqrt(160.0 * t), 1.0 / q);
  const double h = std::min(0.05, 0.5 * std::sqrt(t) / q);
  const long count = static_cast<long>(std::ceil(top / h));
  auto breaks = uniform_breaks(0.0, top, count);
  const double one[] = {1.0};
  breaks = merge_breaks(breaks, one);
  QuadratureSpec s = spec;
  s.panel_count = 1;
  const auto res = integrate_breaks(f, breaks, s);
  return res.value / std::sqrt(4.0 * kPi * t);
}

std::vector<double> default_t_grid() {
  std::vector<double> out;
  for (int i = 0; i <= 160; ++i)
    out.push_back(std::pow(10.0, -2.0 + i / 40.0));
  return out;
}

HomogeneousReport homogeneous_lower_bound_1d(PNormParameter pp,
                                             std::span<const double> t_grid,
                                             const QuadratureSpec &spec) {
  const double p = pp.value();
  if (t_grid.size() < 3)
    throw ParameterError("t grid needs at least three points");
  auto f = [&](double t) { return homogeneous_profile(p, t, spec); };
  const auto best = maximize_refined(f, t_grid);
  HomogeneousReport rep;
  rep.p = p;
  rep.sup = best.value;
  rep.argmax_t = best.argmax;
  rep.slope_sign_changes = best.slope_sign_changes;
  rep.bound = std::pow(2.0, (p - 1.0) / p) / std::sqrt(2.0 * std::exp(1.0) * kPi) *
              p / (p - 1.0);
  rep.value_at_quarter = f(0.25);
  return rep;
}

double spherical_max_indicator(double x_norm, int d) {
  require_dimension(d, 3);
  if (!(x_norm >= 0.0))
    throw DomainError("norm must be non-negative");
  if (x_norm <= 1.0)
    return 1.0;
  if (std::isinf(x_norm))
    return 0.0;
  return 0.5 * reg_inc_beta(1.0 / (x_norm * x_norm + 1.0), 0.5 * (d - 1), 0.5);
}

double spherical_cap_area(double r, double sin_theta, int d) {
  require_dimension(d, 2);
  if (!(r > 0.0))
    throw DomainError("cap radius must be positive");
  if (!(sin_theta >= 0.0 && sin_theta <= 1.0))
    throw DomainError("sin(theta) must lie in [0, 1]");
  return -kLn2 + (d - 1.0) * std::log(r) + log_unit_sphere_area(d) +
         log_reg_inc_beta(sin_theta * sin_theta, 0.5 * (d - 1), 0.5);
}

double indicator_ratio_bound_power(double p, int d) {
  require_dimension(d, 3);
  const double dd = d;
  const double margin = dd * (p - 1.0) - p;
  if (!(margin > 0.0))
    throw DomainError("indicator ratio requires d(p-1) > p");
  const double log_inner = log_gamma_ratio_half(0.5 * (dd - 1.0)) + 0.5 * kLn2 -
                           0.5 * std::log(kPi) - std::log(dd - 1.0);
  return 1.0 + std::exp(std::log(dd) + p * log_inner - std::log(margin));
}

RadialRatioReport spherical_indicator_ratio(PNormParameter pp, int d,
                                            const QuadratureSpec &spec) {
  require_dimension(d, 3);
  const double p = pp.value();
  const double dd = d;
  const double margin = dd * (p - 1.0) - p;
  if (!(margin > 0.0))
    throw ParameterError("indicator ratio requires d(p-1) > p");
  const double a = 0.5 * (dd - 1.0);
  // With rho = 1/t the exterior integral d int_1^inf f(rho)^p rho^{d-1} drho
  // becomes d int_0^1 f(1/t)^p t^{-d-1} dt, a power t^{margin-1} near 0.
  auto log_f = [&](double t) {
    const double x = t * t / (1.0 + t * t);
    return std::log(dd) + p * (log_reg_inc_beta(x, a, 0.5) - kLn2) -
           (dd + 1.0) * std::log(t);
  };
  auto f = [&](double t) { return std::exp(log_f(t)); };
  constexpr double t_min = 1e-8;
  const auto graded = graded_breaks(t_min, 1.0, 0.5, t_min);
  const auto uniform = uniform_breaks(t_min, 1.0, 64);
  const auto breaks = merge_breaks(graded, uniform);
  QuadratureSpec s = spec;
  s.panel_count = 1;
  const auto res = integrate_breaks(f, breaks, s);
  const double head = f(t_min) * t_min / margin;
  const double excess = res.value + head;
  const double bound_power = indicator_ratio_bound_power(p, d);
  auto rep = make_ratio(RadialInput::indicator_ball, p, d, excess,
                        std::pow(bound_power, 1.0 / p), bound_power,
                        BoundKind::upper);
  rep.error_estimate = res.error_estimate;
  return rep;
}

double spd_profile(double p, int d, double r, const QuadratureSpec &spec) {
  require_dimension(d, 3);
  const double dd = d;
  if (!(p > dd / (dd - 1.0)))
    throw DomainError("s_{p,d} diverges: requires p > d/(d-1)");
  if (!(r >= 0.0) || !std::isfinite(r))
    throw DomainError("radius must be finite and non-negative");
  const double a = dd / (2.0 * p);
  const double log_norm = log_sphere_normalization(dd);
  if (r == 0.0)
    return 1.0;
  const double one_minus_r = 1.0 - r;
  auto f = [&](double phi) {
    const double s = std::sin(0.5 * phi);
    const double base = one_minus_r * one_minus_r + 4.0 * r * s * s;
    return std::exp(log_norm - a * std::log(base) + (dd - 2.0) * std::log(std::sin(phi)));
  };
  // For phi < phi_min the integrand is at most
  // N_d (4r/pi^2)^{-a} phi^{d-2-2a}; pick phi_min so that piece is negligible.
  const double expo = dd - 1.0 - 2.0 * a;
  const double log_coeff = log_norm - a * std::log(4.0 * r / (kPi * kPi)) - std::log(expo);
  double log_phi_min = (std::log(1e-15) - log_coeff) / expo;
  log_phi_min = std::clamp(log_phi_min, std::log(1e-300), std::log(1e-2));
  const double phi_min = std::exp(log_phi_min);
  const auto graded = graded_breaks(phi_min, kPi, 0.5, phi_min);
  const auto uniform = uniform_breaks(phi_min, kPi, 16);
  const auto breaks = merge_breaks(graded, uniform);
  QuadratureSpec s = spec;
  s.panel_count = 1;
  return integrate_breaks(f, breaks, s).value;
}

std::vector<double> default_spd_grid() {
  std::vector<double> out;
  for (int i = 0; i <= 200; ++i)
    out.push_back(i / 100.0);
  out[100] = 1.0;
  return out;
}

SpdReport spd_eigenvalue(PNormParameter pp, int d, std::span<const double> r_grid,
                         const QuadratureSpec &spec) {
  require_dimension(d, 3);
  const double p = pp.value();
  if (!(p > d / (d - 1.0)))
    throw DomainError("s_{p,d} diverges: requires p > d/(d-1)");
  if (r_grid.size() < 3)
    throw ParameterError("r grid needs at least three points");
  auto f = [&](double r) { return spd_profile(p, d, r, spec); };
  const auto best = maximize_refined(f, r_grid);
  return {p, d, best.value, best.argmax, best.slope_sign_changes};
}

int d_sharp(double p) {
  if (!(p > 1.0))
    throw DomainError("d_sharp requires p > 1");
  int d = std::max(3, static_cast<int>(std::ceil(2.0 * p / (p - 1.0))));
  auto admissible = [&](int k) { return k >= 3 && p * (k - 2) >= k; };
  while (!admissible(d))
    ++d;
  while (admissible(d - 1))
    --d;
  return d;
}

double c_sharp(double p) {
  if (!(p > 1.0))
    throw DomainError("c_sharp requires p > 1");
  return std::exp(log_gaussian_1d_bound(p) + std::log1p(-1.0 / p));
}

double h_function(double x) {
  if (!(x > 0.0 && x < 1.0))
    throw DomainError("h requires x in (0, 1)");
  return 0.5 * (1.0 - x) * (std::log(2.0 / kPi) - std::log1p(-x)) + x * std::log(x);
}

ConstantsReport compute_constants() {
  ConstantsReport rep;
  std::vector<double> ps;
  std::vector<double> cs;
  const double top = std::log10(1e4 - 1.0);
  const int steps = static_cast<int>(std::ceil((top + 4.0) * 40.0));
  for (int i = 0; i <= steps; ++i) {
    const double p = 1.0 + std::pow(10.0, -4.0 + (top + 4.0) * i / steps);
    ps.push_back(p);
    cs.push_back(c_sharp(p));
    rep.c_sharp_values.emplace_back(p, cs.back());
  }
  auto neg_c = [](double p) { return -c_sharp(p); };
  std::vector<double> neg(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i)
    neg[i] = -cs[i];
  const auto grid_best = grid_maximum(ps, neg);
  const std::size_t lo = grid_best.index == 0 ? 0 : grid_best.index - 1;
  const std::size_t hi = std::min(grid_best.index + 1, ps.size() - 1);
  const auto [p_star, neg_star] = golden_section_maximize(neg_c, ps[lo], ps[hi], 100);
  rep.c_infimum = std::min(-neg_star, -grid_best.value);
  rep.p_at_infimum = -neg_star <= -grid_best.value ? p_star : grid_best.argmax;

  auto neg_h = [](double x) { return -h_function(x); };
  std::vector<double> xs;
  for (int i = 1; i < 1000; ++i)
    xs.push_back(i / 1000.0);
  const auto h_best = maximize_refined(neg_h, xs, 100);
  rep.h_infimum = -h_best.value;
  rep.h_argmin = h_best.argmax;

  const double target = std::exp(-1.5) * std::sqrt(2.0 / kPi);
  rep.x1_root = bisect([&](double x) { return x * std::sqrt(1.0 - x) - target; },
                       1e-12, 2.0 / 3.0);
  return rep;
}

} // namespace hdmax
