#include "hdmax/numerics.hpp"

#include <array>
#include <iterator>
#include <limits>
#include <string>

namespace hdmax {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxContinuedFraction = 20000;

void require_positive_finite(double v, const char *what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(what) + " must be positive and finite");
}

double log_gamma_lanczos(double s) {
  // Numerical Recipes (3rd ed.) gammln coefficients, g = 671/128.
  static constexpr std::array<double, 14> cof = {
      57.1562356658629235,     -59.5979603554754912,
      14.1360979747417471,     -0.491913816097620199,
      .339946499848118887e-4,  .465236289270485756e-4,
      -.983744753048795646e-4, .158088703224912494e-3,
      -.210264441724104883e-3, .217439618115212643e-3,
      -.164318106536763890e-3, .844182239838527433e-4,
      -.261908384015814087e-4, .368991826595316234e-5};
  double y = s;
  double tmp = s + 5.24218750000000000;
  tmp = (s + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : cof)
    ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / s);
}

double log_gamma_stirling(double s) {
  const double inv = 1.0 / s;
  const double inv2 = inv * inv;
  // Bernoulli terms B_{2k} / (2k (2k - 1) s^{2k-1}), k = 1..6.
  const double series =
      inv * (1.0 / 12.0 +
             inv2 * (-1.0 / 360.0 +
                     inv2 * (1.0 / 1260.0 +
                             inv2 * (-1.0 / 1680.0 +
                                     inv2 * (1.0 / 1188.0 +
                                             inv2 * (-691.0 / 360360.0))))));
  return (s - 0.5) * std::log(s) - s + 0.91893853320467274178 + series;
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny)
    d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFraction; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps)
      return h;
  }
  throw ConvergenceError("incomplete beta continued fraction", std::abs(h));
}

void check_beta_args(double x, double a, double b) {
  require_positive_finite(a, "incomplete beta parameter a");
  require_positive_finite(b, "incomplete beta parameter b");
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("incomplete beta argument must lie in [0, 1]");
}

// ln I_x(a, b) on the branch where the continued fraction converges fast.
double log_inc_beta_direct(double x, double a, double b) {
  const double front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b) - std::log(a);
  return front + std::log(beta_continued_fraction(x, a, b));
}

bool use_beta_symmetry(double x, double a, double b) {
  return x > (a + 1.0) / (a + b + 2.0);
}

double lower_gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxContinuedFraction; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  throw ConvergenceError("incomplete gamma series", std::abs(del));
}

double upper_gamma_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxContinuedFraction; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny)
      d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps)
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
  }
  throw ConvergenceError("incomplete gamma continued fraction", std::abs(h));
}

void check_gamma_args(double a, double x) {
  require_positive_finite(a, "incomplete gamma parameter");
  if (!(x >= 0.0) || std::isnan(x))
    throw DomainError("incomplete gamma argument must be non-negative");
}

} // namespace

void QuadratureSpec::validate() const {
  if (panel_count < 1)
    throw ParameterError("quadrature panel_count must be >= 1");
  if (nodes_per_panel < 2)
    throw ParameterError("quadrature nodes_per_panel must be >= 2");
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol) || !(rel_tol > 0.0) ||
      !std::isfinite(rel_tol))
    throw ParameterError("quadrature tolerances must be finite and positive");
  if (max_panels < panel_count)
    throw ParameterError("quadrature max_panels must be >= panel_count");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec out = *this;
  out.abs_tol *= factor;
  out.rel_tol *= factor;
  return out;
}

double log_gamma(double s) {
  require_positive_finite(s, "log_gamma argument");
  return s >= 15.0 ? log_gamma_stirling(s) : log_gamma_lanczos(s);
}

double log_gamma_ratio_half(double x) {
  require_positive_finite(x, "log_gamma_ratio_half argument");
  if (x < 25.0)
    return log_gamma(x + 0.5) - log_gamma(x);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return 0.5 * std::log(x) -
         inv * (1.0 / 8.0 -
                inv2 * (1.0 / 192.0 -
                        inv2 * (1.0 / 640.0 -
                                inv2 * (17.0 / 14336.0 -
                                        inv2 * (31.0 / 18432.0)))));
}

double log_beta(double a, double b) {
  require_positive_finite(a, "log_beta parameter");
  require_positive_finite(b, "log_beta parameter");
  constexpr double kLogGammaHalf = 0.57236494292470008707; // ln sqrt(pi)
  if (b == 0.5 && a >= 25.0)
    return kLogGammaHalf - log_gamma_ratio_half(a);
  if (a == 0.5 && b >= 25.0)
    return kLogGammaHalf - log_gamma_ratio_half(b);
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log1m_square(double s) {
  if (std::abs(s) > 1.0 || std::isnan(s))
    throw DomainError("log1m_square requires |s| <= 1");
  return std::log1p(-s) + std::log1p(s);
}

double reg_inc_beta(double x, double a, double b) {
  check_beta_args(x, a, b);
  if (x == 0.0)
    return 0.0;
  if (x == 1.0)
    return 1.0;
  if (use_beta_symmetry(x, a, b))
    return 1.0 - std::exp(log_inc_beta_direct(1.0 - x, b, a));
  return std::exp(log_inc_beta_direct(x, a, b));
}

double log_reg_inc_beta(double x, double a, double b) {
  check_beta_args(x, a, b);
  if (x == 0.0)
    return -std::numeric_limits<double>::infinity();
  if (x == 1.0)
    return 0.0;
  if (use_beta_symmetry(x, a, b))
    return std::log1p(-std::exp(log_inc_beta_direct(1.0 - x, b, a)));
  return log_inc_beta_direct(x, a, b);
}

double reg_lower_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0)
    return 0.0;
  if (std::isinf(x))
    return 1.0;
  return x < a + 1.0 ? lower_gamma_series(a, x)
                     : 1.0 - upper_gamma_fraction(a, x);
}

double reg_upper_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0)
    return 1.0;
  if (std::isinf(x))
    return 0.0;
  return x < a + 1.0 ? 1.0 - lower_gamma_series(a, x)
                     : upper_gamma_fraction(a, x);
}

double log_sphere_normalization(double d) {
  if (!(d > 1.0) || !std::isfinite(d))
    throw DomainError("sphere normalization requires d > 1");
  return log_gamma_ratio_half(0.5 * (d - 1.0)) - 0.5 * std::log(kPi);
}

double log_unit_sphere_area(double d) {
  require_positive_finite(d, "sphere dimension");
  return std::log(2.0) + 0.5 * d * std::log(kPi) - log_gamma(0.5 * d);
}

double LogWeightIntegrand::log_weight(double s) const {
  return 0.5 * (dimension - 3.0) * log1m_square(s);
}

double LogWeightIntegrand::kernel(double s) const {
  return moment_power == 0 ? std::cos(oscillation_frequency * s)
                           : s * std::sin(oscillation_frequency * s);
}

QuadratureResult weighted_oscillatory_integral(double r, double d,
                                               int moment_power,
                                               const QuadratureSpec &spec) {
  spec.validate();
  if (!std::isfinite(r))
    throw DomainError("oscillatory integral requires finite r");
  if (!(d >= 2.0) || !std::isfinite(d))
    throw DomainError("oscillatory integral requires d >= 2");
  if (moment_power != 0 && moment_power != 1)
    throw DomainError("moment_power must be 0 or 1");

  const LogWeightIntegrand integrand{d, 2.0 * kPi * r, moment_power};
  const double log_norm = log_sphere_normalization(d);
  const double half_pi = 0.5 * kPi;

  // Cut theta where 2 * (pi/2) * N_d * cos^{d-2}(theta) drops below
  // abs_tol / 1000; the integrand is bounded by the weight.
  double theta_max = half_pi;
  if (d > 2.0) {
    const double log_cut = std::log(1e-3 * spec.abs_tol / kPi) - log_norm;
    const double cos_cut = std::exp(log_cut / (d - 2.0));
    if (cos_cut > 0.0)
      theta_max = std::min(half_pi, std::acos(cos_cut));
  }

  // Both kernels are even in s, so integrate theta over [0, theta_max] twice.
  auto f = [&](double theta) {
    const double c = std::cos(theta);
    const double log_w = d == 2.0 ? 0.0 : (d - 2.0) * std::log(c);
    return std::exp(log_norm + log_w) * integrand.kernel(std::sin(theta));
  };

  const double abs_r = std::abs(r);
  const double min_by_frequency = std::ceil(theta_max * 4.0 * std::max(abs_r, 1.0));
  const double min_by_width = std::ceil(theta_max * 2.0 * std::sqrt(d));
  long panels = std::max<long>(
      spec.panel_count,
      static_cast<long>(std::max(min_by_frequency, min_by_width)));
  const GaussLegendre rule(spec.nodes_per_panel);
  const std::array<double, 2> range{0.0, theta_max};
  double coarse = 2.0 * composite_sum(f, range, panels, rule);
  for (;;) {
    const double fine = 2.0 * composite_sum(f, range, 2 * panels, rule);
    const double err = std::abs(fine - coarse);
    if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(fine)))
      return {fine, err, 2 * panels};
    if (4 * panels > spec.max_panels)
      throw ConvergenceError("oscillatory integral did not converge", err);
    coarse = fine;
    panels *= 2;
  }
}

GaussLegendre::GaussLegendre(int order) {
  if (order < 2)
    throw ParameterError("Gauss-Legendre order must be >= 2");
  nodes_.resize(order);
  weights_.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15)
        break;
    }
    nodes_[i] = -z;
    nodes_[order - 1 - i] = z;
    weights_[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights_[order - 1 - i] = weights_[i];
  }
}

std::vector<double> graded_breaks(double a, double b, double ratio,
                                  double min_width) {
  if (!(b > a) || !(ratio > 0.0 && ratio < 1.0) || !(min_width > 0.0))
    throw ParameterError("graded_breaks: invalid arguments");
  std::vector<double> offsets;
  for (double w = b - a; w >= min_width; w *= ratio)
    offsets.push_back(w);
  std::vector<double> out;
  out.reserve(offsets.size() + 1);
  out.push_back(a);
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it)
    out.push_back(a + *it);
  out.back() = b;
  return out;
}

std::vector<double> uniform_breaks(double a, double b, long count) {
  if (count < 1 || !(b > a))
    throw ParameterError("uniform_breaks: invalid arguments");
  std::vector<double> out(static_cast<std::size_t>(count) + 1);
  for (long i = 0; i <= count; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count);
  out.back() = b;
  return out;
}

std::vector<double> merge_breaks(std::span<const double> lhs,
                                 std::span<const double> rhs) {
  std::vector<double> out;
  out.reserve(lhs.size() + rhs.size());
  std::merge(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
             std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GridMaximum grid_maximum(std::span<const double> xs,
                         std::span<const double> values) {
  if (xs.empty() || xs.size() != values.size())
    throw ParameterError("grid_maximum: empty or mismatched grid");
  GridMaximum best{xs[0], values[0], 0, 0};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (values[i] > best.value || (values[i] == best.value && xs[i] < best.argmax)) {
      best.argmax = xs[i];
      best.value = values[i];
      best.index = i;
    }
  }
  double scale = 0.0;
  for (double v : values)
    scale = std::max(scale, std::abs(v));
  const double flat = kFlatRelTol * scale;
  int last_sign = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double diff = values[i] - values[i - 1];
    const int sign = diff > flat ? 1 : (diff < -flat ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign)
        ++best.slope_sign_changes;
      last_sign = sign;
    }
  }
  return best;
}

} // namespace hdmax
