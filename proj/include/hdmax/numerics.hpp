#pragma once

// Scalar special functions and Gauss-Legendre quadrature primitives.
//
// Everything here is a pure function of its arguments. Weights that would
// under- or overflow in high dimension are carried as logarithms and only
// exponentiated next to the quantity they multiply.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hdmax/error.hpp"

namespace hdmax {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Composite Gauss-Legendre configuration.
struct QuadratureSpec {
  int panel_count = 8;      // minimum number of panels
  int nodes_per_panel = 16; // Gauss-Legendre order per panel
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_panels = 1 << 22; // refinement cap

  /// Throws ParameterError when the invariants do not hold.
  void validate() const;

  /// Same spec with both tolerances scaled by `factor`.
  QuadratureSpec tightened(double factor) const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long panels = 0;
};

/// ln Gamma(s) for s > 0. Stirling series for s >= 15, Lanczos below.
double log_gamma(double s);

/// ln Gamma(x + 1/2) - ln Gamma(x), accurate for large x where the two
/// log-gammas are huge and nearly equal.
double log_gamma_ratio_half(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// ln(1 - s^2), accurate near |s| = 1 and near s = 0.
double log1m_square(double s);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

/// ln I_x(a, b); -inf at x = 0.
double log_reg_inc_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation.
double reg_upper_gamma(double a, double x);

/// ln of omega_{d-2} / omega_{d-1} = Gamma(d/2) / (Gamma((d-1)/2) sqrt(pi)),
/// the density normalization of the first coordinate of a uniform point on
/// the unit sphere of R^d.
double log_sphere_normalization(double d);

/// ln of the surface area of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
double log_unit_sphere_area(double d);

/// Integrand of the spherical character integral, parametrized by the
/// first-coordinate variable s in (-1, 1).
struct LogWeightIntegrand {
  double dimension = 3.0;
  double oscillation_frequency = 0.0; // 2 pi r
  int moment_power = 0;               // 0: cos(w s), 1: s sin(w s)

  /// ((d - 3) / 2) ln(1 - s^2).
  double log_weight(double s) const;
  /// Oscillatory factor multiplying the weight.
  double kernel(double s) const;
};

/// N_d * int_{-1}^{1} trig(2 pi r s) s^k (1 - s^2)^{(d-3)/2} ds with
/// trig = cos for k = 0 and sin for k = 1. `d` may be any real > 1.
///
/// The integral is evaluated after s = sin(theta), which turns the weight into
/// cos^{d-2}(theta) and removes the endpoint singularities of small d. The
/// range of theta is cut where the log weight makes the remainder negligible
/// against abs_tol, and split into panels no wider than 1 / (4 max(r, 1)).
/// The panel count doubles until two successive sums agree.
QuadratureResult weighted_oscillatory_integral(double r, double d,
                                               int moment_power,
                                               const QuadratureSpec &spec = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
public:
  explicit GaussLegendre(int order);

  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  template <class F> double integrate(F &&f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Breakpoints a = x_0 < ... < x_n = b graded geometrically toward `a`:
/// widths shrink by `ratio` per level until they fall below `min_width`.
std::vector<double> graded_breaks(double a, double b, double ratio,
                                  double min_width);

/// Breakpoints splitting [a, b] into `count` equal intervals.
std::vector<double> uniform_breaks(double a, double b, long count);

/// Merges two sorted breakpoint lists, dropping duplicates.
std::vector<double> merge_breaks(std::span<const double> lhs,
                                 std::span<const double> rhs);

/// Composite rule: each interval between breakpoints is split into `split`
/// equal panels. Summation is left to right, so the result is deterministic.
template <class F>
double composite_sum(F &&f, std::span<const double> breaks, long split,
                     const GaussLegendre &rule) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double h = (breaks[i + 1] - breaks[i]) / static_cast<double>(split);
    for (long k = 0; k < split; ++k) {
      const double a = breaks[i] + h * static_cast<double>(k);
      total += rule.integrate(f, a, a + h);
    }
  }
  return total;
}

/// Adaptive composite Gauss-Legendre over fixed breakpoints. Each interval is
/// halved until two successive sums agree within the spec's tolerances.
template <class F>
QuadratureResult integrate_breaks(F &&f, std::span<const double> breaks,
                                  const QuadratureSpec &spec) {
  spec.validate();
  const GaussLegendre rule(spec.nodes_per_panel);
  const long intervals = static_cast<long>(breaks.size()) - 1;
  if (intervals < 1)
    return {};
  long split = 1;
  while (split * intervals < spec.panel_count)
    split *= 2;
  double coarse = composite_sum(f, breaks, split, rule);
  for (;;) {
    const double fine = composite_sum(f, breaks, 2 * split, rule);
    const double err = std::abs(fine - coarse);
    const long panels = 2 * split * intervals;
    if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(fine)))
      return {fine, err, panels};
    if (2 * panels > spec.max_panels)
      throw ConvergenceError("composite quadrature did not converge", err);
    coarse = fine;
    split *= 2;
  }
}

/// Steps smaller than this fraction of max |value| count as flat when slope
/// sign changes are tallied.
inline constexpr double kFlatRelTol = 1e-9;

struct GridMaximum {
  double argmax = 0.0;
  double value = 0.0;
  std::size_t index = 0;
  int slope_sign_changes = 0; // of successive differences along the grid
};

/// Maximum of precomputed samples; the smallest abscissa wins ties.
GridMaximum grid_maximum(std::span<const double> xs,
                         std::span<const double> values);

/// Golden-section search for the maximum of a unimodal f on [a, b] with a
/// fixed iteration count. Returns {argmax, value}.
template <class F>
std::pair<double, double> golden_section_maximize(F &&f, double a, double b,
                                                  int iterations = 80) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

/// Maximum over a grid, refined by golden-section search inside the bracket
/// formed by the neighbours of the best grid point. The refined value never
/// falls below the best grid value.
template <class F>
GridMaximum maximize_refined(F &&f, std::span<const double> grid,
                             int iterations = 60) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    values[i] = f(grid[i]);
  GridMaximum best = grid_maximum(grid, values);
  const std::size_t lo = best.index == 0 ? 0 : best.index - 1;
  const std::size_t hi = std::min(best.index + 1, grid.size() - 1);
  if (hi > lo) {
    auto [x, fx] = golden_section_maximize(f, grid[lo], grid[hi], iterations);
    if (fx > best.value) {
      best.argmax = x;
      best.value = fx;
    }
  }
  return best;
}

/// Root of a continuous f with a sign change on [a, b] by bisection.
template <class F> double bisect(F &&f, double a, double b, int iterations = 200) {
  double fa = f(a);
  if (fa * f(b) > 0.0)
    throw DomainError("bisect: no sign change on the bracket");
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b)
      break;
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

} // namespace hdmax
