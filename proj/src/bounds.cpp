#include "hdmax/bounds.hpp"

#include <limits>

namespace hdmax {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Sweep {
  double worst = 0.0;
  double argmax = 0.0;
  long evaluated = 0;
  long skipped = 0;

  void add(double r, double ratio) {
    ++evaluated;
    if (ratio > worst) {
      worst = ratio;
      argmax = r;
    }
  }
};

BoundReport make_report(InequalityId id, std::optional<SymbolPair> pair,
                        double d, const GridDescriptor &grid, const Sweep &s,
                        double declared) {
  BoundReport rep;
  rep.inequality_id = id;
  rep.pair = pair;
  rep.d = d;
  rep.r_grid = grid;
  rep.worst_ratio = s.worst;
  rep.argmax_r = s.argmax;
  rep.fitted_constant = s.worst;
  rep.declared_constant = declared;
  rep.violated_at_threshold =
      declared > 0.0 && s.worst > declared * (1.0 + kViolationTolerance);
  rep.evaluated = s.evaluated;
  rep.skipped = s.skipped;
  return rep;
}

void require_dimension(int d) {
  if (d < 3)
    throw DomainError("estimates require d >= 3");
}

struct ThreeValues {
  double near = 0.0; // compared against r / sqrt(d)
  double far = 0.0;  // compared against sqrt(d) / r
  double derivative = 0.0;
};

template <class Eval>
std::vector<Sweep> sweep_three(const RGrid &grid, int d, Eval &&eval) {
  const double sd = std::sqrt(static_cast<double>(d));
  std::vector<Sweep> out(3);
  for (double r : grid.points) {
    if (r <= 0.0)
      continue;
    ThreeValues v;
    try {
      v = eval(r);
    } catch (const ConvergenceError &) {
      for (auto &s : out)
        ++s.skipped;
      continue;
    }
    out[0].add(r, std::abs(v.near) * sd / r);
    out[1].add(r, std::abs(v.far) * r / sd);
    out[2].add(r, std::abs(v.derivative));
  }
  return out;
}

int golden_iterations(double width, double target) {
  if (width <= target)
    return 1;
  return static_cast<int>(std::ceil(std::log(target / width) /
                                    std::log(0.5 * (std::sqrt(5.0) - 1.0)))) +
         1;
}

} // namespace

std::string_view to_string(InequalityId id) {
  switch (id) {
  case InequalityId::mu_near_one:
    return "mu_near_one";
  case InequalityId::mu_far_decay:
    return "mu_far_decay";
  case InequalityId::mu_derivative:
    return "mu_derivative";
  case InequalityId::diff_near:
    return "diff_near";
  case InequalityId::diff_far:
    return "diff_far";
  case InequalityId::diff_derivative:
    return "diff_derivative";
  case InequalityId::osc_core:
    return "osc_core";
  case InequalityId::bessel_decay:
    return "bessel_decay";
  }
  return "unknown";
}

double r_max(int d) { return 8.0 * d; }

RGrid linear_grid(double min, double max, long count) {
  if (!(max > min) || count < 2)
    throw ParameterError("linear grid needs max > min and count >= 2");
  RGrid g{{min, max, count, "linear"}, {}};
  g.points.resize(count);
  for (long i = 0; i < count; ++i)
    g.points[i] = min + (max - min) * static_cast<double>(i) / (count - 1);
  g.points.back() = max;
  return g;
}

RGrid log_grid(double min, double max, int per_decade) {
  if (!(min > 0.0) || !(max > min) || per_decade < 1)
    throw ParameterError("log grid needs 0 < min < max and per_decade >= 1");
  const double decades = std::log10(max / min);
  const long count = static_cast<long>(std::ceil(decades * per_decade)) + 1;
  RGrid g{{min, max, count, "log"}, {}};
  g.points.resize(count);
  for (long i = 0; i < count; ++i)
    g.points[i] = min * std::pow(10.0, decades * static_cast<double>(i) / (count - 1));
  g.points.front() = min;
  g.points.back() = max;
  return g;
}

namespace {

RGrid log_plus_linear(double top, double linear_top) {
  const RGrid lg = log_grid(1e-3, top, 40);
  std::vector<double> lin(200);
  for (int i = 0; i < 200; ++i)
    lin[i] = linear_top * (i + 1) / 200.0;
  RGrid g;
  g.points = merge_breaks(lg.points, lin);
  g.descriptor = {g.points.front(), g.points.back(),
                  static_cast<long>(g.points.size()), "log40+linear200"};
  return g;
}

} // namespace

RGrid default_grid(int d) {
  require_dimension(d);
  return log_plus_linear(r_max(d), 4.0 * std::sqrt(static_cast<double>(d)));
}

RGrid oscillatory_grid(int d) {
  require_dimension(d);
  const double sd = std::sqrt(static_cast<double>(d));
  return log_plus_linear(d, std::min(4.0 * sd, static_cast<double>(d)));
}

std::vector<BoundReport> check_mu_estimates(int d, const RGrid &grid,
                                            const QuadratureSpec &spec) {
  require_dimension(d);
  auto s = sweep_three(grid, d, [&](double r) {
    const double m = mu(r, d, spec).value;
    return ThreeValues{m - 1.0, m, mu_radial_derivative(r, d, spec)};
  });
  return {make_report(InequalityId::mu_near_one, std::nullopt, d,
                      grid.descriptor, s[0], 2.0 * kPi * kPi),
          make_report(InequalityId::mu_far_decay, std::nullopt, d,
                      grid.descriptor, s[1], 0.0),
          make_report(InequalityId::mu_derivative, std::nullopt, d,
                      grid.descriptor, s[2], 0.0)};
}

std::vector<BoundReport> check_difference_estimates(SymbolPair pair, int d,
                                                    const RGrid &grid,
                                                    const QuadratureSpec &spec) {
  require_dimension(d);
  auto s = sweep_three(grid, d, [&](double r) {
    const double a = difference(pair, r, d, spec).value;
    return ThreeValues{a, a, difference_radial_derivative(pair, r, d, spec)};
  });
  return {make_report(InequalityId::diff_near, pair, d, grid.descriptor, s[0], 0.0),
          make_report(InequalityId::diff_far, pair, d, grid.descriptor, s[1], 0.0),
          make_report(InequalityId::diff_derivative, pair, d, grid.descriptor,
                      s[2], 0.0)};
}

BoundReport check_oscillatory_core(int d, const RGrid &grid,
                                   const QuadratureSpec &spec) {
  require_dimension(d);
  const double dd = d;
  const double norm = std::exp(log_sphere_normalization(dd));
  const double roundoff = 64.0 * kEps * 2.0 / (dd - 1.0);
  Sweep s;
  for (double r : grid.points) {
    if (r < 0.0)
      continue;
    const double rhs = std::exp(-2.0 * kPi * r / std::sqrt(dd)) / dd +
                       std::exp(-dd / 10.0) / std::sqrt(dd);
    try {
      const auto q = weighted_oscillatory_integral(r, dd, 1, spec);
      const double noise = std::max(q.error_estimate / norm, roundoff);
      if (rhs < 100.0 * noise) {
        ++s.skipped;
        continue;
      }
      s.add(r, std::abs(q.value) / norm / rhs);
    } catch (const ConvergenceError &) {
      ++s.skipped;
    }
  }
  return make_report(InequalityId::osc_core, std::nullopt, d, grid.descriptor,
                     s, 0.0);
}

std::pair<double, double> bessel_j_via_symbol(double nu, double x,
                                              const QuadratureSpec &spec) {
  if (!(nu >= 0.0) || !(x > 0.0))
    throw DomainError("Bessel evaluation requires nu >= 0 and x > 0");
  const double d = 2.0 * nu + 2.0;
  const double r = x / (2.0 * kPi);
  const auto q = weighted_oscillatory_integral(r, d, 0, spec);
  const double log_prefactor = nu * std::log(0.5 * x) - log_gamma(nu + 1.0);
  const double prefactor = std::exp(log_prefactor);
  const double noise = std::max(q.error_estimate, 64.0 * kEps) * prefactor;
  return {q.value * prefactor, noise};
}

BoundReport bessel_bound_check(double nu, std::span<const double> x_grid,
                               const QuadratureSpec &spec) {
  if (!(nu >= 0.5))
    throw DomainError("Bessel bound requires nu >= 1/2");
  Sweep s;
  for (double x : x_grid) {
    if (x < 2.0 * nu)
      throw DomainError("Bessel bound requires x >= 2 nu on the whole grid");
    try {
      const auto [j, noise] = bessel_j_via_symbol(nu, x, spec);
      const double root = std::sqrt(x);
      if (noise * root > 1e-3) {
        ++s.skipped;
        continue;
      }
      s.add(x, std::abs(j) * root);
    } catch (const ConvergenceError &) {
      ++s.skipped;
    }
  }
  GridDescriptor desc{x_grid.empty() ? 0.0 : x_grid.front(),
                      x_grid.empty() ? 0.0 : x_grid.back(),
                      static_cast<long>(x_grid.size()), "given"};
  return make_report(InequalityId::bessel_decay, std::nullopt, nu, desc, s, 1.0);
}

SupNorm sup_norm_difference(SymbolPair pair, int d, const RGrid &grid,
                            const QuadratureSpec &spec) {
  require_dimension(d);
  if (grid.points.size() < 2)
    throw ParameterError("sup-norm needs at least two grid points");
  auto f = [&](double r) { return std::abs(difference(pair, r, d, spec).value); };
  std::vector<double> values(grid.points.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = f(grid.points[i]);
  GridMaximum best = grid_maximum(grid.points, values);
  const std::size_t lo = best.index == 0 ? 0 : best.index - 1;
  const std::size_t hi = std::min(best.index + 1, grid.points.size() - 1);
  const double width = grid.points[hi] - grid.points[lo];
  const auto [x, fx] = golden_section_maximize(f, grid.points[lo], grid.points[hi],
                                               golden_iterations(width, 1e-4));
  SupNorm out;
  out.value = best.value;
  out.argmax_r = best.argmax;
  if (fx > out.value) {
    out.value = fx;
    out.argmax_r = x;
  }
  const double sd = std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < values.size(); ++i)
    out.far_constant = std::max(out.far_constant, values[i] * grid.points[i] / sd);
  out.tail_bound = out.far_constant * sd / r_max(d);
  return out;
}

DecayFit fit_decay_exponent(std::span<const int> dims,
                            std::span<const double> sup_norms) {
  if (dims.size() != sup_norms.size() || dims.size() < 4)
    throw ParameterError("decay fit needs at least four (d, sup) pairs");
  const double n = static_cast<double>(dims.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 3)
      throw ParameterError("decay fit dimensions must be >= 3");
    if (!(sup_norms[i] > 0.0))
      throw DomainError("decay fit needs positive sup-norms");
    const double x = std::log(static_cast<double>(dims[i]));
    const double y = std::log(sup_norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0))
    throw ParameterError("decay fit needs distinct dimensions");
  DecayFit fit;
  fit.dims.assign(dims.begin(), dims.end());
  fit.sup_norms.assign(sup_norms.begin(), sup_norms.end());
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const double e = std::log(sup_norms[i]) -
                     (fit.intercept + fit.slope * std::log(static_cast<double>(dims[i])));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

DecayFit fit_decay_exponent(std::span<const int> dims, SymbolPair pair,
                            const QuadratureSpec &spec) {
  std::vector<double> sups;
  sups.reserve(dims.size());
  for (int d : dims)
    sups.push_back(sup_norm_difference(pair, d, default_grid(d), spec).value);
  return fit_decay_exponent(dims, sups);
}

double dyadic_min_sum(double t, int n_range) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw DomainError("dyadic sum requires finite t > 0");
  if (n_range <= 0)
    n_range = 64 + static_cast<int>(std::ceil(std::abs(std::log2(t))));
  // Sum from the smallest terms upward.
  std::vector<double> terms;
  terms.reserve(2 * static_cast<std::size_t>(n_range) + 1);
  for (int n = -n_range; n <= n_range; ++n) {
    const double x = std::ldexp(t, n);
    terms.push_back(std::min(x, 1.0 / x));
  }
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double v : terms)
    sum += v;
  return sum;
}

double dyadic_certificate(double k_constant, double sup_norm) {
  if (!(k_constant >= 0.0) || !(sup_norm >= 0.0))
    throw DomainError("certificate needs non-negative K and sup-norm");
  return 2.0 * std::pow(k_constant, 0.75) * std::pow(sup_norm, 0.25);
}

DyadicCertificate dyadic_maximal_certificate(int d,
                                             std::span<const BoundReport> reports,
                                             double sup_norm) {
  DyadicCertificate out;
  out.d = d;
  for (const auto &r : reports)
    out.k_constant = std::max(out.k_constant, r.fitted_constant);
  out.sup_norm = sup_norm;
  out.certificate = dyadic_certificate(out.k_constant, sup_norm);
  return out;
}

DyadicCertificate dyadic_maximal_certificate(SymbolPair pair, int d,
                                             const QuadratureSpec &spec) {
  const RGrid grid = default_grid(d);
  const auto reports = check_difference_estimates(pair, d, grid, spec);
  const auto sup = sup_norm_difference(pair, d, grid, spec);
  return dyadic_maximal_certificate(d, reports, sup.value);
}

} // namespace hdmax
