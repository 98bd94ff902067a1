#pragma once

// Grid sweeps of the pointwise multiplier estimates, sup-norms of the
// difference symbols, decay fits in the dimension and the dyadic certificate.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdmax/multipliers.hpp"
#include "hdmax/numerics.hpp"

namespace hdmax {

enum class InequalityId {
  mu_near_one,     // |mu - 1| <= C r / sqrt(d), C = 2 pi^2 declared
  mu_far_decay,    // |mu| <= C sqrt(d) / r
  mu_derivative,   // |r mu'| <= C
  diff_near,       // |a| <= C r / sqrt(d)
  diff_far,        // |a| <= C sqrt(d) / r
  diff_derivative, // |r a'| <= C
  osc_core,        // moment-1 integral against e^{-2 pi r/sqrt d}/d + e^{-d/10}/sqrt d
  bessel_decay,    // |J_nu(x)| sqrt(x) <= 1 for x >= 2 nu
};

std::string_view to_string(InequalityId id);

struct GridDescriptor {
  double min = 0.0;
  double max = 0.0;
  long count = 0;
  std::string spacing;
};

struct RGrid {
  GridDescriptor descriptor;
  std::vector<double> points; // sorted, strictly increasing
};

/// Largest radius swept for dimension d.
double r_max(int d);

/// 40 points per decade on [1e-3, 8d] merged with 200 equispaced points on
/// (0, 4 sqrt(d)].
RGrid default_grid(int d);

/// Same construction capped at r = d, for the moment-1 oscillatory estimate.
RGrid oscillatory_grid(int d);

RGrid linear_grid(double min, double max, long count);
RGrid log_grid(double min, double max, int per_decade);

struct BoundReport {
  InequalityId inequality_id = InequalityId::mu_near_one;
  std::optional<SymbolPair> pair;
  double d = 0.0; // dimension, or the Bessel order for bessel_decay
  GridDescriptor r_grid;
  double worst_ratio = 0.0;
  double argmax_r = 0.0;
  double fitted_constant = 0.0;
  double declared_constant = 0.0; // 0 when the estimate has no explicit constant
  bool violated_at_threshold = false;
  long evaluated = 0;
  long skipped = 0; // below the resolvable noise floor or unverifiable
};

/// Relative slack allowed above a declared constant before a violation is
/// flagged.
inline constexpr double kViolationTolerance = 1e-9;

/// Reports for |mu - 1| (declared 2 pi^2), |mu| far-field and |r mu'|.
std::vector<BoundReport> check_mu_estimates(int d, const RGrid &grid,
                                            const QuadratureSpec &spec = {});

/// Reports for |a| near, |a| far and |r a'| with a the selected difference.
std::vector<BoundReport> check_difference_estimates(SymbolPair pair, int d,
                                                    const RGrid &grid,
                                                    const QuadratureSpec &spec = {});

/// The unnormalized moment-1 integral |int e^{2 pi i r s} s (1-s^2)^{(d-3)/2}|
/// against e^{-2 pi r/sqrt d}/d + e^{-d/10}/sqrt d. Points whose right side
/// is below 100 times the quadrature noise floor are skipped.
BoundReport check_oscillatory_core(int d, const RGrid &grid,
                                   const QuadratureSpec &spec = {});

/// |J_nu(x)| sqrt(x) <= 1 on a grid of Bessel arguments x >= 2 nu. J_nu is
/// recovered from the sphere symbol of dimension 2 nu + 2. Points where the
/// log-space prefactor amplifies the quadrature noise beyond 1e-3 are
/// counted as skipped.
BoundReport bessel_bound_check(double nu, std::span<const double> x_grid,
                               const QuadratureSpec &spec = {});

/// J_nu(x) for nu >= 0 via the sphere symbol. Returns {value, noise}.
std::pair<double, double> bessel_j_via_symbol(double nu, double x,
                                              const QuadratureSpec &spec = {});

struct SupNorm {
  double value = 0.0;
  double argmax_r = 0.0;
  double tail_bound = 0.0; // bound on |a| for r > r_max(d)
  double far_constant = 0.0;
};

/// sup_r |a(r)| over the grid, refined by golden-section search until the
/// bracket is below 1e-4.
SupNorm sup_norm_difference(SymbolPair pair, int d, const RGrid &grid,
                            const QuadratureSpec &spec = {});

struct DecayFit {
  std::vector<int> dims;
  std::vector<double> sup_norms;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0; // root mean square of the log residuals
};

/// Least-squares line through (ln d, ln sup).
DecayFit fit_decay_exponent(std::span<const int> dims,
                            std::span<const double> sup_norms);

/// Computes the sup-norms and fits them.
DecayFit fit_decay_exponent(std::span<const int> dims, SymbolPair pair,
                            const QuadratureSpec &spec = {});

/// sum_{|n| <= n_range} min(2^n t, 1 / (2^n t)). A non-positive n_range
/// picks one large enough that the truncated tail is below 1e-12.
double dyadic_min_sum(double t, int n_range = 0);

/// 2 K^{3/4} sup^{1/4}.
double dyadic_certificate(double k_constant, double sup_norm);

struct DyadicCertificate {
  int d = 0;
  double k_constant = 0.0; // max of the three fitted difference constants
  double sup_norm = 0.0;
  double certificate = 0.0;
};

DyadicCertificate dyadic_maximal_certificate(SymbolPair pair, int d,
                                             const QuadratureSpec &spec = {});

/// Same, reusing already computed reports and sup-norm.
DyadicCertificate dyadic_maximal_certificate(int d,
                                             std::span<const BoundReport> reports,
                                             double sup_norm);

} // namespace hdmax
