#pragma once

// Monte Carlo checks of the Gaussian-expectation identities and of the
// chi-square concentration window.
//
// Every normal variate is a pure function of (seed, sample index, coordinate),
// so results do not depend on how samples are split across workers.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hdmax {

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0; // sample standard deviation / sqrt(n)
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal quantile (Wichura AS241, about 1e-16 relative accuracy).
double normal_quantile(double p);

class GaussianSampler {
public:
  GaussianSampler(int d, std::uint64_t seed);

  int dimension() const noexcept { return d_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Fills `out` (size d) with the standard normal vector number `index`.
  void sample(std::uint64_t index, std::span<double> out) const;

private:
  int d_;
  std::uint64_t seed_;
};

/// Samples per reduction block; partial statistics are merged pairwise in
/// block order.
inline constexpr long kBlockSize = 4096;

struct SymbolEstimate {
  double r = 0.0;
  MCEstimate real;      // E cos(2 pi r X_1 / |X|) or E cos(2 pi r X_1 / sqrt d)
  MCEstimate imaginary; // the matching sine average, zero by symmetry
};

/// Sphere symbol at every r in `rs` from one shared set of n samples.
std::vector<SymbolEstimate> mc_sphere_symbol(std::span<const double> rs, int d,
                                             long n, std::uint64_t seed,
                                             int workers = 1);

MCEstimate mc_sphere_symbol(double r, int d, long n, std::uint64_t seed,
                            int workers = 1);

std::vector<SymbolEstimate> mc_gaussian_symbol(std::span<const double> rs, int d,
                                               long n, std::uint64_t seed,
                                               int workers = 1);

MCEstimate mc_gaussian_symbol(double r, int d, long n, std::uint64_t seed,
                              int workers = 1);

struct ChiSquareReport {
  int d = 0;
  double alpha = 0.0;
  double lower = 0.0; // d - 2 d^{1/2 + alpha}
  double upper = 0.0; // d + 2 d^{1/2 + alpha} + 2 d^alpha
  double bound = 0.0; // 1 - exp(-d^alpha)
  MCEstimate frequency;
  double exact = 0.0; // P(lower <= chi^2_d <= upper)
  double symmetric_upper = 0.0; // d + 2 d^{1/2 + alpha}
  MCEstimate symmetric_frequency;
  double symmetric_exact = 0.0;
};

/// P(lower <= chi^2_d <= upper) from the regularized incomplete gamma.
double chi_square_window_probability(int d, double lower, double upper);

/// Empirical frequency of lower <= |X|^2 <= upper for X ~ N(0, I_d).
MCEstimate chi_square_window_frequency(int d, double lower, double upper, long n,
                                       std::uint64_t seed, int workers = 1);

/// Concentration window of |X|^2 with exponent alpha in (0, 1/2).
ChiSquareReport chi_square_concentration(int d, double alpha, long n,
                                         std::uint64_t seed, int workers = 1);

} // namespace hdmax
