#include "hdmax/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "hdmax/error.hpp"
#include "hdmax/numerics.hpp"

namespace hdmax {

namespace {

struct Welford {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  static Welford merge(const Welford &a, const Welford &b) {
    if (a.n == 0)
      return b;
    if (b.n == 0)
      return a;
    Welford out;
    out.n = a.n + b.n;
    const double delta = b.mean - a.mean;
    const double nb = static_cast<double>(b.n) / static_cast<double>(out.n);
    out.mean = a.mean + delta * nb;
    out.m2 = a.m2 + b.m2 +
             delta * delta * static_cast<double>(a.n) * nb;
    return out;
  }
};

Welford merge_range(const std::vector<Welford> &blocks, std::size_t lo,
                    std::size_t hi) {
  if (hi - lo == 1)
    return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Welford::merge(merge_range(blocks, lo, mid), merge_range(blocks, mid, hi));
}

MCEstimate finish(const Welford &w, std::uint64_t seed) {
  MCEstimate e;
  e.mean = w.mean;
  e.n_samples = w.n;
  e.seed = seed;
  e.std_error = w.n > 1 ? std::sqrt(w.m2 / static_cast<double>(w.n - 1) /
                                    static_cast<double>(w.n))
                        : 0.0;
  return e;
}

// Evaluates `stats` statistics per sample; `per_sample(x, out)` writes them.
using SampleFn = std::function<void(std::span<const double>, std::span<double>)>;

std::vector<MCEstimate> run_blocks(int d, long n, std::uint64_t seed, int workers,
                                   std::size_t stats, const SampleFn &per_sample) {
  if (workers < 1)
    throw ParameterError("worker count must be >= 1");
  const GaussianSampler sampler(d, seed);
  const long block_count = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<Welford>> blocks(stats,
                                           std::vector<Welford>(block_count));
  auto work = [&](int worker) {
    std::vector<double> x(d);
    std::vector<double> values(stats);
    for (long b = worker; b < block_count; b += workers) {
      const long end = std::min(n, (b + 1) * kBlockSize);
      for (long i = b * kBlockSize; i < end; ++i) {
        sampler.sample(static_cast<std::uint64_t>(i), x);
        per_sample(x, values);
        for (std::size_t k = 0; k < stats; ++k)
          blocks[k][b].add(values[k]);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(work, w);
    for (auto &t : pool)
      t.join();
  }
  std::vector<MCEstimate> out;
  out.reserve(stats);
  for (std::size_t k = 0; k < stats; ++k)
    out.push_back(finish(merge_range(blocks[k], 0, blocks[k].size()), seed));
  return out;
}

void require_symbol_args(std::span<const double> rs, int d, long n, int min_d) {
  if (d < min_d)
    throw DomainError(min_d == 3 ? "sphere symbol requires d >= 3"
                                 : "Gaussian symbol requires d >= 1");
  if (n < 100)
    throw ParameterError("Monte Carlo sample size must be >= 100");
  for (double r : rs)
    if (!(r >= 0.0) || !std::isfinite(r))
      throw DomainError("radius must be finite and non-negative");
}

std::vector<SymbolEstimate> symbol_batch(std::span<const double> rs, int d, long n,
                                         std::uint64_t seed, int workers,
                                         bool sphere) {
  const std::size_t k = rs.size();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  auto per_sample = [&](std::span<const double> x, std::span<double> out) {
    double scale = inv_sqrt_d;
    if (sphere) {
      double s2 = 0.0;
      for (double v : x)
        s2 += v * v;
      scale = 1.0 / std::sqrt(s2);
    }
    const double t = 2.0 * kPi * x[0] * scale;
    for (std::size_t j = 0; j < k; ++j) {
      out[2 * j] = std::cos(t * rs[j]);
      out[2 * j + 1] = std::sin(t * rs[j]);
    }
  };
  const auto est = run_blocks(d, n, seed, workers, 2 * k, per_sample);
  std::vector<SymbolEstimate> out(k);
  for (std::size_t j = 0; j < k; ++j)
    out[j] = {rs[j], est[2 * j], est[2 * j + 1]};
  return out;
}

inline std::uint32_t mulhi32(std::uint32_t a, std::uint32_t b, std::uint32_t &lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  return static_cast<std::uint32_t>(p >> 32);
}

// Uniform in the open interval (0, 1) with 53 random bits.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(hi >> 5) << 26) | (lo >> 6);
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t m0 = 0xD2511F53u;
  constexpr std::uint32_t m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u;
  constexpr std::uint32_t w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += w0;
      k[1] += w1;
    }
    std::uint32_t lo0 = 0;
    std::uint32_t lo1 = 0;
    const std::uint32_t hi0 = mulhi32(m0, c[0], lo0);
    const std::uint32_t hi1 = mulhi32(m1, c[2], lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal quantile requires p in (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double val = 0.0;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

GaussianSampler::GaussianSampler(int d, std::uint64_t seed) : d_(d), seed_(seed) {
  if (d < 1)
    throw ParameterError("sampler dimension must be >= 1");
}

void GaussianSampler::sample(std::uint64_t index, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(d_))
    throw ParameterError("sample buffer size must equal the dimension");
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                         static_cast<std::uint32_t>(seed_ >> 32)};
  for (int j = 0; j < d_; j += 2) {
    const auto block = static_cast<std::uint64_t>(j / 2);
    const auto w = philox4x32({static_cast<std::uint32_t>(index),
                               static_cast<std::uint32_t>(index >> 32),
                               static_cast<std::uint32_t>(block),
                               static_cast<std::uint32_t>(block >> 32)},
                              key);
    out[j] = normal_quantile(to_unit(w[0], w[1]));
    if (j + 1 < d_)
      out[j + 1] = normal_quantile(to_unit(w[2], w[3]));
  }
}

std::vector<SymbolEstimate> mc_sphere_symbol(std::span<const double> rs, int d,
                                             long n, std::uint64_t seed,
                                             int workers) {
  require_symbol_args(rs, d, n, 3);
  return symbol_batch(rs, d, n, seed, workers, true);
}

MCEstimate mc_sphere_symbol(double r, int d, long n, std::uint64_t seed,
                            int workers) {
  const double rs[] = {r};
  return mc_sphere_symbol(rs, d, n, seed, workers).front().real;
}

std::vector<SymbolEstimate> mc_gaussian_symbol(std::span<const double> rs, int d,
                                               long n, std::uint64_t seed,
                                               int workers) {
  require_symbol_args(rs, d, n, 1);
  return symbol_batch(rs, d, n, seed, workers, false);
}

MCEstimate mc_gaussian_symbol(double r, int d, long n, std::uint64_t seed,
                              int workers) {
  const double rs[] = {r};
  return mc_gaussian_symbol(rs, d, n, seed, workers).front().real;
}

double chi_square_window_probability(int d, double lower, double upper) {
  if (d < 1)
    throw DomainError("chi-square requires d >= 1");
  const double a = 0.5 * d;
  const double lo = std::max(lower, 0.0);
  if (!(upper > lo))
    return 0.0;
  const double median_side = static_cast<double>(d);
  // Subtract on the side of the smaller tail masses.
  if (lo >= median_side)
    return reg_upper_gamma(a, 0.5 * lo) - reg_upper_gamma(a, 0.5 * upper);
  if (upper <= median_side)
    return reg_lower_gamma(a, 0.5 * upper) - reg_lower_gamma(a, 0.5 * lo);
  return 1.0 - reg_lower_gamma(a, 0.5 * lo) - reg_upper_gamma(a, 0.5 * upper);
}

MCEstimate chi_square_window_frequency(int d, double lower, double upper, long n,
                                       std::uint64_t seed, int workers) {
  if (d < 1)
    throw DomainError("chi-square requires d >= 1");
  if (n < 100)
    throw ParameterError("Monte Carlo sample size must be >= 100");
  auto per_sample = [&](std::span<const double> x, std::span<double> out) {
    double s2 = 0.0;
    for (double v : x)
      s2 += v * v;
    out[0] = (s2 >= lower && s2 <= upper) ? 1.0 : 0.0;
  };
  return run_blocks(d, n, seed, workers, 1, per_sample).front();
}

ChiSquareReport chi_square_concentration(int d, double alpha, long n,
                                         std::uint64_t seed, int workers) {
  if (d < 3)
    throw DomainError("concentration window requires d >= 3");
  if (!(alpha > 0.0 && alpha < 0.5))
    throw DomainError("concentration exponent alpha must lie in (0, 1/2)");
  if (n < 10000)
    throw ParameterError("concentration check needs n >= 10000");
  ChiSquareReport rep;
  rep.d = d;
  rep.alpha = alpha;
  const double dd = d;
  const double spread = 2.0 * std::pow(dd, 0.5 + alpha);
  rep.lower = dd - spread;
  rep.upper = dd + spread + 2.0 * std::pow(dd, alpha);
  rep.symmetric_upper = dd + spread;
  rep.bound = -std::expm1(-std::pow(dd, alpha));
  auto per_sample = [&](std::span<const double> x, std::span<double> out) {
    double s2 = 0.0;
    for (double v : x)
      s2 += v * v;
    const bool above = s2 >= rep.lower;
    out[0] = (above && s2 <= rep.upper) ? 1.0 : 0.0;
    out[1] = (above && s2 <= rep.symmetric_upper) ? 1.0 : 0.0;
  };
  const auto est = run_blocks(d, n, seed, workers, 2, per_sample);
  rep.frequency = est[0];
  rep.symmetric_frequency = est[1];
  rep.exact = chi_square_window_probability(d, rep.lower, rep.upper);
  rep.symmetric_exact = chi_square_window_probability(d, rep.lower, rep.symmetric_upper);
  return rep;
}

} // namespace hdmax
