// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hdmax/bounds.hpp"
#include "hdmax/cli.hpp"
#include "hdmax/montecarlo.hpp"
#include "hdmax/multipliers.hpp"
#include "hdmax/radial.hpp"

using namespace hdmax;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g(double v) { return fmt("%.6g", v); }

int failures = 0;

void criterion(int id, const std::string &title, double runtime_limit_s,
               const std::function<Outcome()> &body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (runtime_limit_s > 0 && secs > runtime_limit_s) {
    o.pass = false;
    o.detail += "; runtime " + g(secs) + " s over limit " + g(runtime_limit_s) + " s";
  }
  if (!o.pass)
    ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << title << " ("
            << fmt("%.1f", secs) << " s): " << o.detail << std::endl;
}

const std::vector<int> kSweepDims = {3, 10, 30, 100, 300, 1000};
const std::vector<int> kDecayDims = {10, 30, 100, 300, 1000};
const std::vector<SymbolPair> kPairs = {SymbolPair::mu_minus_g, SymbolPair::mu_minus_m};

// Shared between criteria 2, 3 and 5.
std::map<int, std::vector<BoundReport>> mu_reports;
std::map<std::pair<SymbolPair, int>, std::vector<BoundReport>> diff_reports;
std::map<std::pair<SymbolPair, int>, double> sups;

void sweep_bounds() {
  for (int d : kSweepDims) {
    const RGrid grid = default_grid(d);
    mu_reports[d] = check_mu_estimates(d, grid);
    for (auto pair : kPairs)
      diff_reports[{pair, d}] = check_difference_estimates(pair, d, grid);
  }
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

int main() {
  std::cout << "hdmax acceptance" << std::endl;

  criterion(1, "sphere symbol in d=3 vs sin(2 pi r)/(2 pi r), tol 1e-9, 500 points", 10,
            [] {
              double worst = 0.0, at = 0.0;
              for (int i = 0; i < 500; ++i) {
                const double r = 0.01 + (50.0 - 0.01) * i / 499.0;
                const double x = 2.0 * kPi * r;
                const double err = std::abs(mu(r, 3).value - std::sin(x) / x);
                if (err > worst) {
                  worst = err;
                  at = r;
                }
              }
              return Outcome{worst <= 1e-9, "max error " + g(worst) + " at r=" + g(at)};
            });

  criterion(2, "|mu - 1| <= 2 pi^2 r/sqrt(d): zero violations on the default grid", 300,
            [] {
              sweep_bounds();
              long violations = 0, points = 0;
              double worst = 0.0;
              for (const auto &[d, reps] : mu_reports)
                for (const auto &r : reps)
                  if (r.inequality_id == InequalityId::mu_near_one) {
                    violations += r.violated_at_threshold;
                    points += r.evaluated;
                    worst = std::max(worst, r.fitted_constant);
                  }
              return Outcome{violations == 0,
                             std::to_string(violations) + " violations over " +
                                 std::to_string(points) + " points; largest fitted constant " +
                                 g(worst) + " vs 2 pi^2 = " + g(2 * kPi * kPi)};
            });

  criterion(3, "implicit-constant estimates: fitted constants vary by <= factor 4 over d",
            0, [] {
              if (mu_reports.empty())
                sweep_bounds();
              std::map<std::string, std::vector<double>> constants;
              for (int d : kSweepDims) {
                for (const auto &r : mu_reports[d])
                  if (r.inequality_id != InequalityId::mu_near_one)
                    constants["mu/" + std::string(to_string(r.inequality_id))].push_back(
                        r.fitted_constant);
                for (auto pair : kPairs)
                  for (const auto &r : diff_reports[{pair, d}])
                    constants[std::string(to_string(pair)) + "/" +
                              std::string(to_string(r.inequality_id))]
                        .push_back(r.fitted_constant);
              }
              bool ok = true;
              std::string detail;
              for (const auto &[name, cs] : constants) {
                const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
                const double factor = *hi / *lo;
                ok = ok && factor <= 4.0;
                detail += name + " x" + fmt("%.3g", factor) + (factor <= 4.0 ? "" : "!") + " ";
              }
              return Outcome{ok, detail};
            });

  criterion(4, "sup|mu-m| slope <= -0.75, sup|mu-g| slope <= -0.25, both decreasing", 600,
            [] {
              bool ok = true;
              std::string detail;
              for (auto pair : kPairs) {
                std::vector<double> s;
                for (int d : kDecayDims) {
                  const double v = sup_norm_difference(pair, d, default_grid(d)).value;
                  sups[{pair, d}] = v;
                  s.push_back(v);
                }
                const auto fit = fit_decay_exponent(kDecayDims, s);
                bool decreasing = true;
                for (std::size_t i = 1; i < s.size(); ++i)
                  decreasing = decreasing && s[i] < s[i - 1];
                const double limit = pair == SymbolPair::mu_minus_m ? -0.75 : -0.25;
                ok = ok && decreasing && fit.slope <= limit;
                detail += std::string(to_string(pair)) + " slope " + fmt("%.4f", fit.slope) +
                          (decreasing ? " decreasing; " : " NOT decreasing; ");
              }
              return Outcome{ok, detail};
            });

  criterion(5, "dyadic sum <= 4 on 1e4 random t; certificate decreasing and <= 2K^{3/4}(C/d)^{1/4}",
            0, [] {
              std::mt19937_64 rng(12345);
              std::uniform_real_distribution<double> u(-12.0, 12.0);
              double worst = 0.0;
              for (int i = 0; i < 10000; ++i)
                worst = std::max(worst, dyadic_min_sum(std::pow(10.0, u(rng))));
              if (mu_reports.empty())
                sweep_bounds();
              double c_fit = 0.0;
              std::vector<DyadicCertificate> certs;
              for (int d : kDecayDims) {
                if (!sups.count({SymbolPair::mu_minus_m, d}))
                  sups[{SymbolPair::mu_minus_m, d}] =
                      sup_norm_difference(SymbolPair::mu_minus_m, d, default_grid(d)).value;
                const double s = sups[{SymbolPair::mu_minus_m, d}];
                c_fit = std::max(c_fit, s * d);
                certs.push_back(dyadic_maximal_certificate(
                    d, diff_reports[{SymbolPair::mu_minus_m, d}], s));
              }
              bool decreasing = true, shaped = true;
              for (std::size_t i = 0; i < certs.size(); ++i) {
                if (i > 0)
                  decreasing = decreasing && certs[i].certificate < certs[i - 1].certificate;
                const double cap = 2.0 * std::pow(certs[i].k_constant, 0.75) *
                                   std::pow(c_fit / certs[i].d, 0.25);
                shaped = shaped && certs[i].certificate <= cap * (1.0 + 1e-12);
              }
              return Outcome{worst <= 4.0 && decreasing && shaped,
                             "max sum " + fmt("%.12f", worst) + "; certificates " +
                                 g(certs.front().certificate) + " -> " +
                                 g(certs.back().certificate) +
                                 (decreasing ? " decreasing" : " NOT decreasing") +
                                 "; C=" + g(c_fit) + (shaped ? " within d^{-1/4} cap" : " above cap")};
            });

  criterion(6, "MC vs quadrature within 3 stderr, n=1e6, one reseed per missed cell", 120,
            [] {
              const std::vector<double> rs = {0.25, 1.0, 3.0};
              const int workers =
                  std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
              int misses = 0, second_misses = 0;
              std::string detail;
              for (int d : {3, 50, 500}) {
                const auto est = mc_sphere_symbol(rs, d, 1000000, 1, workers);
                for (std::size_t i = 0; i < rs.size(); ++i) {
                  const double exact = mu(rs[i], d).value;
                  double z = std::abs(est[i].real.mean - exact) / est[i].real.std_error;
                  if (z > 3.0) {
                    ++misses;
                    const auto again = mc_sphere_symbol(rs[i], d, 1000000, 2, workers);
                    z = std::abs(again.mean - exact) / again.std_error;
                    if (z > 3.0)
                      ++second_misses;
                  }
                  detail += "(" + g(rs[i]) + "," + std::to_string(d) + ") z=" +
                            fmt("%.2f", z) + " ";
                }
              }
              return Outcome{second_misses == 0, detail + "; reseeds " + std::to_string(misses)};
            });

  criterion(7, "chi-square window frequency >= 1 - e^{-d^a} - 3 stderr and matches exact CDF",
            0, [] {
              bool ok = true;
              std::string detail;
              for (auto [d, a] : {std::pair{50, 0.2}, std::pair{100, 0.3}}) {
                const long n = 1000000;
                const auto rep = chi_square_concentration(d, a, n, 1);
                const double se = rep.frequency.std_error;
                // Binomial stderr at the exact probability floors a zero sample stderr.
                const double se_eff =
                    std::max(se, std::sqrt(rep.exact * (1.0 - rep.exact) / double(n)));
                const bool lower = rep.frequency.mean >= rep.bound - 3.0 * se_eff;
                const bool exact = std::abs(rep.frequency.mean - rep.exact) <= 3.0 * se_eff;
                ok = ok && lower && exact;
                detail += "(" + std::to_string(d) + "," + g(a) + ") freq " +
                          fmt("%.6f", rep.frequency.mean) + " bound " + fmt("%.6f", rep.bound) +
                          " exact " + fmt("%.6f", rep.exact) + " se " + g(se_eff) + "; ";
              }
              return Outcome{ok, detail};
            });

  criterion(8, "oscillatory moment-1 bound: fitted C stable within factor 2 over d", 0, [] {
    std::vector<double> cs;
    std::string detail;
    for (int d : {5, 10, 50, 100, 500}) {
      const auto r = check_oscillatory_core(d, oscillatory_grid(d));
      cs.push_back(r.fitted_constant);
      detail += "d=" + std::to_string(d) + " C=" + fmt("%.4g", r.fitted_constant) + " ";
    }
    const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
    return Outcome{*hi / *lo <= 2.0, detail + "factor " + fmt("%.3g", *hi / *lo)};
  });

  criterion(9, "c_infimum in (0.4, 1], x1 in (0.198, 0.2), h_infimum > -0.415", 1, [] {
    const auto c = compute_constants();
    const bool ok = c.c_infimum > 0.4 && c.c_infimum <= 1.0 && c.x1_root > 0.198 &&
                    c.x1_root < 0.2 && c.h_infimum > -0.415;
    return Outcome{ok, "c_inf " + fmt("%.10f", c.c_infimum) + " at p=" + fmt("%.5f", c.p_at_infimum) +
                           ", x1 " + fmt("%.10f", c.x1_root) + ", h_inf " +
                           fmt("%.10f", c.h_infimum)};
  });

  criterion(10, "one-dimensional lower bounds for p in {1.2, 1.5, 2, 4}, tol 1e-6", 0, [] {
    bool ok = true;
    std::string detail;
    const auto grid = default_t_grid();
    for (double p : {1.2, 1.5, 2.0, 4.0}) {
      const auto gr = gauss_max_gaussian_ratio_1d(PNormParameter(p));
      const auto hr = homogeneous_lower_bound_1d(PNormParameter(p), grid);
      ok = ok && gr.ratio >= gr.bound - 1e-6 && hr.sup >= hr.bound - 1e-6;
      detail += "p=" + g(p) + " gauss " + fmt("%.5f", gr.ratio) + ">=" +
                fmt("%.5f", gr.bound) + " homog " + fmt("%.5f", hr.sup) + ">=" +
                fmt("%.5f", hr.bound) + "; ";
    }
    return Outcome{ok, detail};
  });

  criterion(11, "indicator ratio decreasing to 1 under its bound; Gaussian ratio -> 1", 0, [] {
    bool ok = true;
    std::string detail;
    double prev = INFINITY;
    for (int d : {3, 10, 50, 200}) {
      const auto r = spherical_indicator_ratio(PNormParameter(2.0), d);
      ok = ok && r.ratio_minus_one < prev && r.ratio_power <= r.bound_power;
      if (d == 3)
        ok = ok && std::abs(r.bound_power - 1.375) <= 1e-12;
      if (d == 200)
        ok = ok && r.ratio_minus_one < 1e-3;
      prev = r.ratio_minus_one;
      detail += "d=" + std::to_string(d) + " ratio-1 " + g(r.ratio_minus_one) + " (ratio^2 " +
                fmt("%.6f", r.ratio_power) + " <= " + fmt("%.6f", r.bound_power) + "); ";
    }
    prev = INFINITY;
    for (int d : {1, 5, 20, 100, 500}) {
      const auto r = gauss_max_gaussian_ratio_d(PNormParameter(2.0), d);
      ok = ok && r.ratio_minus_one < prev && r.ratio_minus_one >= 0.0;
      prev = r.ratio_minus_one;
    }
    const double v200 = gauss_tail_term(2.0, 200);
    ok = ok && prev < 1e-6 && v200 < 1e-6;
    return Outcome{ok, detail + "gaussian ratio-1 at d=500 " + g(prev) + ", v(2,200) " + g(v200)};
  });

  criterion(12, "s_{4,4} = s_{3,5} = 1 +- 5e-4, s_{2,3} > 1 + 1e-3", 120, [] {
    const auto grid = default_spd_grid();
    const double s44 = spd_eigenvalue(PNormParameter(4.0), 4, grid).value;
    const double s35 = spd_eigenvalue(PNormParameter(3.0), 5, grid).value;
    const double s23 = spd_eigenvalue(PNormParameter(2.0), 3, grid).value;
    const bool ok =
        std::abs(s44 - 1.0) <= 5e-4 && std::abs(s35 - 1.0) <= 5e-4 && s23 > 1.0 + 1e-3;
    return Outcome{ok, "s44 " + fmt("%.8f", s44) + ", s35 " + fmt("%.8f", s35) + ", s23 " +
                           fmt("%.8f", s23)};
  });

  criterion(13, "every command replays byte-for-byte from its manifest", 0, [] {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "hdmax-acceptance-replay";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"symbols", "symbols --d 3,10 --r 0:0.25:3 --which mu,m,g,differences"},
        {"bounds", "bounds --d 10,30,100,300 --fit"},
        {"sphere", "mc sphere --d 10 --r 0.5,1 --n 20000 --seed 11"},
        {"gauss", "mc gauss --d 10 --r 0.5,1 --n 20000 --seed 11 --workers 3"},
        {"chisq", "mc chisq --d 50 --alpha 0.2 --n 20000 --seed 5 --format json"},
        {"gauss1d", "radial gauss1d"},
        {"gaussdd", "radial gaussdd"},
        {"indicator", "radial indicator"},
        {"homog", "radial homog"},
        {"spd", "radial spd --p 4,3 --d 4,5"},
        {"constants", "radial constants"},
    };
    bool ok = true;
    std::string detail;
    for (const auto &[name, args] : runs) {
      const fs::path out = dir / (name + ".out");
      const fs::path again = dir / (name + ".replay");
      const std::string first = std::string(HDMAX_TOOL_PATH) + " " + args + " --out " +
                                out.string() + " 2>/dev/null";
      const std::string second = std::string(HDMAX_TOOL_PATH) + " replay " + out.string() +
                                 ".manifest.json --out " + again.string() + " 2>/dev/null";
      const int rc1 = std::system(first.c_str());
      const int rc2 = std::system(second.c_str());
      const std::string a = slurp(out), b = slurp(again);
      const bool same = rc1 == rc2 && !a.empty() && a == b;
      ok = ok && same;
      if (!same)
        detail += name + " differs; ";
    }
    return Outcome{ok, ok ? std::to_string(runs.size()) + " commands identical" : detail};
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
