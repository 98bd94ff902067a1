#include "hdmax/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hdmax/bounds.hpp"
#include "hdmax/montecarlo.hpp"
#include "hdmax/multipliers.hpp"
#include "hdmax/radial.hpp"

namespace hdmax::cli {

namespace {

constexpr std::uint64_t kFallbackSeed = 20240917;

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_text(const Cell &c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string &s) const { return s; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::ordered_json cell_json(const Cell &c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(const std::string &s) const { return s; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v))
        return nullptr;
      return v;
    }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

const std::string &param(const Params &p, const std::string &key) {
  const auto it = p.find(key);
  if (it == p.end())
    throw ParameterError("missing parameter --" + key);
  return it->second;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    out.push_back(trim(item));
  return out;
}

double to_double(const std::string &s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw ParameterError("not a number: '" + s + "'");
  }
  if (used != s.size())
    throw ParameterError("not a number: '" + s + "'");
  return v;
}

long long to_integer(const std::string &s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception &) {
    throw ParameterError("not an integer: '" + s + "'");
  }
  if (used != s.size())
    throw ParameterError("not an integer: '" + s + "'");
  return v;
}

std::vector<int> sorted_dims(const Params &p, int min_d) {
  auto dims = parse_int_list(param(p, "d"));
  for (int d : dims)
    if (d < min_d)
      throw DomainError("requires d >= " + std::to_string(min_d) + " (got " +
                        std::to_string(d) + ")");
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  return dims;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// ---------------------------------------------------------------- symbols

CommandResult cmd_symbols(const Params &p) {
  const auto spec = tolerances().quadrature();
  const auto dims = sorted_dims(p, 3);
  const auto rs = sorted_unique(parse_r_spec(param(p, "r")));
  for (double r : rs)
    if (!(r >= 0.0))
      throw DomainError("radii must be non-negative");
  std::set<std::string> which;
  for (const auto &w : split(param(p, "which"), ',')) {
    if (w == "differences") {
      which.insert({"mu_minus_g", "mu_minus_m", "g_minus_m"});
    } else if (w == "mu" || w == "m" || w == "g" || parse_symbol_pair(w)) {
      which.insert(w);
    } else {
      throw ParameterError("unknown symbol '" + w + "'");
    }
  }
  if (which.empty())
    throw ParameterError("--which selects no symbol");

  CommandResult res;
  res.table.header = {"d", "r", "symbol", "value", "error_estimate", "method"};
  for (int d : dims) {
    for (double r : rs) {
      for (const auto &name : which) {
        MultiplierPoint pt;
        if (name == "mu")
          pt = mu(r, d, spec);
        else if (name == "m")
          pt = ball_multiplier(r, d, spec);
        else if (name == "g")
          pt = gaussian_multiplier(r, d);
        else
          pt = difference(*parse_symbol_pair(name), r, d, spec);
        const bool is_symbol = name == "mu" || name == "m" || name == "g";
        if (is_symbol && std::abs(pt.value) > 1.0 + pt.error_estimate + 1e-15)
          res.violations.push_back("|" + name + "| > 1 at d=" + std::to_string(d) +
                                   " r=" + format_double(r));
        res.table.rows.push_back({static_cast<long long>(d), r, name, pt.value,
                                  pt.error_estimate,
                                  std::string(to_string(pt.method))});
      }
    }
  }
  return res;
}

// ----------------------------------------------------------------- bounds

std::vector<SymbolPair> parse_pairs(const std::string &text) {
  std::vector<SymbolPair> out;
  for (const auto &name : split(text, ',')) {
    const auto pair = parse_symbol_pair(name);
    if (!pair)
      throw ParameterError("unknown pair '" + name + "'");
    if (std::find(out.begin(), out.end(), *pair) == out.end())
      out.push_back(*pair);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CommandResult cmd_bounds(const Params &p) {
  const auto spec = tolerances().quadrature();
  const auto dims = sorted_dims(p, 3);
  if (dims.empty())
    throw ParameterError("--d is empty");
  const auto pairs = parse_pairs(param(p, "pairs"));
  const bool fit = param(p, "fit") == "true";

  CommandResult res;
  res.table.header = {"record",     "pair",          "d",
                      "inequality", "worst_ratio",   "argmax_r",
                      "fitted_constant", "declared_constant", "violated",
                      "evaluated",  "skipped",       "sup_norm",
                      "tail_bound", "k_constant",    "certificate",
                      "slope",      "intercept",     "residual"};
  auto report_row = [&](const BoundReport &r) {
    std::vector<Cell> row(res.table.header.size());
    row[0] = std::string("report");
    row[1] = r.pair ? std::string(to_string(*r.pair)) : std::string("mu");
    row[2] = static_cast<long long>(r.d);
    row[3] = std::string(to_string(r.inequality_id));
    row[4] = r.worst_ratio;
    row[5] = r.argmax_r;
    row[6] = r.fitted_constant;
    if (r.declared_constant > 0.0)
      row[7] = r.declared_constant;
    row[8] = r.violated_at_threshold;
    row[9] = static_cast<long long>(r.evaluated);
    row[10] = static_cast<long long>(r.skipped);
    res.table.rows.push_back(std::move(row));
  };

  std::map<std::pair<SymbolPair, int>, std::vector<BoundReport>> diff_reports;
  for (int d : dims) {
    const RGrid grid = default_grid(d);
    for (const auto &r : check_mu_estimates(d, grid, spec)) {
      report_row(r);
      if (r.violated_at_threshold)
        res.violations.push_back("|mu - 1| exceeds 2 pi^2 r / sqrt(d) at d=" +
                                 std::to_string(d) + " r=" + format_double(r.argmax_r));
    }
    for (auto pair : pairs) {
      auto reps = check_difference_estimates(pair, d, grid, spec);
      for (const auto &r : reps)
        report_row(r);
      diff_reports[{pair, d}] = std::move(reps);
    }
  }
  if (!fit)
    return res;

  std::vector<int> fit_dims;
  for (int d : dims)
    if (d >= 10)
      fit_dims.push_back(d);
  if (fit_dims.size() < 4)
    throw ParameterError("--fit needs at least four dimensions >= 10");
  for (auto pair : pairs) {
    std::vector<double> sups;
    for (int d : fit_dims) {
      const auto sup = sup_norm_difference(pair, d, default_grid(d), spec);
      sups.push_back(sup.value);
      const auto cert = dyadic_maximal_certificate(d, diff_reports[{pair, d}], sup.value);
      std::vector<Cell> row(res.table.header.size());
      row[0] = std::string("sup_norm");
      row[1] = std::string(to_string(pair));
      row[2] = static_cast<long long>(d);
      row[5] = sup.argmax_r;
      row[11] = sup.value;
      row[12] = sup.tail_bound;
      row[13] = cert.k_constant;
      row[14] = cert.certificate;
      res.table.rows.push_back(std::move(row));
    }
    const auto f = fit_decay_exponent(fit_dims, sups);
    std::vector<Cell> row(res.table.header.size());
    row[0] = std::string("decay_fit");
    row[1] = std::string(to_string(pair));
    row[15] = f.slope;
    row[16] = f.intercept;
    row[17] = f.residual;
    res.table.rows.push_back(std::move(row));
  }
  return res;
}

// --------------------------------------------------------------------- mc

int workers_of(const Params &p) {
  const long long w = to_integer(param(p, "workers"));
  if (w < 1 || w > 256)
    throw ParameterError("--workers must lie in [1, 256]");
  return static_cast<int>(w);
}

long sample_count(const Params &p) {
  const long long n = to_integer(param(p, "n"));
  if (n < 1)
    throw ParameterError("--n must be positive");
  return static_cast<long>(n);
}

CommandResult cmd_mc_symbol(const Params &p, std::uint64_t seed, bool sphere) {
  const auto dims = parse_int_list(param(p, "d"));
  if (dims.size() != 1)
    throw ParameterError("--d takes a single dimension");
  const int d = dims.front();
  const auto rs = sorted_unique(parse_r_spec(param(p, "r")));
  const long n = sample_count(p);
  const int workers = workers_of(p);
  const auto est = sphere ? mc_sphere_symbol(rs, d, n, seed, workers)
                          : mc_gaussian_symbol(rs, d, n, seed, workers);
  CommandResult res;
  res.table.header = {"d", "r", "part", "mean", "std_error", "n", "seed"};
  for (const auto &e : est) {
    for (const auto &[part, m] : {std::pair{"real", e.real}, std::pair{"imag", e.imaginary}}) {
      res.table.rows.push_back({static_cast<long long>(d), e.r, std::string(part),
                                m.mean, m.std_error,
                                static_cast<long long>(m.n_samples),
                                std::to_string(m.seed)});
    }
  }
  return res;
}

CommandResult cmd_mc_chisq(const Params &p, std::uint64_t seed) {
  const auto dims = parse_int_list(param(p, "d"));
  if (dims.size() != 1)
    throw ParameterError("--d takes a single dimension");
  const double alpha = to_double(param(p, "alpha"));
  const long n = sample_count(p);
  const auto rep = chi_square_concentration(dims.front(), alpha, n, seed, workers_of(p));
  CommandResult res;
  res.table.header = {"window", "d",   "alpha", "lower", "upper", "frequency",
                      "std_error", "n", "seed", "exact", "bound"};
  auto add = [&](const char *name, double upper, const MCEstimate &f, double exact) {
    res.table.rows.push_back({std::string(name), static_cast<long long>(rep.d),
                              rep.alpha, rep.lower, upper, f.mean, f.std_error,
                              static_cast<long long>(f.n_samples),
                              std::to_string(f.seed), exact, rep.bound});
  };
  add("stated", rep.upper, rep.frequency, rep.exact);
  add("symmetric", rep.symmetric_upper, rep.symmetric_frequency, rep.symmetric_exact);
  const double band =
      tolerances().mc_sigma *
      std::max(rep.frequency.std_error,
               std::sqrt(rep.exact * (1.0 - rep.exact) / static_cast<double>(n)));
  if (rep.frequency.mean < rep.bound - band)
    res.violations.push_back("concentration frequency below 1 - exp(-d^alpha)");
  return res;
}

// ----------------------------------------------------------------- radial

const std::vector<std::string> kRatioHeader = {
    "input", "p", "d", "ratio", "ratio_minus_one", "ratio_power",
    "bound", "bound_power", "bound_kind", "v", "respects_bound"};

void add_ratio_row(CommandResult &res, const RadialRatioReport &r) {
  const auto &tol = tolerances();
  const bool ok = r.respects_bound(tol.radial_bound_tol);
  Cell v;
  if (r.v)
    v = *r.v;
  res.table.rows.push_back({std::string(to_string(r.input_id)), r.p,
                            static_cast<long long>(r.d), r.ratio, r.ratio_minus_one,
                            r.ratio_power, r.bound, r.bound_power,
                            std::string(to_string(r.bound_kind)), v, ok});
  const std::string where = " at p=" + format_double(r.p) + " d=" + std::to_string(r.d);
  if (r.ratio_minus_one < -tol.ratio_floor_tol)
    res.violations.push_back("ratio below 1" + where);
  if (!ok)
    res.violations.push_back("ratio on the wrong side of its bound" + where);
}

CommandResult cmd_radial(const std::string &which, const Params &p) {
  const auto spec = tolerances().quadrature();
  const auto &tol = tolerances();
  CommandResult res;
  if (which == "gauss1d") {
    res.table.header = kRatioHeader;
    for (double pv : sorted_unique(parse_double_list(param(p, "p"))))
      add_ratio_row(res, gauss_max_gaussian_ratio_1d(PNormParameter(pv)));
  } else if (which == "gaussdd" || which == "indicator") {
    res.table.header = kRatioHeader;
    const auto ps = sorted_unique(parse_double_list(param(p, "p")));
    const auto dims = sorted_dims(p, which == "gaussdd" ? 1 : 3);
    for (double pv : ps)
      for (int d : dims)
        add_ratio_row(res, which == "gaussdd"
                               ? gauss_max_gaussian_ratio_d(PNormParameter(pv), d)
                               : spherical_indicator_ratio(PNormParameter(pv), d, spec));
  } else if (which == "homog") {
    res.table.header = {"p", "sup", "argmax_t", "bound", "value_at_quarter",
                        "slope_sign_changes"};
    const auto grid = default_t_grid();
    for (double pv : sorted_unique(parse_double_list(param(p, "p")))) {
      const auto r = homogeneous_lower_bound_1d(PNormParameter(pv), grid, spec);
      res.table.rows.push_back({r.p, r.sup, r.argmax_t, r.bound, r.value_at_quarter,
                                static_cast<long long>(r.slope_sign_changes)});
      const std::string where = " at p=" + format_double(pv);
      if (r.sup < r.bound - tol.radial_bound_tol)
        res.violations.push_back("homogeneous sup below its lower bound" + where);
      if (r.sup < r.value_at_quarter)
        res.violations.push_back("sup below a grid member" + where);
      if (r.slope_sign_changes > 1)
        res.violations.push_back("t-profile not unimodal" + where);
    }
  } else if (which == "spd") {
    res.table.header = {"p", "d", "s_pd", "argmax_r", "d_sharp",
                        "superharmonic_regime", "slope_sign_changes"};
    const auto ps = sorted_unique(parse_double_list(param(p, "p")));
    const auto dims = sorted_dims(p, 3);
    const auto grid = default_spd_grid();
    for (double pv : ps) {
      for (int d : dims) {
        const auto r = spd_eigenvalue(PNormParameter(pv), d, grid, spec);
        const bool regime = pv * (d - 2) >= d;
        res.table.rows.push_back({pv, static_cast<long long>(d), r.value, r.argmax_r,
                                  static_cast<long long>(d_sharp(pv)), regime,
                                  static_cast<long long>(r.slope_sign_changes)});
        const std::string where = " at p=" + format_double(pv) + " d=" + std::to_string(d);
        if (r.value < 1.0 - tol.spd_unit_tol)
          res.violations.push_back("s_pd below 1" + where);
        if (regime && std::abs(r.value - 1.0) > tol.spd_unit_tol)
          res.violations.push_back("s_pd differs from 1 although p >= d/(d-2)" + where);
        if (r.slope_sign_changes > 1)
          res.violations.push_back("r-profile not unimodal" + where);
      }
    }
  } else if (which == "constants") {
    res.table.header = {"quantity", "argument", "value"};
    const auto c = compute_constants();
    res.table.rows.push_back({std::string("c_infimum"), c.p_at_infimum, c.c_infimum});
    res.table.rows.push_back({std::string("x1_root"), Cell{}, c.x1_root});
    res.table.rows.push_back({std::string("h_infimum"), c.h_argmin, c.h_infimum});
    for (const auto &[pv, cv] : c.c_sharp_values)
      res.table.rows.push_back({std::string("c_sharp"), pv, cv});
    if (!(c.c_infimum > 0.4 && c.c_infimum <= 1.0))
      res.violations.push_back("c_infimum outside (0.4, 1]");
    if (!(c.x1_root > 0.198 && c.x1_root < 0.2))
      res.violations.push_back("x1 outside (0.198, 0.2)");
    if (!(c.h_infimum > -0.415))
      res.violations.push_back("h infimum not above -0.415");
  } else {
    throw ParameterError("unknown radial command '" + which + "'");
  }
  return res;
}

// ------------------------------------------------------------ entry point

struct Leaf {
  std::string command;
  CLI::App *app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
};

void write_text(const std::string &text, const std::string &path, std::ostream &out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw ParameterError("cannot write " + path);
  f << text;
}

std::string default_manifest_path(const std::string &command, const std::string &out) {
  if (!out.empty())
    return out + ".manifest.json";
  std::string name = command;
  std::replace(name.begin(), name.end(), ' ', '-');
  return "hdmax-" + name + ".manifest.json";
}

int execute(const std::string &command, const Params &params, std::uint64_t seed,
            const std::string &out_path, const std::string &manifest_path,
            bool write_manifest_file, std::ostream &out, std::ostream &err) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const CommandResult res = dispatch(command, params, seed);
    const auto it = params.find("format");
    const std::string text = render(res.table, it == params.end() ? "csv" : it->second);
    write_text(text, out_path, out);
    if (write_manifest_file) {
      RunManifest m;
      m.command = command;
      m.parameters = params;
      m.seed = seed;
      m.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
      m.tolerance_set = tolerances().as_map();
      write_manifest(m, manifest_path.empty() ? default_manifest_path(command, out_path)
                                              : manifest_path);
    }
    for (const auto &v : res.violations)
      err << "invariant violated: " << v << "\n";
    return res.violations.empty() ? kOk : kInvariantViolation;
  } catch (const ConvergenceError &e) {
    err << "error: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
    return kNonConvergence;
  } catch (const DomainError &e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParameterError &e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::runtime_error &e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

} // namespace

QuadratureSpec ToleranceSet::quadrature() const {
  QuadratureSpec s;
  s.abs_tol = quadrature_abs_tol;
  s.rel_tol = quadrature_rel_tol;
  s.panel_count = quadrature_panel_count;
  s.nodes_per_panel = quadrature_nodes_per_panel;
  return s;
}

std::map<std::string, double> ToleranceSet::as_map() const {
  return {{"quadrature_abs_tol", quadrature_abs_tol},
          {"quadrature_rel_tol", quadrature_rel_tol},
          {"quadrature_panel_count", static_cast<double>(quadrature_panel_count)},
          {"quadrature_nodes_per_panel", static_cast<double>(quadrature_nodes_per_panel)},
          {"violation_rel_tol", violation_rel_tol},
          {"mc_sigma", mc_sigma},
          {"ratio_floor_tol", ratio_floor_tol},
          {"radial_bound_tol", radial_bound_tol},
          {"spd_unit_tol", spd_unit_tol}};
}

const ToleranceSet &tolerances() {
  static const ToleranceSet set;
  return set;
}

std::uint64_t default_seed() {
  if (const char *env = std::getenv("HDMAX_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size())
        return v;
    } catch (const std::exception &) {
    }
  }
  return kFallbackSeed;
}

std::vector<double> parse_double_list(const std::string &text) {
  std::vector<double> out;
  for (const auto &item : split(text, ','))
    if (!item.empty())
      out.push_back(to_double(item));
  if (out.empty())
    throw ParameterError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string &text) {
  std::vector<int> out;
  for (const auto &item : split(text, ','))
    if (!item.empty())
      out.push_back(static_cast<int>(to_integer(item)));
  if (out.empty())
    throw ParameterError("empty list");
  return out;
}

std::vector<double> parse_r_spec(const std::string &spec) {
  if (spec.find(':') == std::string::npos)
    return parse_double_list(spec);
  const auto parts = split(spec, ':');
  if (parts.size() != 3)
    throw ParameterError("range must look like start:step:stop");
  const double a = to_double(parts[0]);
  const double step = to_double(parts[1]);
  const double b = to_double(parts[2]);
  if (!(step > 0.0) || !(b >= a))
    throw ParameterError("range needs step > 0 and stop >= start");
  const long count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 10000000)
    throw ParameterError("range has too many points");
  std::vector<double> out(count);
  for (long i = 0; i < count; ++i)
    out[i] = a + step * static_cast<double>(i);
  return out;
}

std::string render(const Table &table, std::string_view format) {
  if (format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < table.header.size(); ++i)
        obj[table.header[i]] = cell_json(row[i]);
      rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
  }
  if (format != "csv")
    throw ParameterError("unknown format '" + std::string(format) + "'");
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out += (i ? "," : "") + table.header[i];
  out += "\n";
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

CommandResult dispatch(const std::string &command, const Params &params,
                       std::uint64_t seed) {
  if (const auto it = params.find("format");
      it != params.end() && it->second != "csv" && it->second != "json")
    throw ParameterError("--format must be csv or json");
  if (command == "symbols")
    return cmd_symbols(params);
  if (command == "bounds")
    return cmd_bounds(params);
  if (command == "mc sphere")
    return cmd_mc_symbol(params, seed, true);
  if (command == "mc gauss")
    return cmd_mc_symbol(params, seed, false);
  if (command == "mc chisq")
    return cmd_mc_chisq(params, seed);
  if (command.rfind("radial ", 0) == 0)
    return cmd_radial(command.substr(7), params);
  throw ParameterError("unknown command '" + command + "'");
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Multiplier symbols and maximal-function checks in high dimension",
               "hdmax"};
  app.require_subcommand(1);
  std::string out_path;
  std::string manifest_path;
  std::uint64_t seed = default_seed();
  std::vector<Leaf> leaves;
  leaves.reserve(16);

  auto add_leaf = [&](CLI::App *parent, const std::string &name,
                      const std::string &command, const std::string &description,
                      std::vector<std::tuple<std::string, std::string, std::string>> opts,
                      std::vector<std::string> flags, bool seeded) {
    leaves.push_back({command, parent->add_subcommand(name, description), {}, {}});
    Leaf &leaf = leaves.back();
    leaf.values["format"] = "csv";
    leaf.app->add_option("--format", leaf.values["format"], "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    for (const auto &[key, def, help] : opts) {
      leaf.values[key] = def;
      auto *o = leaf.app->add_option("--" + key, leaf.values[key], help);
      if (def.empty())
        o->required();
      else
        o->capture_default_str();
    }
    for (const auto &f : flags) {
      leaf.flags[f] = false;
      leaf.app->add_flag("--" + f, leaf.flags[f]);
    }
    leaf.app->add_option("--out", out_path, "write the table here instead of stdout");
    leaf.app->add_option("--manifest", manifest_path, "manifest path");
    if (seeded)
      leaf.app->add_option("--seed", seed, "RNG seed (default: HDMAX_SEED)");
  };

  add_leaf(&app, "symbols", "symbols", "Evaluate mu, m, g and their differences",
           {{"d", "", "dimensions, comma separated"},
            {"r", "", "radii: start:step:stop or a list"},
            {"which", "mu,m,g", "subset of mu,m,g,differences"}},
           {}, false);
  add_leaf(&app, "bounds", "bounds", "Sweep the pointwise estimates",
           {{"d", "3,10,30,100,300,1000", "dimensions"},
            {"pairs", "mu_minus_g,mu_minus_m,g_minus_m", "difference symbols"}},
           {"fit"}, false);
  CLI::App *mc = app.add_subcommand("mc", "Monte Carlo checks");
  mc->require_subcommand(1);
  add_leaf(mc, "sphere", "mc sphere", "E cos(2 pi r X_1/|X|)",
           {{"d", "", "dimension"}, {"r", "", "radii"}, {"n", "100000", "samples"},
            {"workers", "1", "threads"}},
           {}, true);
  add_leaf(mc, "gauss", "mc gauss", "E cos(2 pi r X_1/sqrt d)",
           {{"d", "", "dimension"}, {"r", "", "radii"}, {"n", "100000", "samples"},
            {"workers", "1", "threads"}},
           {}, true);
  add_leaf(mc, "chisq", "mc chisq", "Concentration window of |X|^2",
           {{"d", "", "dimension"}, {"alpha", "", "exponent in (0, 1/2)"},
            {"n", "100000", "samples"}, {"workers", "1", "threads"}},
           {}, true);
  CLI::App *radial = app.add_subcommand("radial", "Radial test inputs and constants");
  radial->require_subcommand(1);
  add_leaf(radial, "gauss1d", "radial gauss1d", "1D Gaussian input ratio",
           {{"p", "1.2,1.5,2,4", "exponents"}}, {}, false);
  add_leaf(radial, "gaussdd", "radial gaussdd", "d-dimensional Gaussian input ratio",
           {{"p", "2", "exponents"}, {"d", "1,5,20,100,500", "dimensions"}}, {}, false);
  add_leaf(radial, "indicator", "radial indicator", "Unit-ball indicator ratio",
           {{"p", "2", "exponents"}, {"d", "3,10,50,200", "dimensions"}}, {}, false);
  add_leaf(radial, "spd", "radial spd", "Eigenvalue s_{p,d} on |x|^{-d/p}",
           {{"p", "4", "exponents"}, {"d", "4", "dimensions"}}, {}, false);
  add_leaf(radial, "constants", "radial constants", "c_sharp, h, x_1", {}, {}, false);
  add_leaf(radial, "homog", "radial homog", "Homogeneous input lower bound",
           {{"p", "1.2,1.5,2,4", "exponents"}}, {}, false);

  std::string replay_path;
  CLI::App *replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay->add_option("manifest", replay_path, "manifest file")->required();
  replay->add_option("--out", out_path, "write the table here instead of stdout");

  std::vector<std::string> argv_store{"hdmax"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const auto &a : argv_store)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError &e) {
    std::ostringstream o;
    std::ostringstream eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kOk : kUsageError;
  }

  if (replay->parsed()) {
    RunManifest m;
    try {
      m = read_manifest(replay_path);
    } catch (const std::runtime_error &e) {
      err << "error: " << e.what() << "\n";
      return kUsageError;
    }
    if (m.tool_version != kToolVersion)
      err << "warning: manifest written by tool version " << m.tool_version << "\n";
    return execute(m.command, m.parameters, m.seed, out_path, manifest_path, false,
                   out, err);
  }

  for (auto &leaf : leaves) {
    if (!leaf.app->parsed())
      continue;
    Params params = leaf.values;
    for (const auto &[k, v] : leaf.flags)
      params[k] = v ? "true" : "false";
    return execute(leaf.command, params, seed, out_path, manifest_path, true, out, err);
  }
  err << "error: no command given\n";
  return kUsageError;
}

} // namespace hdmax::cli
