#pragma once

// Command surface of the hdmax tool. `run` is the whole program minus the
// process boundary, so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hdmax/manifest.hpp"
#include "hdmax/numerics.hpp"

namespace hdmax::cli {

enum ExitCode : int {
  kOk = 0,
  kInvariantViolation = 1,
  kUsageError = 2,
  kNonConvergence = 3,
};

/// Every tolerance used by the commands. Echoed into each manifest.
struct ToleranceSet {
  double quadrature_abs_tol = 1e-13;
  double quadrature_rel_tol = 1e-11;
  int quadrature_panel_count = 8;
  int quadrature_nodes_per_panel = 16;
  double violation_rel_tol = 1e-9;
  double mc_sigma = 3.0;
  double ratio_floor_tol = 1e-9;
  double radial_bound_tol = 1e-6;
  double spd_unit_tol = 5e-4;

  QuadratureSpec quadrature() const;
  std::map<std::string, double> as_map() const;
};

const ToleranceSet &tolerances();

/// Seed used when --seed is absent: HDMAX_SEED if set, else a fixed value.
std::uint64_t default_seed();

using Params = std::map<std::string, std::string>;
using Cell = std::variant<std::monostate, std::string, double, long long, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct CommandResult {
  Table table;
  std::vector<std::string> violations; // empty when every invariant holds
};

/// Runs a command from its canonical parameters. Throws DomainError or
/// ParameterError on bad input and ConvergenceError on numerical failure.
CommandResult dispatch(const std::string &command, const Params &params,
                       std::uint64_t seed);

/// CSV with 17 significant digits, or a JSON array of row objects.
std::string render(const Table &table, std::string_view format);

/// Parses "a:step:b" (inclusive) or a comma-separated list.
std::vector<double> parse_r_spec(const std::string &spec);
std::vector<double> parse_double_list(const std::string &text);
std::vector<int> parse_int_list(const std::string &text);

/// Entry point; `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace hdmax::cli
