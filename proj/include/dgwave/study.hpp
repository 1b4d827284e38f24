#pragma once

// Convergence-study driver: single runs, (q, k) sweeps with h = k, CSV
// serialisation and comparison against reference tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgwave/error_metrics.hpp"
#include "dgwave/problems.hpp"
#include "dgwave/slab_solver.hpp"
#include "dgwave/spatial_fem.hpp"

namespace dgwave {

/// Thrown for invalid user configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct DegreeRule
{
  enum class Kind { q_minus_1, q, fixed } kind = Kind::q_minus_1;
  int value = 1;

  int spatial_degree(int q) const
  {
    switch (kind) {
      case Kind::q_minus_1: return q - 1;
      case Kind::q: return q;
      default: return value;
    }
  }

  /// "qm1", "q" or "fixed:N"
  static DegreeRule parse(const std::string& s)
  {
    if (s == "qm1") return {Kind::q_minus_1, 0};
    if (s == "q") return {Kind::q, 0};
    if (s.rfind("fixed:", 0) == 0) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(s.substr(6), &used);
        if (used == s.size() - 6 && v >= 1) return {Kind::fixed, v};
      } catch (const std::exception&) {
      }
    }
    throw ConfigError("invalid spatial degree rule '" + s + "' (expected qm1, q or fixed:N)");
  }
};

/// Integer count n with n * step == length, or a configuration error.
inline int exact_division(double length, double step, const char* what)
{
  const double ratio = length / step;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw ConfigError(std::string(what) + ": step does not divide the interval evenly");
  return static_cast<int>(n);
}

struct RunConfig
{
  std::string problem = "wave1d";
  int q = 2;
  int r = 1;
  double k = 0.5;
  std::optional<double> h;  // defaults to k
  double T = 1.0;
  std::optional<double> gamma;  // defaults to the problem's value
  InitialData initial_data = InitialData::nodal;
  std::optional<EnergyReference> energy_reference;  // defaults to the problem's choice
  std::optional<std::string> dump_prefix;
};

inline EnergyReference parse_energy_reference(const std::string& s)
{
  if (s == "interp") return EnergyReference::interpolant;
  if (s == "ritz") return EnergyReference::ritz;
  throw ConfigError("energy reference '" + s + "' (expected interp or ritz)");
}

struct RunResult
{
  ConvergenceRow row;
  EnergyErrorBreakdown energy;
  EndpointErrors endpoint;
  StabilityCheck stability;
  double max_condition = 0.0;
  double max_residual = 0.0;
};

inline ProblemSpec configured_problem(const std::string& id, std::optional<double> gamma, double T)
{
  if (id == "wave1d") return make_wave1d(gamma.value_or(1.0), T);
  if (id == "elasto2d") {
    ElasticityParameters prm;
    if (gamma) prm.gamma = *gamma;
    return make_elasto2d(prm, T);
  }
  throw ConfigError("unknown problem '" + id + "' (expected wave1d or elasto2d)");
}

inline RunResult run_single(const RunConfig& cfg)
{
  if (cfg.q < 2) throw ConfigError("temporal degree q must be >= 2");
  if (cfg.r < 1) throw ConfigError("spatial degree r must be >= 1");
  if (!(cfg.k > 0.0) || !(cfg.T > 0.0)) throw ConfigError("k and T must be positive");
  const ProblemSpec problem = configured_problem(cfg.problem, cfg.gamma, cfg.T);
  const double h = cfg.h.value_or(cfg.k);
  const int cells = exact_division(1.0, h, "h");
  const int slabs = exact_division(cfg.T, cfg.k, "k");
  SemiDiscreteSystem system = [&] {
    try {
      return problem.build_system(cells, cfg.r);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const TimeMesh mesh = TimeMesh::uniform(cfg.T, slabs, cfg.q);
  AdvanceOptions opts;
  opts.initial_data = cfg.initial_data;
  opts.dump_prefix = cfg.dump_prefix;
  if (cfg.dump_prefix) {
    write_matrix_market(*cfg.dump_prefix + "mass.mtx", system.mass);
    write_matrix_market(*cfg.dump_prefix + "stiffness.mtx", system.stiffness);
  }
  const Trajectory traj = advance(problem, system, mesh, opts);

  RunResult res;
  EnergyNormOptions norm_opts;
  norm_opts.reference = cfg.energy_reference;
  res.energy = energy_error(traj, problem, system, mesh, norm_opts);
  res.endpoint = l2_endpoint_error(traj, problem, system, mesh);
  res.stability = stability_check(traj, problem, system, mesh);
  res.max_condition = traj.max_condition;
  res.max_residual = traj.max_residual;
  res.row.problem = cfg.problem;
  res.row.q = cfg.q;
  res.row.r = cfg.r;
  res.row.k = cfg.k;
  res.row.h = h;
  res.row.energy_error = res.energy.norm();
  res.row.l2_error = res.endpoint.velocity +
                     (problem.endpoint_error_includes_displacement ? res.endpoint.displacement : 0.0);
  return res;
}

struct StudyConfig
{
  std::string problem = "wave1d";
  std::vector<int> q_list{2};
  DegreeRule r_rule{};
  std::vector<double> levels;  // k values, strictly decreasing
  double T = 1.0;
  std::optional<double> gamma;
  InitialData initial_data = InitialData::nodal;
  std::optional<EnergyReference> energy_reference;

  void validate() const
  {
    if (levels.empty()) throw ConfigError("study: empty level list");
    if (q_list.empty()) throw ConfigError("study: empty q list");
    for (int q : q_list)
      if (q < 2) throw ConfigError("study: temporal degree q must be >= 2");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!(levels[i] > 0.0)) throw ConfigError("study: k values must be positive");
      if (i > 0 && !(levels[i] < levels[i - 1])) throw ConfigError("study: k values must be strictly decreasing");
    }
    if (!(T > 0.0)) throw ConfigError("study: T must be positive");
  }
};

struct StudyResult
{
  ConvergenceReport report;
  std::vector<RunResult> runs;  // same order as report.rows
};

/// Runs every (q, k) pair; a failing run is recorded in its row and the sweep continues.
inline StudyResult run_study(const StudyConfig& cfg)
{
  cfg.validate();
  StudyResult out;
  for (int q : cfg.q_list) {
    const int r = cfg.r_rule.spatial_degree(q);
    std::vector<ConvergenceRow> group;
    for (double k : cfg.levels) {
      RunConfig rc;
      rc.problem = cfg.problem;
      rc.q = q;
      rc.r = r;
      rc.k = k;
      rc.T = cfg.T;
      rc.gamma = cfg.gamma;
      rc.initial_data = cfg.initial_data;
      rc.energy_reference = cfg.energy_reference;
      RunResult run;
      try {
        run = run_single(rc);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        run.row = ConvergenceRow{cfg.problem, q, r, k, k, std::nan(""), {}, std::nan(""), {}, e.what()};
      }
      group.push_back(run.row);
      out.runs.push_back(std::move(run));
    }
    if (group.size() >= 2) {
      auto rep = rates(std::move(group));
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        out.report.rows.push_back(rep.rows[i]);
        out.report.expected.push_back(rep.expected[i]);
      }
    } else {
      out.report.rows.push_back(group.front());
      out.report.expected.push_back(expected_rates(q, r));
    }
  }
  for (std::size_t i = 0; i < out.runs.size(); ++i) out.runs[i].row = out.report.rows[i];
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* csv_header = "problem,q,r,k,h,energy_error,energy_rate,l2_error,l2_rate";

/// Six significant digits, scientific notation.
inline std::string format_sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

inline std::string to_csv(const ConvergenceReport& rep)
{
  std::ostringstream os;
  os << csv_header << '\n';
  for (const auto& row : rep.rows) {
    os << row.problem << ',' << row.q << ',' << row.r << ',' << format_sci(row.k) << ',' << format_sci(row.h) << ','
       << format_sci(row.energy_error) << ',' << (row.energy_rate ? format_sci(*row.energy_rate) : "") << ','
       << format_sci(row.l2_error) << ',' << (row.l2_rate ? format_sci(*row.l2_rate) : "") << '\n';
  }
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s)
{
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

inline std::optional<double> parse_optional(const std::string& s)
{
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace detail

inline ConvergenceReport parse_csv(const std::string& text)
{
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != csv_header) throw std::invalid_argument("parse_csv: unexpected header");
  ConvergenceReport rep;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 9) throw std::invalid_argument("parse_csv: expected 9 columns in '" + line + "'");
    ConvergenceRow row;
    row.problem = c[0];
    row.q = std::stoi(c[1]);
    row.r = std::stoi(c[2]);
    row.k = detail::parse_double(c[3]);
    row.h = detail::parse_double(c[4]);
    row.energy_error = detail::parse_double(c[5]);
    row.energy_rate = detail::parse_optional(c[6]);
    row.l2_error = detail::parse_double(c[7]);
    row.l2_rate = detail::parse_optional(c[8]);
    rep.expected.push_back(expected_rates(row.q, row.r));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline std::string read_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// Reference tables
// ---------------------------------------------------------------------------

struct GoldenRow
{
  int q = 0;
  double k = 0.0;
  double energy_error = 0.0;
  std::optional<double> energy_rate;
  double l2_error = 0.0;
  std::optional<double> l2_rate;
  /// Per-row override of the relative energy-error tolerance (rows known to be inconsistent).
  std::optional<double> energy_error_tolerance;
};

struct GoldenTable
{
  std::string name;
  std::vector<GoldenRow> rows;

  const GoldenRow* find(int q, double k) const
  {
    for (const auto& r : rows)
      if (r.q == q && std::abs(r.k - k) <= 1e-9 * k) return &r;
    return nullptr;
  }
};

/// Columns: q,k,energy_error,energy_rate,l2_error,l2_rate[,energy_error_tolerance];
/// lines starting with '#' are comments.
inline GoldenTable parse_golden(const std::string& text, std::string name = {})
{
  GoldenTable table{std::move(name), {}};
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("q,k,energy_error,energy_rate,l2_error,l2_rate", 0) != 0)
        throw ConfigError("golden table: unexpected header");
      continue;
    }
    const auto c = detail::split_csv_line(line);
    if (c.size() != 6 && c.size() != 7) throw ConfigError("golden table: malformed row '" + line + "'");
    GoldenRow row;
    row.q = std::stoi(c[0]);
    row.k = detail::parse_double(c[1]);
    row.energy_error = detail::parse_double(c[2]);
    row.energy_rate = detail::parse_optional(c[3]);
    row.l2_error = detail::parse_double(c[4]);
    row.l2_rate = detail::parse_optional(c[5]);
    if (c.size() == 7) row.energy_error_tolerance = detail::parse_optional(c[6]);
    table.rows.push_back(row);
  }
  return table;
}

inline GoldenTable load_golden(const std::string& path) { return parse_golden(read_file(path), path); }

struct GoldenComparison
{
  int q = 0;
  double k = 0.0;
  double energy_rel_error = 0.0;
  double l2_rel_error = 0.0;
  std::optional<double> energy_rate_diff;
  std::optional<double> l2_rate_diff;
  bool pass = false;
};

/// A row passes iff both errors are within tol_rel_error (relative) and both
/// rates within tol_rate (absolute); rates are skipped on the first level.
inline std::vector<GoldenComparison> compare_golden(const ConvergenceReport& report, const GoldenTable& golden,
                                                    double tol_rel_error, double tol_rate)
{
  std::vector<GoldenComparison> out;
  for (const auto& row : report.rows) {
    const GoldenRow* g = golden.find(row.q, row.k);
    if (!g)
      throw std::invalid_argument("compare_golden: no reference row for q=" + std::to_string(row.q) +
                                  ", k=" + format_sci(row.k));
    GoldenComparison c;
    c.q = row.q;
    c.k = row.k;
    c.energy_rel_error = std::abs(row.energy_error - g->energy_error) / g->energy_error;
    c.l2_rel_error = std::abs(row.l2_error - g->l2_error) / g->l2_error;
    const double etol = g->energy_error_tolerance.value_or(tol_rel_error);
    bool ok = c.energy_rel_error <= etol && c.l2_rel_error <= tol_rel_error;
    if (row.energy_rate && g->energy_rate) {
      c.energy_rate_diff = std::abs(*row.energy_rate - *g->energy_rate);
      ok = ok && *c.energy_rate_diff <= tol_rate;
    }
    if (row.l2_rate && g->l2_rate) {
      c.l2_rate_diff = std::abs(*row.l2_rate - *g->l2_rate);
      ok = ok && *c.l2_rate_diff <= tol_rate;
    }
    c.pass = ok && row.failure.empty();
    out.push_back(c);
  }
  return out;
}

}  // namespace dgwave
