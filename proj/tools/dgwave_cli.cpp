// dgwave: single solves and convergence studies for the DG-in-time wave solvers.
//
//   dgwave run   --problem wave1d --q 3 --r 2 --k 0.125
//   dgwave study --problem wave1d --q-list 2,3,4,5 --r-rule qm1
//                --levels 0.5,0.25,0.125,0.0625,0.03125 --golden data/golden/table1.csv
//
// Exit codes: 0 success / all golden rows pass, 1 a golden comparison failed,
// 2 configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dgwave/dgwave.hpp"

namespace {

void print_report(const dgwave::ConvergenceReport& rep)
{
  std::printf("%-9s %2s %2s %11s %13s %8s %13s %8s\n", "problem", "q", "r", "k", "energy_error", "rate",
              "l2_error", "rate");
  for (const auto& row : rep.rows) {
    const auto rate = [](const std::optional<double>& r) {
      if (!r) return std::string("---");
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.4f", *r);
      return std::string(buf);
    };
    std::printf("%-9s %2d %2d %11.4e %13.4e %8s %13.4e %8s%s\n", row.problem.c_str(), row.q, row.r, row.k,
                row.energy_error, rate(row.energy_rate).c_str(), row.l2_error, rate(row.l2_rate).c_str(),
                row.failure.empty() ? "" : ("  FAILED: " + row.failure).c_str());
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"hp DG-in-time solvers for damped wave and elastodynamics problems"};
  app.require_subcommand(1);

  dgwave::RunConfig run_cfg;
  bool dump = false;
  bool ritz = false;
  std::string run_out;
  auto* run = app.add_subcommand("run", "single solve with error report");
  run->add_option("--problem", run_cfg.problem, "wave1d | elasto2d")->default_val("wave1d");
  run->add_option("--q", run_cfg.q, "temporal degree (>= 2)")->default_val(2);
  run->add_option("--r", run_cfg.r, "spatial element degree")->default_val(1);
  run->add_option("--k", run_cfg.k, "slab length")->default_val(0.5);
  run->add_option("--mesh-width", run_cfg.h, "mesh width h (defaults to k)");
  run->add_option("--T", run_cfg.T, "final time")->default_val(1.0);
  run->add_option("--gamma", run_cfg.gamma, "damping parameter (default: problem value)");
  run->add_flag("--ritz-initial-data", ritz, "Ritz-project the initial data instead of interpolating");
  std::string run_ref;
  run->add_option("--energy-reference", run_ref, "interp | ritz (default: problem value)");
  run->add_flag("--dump-matrices", dump, "write M, K and per-slab A, b as MatrixMarket files");
  run->add_option("--out", run_out, "CSV output file");

  dgwave::StudyConfig study_cfg;
  std::string r_rule = "qm1";
  std::string golden_path;
  std::string study_out;
  double tol_error = 0.05;
  double tol_rate = 0.1;
  bool study_ritz = false;
  auto* study = app.add_subcommand("study", "convergence sweep over (q, k) with h = k");
  study->add_option("--problem", study_cfg.problem, "wave1d | elasto2d")->default_val("wave1d");
  study->add_option("--q-list", study_cfg.q_list, "temporal degrees")->delimiter(',')->required();
  study->add_option("--r-rule", r_rule, "qm1 | q | fixed:N")->default_val("qm1");
  study->add_option("--levels", study_cfg.levels, "k values, strictly decreasing")->delimiter(',')->required();
  study->add_option("--T", study_cfg.T, "final time")->default_val(1.0);
  study->add_option("--gamma", study_cfg.gamma, "damping parameter (default: problem value)");
  study->add_flag("--ritz-initial-data", study_ritz, "Ritz-project the initial data");
  std::string study_ref;
  study->add_option("--energy-reference", study_ref, "interp | ritz (default: problem value)");
  study->add_option("--golden", golden_path, "reference table CSV to compare against");
  study->add_option("--tol-error", tol_error, "relative error tolerance")->default_val(0.05);
  study->add_option("--tol-rate", tol_rate, "absolute rate tolerance")->default_val(0.1);
  study->add_option("--out", study_out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      if (dump) run_cfg.dump_prefix = std::string("dgwave_");
      if (ritz) run_cfg.initial_data = dgwave::InitialData::ritz;
      if (!run_ref.empty()) run_cfg.energy_reference = dgwave::parse_energy_reference(run_ref);
      const auto res = dgwave::run_single(run_cfg);
      dgwave::ConvergenceReport rep;
      rep.rows.push_back(res.row);
      print_report(rep);
      const auto& e = res.energy;
      std::printf("energy breakdown (squared): vel0 %.4e  vel_jumps %.4e  velT %.4e  vel_bulk %.4e\n"
                  "                            disp0 %.4e  disp_jumps %.4e  dispT %.4e  total %.4e\n",
                  e.velocity_initial, e.velocity_jumps, e.velocity_final, e.velocity_bulk, e.displacement_initial,
                  e.displacement_jumps, e.displacement_final, e.total);
      std::printf("endpoint: velocity %.4e  displacement %.4e (L2); velocity %.4e  displacement %.4e (mass-weighted)\n",
                  res.endpoint.velocity, res.endpoint.displacement, res.endpoint.velocity_discrete,
                  res.endpoint.displacement_discrete);
      std::printf("stability: |||u_DG||| = %.4e <= %.4e : %s\n", res.stability.solution_norm, res.stability.bound,
                  res.stability.satisfied() ? "yes" : "NO");
      std::printf("slab solves: max condition estimate %.3e, max relative residual %.3e\n", res.max_condition,
                  res.max_residual);
      if (!run_out.empty()) dgwave::write_file(run_out, dgwave::to_csv(rep));
      return 0;
    }

    study_cfg.r_rule = dgwave::DegreeRule::parse(r_rule);
    if (study_ritz) study_cfg.initial_data = dgwave::InitialData::ritz;
    if (!study_ref.empty()) study_cfg.energy_reference = dgwave::parse_energy_reference(study_ref);
    std::optional<dgwave::GoldenTable> golden;
    if (!golden_path.empty()) golden = dgwave::load_golden(golden_path);
    const auto result = dgwave::run_study(study_cfg);
    print_report(result.report);
    if (!study_out.empty()) dgwave::write_file(study_out, dgwave::to_csv(result.report));
    bool failed = false;
    for (const auto& row : result.report.rows) failed = failed || !row.failure.empty();
    if (golden) {
      std::vector<dgwave::GoldenComparison> cmp;
      try {
        cmp = dgwave::compare_golden(result.report, *golden, tol_error, tol_rate);
      } catch (const std::invalid_argument& e) {
        throw dgwave::ConfigError(e.what());
      }
      for (const auto& c : cmp) {
        std::printf("golden q=%d k=%.4e: energy %.2f%%, l2 %.2f%%", c.q, c.k, 100 * c.energy_rel_error,
                    100 * c.l2_rel_error);
        if (c.energy_rate_diff) std::printf(", rate diffs %.3f / %.3f", *c.energy_rate_diff, c.l2_rate_diff.value_or(0.0));
        std::printf("  %s\n", c.pass ? "PASS" : "FAIL");
        failed = failed || !c.pass;
      }
    }
    return failed ? 1 : 0;
  } catch (const dgwave::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
