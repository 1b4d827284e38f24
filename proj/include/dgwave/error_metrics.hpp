#pragma once

// Discrete energy norm of DG-in-time trajectories, endpoint L2 errors and
// empirical convergence rates.
//
// For a time-discontinuous trajectory v on slabs I_1..I_N,
//   |||v|||^2 = 1/2 |v'(0+)|_M^2 + 1/2 sum_{n=1}^{N-1} |[v']_n|_M^2 + 1/2 |v'(T-)|_M^2
//             + c sum_n int_{I_n} |v'|_M^2
//             + 1/2 |v(0+)|_W^2 + 1/2 sum_{n=1}^{N-1} |[v]_n|_W^2 + 1/2 |v(T-)|_W^2
// where c = 2 gamma is the damping coefficient and W = gamma^2 M + K. With these
// weights A(v,v) = |||v|||^2 holds exactly for the slab operator of slab_solver.hpp.

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgwave/legendre.hpp"
#include "dgwave/problems.hpp"
#include "dgwave/slab_solver.hpp"
#include "dgwave/spatial_fem.hpp"

namespace dgwave {

struct EnergyErrorBreakdown
{
  double velocity_initial = 0.0;
  double velocity_jumps = 0.0;
  double velocity_final = 0.0;
  double velocity_bulk = 0.0;
  double displacement_initial = 0.0;
  double displacement_jumps = 0.0;
  double displacement_final = 0.0;
  double total = 0.0;

  double norm() const { return std::sqrt(total); }
};

enum class DisplacementWeight {
  full,            // gamma^2 M + K
  stiffness_only,  // K
};

struct EnergyNormOptions
{
  DisplacementWeight weight = DisplacementWeight::full;
  /// Weight of the bulk velocity integral; defaults to the damping coefficient 2 gamma.
  std::optional<double> bulk_weight;
  /// Gauss points per slab for the bulk term are q + extra_points.
  int extra_points = 6;
  /// Overrides the problem's reference in energy_error(traj, problem, ...).
  std::optional<EnergyReference> reference;
};

/// Reference displacement/velocity DOF vectors as functions of time.
struct ReferenceTrajectory
{
  std::function<Eigen::VectorXd(double)> displacement;
  std::function<Eigen::VectorXd(double)> velocity;
};

/// Nodal interpolant of the exact solution of a manufactured problem.
inline ReferenceTrajectory interpolated_reference(const ProblemSpec& problem, const SemiDiscreteSystem& system)
{
  const FeSpace* space = &system.space;
  return {[space, f = problem.exact](double t) {
            return interpolate(*space, [&](const Point& x) { return f(x, t); });
          },
          [space, f = problem.exact_velocity](double t) {
            return interpolate(*space, [&](const Point& x) { return f(x, t); });
          }};
}

/// Ritz projection of the exact solution: K R(t) = a(u(t), .), and likewise for the velocity.
inline ReferenceTrajectory ritz_reference(const ProblemSpec& problem, const SemiDiscreteSystem& system)
{
  if (!problem.exact_gradient || !problem.exact_velocity_gradient)
    throw std::invalid_argument("ritz_reference: problem provides no exact gradients");
  auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>(system.stiffness);
  if (ldlt->info() != Eigen::Success) throw std::runtime_error("ritz_reference: stiffness is singular");
  const SemiDiscreteSystem* sys = &system;
  const auto project = [ldlt, sys](const SpaceTimeGradient& g) {
    return [ldlt, sys, g](double t) {
      return Eigen::VectorXd(ldlt->solve(assemble_stiffness_load(*sys, [&](const Point& x) { return g(x, t); })));
    };
  };
  return {project(problem.exact_gradient), project(problem.exact_velocity_gradient)};
}

inline ReferenceTrajectory zero_reference(int dofs)
{
  const auto z = [dofs](double) { return Eigen::VectorXd(Eigen::VectorXd::Zero(dofs)); };
  return {z, z};
}

/// |||reference - trajectory|||^2 term by term.
inline EnergyErrorBreakdown energy_error(const std::vector<SlabSolution>& slabs, const ReferenceTrajectory& ref,
                                         const SemiDiscreteSystem& system, const TimeMesh& mesh,
                                         const EnergyNormOptions& opts = {})
{
  if (static_cast<int>(slabs.size()) != mesh.slab_count())
    throw std::invalid_argument("energy_error: trajectory does not cover the time mesh");
  const SparseMatrix& M = system.mass;
  const SparseMatrix W =
      opts.weight == DisplacementWeight::full ? system.displacement_weight() : system.stiffness;
  const double bulk = opts.bulk_weight.value_or(2.0 * system.gamma);
  const auto msq = [&](const Eigen::VectorXd& e) { return e.dot(M * e); };
  const auto wsq = [&](const Eigen::VectorXd& e) { return e.dot(W * e); };

  EnergyErrorBreakdown out;
  Eigen::VectorXd prev_u_err;
  Eigen::VectorXd prev_v_err;
  for (int n = 0; n < mesh.slab_count(); ++n) {
    const auto& s = slabs[static_cast<std::size_t>(n)];
    const double t0 = mesh.start(n);
    const double t1 = mesh.end(n);
    const Eigen::VectorXd u_left = ref.displacement(t0) - s.displacement_left();
    const Eigen::VectorXd v_left = ref.velocity(t0) - s.velocity_left();
    if (n == 0) {
      out.velocity_initial = 0.5 * msq(v_left);
      out.displacement_initial = 0.5 * wsq(u_left);
    } else {
      out.velocity_jumps += 0.5 * msq(v_left - prev_v_err);
      out.displacement_jumps += 0.5 * wsq(u_left - prev_u_err);
    }
    const auto rule = gauss_rule(s.q + opts.extra_points);
    const SlabBasis basis = s.basis();
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double t = basis.from_reference(rule.nodes[p]);
      const Eigen::VectorXd e = ref.velocity(t) - s.at_reference(rule.nodes[p], 1);
      out.velocity_bulk += bulk * 0.5 * s.k * rule.weights[p] * msq(e);
    }
    prev_u_err = ref.displacement(t1) - s.displacement_right();
    prev_v_err = ref.velocity(t1) - s.velocity_right();
  }
  out.velocity_final = 0.5 * msq(prev_v_err);
  out.displacement_final = 0.5 * wsq(prev_u_err);
  out.total = out.velocity_initial + out.velocity_jumps + out.velocity_final + out.velocity_bulk +
              out.displacement_initial + out.displacement_jumps + out.displacement_final;
  return out;
}

inline EnergyErrorBreakdown energy_error(const Trajectory& traj, const ProblemSpec& problem,
                                         const SemiDiscreteSystem& system, const TimeMesh& mesh,
                                         const EnergyNormOptions& opts = {})
{
  const EnergyReference kind = opts.reference.value_or(problem.energy_reference);
  const ReferenceTrajectory ref =
      kind == EnergyReference::ritz ? ritz_reference(problem, system) : interpolated_reference(problem, system);
  return energy_error(traj.slabs, ref, system, mesh, opts);
}

/// |||v|||^2 of a discrete trajectory itself.
inline EnergyErrorBreakdown energy_norm(const std::vector<SlabSolution>& slabs, const SemiDiscreteSystem& system,
                                        const TimeMesh& mesh, const EnergyNormOptions& opts = {})
{
  return energy_error(slabs, zero_reference(system.dof_count()), system, mesh, opts);
}

struct EndpointErrors
{
  double velocity = 0.0;               // ||u_t(T) - u_{DG,t}(T-)||_{L2(Omega)}
  double displacement = 0.0;           // ||u(T) - u_DG(T-)||_{L2(Omega)}
  double velocity_discrete = 0.0;      // mass-weighted, against the nodal interpolant
  double displacement_discrete = 0.0;
};

/// Errors at t_N^-. The continuous norms evaluate the finite element function
/// against the exact field by element quadrature.
inline EndpointErrors l2_endpoint_error(const Trajectory& traj, const ProblemSpec& problem,
                                        const SemiDiscreteSystem& system, const TimeMesh& mesh)
{
  if (traj.slabs.empty()) throw std::invalid_argument("l2_endpoint_error: empty trajectory");
  const double T = mesh.final_time();
  const auto& last = traj.slabs.back();
  const Eigen::VectorXd u = last.displacement_right();
  const Eigen::VectorXd v = last.velocity_right();
  const auto& space = system.space;
  EndpointErrors out;
  out.velocity = l2_error(space, v, [&](const Point& x) { return problem.exact_velocity(x, T); });
  out.displacement = l2_error(space, u, [&](const Point& x) { return problem.exact(x, T); });
  const auto ref = interpolated_reference(problem, system);
  const Eigen::VectorXd ev = ref.velocity(T) - v;
  const Eigen::VectorXd eu = ref.displacement(T) - u;
  out.velocity_discrete = std::sqrt(ev.dot(system.mass * ev));
  out.displacement_discrete = std::sqrt(eu.dot(system.mass * eu));
  return out;
}

/// Energy of the discrete solution against the a priori stability bound.
/// For damping coefficient c the bound reads
///   |||u_DG|||^2 <= max(1, 1/c) ||f||^2_{L2(0,T;L2)} + 2 |U_1|_M^2 + 2 |U_0|_W^2,
/// which for c >= 1 is the undamped-form estimate with unit coefficient on f.
struct StabilityCheck
{
  double solution_norm = 0.0;
  double bound = 0.0;

  bool satisfied() const { return solution_norm <= bound; }
};

inline StabilityCheck stability_check(const Trajectory& traj, const ProblemSpec& problem,
                                      const SemiDiscreteSystem& system, const TimeMesh& mesh)
{
  StabilityCheck out;
  out.solution_norm = energy_norm(traj.slabs, system, mesh).norm();
  double f_sq = 0.0;
  for (int n = 0; n < mesh.slab_count(); ++n) {
    const SlabBasis basis = mesh.basis(n);
    const auto rule = gauss_rule(mesh.degree(n) + 6);
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double t = basis.from_reference(rule.nodes[p]);
      f_sq += 0.5 * basis.length() * rule.weights[p] *
              l2_norm_squared(system.space, [&](const Point& x) { return problem.forcing(x, t); });
    }
  }
  const double c = 2.0 * system.gamma;
  const double coef = c >= 1.0 ? 1.0 : 1.0 / c;
  const Eigen::VectorXd& U0 = traj.initial.displacement;
  const Eigen::VectorXd& U1 = traj.initial.velocity;
  out.bound = std::sqrt(coef * f_sq + 2.0 * U1.dot(system.mass * U1) +
                        2.0 * U0.dot(system.displacement_weight() * U0));
  return out;
}

// ---------------------------------------------------------------------------
// Convergence tables
// ---------------------------------------------------------------------------

struct ConvergenceRow
{
  std::string problem;
  int q = 0;
  int r = 0;
  double k = 0.0;
  double h = 0.0;
  double energy_error = 0.0;
  std::optional<double> energy_rate;
  double l2_error = 0.0;
  std::optional<double> l2_rate;
  std::string failure;  // non-empty when the run did not complete
};

struct ExpectedRates
{
  double energy = 0.0;
  double l2 = 0.0;
};

struct ConvergenceReport
{
  std::vector<ConvergenceRow> rows;
  std::vector<ExpectedRates> expected;  // per row
};

/// Theoretical exponents: q - 1/2 in the energy norm; the endpoint L2 error is
/// limited by min(q, r+1), improving to q+1 when r >= q.
inline ExpectedRates expected_rates(int q, int r)
{
  const double l2 = r >= q ? q + 1.0 : std::min(static_cast<double>(q), r + 1.0);
  return {q - 0.5, l2};
}

inline double empirical_rate(double e_coarse, double e_fine, double k_coarse, double k_fine)
{
  return std::log(e_coarse / e_fine) / std::log(k_coarse / k_fine);
}

/// Successive log-ratio rates for rows of one (q, r) group ordered by decreasing k.
inline ConvergenceReport rates(std::vector<ConvergenceRow> rows)
{
  if (rows.size() < 2) throw std::invalid_argument("rates: need at least two levels");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].k < rows[i - 1].k)) throw std::invalid_argument("rates: k must be strictly decreasing");
  ConvergenceReport rep;
  rows[0].energy_rate.reset();
  rows[0].l2_rate.reset();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].energy_rate = empirical_rate(rows[i - 1].energy_error, rows[i].energy_error, rows[i - 1].k, rows[i].k);
    rows[i].l2_rate = empirical_rate(rows[i - 1].l2_error, rows[i].l2_error, rows[i - 1].k, rows[i].k);
  }
  for (const auto& row : rows) rep.expected.push_back(expected_rates(row.q, row.r));
  rep.rows = std::move(rows);
  return rep;
}

}  // namespace dgwave
