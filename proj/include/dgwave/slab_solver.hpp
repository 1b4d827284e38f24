#pragma once

// Slab-wise implicit solver for  M u'' + 2 gamma M u' + W u = F,  W = gamma^2 M + K,
// discontinuous in time with degree-q polynomials on each slab.
//
// Unknowns on a slab are the coefficients alpha_m^j of U(t) = sum_j alpha^j phi^j(t),
// stored DOF-major: z[m*(q+1) + j-1]. With the temporal matrices
//   M1_lj = (phi''^j, phi'^l)   M2_lj = (phi'^j, phi'^l)   M3_lj = (phi^j, phi'^l)
//   M4_lj = phi'^j(t+) phi'^l(t+)   M5_lj = phi^j(t+) phi^l(t+)
// the slab operator is
//   A = M (x) (M1 + M4) + 2 gamma M (x) M2 + W (x) (M3 + M5).
// We work with U directly; the symmetric M^{1/2} change of variable yields the
// same discrete solution.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgwave/legendre.hpp"
#include "dgwave/problems.hpp"
#include "dgwave/spatial_fem.hpp"

namespace dgwave {

class TimeMesh
{
public:
  TimeMesh(std::vector<double> nodes, std::vector<int> degrees)
      : nodes_(std::move(nodes)), degrees_(std::move(degrees))
  {
    if (nodes_.size() < 2) throw std::invalid_argument("TimeMesh: need at least one slab");
    if (degrees_.size() + 1 != nodes_.size())
      throw std::invalid_argument("TimeMesh: one degree per slab required");
    if (nodes_.front() != 0.0) throw std::invalid_argument("TimeMesh: must start at t=0");
    for (std::size_t n = 0; n < degrees_.size(); ++n) {
      if (!(nodes_[n + 1] > nodes_[n])) throw std::invalid_argument("TimeMesh: slab lengths must be positive");
      if (degrees_[n] < 2) throw std::invalid_argument("TimeMesh: temporal degree must be >= 2");
    }
  }

  static TimeMesh uniform(double T, int slabs, int q)
  {
    if (slabs < 1) throw std::invalid_argument("TimeMesh: need at least one slab");
    if (!(T > 0.0)) throw std::invalid_argument("TimeMesh: final time must be positive");
    std::vector<double> nodes(static_cast<std::size_t>(slabs) + 1);
    for (int n = 0; n <= slabs; ++n) nodes[static_cast<std::size_t>(n)] = T * n / slabs;
    return TimeMesh(std::move(nodes), std::vector<int>(static_cast<std::size_t>(slabs), q));
  }

  int slab_count() const noexcept { return static_cast<int>(degrees_.size()); }
  double start(int n) const { return nodes_.at(static_cast<std::size_t>(n)); }
  double end(int n) const { return nodes_.at(static_cast<std::size_t>(n) + 1); }
  double length(int n) const { return end(n) - start(n); }
  int degree(int n) const { return degrees_.at(static_cast<std::size_t>(n)); }
  double final_time() const noexcept { return nodes_.back(); }
  SlabBasis basis(int n) const { return SlabBasis(degree(n), start(n), length(n)); }

private:
  std::vector<double> nodes_;
  std::vector<int> degrees_;
};

struct TimeMatrices
{
  Eigen::MatrixXd m1, m2, m3, m4, m5;
};

inline TimeMatrices build_time_matrices(int q, double k)
{
  if (q < 2) throw std::invalid_argument("build_time_matrices: temporal degree must be >= 2");
  if (!(k > 0.0)) throw std::invalid_argument("build_time_matrices: slab length must be positive");
  const SlabBasis basis(q, 0.0, k);
  const int n = q + 1;
  TimeMatrices tm{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n),
                  Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  // integrands have degree <= 2q; q+2 points integrate up to 2q+3
  const auto rule = gauss_rule(q + 2);
  for (std::size_t p = 0; p < rule.size(); ++p) {
    const auto v = basis.eval_all_reference(rule.nodes[p]);
    const double w = 0.5 * k * rule.weights[p];
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j) {
        const auto ul = static_cast<std::size_t>(l);
        const auto uj = static_cast<std::size_t>(j);
        tm.m1(l, j) += w * v.d2[uj] * v.d1[ul];
        tm.m2(l, j) += w * v.d1[uj] * v.d1[ul];
        tm.m3(l, j) += w * v.value[uj] * v.d1[ul];
      }
  }
  const auto left = basis.eval_all_reference(-1.0);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      const auto ul = static_cast<std::size_t>(l);
      const auto uj = static_cast<std::size_t>(j);
      tm.m4(l, j) = left.d1[uj] * left.d1[ul];
      tm.m5(l, j) = left.value[uj] * left.value[ul];
    }
  return tm;
}

/// Displacement and velocity at t_{n-1}^- (for the first slab: the initial data).
struct TrajectoryState
{
  Eigen::VectorXd displacement;
  Eigen::VectorXd velocity;
};

struct SlabSystem
{
  int q = 2;
  double t_start = 0.0;
  double k = 1.0;
  TimeMatrices time;
  SparseMatrix A;
  Eigen::VectorXd b;
};

using LoadFunction = std::function<Eigen::VectorXd(double)>;

inline LoadFunction make_load_function(const SemiDiscreteSystem& system, const SpaceTimeField& f)
{
  return [&system, f](double t) { return assemble_load(system, f, t); };
}

/// A = M (x) (M1+M4) + 2 gamma M (x) M2 + W (x) (M3+M5).
inline SparseMatrix assemble_slab_operator(const SemiDiscreteSystem& system, const TimeMatrices& tm)
{
  const int d = system.dof_count();
  const auto nt = static_cast<int>(tm.m1.rows());
  const Eigen::MatrixXd mass_block = tm.m1 + tm.m4 + 2.0 * system.gamma * tm.m2;
  const Eigen::MatrixXd disp_block = tm.m3 + tm.m5;
  const SparseMatrix W = system.displacement_weight();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(system.mass.nonZeros() + W.nonZeros()) * static_cast<std::size_t>(nt * nt));
  const auto add = [&](const SparseMatrix& S, const Eigen::MatrixXd& block) {
    for (int col = 0; col < S.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(S, col); it; ++it)
        for (int j = 0; j < nt; ++j)
          for (int i = 0; i < nt; ++i)
            trips.emplace_back(static_cast<int>(it.row()) * nt + i, static_cast<int>(it.col()) * nt + j,
                               it.value() * block(i, j));
  };
  add(system.mass, mass_block);
  add(W, disp_block);
  SparseMatrix A(d * nt, d * nt);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

/// b_m^j = int F_m phi'^j + (M V-)_m phi'^j(t+) + (W U-)_m phi^j(t+),
/// forcing integrated with q+4 Gauss points.
inline Eigen::VectorXd assemble_slab_rhs(const SemiDiscreteSystem& system, int q, double t_start, double k,
                                         const TrajectoryState& state, const LoadFunction& forcing)
{
  const int d = system.dof_count();
  if (state.displacement.size() != d || state.velocity.size() != d)
    throw std::invalid_argument("assemble_slab_rhs: state dimension does not match the system");
  const SlabBasis basis(q, t_start, k);
  const int nt = q + 1;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nt, d);  // column m holds b_m^{1..q+1}
  if (forcing) {
    const auto rule = gauss_rule(q + 4);
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const auto v = basis.eval_all_reference(rule.nodes[p]);
      const Eigen::VectorXd F = forcing(basis.from_reference(rule.nodes[p]));
      if (F.size() != d) throw std::invalid_argument("assemble_slab_rhs: load has wrong dimension");
      const double w = 0.5 * k * rule.weights[p];
      for (int j = 0; j < nt; ++j) rhs.row(j) += (w * v.d1[static_cast<std::size_t>(j)]) * F.transpose();
    }
  }
  const auto left = basis.eval_all_reference(-1.0);
  const Eigen::VectorXd mv = system.mass * state.velocity;
  const Eigen::VectorXd wu = system.displacement_weight() * state.displacement;
  for (int j = 0; j < nt; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    rhs.row(j) += left.d1[uj] * mv.transpose() + left.value[uj] * wu.transpose();
  }
  return Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
}

inline SlabSystem assemble_slab(const SemiDiscreteSystem& system, int q, double t_start, double k,
                                const TrajectoryState& state, const LoadFunction& forcing)
{
  SlabSystem s;
  s.q = q;
  s.t_start = t_start;
  s.k = k;
  s.time = build_time_matrices(q, k);
  s.A = assemble_slab_operator(system, s.time);
  s.b = assemble_slab_rhs(system, q, t_start, k, state, forcing);
  return s;
}

/// Coefficients alpha_m^j of one slab; row m is a DOF, column j-1 a temporal mode.
struct SlabSolution
{
  int slab = 0;
  int q = 2;
  double t_start = 0.0;
  double k = 1.0;
  Eigen::MatrixXd coeffs;

  SlabBasis basis() const { return SlabBasis(q, t_start, k); }

  Eigen::VectorXd displacement(double t) const { return at_reference(basis().to_reference(t), 0); }
  Eigen::VectorXd velocity(double t) const { return at_reference(basis().to_reference(t), 1); }
  Eigen::VectorXd displacement_right() const { return at_reference(1.0, 0); }
  Eigen::VectorXd velocity_right() const { return at_reference(1.0, 1); }
  Eigen::VectorXd displacement_left() const { return at_reference(-1.0, 0); }
  Eigen::VectorXd velocity_left() const { return at_reference(-1.0, 1); }

  Eigen::VectorXd at_reference(double tau, int order) const
  {
    const auto v = basis().eval_all_reference(tau);
    const auto& w = order == 0 ? v.value : (order == 1 ? v.d1 : v.d2);
    return coeffs * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
};

/// Largest acceptable condition estimate of a slab operator.
inline constexpr double max_slab_condition = 1e14;
/// Relative backward residual required of every slab solve.
inline constexpr double max_slab_residual = 1e-10;

struct SolveDiagnostics
{
  double condition = 0.0;
  double residual = 0.0;
};

/// Sparse LU factorisation of a slab operator with a 1-norm condition estimate;
/// reusable across slabs sharing (q, k).
class SlabFactorization
{
public:
  explicit SlabFactorization(SparseMatrix A) : A_(std::move(A))
  {
    lu_.analyzePattern(A_);
    lu_.factorize(A_);
    if (lu_.info() != Eigen::Success) throw std::runtime_error("slab operator is singular: " + lu_.lastErrorMessage());
    condition_ = one_norm(A_) * inverse_one_norm();
    if (!std::isfinite(condition_) || condition_ > max_slab_condition)
      throw std::runtime_error("slab operator is singular or ill-conditioned (condition estimate " +
                               std::to_string(condition_) + ")");
  }

  double condition() const noexcept { return condition_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, double* residual_out = nullptr) const
  {
    if (b.size() != A_.rows()) throw std::invalid_argument("slab solve: right-hand side has wrong dimension");
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
      if (residual_out) *residual_out = 0.0;
      return Eigen::VectorXd::Zero(b.size());
    }
    Eigen::VectorXd z = lu_.solve(b);
    const double res = (A_ * z - b).norm() / bnorm;
    if (!(res <= max_slab_residual))
      throw std::runtime_error("slab solve: residual check failed (" + std::to_string(res) + ")");
    if (residual_out) *residual_out = res;
    return z;
  }

private:
  static double one_norm(const SparseMatrix& A)
  {
    double out = 0.0;
    for (int col = 0; col < A.outerSize(); ++col) {
      double sum = 0.0;
      for (SparseMatrix::InnerIterator it(A, col); it; ++it) sum += std::abs(it.value());
      out = std::max(out, sum);
    }
    return out;
  }

  // Hager's estimator with Higham's alternating-sign safeguard.
  double inverse_one_norm()
  {
    const Eigen::Index n = A_.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
      const Eigen::VectorXd y = lu_.solve(x);
      const double ny = y.lpNorm<1>();
      if (iter > 0 && ny <= est) break;
      est = ny;
      const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
      const Eigen::VectorXd z = lu_.transpose().solve(xi);
      Eigen::Index j = 0;
      const double zmax = z.cwiseAbs().maxCoeff(&j);
      if (zmax <= z.dot(x)) break;
      x.setZero();
      x(j) = 1.0;
    }
    Eigen::VectorXd alt(n);
    for (Eigen::Index i = 0; i < n; ++i)
      alt(i) = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / static_cast<double>(std::max<Eigen::Index>(n - 1, 1)));
    const double alt_est = 2.0 * lu_.solve(alt).lpNorm<1>() / (3.0 * static_cast<double>(n));
    return std::max(est, alt_est);
  }

  SparseMatrix A_;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  double condition_ = 0.0;
};

inline SlabSolution unpack_slab(const Eigen::VectorXd& z, int dofs, int q, double t_start, double k, int slab)
{
  SlabSolution sol{slab, q, t_start, k, Eigen::MatrixXd(dofs, q + 1)};
  // z is DOF-major; the column-major map reads it as (q+1) x dofs
  sol.coeffs = Eigen::Map<const Eigen::MatrixXd>(z.data(), q + 1, dofs).transpose();
  return sol;
}

inline SlabSolution solve_slab(const SlabSystem& slab, int slab_index = 0, SolveDiagnostics* diag = nullptr)
{
  const SlabFactorization lu(slab.A);
  double res = 0.0;
  const Eigen::VectorXd z = lu.solve(slab.b, &res);
  if (diag) *diag = {lu.condition(), res};
  const auto dofs = static_cast<int>(slab.A.rows() / (slab.q + 1));
  return unpack_slab(z, dofs, slab.q, slab.t_start, slab.k, slab_index);
}

enum class InitialData { nodal, ritz };

struct AdvanceOptions
{
  InitialData initial_data = InitialData::nodal;
  /// When set, A and b of every slab are written as MatrixMarket files with this prefix.
  std::optional<std::string> dump_prefix;
};

struct Trajectory
{
  TrajectoryState initial;
  std::vector<SlabSolution> slabs;
  double max_condition = 0.0;
  double max_residual = 0.0;
};

inline TrajectoryState initial_state(const ProblemSpec& problem, const SemiDiscreteSystem& system,
                                     InitialData kind)
{
  if (kind == InitialData::ritz)
    return {ritz_project(system, assemble_stiffness_load(system, problem.grad_u0)),
            ritz_project(system, assemble_stiffness_load(system, problem.grad_u1))};
  return {interpolate(system.space, problem.u0), interpolate(system.space, problem.u1)};
}

/// Sequential slab loop from given initial vectors; each slab starts from the
/// previous slab's values at t_n^-.
inline Trajectory advance(const SemiDiscreteSystem& system, const TimeMesh& mesh, TrajectoryState start,
                          const LoadFunction& forcing, const AdvanceOptions& opts = {})
{
  const int d = system.dof_count();
  if (start.displacement.size() != d || start.velocity.size() != d)
    throw std::invalid_argument("advance: initial data dimension does not match the system");
  Trajectory traj;
  traj.initial = start;
  TrajectoryState state = std::move(start);
  std::optional<SlabFactorization> lu;
  int cached_q = -1;
  double cached_k = -1.0;
  for (int n = 0; n < mesh.slab_count(); ++n) {
    const int q = mesh.degree(n);
    const double k = mesh.length(n);
    const double t0 = mesh.start(n);
    if (!lu || q != cached_q || std::abs(k - cached_k) > 1e-14 * k) {
      lu.emplace(assemble_slab_operator(system, build_time_matrices(q, k)));
      cached_q = q;
      cached_k = k;
      traj.max_condition = std::max(traj.max_condition, lu->condition());
    }
    const Eigen::VectorXd b = assemble_slab_rhs(system, q, t0, k, state, forcing);
    if (opts.dump_prefix) {
      const std::string stem = *opts.dump_prefix + "slab" + std::to_string(n);
      write_matrix_market(stem + "_A.mtx", assemble_slab_operator(system, build_time_matrices(q, k)));
      write_matrix_market(stem + "_b.mtx", b);
    }
    double res = 0.0;
    const Eigen::VectorXd z = lu->solve(b, &res);
    traj.max_residual = std::max(traj.max_residual, res);
    SlabSolution sol = unpack_slab(z, d, q, t0, k, n);
    state = {sol.displacement_right(), sol.velocity_right()};
    traj.slabs.push_back(std::move(sol));
  }
  return traj;
}

inline Trajectory advance(const ProblemSpec& problem, const SemiDiscreteSystem& system, const TimeMesh& mesh,
                          const AdvanceOptions& opts = {})
{
  return advance(system, mesh, initial_state(problem, system, opts.initial_data),
                 make_load_function(system, problem.forcing), opts);
}

/// Global DG bilinear form A(u, v) for two discrete trajectories on the same mesh:
/// slab operators plus the jump couplings -(M u'_n^-, v'_n^+) - (W u_n^-, v_n^+), n >= 1.
inline double dg_bilinear_form(const SemiDiscreteSystem& system, const TimeMesh& mesh,
                               const std::vector<SlabSolution>& u, const std::vector<SlabSolution>& v)
{
  if (u.size() != v.size() || static_cast<int>(u.size()) != mesh.slab_count())
    throw std::invalid_argument("dg_bilinear_form: trajectories do not match the mesh");
  const SparseMatrix W = system.displacement_weight();
  double acc = 0.0;
  for (int n = 0; n < mesh.slab_count(); ++n) {
    const auto un = static_cast<std::size_t>(n);
    const SparseMatrix A = assemble_slab_operator(system, build_time_matrices(mesh.degree(n), mesh.length(n)));
    const Eigen::MatrixXd ut = u[un].coeffs.transpose();
    const Eigen::MatrixXd vt = v[un].coeffs.transpose();
    const Eigen::Map<const Eigen::VectorXd> zu(ut.data(), ut.size());
    const Eigen::Map<const Eigen::VectorXd> zv(vt.data(), vt.size());
    acc += zv.dot(A * zu);
    if (n > 0) {
      const auto& prev = u[un - 1];
      acc -= (system.mass * prev.velocity_right()).dot(v[un].velocity_left());
      acc -= (W * prev.displacement_right()).dot(v[un].displacement_left());
    }
  }
  return acc;
}

}  // namespace dgwave
