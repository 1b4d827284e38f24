#include <gtest/gtest.h>

#include <boost/numeric/odeint.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dgwave/error_metrics.hpp"
#include "dgwave/problems.hpp"
#include "dgwave/slab_solver.hpp"

using namespace dgwave;
using std::numbers::pi;

namespace {

// one-DOF system with prescribed M = m, K = kappa
SemiDiscreteSystem scalar_system(double m, double kappa, double gamma)
{
  auto sys = assemble_1d(2, 1, gamma);
  sys.mass.coeffRef(0, 0) = m;
  sys.stiffness.coeffRef(0, 0) = kappa;
  return sys;
}

// z'' + 2 gamma z' + (gamma^2 + kappa) z = g(t) integrated by Dormand-Prince
template <class G>
std::array<double, 2> odeint_reference(double gamma, double kappa, G g, std::array<double, 2> x0, double T)
{
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  auto rhs = [&](const State& x, State& dx, double t) {
    dx[0] = x[1];
    dx[1] = g(t) - 2 * gamma * x[1] - (gamma * gamma + kappa) * x[0];
  };
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs, x0, 0.0, T,
                          1e-3);
  return x0;
}

}  // namespace

TEST(TimeMatrices, QuadraticUnitSlab)
{
  const auto tm = build_time_matrices(2, 1.0);
  Eigen::Matrix3d m2 = Eigen::Matrix3d::Zero();
  m2.diagonal() << 0, 4, 12;
  EXPECT_LT((tm.m2 - m2).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::Vector3d left(1, -1, 1);
  EXPECT_LT((tm.m5 - left * left.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  const Eigen::Vector3d dleft(0, 2, -6);
  EXPECT_LT((tm.m4 - dleft * dleft.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::Matrix3d m1 = Eigen::Matrix3d::Zero();
  m1(1, 2) = 24;
  EXPECT_LT((tm.m1 - m1).cwiseAbs().maxCoeff(), 1e-12);
  // m3(l, j) = int phi_j phi_l'
  Eigen::Matrix3d m3 = Eigen::Matrix3d::Zero();
  m3(1, 0) = 2;
  m3(2, 1) = 2;
  EXPECT_LT((tm.m3 - m3).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TimeMatrices, ScaleWithSlabLength)
{
  const double k = 0.37;
  for (int q = 2; q <= 6; ++q) {
    const auto a = build_time_matrices(q, 1.0);
    const auto b = build_time_matrices(q, k);
    EXPECT_LT((b.m1 - a.m1 / (k * k)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((b.m2 - a.m2 / k).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((b.m3 - a.m3).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((b.m4 - a.m4 / (k * k)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((b.m5 - a.m5).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(build_time_matrices(1, 1.0), std::invalid_argument);
  EXPECT_THROW(build_time_matrices(2, 0.0), std::invalid_argument);
}

TEST(SlabOperator, ScalarUndampedFreeParticle)
{
  const auto sys = scalar_system(1.0, 0.0, 0.0);
  const auto tm = build_time_matrices(2, 1.0);
  const Eigen::MatrixXd A(assemble_slab_operator(sys, tm));
  const Eigen::Vector3d dleft(0, 2, -6);
  Eigen::Matrix3d expected = dleft * dleft.transpose();
  expected(1, 2) += 24;
  EXPECT_LT((A - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SlabOperator, KroneckerLayout)
{
  const auto sys = assemble_1d(4, 2, 0.8);
  const int q = 3;
  const double k = 0.25;
  const auto tm = build_time_matrices(q, k);
  const Eigen::MatrixXd A(assemble_slab_operator(sys, tm));
  const Eigen::MatrixXd M(sys.mass);
  const Eigen::MatrixXd W(sys.displacement_weight());
  const int d = sys.dof_count();
  const int nt = q + 1;
  ASSERT_EQ(A.rows(), d * nt);
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < nt; ++l)
        for (int j = 0; j < nt; ++j) {
          const double ref = M(m, i) * (tm.m1(l, j) + tm.m4(l, j) + 2 * 0.8 * tm.m2(l, j)) +
                             W(m, i) * (tm.m3(l, j) + tm.m5(l, j));
          ASSERT_NEAR(A(m * nt + l, i * nt + j), ref, 1e-10);
        }
}

TEST(SlabSolve, ZeroDataZeroSolution)
{
  const auto p = make_wave1d();
  const auto sys = p.build_system(8, 2);
  const int d = sys.dof_count();
  const TrajectoryState zero{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
  const auto slab = assemble_slab(sys, 3, 0.0, 0.25, zero, nullptr);
  EXPECT_EQ(slab.b.cwiseAbs().maxCoeff(), 0.0);
  const auto sol = solve_slab(slab);
  EXPECT_EQ(sol.coeffs.cwiseAbs().maxCoeff(), 0.0);

  const auto traj = advance(sys, TimeMesh::uniform(1.0, 4, 3), zero, nullptr);
  for (const auto& s : traj.slabs) EXPECT_EQ(s.coeffs.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SlabSolve, ReproducesPolynomialsInTime)
{
  const auto sys = assemble_1d(4, 2, 0.6);
  const Eigen::MatrixXd M(sys.mass);
  const Eigen::MatrixXd W(sys.displacement_weight());
  const int d = sys.dof_count();
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(d, [&] { return dist(gen); });
  for (int q = 2; q <= 5; ++q) {
    // U(t) = sum_i a_i t^i of degree q
    std::vector<double> a(static_cast<std::size_t>(q) + 1);
    for (auto& x : a) x = dist(gen);
    const auto U = [&](double t, int order) {
      double s = 0.0;
      for (int i = order; i <= q; ++i) {
        double f = 1.0;
        for (int j = 0; j < order; ++j) f *= i - j;
        s += a[static_cast<std::size_t>(i)] * f * std::pow(t, i - order);
      }
      return s;
    };
    const LoadFunction forcing = [&](double t) {
      return Eigen::VectorXd(M * c * (U(t, 2) + 2 * 0.6 * U(t, 1)) + W * c * U(t, 0));
    };
    const auto mesh = TimeMesh::uniform(1.0, 3, q);
    const auto traj = advance(sys, mesh, {c * U(0, 0), c * U(0, 1)}, forcing);
    for (int n = 0; n < mesh.slab_count(); ++n) {
      const auto& s = traj.slabs[static_cast<std::size_t>(n)];
      for (double t : {mesh.start(n), 0.5 * (mesh.start(n) + mesh.end(n)), mesh.end(n)}) {
        EXPECT_LT((s.displacement(t) - c * U(t, 0)).cwiseAbs().maxCoeff(), 1e-9) << "q=" << q;
        EXPECT_LT((s.velocity(t) - c * U(t, 1)).cwiseAbs().maxCoeff(), 1e-9) << "q=" << q;
      }
    }
  }
}

TEST(SlabSolve, ScalarOdeAgainstRungeKutta)
{
  const double gamma = 1.0;
  const double kappa = 1.0;
  // forcing with no closed-form solution
  const auto g = [](double t) { return std::exp(-t) * std::cos(3 * t * t) + t; };
  const auto sys = scalar_system(1.0, kappa, gamma);
  const LoadFunction forcing = [&](double t) { return Eigen::VectorXd::Constant(1, g(t)); };
  const std::array<double, 2> x0{0.3, -0.5};
  const auto ref = odeint_reference(gamma, kappa, g, x0, 1.0);

  std::vector<double> err;
  for (int slabs : {4, 8, 16}) {
    const auto traj = advance(sys, TimeMesh::uniform(1.0, slabs, 5),
                              {Eigen::VectorXd::Constant(1, x0[0]), Eigen::VectorXd::Constant(1, x0[1])}, forcing);
    const auto& last = traj.slabs.back();
    err.push_back(std::hypot(last.displacement_right()(0) - ref[0], last.velocity_right()(0) - ref[1]));
  }
  EXPECT_LT(err[0], 1e-8);
  EXPECT_LT(err[2], err[0]);
}

TEST(SlabSolve, DampedOscillatorExactSolution)
{
  // z'' + 2 z' + 2 z = g with z = sin(sqrt(2) pi t)
  const double w = std::sqrt(2.0) * pi;
  const auto sys = scalar_system(1.0, 1.0, 1.0);
  const LoadFunction forcing = [&](double t) {
    return Eigen::VectorXd::Constant(1, (2 - w * w) * std::sin(w * t) + 2 * w * std::cos(w * t));
  };
  const auto traj = advance(sys, TimeMesh::uniform(1.0, 4, 5),
                            {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, w)}, forcing);
  for (const auto& s : traj.slabs) {
    const double t = s.t_start + s.k;
    EXPECT_NEAR(s.displacement_right()(0), std::sin(w * t), 1e-6);
    EXPECT_NEAR(s.velocity_right()(0), w * std::cos(w * t), 1e-5);
  }
}

TEST(SlabSolve, BilinearFormEqualsEnergyNorm)
{
  const auto sys = assemble_1d(3, 2, 0.7);
  const int d = sys.dof_count();
  const std::vector<double> nodes{0.0, 0.2, 0.55, 1.0};
  const TimeMesh mesh(nodes, {2, 4, 3});
  std::mt19937 gen(5);
  std::normal_distribution<double> dist;
  ASSERT_EQ(d, 5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SlabSolution> v;
    for (int n = 0; n < mesh.slab_count(); ++n) {
      SlabSolution s;
      s.slab = n;
      s.q = mesh.degree(n);
      s.t_start = mesh.start(n);
      s.k = mesh.length(n);
      s.coeffs = Eigen::MatrixXd::NullaryExpr(d, s.q + 1, [&] { return dist(gen); });
      v.push_back(s);
    }
    const double a = dg_bilinear_form(sys, mesh, v, v);
    const double e = energy_norm(v, sys, mesh).total;
    EXPECT_NEAR(a, e, 1e-10 * e);
  }
}

TEST(SlabSolve, JumpsShrinkUnderRefinement)
{
  const auto p = make_wave1d();
  double prev = INFINITY;
  for (int slabs : {4, 8, 16}) {
    const auto sys = p.build_system(slabs, 2);
    const auto mesh = TimeMesh::uniform(1.0, slabs, 3);
    const auto traj = advance(p, sys, mesh);
    double jump = 0.0;
    for (std::size_t n = 1; n < traj.slabs.size(); ++n) {
      const Eigen::VectorXd j = traj.slabs[n].velocity_left() - traj.slabs[n - 1].velocity_right();
      jump = std::max(jump, std::sqrt(j.dot(sys.mass * j)));
      const Eigen::VectorXd u = traj.slabs[n].displacement_left() - traj.slabs[n - 1].displacement_right();
      EXPECT_LT(u.cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_GT(jump, 0.0);
    EXPECT_LT(jump, prev);
    prev = jump;
  }
}

TEST(SlabFactorization, ConditionEstimateAndResidual)
{
  const auto sys = assemble_1d(4, 2, 1.0);
  const auto A = assemble_slab_operator(sys, build_time_matrices(3, 0.25));
  const SlabFactorization lu(A);
  const Eigen::MatrixXd D(A);
  const double exact = D.cwiseAbs().colwise().sum().maxCoeff() * D.inverse().cwiseAbs().colwise().sum().maxCoeff();
  EXPECT_LE(lu.condition(), exact * (1 + 1e-10));
  EXPECT_GE(lu.condition(), 0.1 * exact);

  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(A.rows(), -1.0, 2.0);
  double res = -1.0;
  const Eigen::VectorXd z = lu.solve(b, &res);
  EXPECT_LT((D * z - b).norm() / b.norm(), 1e-12);
  EXPECT_GE(res, 0.0);
  EXPECT_LT(res, max_slab_residual);
}

TEST(SlabFactorization, SingularOperatorThrows)
{
  SparseMatrix Z(4, 4);
  Z.insert(0, 0) = 1.0;
  EXPECT_ANY_THROW(SlabFactorization{Z});
}

TEST(TimeMesh, Validation)
{
  EXPECT_THROW(TimeMesh({0.0}, {}), std::invalid_argument);
  EXPECT_THROW(TimeMesh({0.0, 1.0}, {2, 2}), std::invalid_argument);
  EXPECT_THROW(TimeMesh({0.1, 1.0}, {2}), std::invalid_argument);
  EXPECT_THROW(TimeMesh({0.0, 0.5, 0.5}, {2, 2}), std::invalid_argument);
  EXPECT_THROW(TimeMesh({0.0, 1.0}, {1}), std::invalid_argument);
  EXPECT_THROW(TimeMesh::uniform(1.0, 0, 2), std::invalid_argument);
  EXPECT_THROW(TimeMesh::uniform(-1.0, 2, 2), std::invalid_argument);

  const auto m = TimeMesh::uniform(2.0, 8, 3);
  EXPECT_EQ(m.slab_count(), 8);
  EXPECT_DOUBLE_EQ(m.length(3), 0.25);
  EXPECT_DOUBLE_EQ(m.final_time(), 2.0);
  EXPECT_EQ(m.degree(7), 3);
  EXPECT_THROW(m.start(9), std::out_of_range);
}

TEST(Advance, RejectsMismatchedInitialData)
{
  const auto sys = assemble_1d(4, 1);
  EXPECT_THROW(advance(sys, TimeMesh::uniform(1.0, 2, 2), {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)},
                       nullptr),
               std::invalid_argument);
}
