#pragma once

// Manufactured test problems with known exact solutions.
//
//   wave1d:    u_tt + 2g u_t + g^2 u - u_xx = f  on (0,1),
//              u = sin(sqrt2 pi t) sin(pi x)
//   elasto2d:  rho u_tt + 2 rho g u_t + rho g^2 u - div sigma(u) = f  on (0,1)^2,
//              u = sin(sqrt2 pi t) (-sin^2(pi x) sin(2 pi y), sin(2 pi x) sin^2(pi y))

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dgwave/spatial_fem.hpp"

namespace dgwave {

using SpaceTimeGradient = std::function<FieldGradient(const Point&, double)>;

/// Discrete stand-in for the exact solution inside the energy norm.
enum class EnergyReference {
  interpolant,  // nodal interpolant
  ritz,         // stiffness (Ritz) projection
};

struct ProblemSpec
{
  std::string id;
  int dimension = 1;
  int components = 1;
  double T = 1.0;
  double gamma = 1.0;
  /// Endpoint L2 error reports velocity + displacement instead of velocity only.
  bool endpoint_error_includes_displacement = false;
  EnergyReference energy_reference = EnergyReference::interpolant;
  /// (cells per direction, element degree) -> semi-discrete system
  std::function<SemiDiscreteSystem(int, int)> build_system;
  SpaceTimeField forcing;
  SpaceTimeField exact;
  SpaceTimeField exact_velocity;
  SpaceTimeGradient exact_gradient;
  SpaceTimeGradient exact_velocity_gradient;
  SpatialField u0;
  SpatialField u1;
  GradientField grad_u0;  // used by the Ritz-projected initial data
  GradientField grad_u1;
};

namespace detail {

inline FieldValue scalar(double v)
{
  FieldValue out(1);
  out(0) = v;
  return out;
}

inline FieldValue vec2(double a, double b)
{
  FieldValue out(2);
  out << a, b;
  return out;
}

}  // namespace detail

inline ProblemSpec make_wave1d(double gamma = 1.0, double T = 1.0)
{
  using std::numbers::pi;
  const double w = std::numbers::sqrt2 * pi;
  ProblemSpec p;
  p.id = "wave1d";
  p.dimension = 1;
  p.components = 1;
  p.T = T;
  p.gamma = gamma;
  p.build_system = [gamma](int n, int r) { return assemble_1d(n, r, gamma); };
  p.exact = [w](const Point& x, double t) {
    return detail::scalar(std::sin(w * t) * std::sin(pi * x.x()));
  };
  p.exact_velocity = [w](const Point& x, double t) {
    return detail::scalar(w * std::cos(w * t) * std::sin(pi * x.x()));
  };
  p.exact_gradient = [w](const Point& x, double t) {
    FieldGradient g(1, 1);
    g(0, 0) = std::sin(w * t) * pi * std::cos(pi * x.x());
    return g;
  };
  p.exact_velocity_gradient = [w](const Point& x, double t) {
    FieldGradient g(1, 1);
    g(0, 0) = w * std::cos(w * t) * pi * std::cos(pi * x.x());
    return g;
  };
  p.forcing = [w, gamma](const Point& x, double t) {
    const double amp = (-pi * pi + gamma * gamma) * std::sin(w * t) +
                       2.0 * std::numbers::sqrt2 * gamma * pi * std::cos(w * t);
    return detail::scalar(amp * std::sin(pi * x.x()));
  };
  p.u0 = [](const Point&) { return detail::scalar(0.0); };
  p.u1 = [w](const Point& x) { return detail::scalar(w * std::sin(pi * x.x())); };
  p.grad_u0 = [](const Point&) { return FieldGradient(FieldGradient::Zero(1, 1)); };
  p.grad_u1 = [w](const Point& x) {
    FieldGradient g(1, 1);
    g(0, 0) = w * pi * std::cos(pi * x.x());
    return g;
  };
  return p;
}

struct ElasticityParameters
{
  double lambda = 1.0;
  double mu = 1.0;
  double rho = 1.0;
  double gamma = 1.0;
};

inline ProblemSpec make_elasto2d(const ElasticityParameters& prm = {}, double T = 1.0)
{
  using std::numbers::pi;
  const double w = std::numbers::sqrt2 * pi;
  const auto shape = [](const Point& x) {
    const double sx = std::sin(pi * x.x());
    const double sy = std::sin(pi * x.y());
    return detail::vec2(-sx * sx * std::sin(2 * pi * x.y()), std::sin(2 * pi * x.x()) * sy * sy);
  };
  const auto shape_grad = [](const Point& x) {
    const double sx = std::sin(pi * x.x());
    const double sy = std::sin(pi * x.y());
    FieldGradient g(2, 2);
    g(0, 0) = -pi * std::sin(2 * pi * x.x()) * std::sin(2 * pi * x.y());
    g(0, 1) = -2 * pi * sx * sx * std::cos(2 * pi * x.y());
    g(1, 0) = 2 * pi * std::cos(2 * pi * x.x()) * sy * sy;
    g(1, 1) = pi * std::sin(2 * pi * x.x()) * std::sin(2 * pi * x.y());
    return g;
  };
  ProblemSpec p;
  p.id = "elasto2d";
  p.dimension = 2;
  p.components = 2;
  p.T = T;
  p.gamma = prm.gamma;
  p.endpoint_error_includes_displacement = true;
  p.energy_reference = EnergyReference::ritz;
  p.build_system = [prm](int n, int r) {
    return assemble_2d_elasticity(n, r, prm.lambda, prm.mu, prm.rho, prm.gamma);
  };
  p.exact = [w, shape](const Point& x, double t) { return FieldValue(std::sin(w * t) * shape(x)); };
  p.exact_velocity = [w, shape](const Point& x, double t) {
    return FieldValue(w * std::cos(w * t) * shape(x));
  };
  // The shape field is divergence free and -Laplace(shape) = 8 pi^2 shape + 2 pi^2 (sin 2pi y, -sin 2pi x),
  // so lambda drops out of the forcing.
  p.exact_gradient = [w, shape_grad](const Point& x, double t) {
    return FieldGradient(std::sin(w * t) * shape_grad(x));
  };
  p.exact_velocity_gradient = [w, shape_grad](const Point& x, double t) {
    return FieldGradient(w * std::cos(w * t) * shape_grad(x));
  };
  p.forcing = [w, shape, prm](const Point& x, double t) {
    const double s = std::sin(w * t);
    const double c = std::cos(w * t);
    const double amp = (8 * pi * pi * prm.mu - 2 * pi * pi * prm.rho + prm.rho * prm.gamma * prm.gamma) * s +
                       2 * prm.rho * prm.gamma * w * c;
    FieldValue f = amp * shape(x);
    f(0) += 2 * pi * pi * prm.mu * s * std::sin(2 * pi * x.y());
    f(1) -= 2 * pi * pi * prm.mu * s * std::sin(2 * pi * x.x());
    return f;
  };
  p.u0 = [](const Point&) { return detail::vec2(0.0, 0.0); };
  p.u1 = [w, shape](const Point& x) { return FieldValue(w * shape(x)); };
  p.grad_u0 = [](const Point&) { return FieldGradient(FieldGradient::Zero(2, 2)); };
  p.grad_u1 = [w, shape_grad](const Point& x) { return FieldGradient(w * shape_grad(x)); };
  return p;
}

inline ProblemSpec make_problem(const std::string& id)
{
  if (id == "wave1d") return make_wave1d();
  if (id == "elasto2d") return make_elasto2d();
  throw std::invalid_argument("unknown problem '" + id + "' (expected wave1d or elasto2d)");
}

}  // namespace dgwave
