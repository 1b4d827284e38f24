#pragma once

// Conforming Lagrange finite elements on uniform meshes of (0,1) and (0,1)^2.
//
// 1D: n cells of width h = 1/n, degree-r elements, scalar field.
// 2D: n x n squares, each split along the lower-left to upper-right diagonal,
//     degree-r triangles, two displacement components per node (elasticity).
//
// Every Lagrange node of either mesh sits on the uniform "fine" lattice of
// spacing h/r, so nodes are numbered by lattice position. Homogeneous Dirichlet
// conditions are imposed by dropping boundary nodes from the DOF set.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgwave/legendre.hpp"

namespace dgwave {

using Point = Eigen::Vector2d;
using FieldValue = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;
/// rows: field component, cols: spatial direction
using FieldGradient = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;
using SpatialField = std::function<FieldValue(const Point&)>;
using SpaceTimeField = std::function<FieldValue(const Point&, double)>;
using GradientField = std::function<FieldGradient(const Point&)>;
using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Physics { scalar_wave, elasticity };

// ---------------------------------------------------------------------------
// Reference simplex element
// ---------------------------------------------------------------------------

struct ElementQuadrature
{
  std::vector<Eigen::Vector2d> points;  // reference coordinates
  std::vector<double> weights;          // sum to the reference measure
};

/// Quadrature on the reference simplex exact for polynomials of total degree `order`.
/// Triangle rules use the collapsed (Duffy) tensor-Gauss construction.
inline ElementQuadrature simplex_quadrature(int dim, int order)
{
  ElementQuadrature out;
  if (dim == 1) {
    const auto g = gauss_rule(order / 2 + 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.points.emplace_back(0.5 * (g.nodes[i] + 1.0), 0.0);
      out.weights.push_back(0.5 * g.weights[i]);
    }
    return out;
  }
  // x = s, y = (1-s) t, dx dy = (1-s) ds dt; degree grows by one in s
  const auto gs = gauss_rule((order + 1) / 2 + 1);
  const auto gt = gauss_rule(order / 2 + 1);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double s = 0.5 * (gs.nodes[i] + 1.0);
    for (std::size_t j = 0; j < gt.size(); ++j) {
      const double t = 0.5 * (gt.nodes[j] + 1.0);
      out.points.emplace_back(s, (1.0 - s) * t);
      out.weights.push_back(0.25 * gs.weights[i] * gt.weights[j] * (1.0 - s));
    }
  }
  return out;
}

/// Degree-r Lagrange basis on the reference interval (0,1) or triangle
/// (0,0),(1,0),(0,1), with nodes on the lattice {(a/r, b/r)}.
class ReferenceElement
{
public:
  ReferenceElement(int dim, int degree) : dim_(dim), degree_(degree)
  {
    if (dim != 1 && dim != 2) throw std::invalid_argument("ReferenceElement: dim must be 1 or 2");
    if (degree < 1) throw std::invalid_argument("ReferenceElement: degree must be >= 1");
    if (dim == 1) {
      for (int a = 0; a <= degree; ++a) lattice_.push_back({a, 0});
    } else {
      for (int b = 0; b <= degree; ++b)
        for (int a = 0; a + b <= degree; ++a) lattice_.push_back({a, b});
    }
    exponents_ = lattice_;  // monomials x^a y^b share the lattice index set
    const auto n = static_cast<Eigen::Index>(lattice_.size());
    Eigen::MatrixXd vandermonde(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& node = lattice_[static_cast<std::size_t>(i)];
      const double x = static_cast<double>(node[0]) / degree;
      const double y = static_cast<double>(node[1]) / degree;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& e = exponents_[static_cast<std::size_t>(j)];
        vandermonde(i, j) = std::pow(x, e[0]) * std::pow(y, e[1]);
      }
    }
    // columns of coeffs_ are the monomial coefficients of each basis function
    coeffs_ = vandermonde.inverse();
  }

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  int size() const noexcept { return static_cast<int>(lattice_.size()); }
  const std::vector<std::array<int, 2>>& lattice() const noexcept { return lattice_; }

  Eigen::VectorXd values(const Eigen::Vector2d& xi) const
  {
    Eigen::VectorXd mono(coeffs_.rows());
    for (std::size_t j = 0; j < exponents_.size(); ++j)
      mono(static_cast<Eigen::Index>(j)) = ipow(xi.x(), exponents_[j][0]) * ipow(xi.y(), exponents_[j][1]);
    return coeffs_.transpose() * mono;
  }

  /// rows: basis function, cols: reference direction (dim columns)
  Eigen::MatrixXd gradients(const Eigen::Vector2d& xi) const
  {
    Eigen::MatrixXd dmono(coeffs_.rows(), dim_);
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      const int a = exponents_[j][0];
      const int b = exponents_[j][1];
      const auto r = static_cast<Eigen::Index>(j);
      dmono(r, 0) = (a == 0 ? 0.0 : a * ipow(xi.x(), a - 1)) * ipow(xi.y(), b);
      if (dim_ == 2) dmono(r, 1) = ipow(xi.x(), a) * (b == 0 ? 0.0 : b * ipow(xi.y(), b - 1));
    }
    return coeffs_.transpose() * dmono;
  }

private:
  static double ipow(double x, int p)
  {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
  }

  int dim_;
  int degree_;
  std::vector<std::array<int, 2>> lattice_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeffs_;
};

// ---------------------------------------------------------------------------
// Mesh + function space
// ---------------------------------------------------------------------------

struct Element
{
  Point origin;              // image of the reference origin
  Eigen::Matrix2d jacobian;  // x = origin + jacobian * xi (1D uses the (0,0) entry)
  std::vector<int> nodes;    // global node index per local basis function
};

/// Uniform mesh together with the Lagrange node numbering and the
/// interior-DOF map (node, component) <-> DOF index.
class FeSpace
{
public:
  FeSpace(int dim, int n_cells, int degree, int components)
      : dim_(dim), n_(n_cells), r_(degree), components_(components), ref_(dim, degree)
  {
    if (n_cells < 1) throw std::invalid_argument("FeSpace: need at least one cell");
    if (components < 1) throw std::invalid_argument("FeSpace: need at least one component");
    h_ = 1.0 / n_;
    const int per_dir = n_ * r_ + 1;
    const double dx = h_ / r_;
    if (dim_ == 1) {
      for (int i = 0; i < per_dir; ++i) nodes_.emplace_back(i * dx, 0.0);
      for (int e = 0; e < n_; ++e) {
        Element el{Point(e * h_, 0.0), Eigen::Matrix2d::Zero(), {}};
        el.jacobian(0, 0) = h_;
        for (const auto& l : ref_.lattice()) el.nodes.push_back(e * r_ + l[0]);
        elements_.push_back(std::move(el));
      }
    } else {
      for (int Y = 0; Y < per_dir; ++Y)
        for (int X = 0; X < per_dir; ++X) nodes_.emplace_back(X * dx, Y * dx);
      for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
          const Point v0(i * h_, j * h_);
          // lower-right triangle: (i,j), (i+1,j), (i+1,j+1)
          Element lower{v0, Eigen::Matrix2d::Zero(), {}};
          lower.jacobian << h_, h_, 0.0, h_;
          // upper-left triangle: (i,j), (i+1,j+1), (i,j+1)
          Element upper{v0, Eigen::Matrix2d::Zero(), {}};
          upper.jacobian << h_, 0.0, h_, h_;
          for (const auto& l : ref_.lattice()) {
            const int a = l[0];
            const int b = l[1];
            lower.nodes.push_back((i * r_ + a + b) + (j * r_ + b) * per_dir);
            upper.nodes.push_back((i * r_ + a) + (j * r_ + a + b) * per_dir);
          }
          elements_.push_back(std::move(lower));
          elements_.push_back(std::move(upper));
        }
      }
    }
    node_to_interior_.assign(nodes_.size(), -1);
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (!on_boundary(static_cast<int>(k), per_dir)) {
        node_to_interior_[k] = static_cast<int>(interior_nodes_.size());
        interior_nodes_.push_back(static_cast<int>(k));
      }
    }
  }

  int dim() const noexcept { return dim_; }
  int n_cells() const noexcept { return n_; }
  int degree() const noexcept { return r_; }
  int components() const noexcept { return components_; }
  double h() const noexcept { return h_; }
  const ReferenceElement& reference() const noexcept { return ref_; }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  const std::vector<int>& interior_nodes() const noexcept { return interior_nodes_; }

  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  int full_dof_count() const noexcept { return node_count() * components_; }
  int dof_count() const noexcept { return static_cast<int>(interior_nodes_.size()) * components_; }

  /// Interior DOF of (node, component), or -1 on the Dirichlet boundary.
  int dof(int node, int component) const
  {
    const int in = node_to_interior_[static_cast<std::size_t>(node)];
    return in < 0 ? -1 : in * components_ + component;
  }
  int full_dof(int node, int component) const noexcept { return node * components_ + component; }

  double element_measure(const Element& el) const
  {
    return dim_ == 1 ? el.jacobian(0, 0) : std::abs(el.jacobian.determinant());
  }

  Point map(const Element& el, const Eigen::Vector2d& xi) const
  {
    if (dim_ == 1) return Point(el.origin.x() + el.jacobian(0, 0) * xi.x(), 0.0);
    return el.origin + el.jacobian * xi;
  }

  /// Physical gradients of all local basis functions (rows) at reference point xi.
  Eigen::MatrixXd physical_gradients(const Element& el, const Eigen::Vector2d& xi) const
  {
    const Eigen::MatrixXd ref_grad = ref_.gradients(xi);
    if (dim_ == 1) return ref_grad / el.jacobian(0, 0);
    return ref_grad * el.jacobian.inverse();
  }

private:
  bool on_boundary(int node, int per_dir) const
  {
    if (dim_ == 1) return node == 0 || node == per_dir - 1;
    const int X = node % per_dir;
    const int Y = node / per_dir;
    return X == 0 || Y == 0 || X == per_dir - 1 || Y == per_dir - 1;
  }

  int dim_;
  int n_;
  int r_;
  int components_;
  double h_ = 0.0;
  ReferenceElement ref_;
  std::vector<Point> nodes_;
  std::vector<Element> elements_;
  std::vector<int> node_to_interior_;
  std::vector<int> interior_nodes_;
};

// ---------------------------------------------------------------------------
// Semi-discrete system  M u'' + 2 gamma M u' + (gamma^2 M + K) u = F
// ---------------------------------------------------------------------------

struct Material
{
  Physics physics = Physics::scalar_wave;
  double lambda = 1.0;  // Lame parameters (elasticity only)
  double mu = 1.0;
  double rho = 1.0;     // density, scales the mass matrix
};

struct SemiDiscreteSystem
{
  FeSpace space;
  Material material;
  SparseMatrix mass;       // interior DOFs only
  SparseMatrix stiffness;  // interior DOFs only
  double gamma = 1.0;

  int dof_count() const noexcept { return static_cast<int>(mass.rows()); }

  /// gamma^2 M + K, the weight of displacement terms in the slab form.
  SparseMatrix displacement_weight() const
  {
    SparseMatrix w = gamma * gamma * mass + stiffness;
    w.makeCompressed();
    return w;
  }
};

/// Mass and stiffness over all nodes (no boundary elimination).
struct FullOperators
{
  SparseMatrix mass;
  SparseMatrix stiffness;
};

inline FullOperators assemble_full(const FeSpace& space, const Material& mat)
{
  const int nb = space.reference().size();
  const int nc = space.components();
  const int r = space.degree();
  const auto quad = simplex_quadrature(space.dim(), 2 * r + 2);
  std::vector<Eigen::Triplet<double>> mt;
  std::vector<Eigen::Triplet<double>> kt;
  const int nloc = nb * nc;
  for (const auto& el : space.elements()) {
    Eigen::MatrixXd me = Eigen::MatrixXd::Zero(nloc, nloc);
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(nloc, nloc);
    const double meas = space.element_measure(el);
    for (std::size_t p = 0; p < quad.points.size(); ++p) {
      const double w = quad.weights[p] * meas;
      const Eigen::VectorXd phi = space.reference().values(quad.points[p]);
      const Eigen::MatrixXd grad = space.physical_gradients(el, quad.points[p]);
      const Eigen::MatrixXd phiphi = w * mat.rho * phi * phi.transpose();
      for (int c = 0; c < nc; ++c)
        for (int a = 0; a < nb; ++a)
          for (int b = 0; b < nb; ++b) me(a * nc + c, b * nc + c) += phiphi(a, b);
      if (mat.physics == Physics::scalar_wave) {
        const Eigen::MatrixXd gg = w * grad * grad.transpose();
        for (int c = 0; c < nc; ++c)
          for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b) ke(a * nc + c, b * nc + c) += gg(a, b);
      } else {
        // strain-displacement matrix, Voigt order (xx, yy, 2xy)
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, nloc);
        for (int a = 0; a < nb; ++a) {
          B(0, a * 2) = grad(a, 0);
          B(1, a * 2 + 1) = grad(a, 1);
          B(2, a * 2) = grad(a, 1);
          B(2, a * 2 + 1) = grad(a, 0);
        }
        Eigen::Matrix3d C;
        C << mat.lambda + 2 * mat.mu, mat.lambda, 0.0,
             mat.lambda, mat.lambda + 2 * mat.mu, 0.0,
             0.0, 0.0, mat.mu;
        ke += w * B.transpose() * C * B;
      }
    }
    for (int a = 0; a < nb; ++a)
      for (int ca = 0; ca < nc; ++ca)
        for (int b = 0; b < nb; ++b)
          for (int cb = 0; cb < nc; ++cb) {
            const int ga = space.full_dof(el.nodes[static_cast<std::size_t>(a)], ca);
            const int gb = space.full_dof(el.nodes[static_cast<std::size_t>(b)], cb);
            const double mv = me(a * nc + ca, b * nc + cb);
            const double kv = ke(a * nc + ca, b * nc + cb);
            if (mv != 0.0) mt.emplace_back(ga, gb, mv);
            if (kv != 0.0) kt.emplace_back(ga, gb, kv);
          }
  }
  const int n = space.full_dof_count();
  FullOperators out{SparseMatrix(n, n), SparseMatrix(n, n)};
  out.mass.setFromTriplets(mt.begin(), mt.end());
  out.stiffness.setFromTriplets(kt.begin(), kt.end());
  return out;
}

/// Deletes boundary rows and columns.
inline SparseMatrix restrict_to_interior(const FeSpace& space, const SparseMatrix& full)
{
  std::vector<int> map(static_cast<std::size_t>(space.full_dof_count()), -1);
  for (int node = 0; node < space.node_count(); ++node)
    for (int c = 0; c < space.components(); ++c)
      map[static_cast<std::size_t>(space.full_dof(node, c))] = space.dof(node, c);
  std::vector<Eigen::Triplet<double>> t;
  for (int col = 0; col < full.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      const int i = map[static_cast<std::size_t>(it.row())];
      const int j = map[static_cast<std::size_t>(it.col())];
      if (i >= 0 && j >= 0) t.emplace_back(i, j, it.value());
    }
  SparseMatrix out(space.dof_count(), space.dof_count());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

inline SemiDiscreteSystem make_system(FeSpace space, const Material& mat, double gamma)
{
  auto full = assemble_full(space, mat);
  SparseMatrix m = restrict_to_interior(space, full.mass);
  SparseMatrix k = restrict_to_interior(space, full.stiffness);
  return SemiDiscreteSystem{std::move(space), mat, std::move(m), std::move(k), gamma};
}

/// Degree-r Lagrange elements on n_cells uniform cells of (0,1).
inline SemiDiscreteSystem assemble_1d(int n_cells, int r, double gamma = 1.0)
{
  if (n_cells < 2) throw std::invalid_argument("assemble_1d: need n_cells >= 2");
  if (r < 1 || r > 5) throw std::invalid_argument("assemble_1d: element degree must be in [1,5]");
  return make_system(FeSpace(1, n_cells, r, 1), Material{}, gamma);
}

/// Vector-valued degree-r triangles on the n x n split-square mesh of (0,1)^2.
inline SemiDiscreteSystem assemble_2d_elasticity(int n, int r, double lambda, double mu, double rho,
                                                 double gamma = 1.0)
{
  if (n < 2) throw std::invalid_argument("assemble_2d_elasticity: need n >= 2");
  if (r < 1 || r > 4)
    throw std::invalid_argument("assemble_2d_elasticity: element degree must be in [1,4]");
  Material mat{Physics::elasticity, lambda, mu, rho};
  return make_system(FeSpace(2, n, r, 2), mat, gamma);
}

// ---------------------------------------------------------------------------
// Vectors: interpolation, loads, projection, norms
// ---------------------------------------------------------------------------

/// Nodal interpolant restricted to interior DOFs.
inline Eigen::VectorXd interpolate(const FeSpace& space, const SpatialField& fn)
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  for (int node : space.interior_nodes()) {
    const FieldValue v = fn(space.nodes()[static_cast<std::size_t>(node)]);
    for (int c = 0; c < space.components(); ++c) out(space.dof(node, c)) = v(c);
  }
  return out;
}

/// F_i = int f . psi_i over interior DOFs, element quadrature of order 2r+2.
inline Eigen::VectorXd assemble_load(const FeSpace& space, const SpatialField& f)
{
  const auto quad = simplex_quadrature(space.dim(), 2 * space.degree() + 2);
  const int nc = space.components();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  for (const auto& el : space.elements()) {
    const double meas = space.element_measure(el);
    for (std::size_t p = 0; p < quad.points.size(); ++p) {
      const Eigen::VectorXd phi = space.reference().values(quad.points[p]);
      const FieldValue fv = f(space.map(el, quad.points[p]));
      const double w = quad.weights[p] * meas;
      for (int a = 0; a < phi.size(); ++a)
        for (int c = 0; c < nc; ++c) {
          const int d = space.dof(el.nodes[static_cast<std::size_t>(a)], c);
          if (d >= 0) out(d) += w * phi(a) * fv(c);
        }
    }
  }
  return out;
}

inline Eigen::VectorXd assemble_load(const SemiDiscreteSystem& system, const SpaceTimeField& f,
                                     double t)
{
  return assemble_load(system.space, [&](const Point& x) { return f(x, t); });
}

/// Energy-form load  a(u, psi_i)  for a field given through its gradient:
/// int u' psi_i' (scalar wave) or int sigma(u) : eps(psi_i) (elasticity).
inline Eigen::VectorXd assemble_stiffness_load(const SemiDiscreteSystem& system,
                                               const GradientField& grad_u)
{
  const auto& space = system.space;
  const auto& mat = system.material;
  const auto quad = simplex_quadrature(space.dim(), 2 * space.degree() + 4);
  const int nc = space.components();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dof_count());
  for (const auto& el : space.elements()) {
    const double meas = space.element_measure(el);
    for (std::size_t p = 0; p < quad.points.size(); ++p) {
      const Eigen::MatrixXd grad = space.physical_gradients(el, quad.points[p]);
      const FieldGradient gu = grad_u(space.map(el, quad.points[p]));
      const double w = quad.weights[p] * meas;
      // flux(c, dir) such that a(u, psi e_c) = int flux(c,:) . grad psi
      Eigen::MatrixXd flux = gu;
      if (mat.physics == Physics::elasticity) {
        const double div = gu(0, 0) + gu(1, 1);
        const Eigen::Matrix2d eps = 0.5 * (gu + gu.transpose());
        flux = 2.0 * mat.mu * eps + mat.lambda * div * Eigen::Matrix2d::Identity();
      }
      for (int a = 0; a < grad.rows(); ++a)
        for (int c = 0; c < nc; ++c) {
          const int d = space.dof(el.nodes[static_cast<std::size_t>(a)], c);
          if (d < 0) continue;
          double s = 0.0;
          for (int k = 0; k < space.dim(); ++k) s += flux(c, k) * grad(a, k);
          out(d) += w * s;
        }
    }
  }
  return out;
}

/// Ritz projection: solves K x = load, load_i = a(u, psi_i).
inline Eigen::VectorXd ritz_project(const SemiDiscreteSystem& system, const Eigen::VectorXd& load)
{
  if (load.size() != system.dof_count())
    throw std::invalid_argument("ritz_project: load has wrong dimension");
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(system.stiffness);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("ritz_project: stiffness is singular");
  Eigen::VectorXd x = ldlt.solve(load);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("ritz_project: solve failed");
  return x;
}

/// Continuous L2(Omega) norm of (exact - u_h), u_h given by interior DOFs
/// (boundary values are zero). Quadrature of order 2r+8 per element.
inline double l2_error(const FeSpace& space, const Eigen::VectorXd& dofs, const SpatialField& exact)
{
  const auto quad = simplex_quadrature(space.dim(), 2 * space.degree() + 8);
  const int nc = space.components();
  double acc = 0.0;
  for (const auto& el : space.elements()) {
    const double meas = space.element_measure(el);
    for (std::size_t p = 0; p < quad.points.size(); ++p) {
      const Eigen::VectorXd phi = space.reference().values(quad.points[p]);
      FieldValue diff = exact(space.map(el, quad.points[p]));
      for (int a = 0; a < phi.size(); ++a)
        for (int c = 0; c < nc; ++c) {
          const int d = space.dof(el.nodes[static_cast<std::size_t>(a)], c);
          if (d >= 0) diff(c) -= phi(a) * dofs(d);
        }
      acc += quad.weights[p] * meas * diff.squaredNorm();
    }
  }
  return std::sqrt(acc);
}

/// Squared L2(Omega) norm of a field, by the same element quadrature.
inline double l2_norm_squared(const FeSpace& space, const SpatialField& fn)
{
  const auto quad = simplex_quadrature(space.dim(), 2 * space.degree() + 8);
  double acc = 0.0;
  for (const auto& el : space.elements()) {
    const double meas = space.element_measure(el);
    for (std::size_t p = 0; p < quad.points.size(); ++p)
      acc += quad.weights[p] * meas * fn(space.map(el, quad.points[p])).squaredNorm();
  }
  return acc;
}

// ---------------------------------------------------------------------------
// MatrixMarket dump (debugging aid)
// ---------------------------------------------------------------------------

inline void write_matrix_market(const std::string& path, const SparseMatrix& m)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int col = 0; col < m.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

inline void write_matrix_market(const std::string& path, const Eigen::MatrixXd& m)
{
  write_matrix_market(path, SparseMatrix(m.sparseView()));
}

inline void write_matrix_market(const std::string& path, const Eigen::VectorXd& v)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v(i) << '\n';
}

}  // namespace dgwave
