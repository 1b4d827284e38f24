#pragma once

// Legendre polynomials on (-1,1), their shifted versions on a time slab,
// and Gauss-Legendre quadrature.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgwave {

/// L_i(t) by the three-term recurrence (i+1)L_{i+1} = (2i+1) t L_i - i L_{i-1}.
inline double legendre(int i, double t)
{
  if (i < 0) throw std::invalid_argument("legendre: negative degree");
  if (i == 0) return 1.0;
  double prev = 1.0;
  double curr = t;
  for (int n = 1; n < i; ++n) {
    const double next = ((2.0 * n + 1.0) * t * curr - n * prev) / (n + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

/// Values and first two derivatives of L_0..L_q at one point.
struct LegendreTriple
{
  std::vector<double> value;
  std::vector<double> d1;
  std::vector<double> d2;
};

// Derivatives follow from differentiating the recurrence:
//   (i+1)L'_{i+1}  = (2i+1)(L_i + t L'_i)    - i L'_{i-1}
//   (i+1)L''_{i+1} = (2i+1)(2L'_i + t L''_i) - i L''_{i-1}
// which stays well defined at t = +-1.
inline LegendreTriple legendre_all(int q, double t)
{
  if (q < 0) throw std::invalid_argument("legendre_all: negative degree");
  LegendreTriple out;
  const auto n = static_cast<std::size_t>(q) + 1;
  out.value.assign(n, 0.0);
  out.d1.assign(n, 0.0);
  out.d2.assign(n, 0.0);
  out.value[0] = 1.0;
  if (q == 0) return out;
  out.value[1] = t;
  out.d1[1] = 1.0;
  for (int i = 1; i < q; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double a = 2.0 * i + 1.0;
    const double inv = 1.0 / (i + 1.0);
    out.value[u + 1] = (a * t * out.value[u] - i * out.value[u - 1]) * inv;
    out.d1[u + 1] = (a * (out.value[u] + t * out.d1[u]) - i * out.d1[u - 1]) * inv;
    out.d2[u + 1] = (a * (2.0 * out.d1[u] + t * out.d2[u]) - i * out.d2[u - 1]) * inv;
  }
  return out;
}

struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on (-1,1); exact for degree 2n-1.
/// Nodes are the roots of L_n found by Newton iteration from Chebyshev guesses.
inline QuadratureRule gauss_rule(int n)
{
  if (n < 1) throw std::invalid_argument("gauss_rule: need at least one point");
  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  constexpr int max_iter = 100;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      // quadratic convergence: a step below 1e-14 leaves an error near roundoff
      if (std::abs(step) <= 1e-14) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("gauss_rule: Newton iteration did not converge for n=" +
                               std::to_string(n));
    // recompute the derivative at the converged root
    {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

/// Shifted Legendre basis phi^1..phi^{q+1} on the slab (t_start, t_start + k).
/// phi^j is L_{j-1} composed with the affine map onto (-1,1).
class SlabBasis
{
public:
  SlabBasis(int q, double t_start, double k) : q_(q), t_start_(t_start), k_(k)
  {
    if (q < 0) throw std::invalid_argument("SlabBasis: negative degree");
    if (!(k > 0.0)) throw std::invalid_argument("SlabBasis: slab length must be positive");
  }

  int degree() const noexcept { return q_; }
  int size() const noexcept { return q_ + 1; }
  double start() const noexcept { return t_start_; }
  double length() const noexcept { return k_; }
  double end() const noexcept { return t_start_ + k_; }

  double to_reference(double t) const noexcept { return 2.0 * (t - t_start_) / k_ - 1.0; }
  double from_reference(double tau) const noexcept { return t_start_ + 0.5 * k_ * (tau + 1.0); }

  /// phi^j (order 0), its first (1) or second (2) time derivative; j is 1-based.
  double eval(int j, double t, int order = 0) const
  {
    if (j < 1 || j > q_ + 1) throw std::out_of_range("SlabBasis: basis index out of range");
    if (order < 0 || order > 2) throw std::invalid_argument("SlabBasis: order must be 0, 1 or 2");
    const auto all = legendre_all(j - 1, to_reference(t));
    const auto u = static_cast<std::size_t>(j - 1);
    const double scale = 2.0 / k_;
    switch (order) {
      case 0: return all.value[u];
      case 1: return scale * all.d1[u];
      default: return scale * scale * all.d2[u];
    }
  }

  /// All basis functions with time derivatives at t (chain rule already applied).
  LegendreTriple eval_all(double t) const { return eval_all_reference(to_reference(t)); }

  LegendreTriple eval_all_reference(double tau) const
  {
    auto all = legendre_all(q_, tau);
    const double scale = 2.0 / k_;
    for (auto& v : all.d1) v *= scale;
    for (auto& v : all.d2) v *= scale * scale;
    return all;
  }

private:
  int q_;
  double t_start_;
  double k_;
};

}  // namespace dgwave
