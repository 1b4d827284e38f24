#pragma once

// Temporal projection operators acting on truncated Legendre series.
//
// A series  u(t) = sum_i a_i L~_i(t)  on (a,b) is stored by its coefficients;
// L~_i is L_i pulled back by the affine map (a,b) -> (-1,1). The coefficient
// type is either double or a spatial DOF vector (Eigen::VectorXd).

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dgwave/legendre.hpp"

namespace dgwave {

struct Interval
{
  double a = -1.0;
  double b = 1.0;

  double length() const noexcept { return b - a; }
  double to_reference(double t) const noexcept { return 2.0 * (t - a) / (b - a) - 1.0; }
};

template <class Coeff>
struct LegendreSeries
{
  std::vector<Coeff> coeffs;
  Interval interval{};

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

/// Degree-q result of a projection. Kept distinct from a general series so the
/// degree bound travels with the value.
template <class Coeff>
struct ProjectedPoly
{
  LegendreSeries<Coeff> series;
  int q = 0;
};

namespace detail {

template <class Coeff>
Coeff zero_like(const Coeff& c)
{
  return Coeff(c * 0.0);
}

template <class Coeff>
const Coeff& first_coeff(const LegendreSeries<Coeff>& s)
{
  if (s.coeffs.empty()) throw std::invalid_argument("LegendreSeries: empty coefficient list");
  return s.coeffs.front();
}

inline void check_interval(const Interval& iv)
{
  if (!(iv.b > iv.a)) throw std::invalid_argument("interval must have positive length");
}

}  // namespace detail

template <class Coeff>
Coeff evaluate(const LegendreSeries<Coeff>& s, double t)
{
  Coeff acc = detail::zero_like(detail::first_coeff(s));
  const double tau = s.interval.to_reference(t);
  const auto vals = legendre_all(s.degree(), tau).value;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) acc = Coeff(acc + vals[i] * s.coeffs[i]);
  return acc;
}

/// Exact derivative of a series, d/dt on its own interval.
/// Uses L'_j = sum_{i<j, j-i odd} (2i+1) L_i.
template <class Coeff>
LegendreSeries<Coeff> differentiate(const LegendreSeries<Coeff>& s)
{
  detail::check_interval(s.interval);
  const Coeff zero = detail::zero_like(detail::first_coeff(s));
  const std::size_t m = s.coeffs.size();
  LegendreSeries<Coeff> d{std::vector<Coeff>(m > 1 ? m - 1 : 1, zero), s.interval};
  const double scale = 2.0 / s.interval.length();
  // running sums over j = i+1, i+3, ... taken from the top down
  Coeff odd_tail = zero;
  Coeff even_tail = zero;
  for (std::size_t j = m; j-- > 1;) {
    const std::size_t i = j - 1;
    // parity of (j) decides which tail L_i draws from
    if ((j % 2) == 1) odd_tail = Coeff(odd_tail + s.coeffs[j]);
    else even_tail = Coeff(even_tail + s.coeffs[j]);
    const Coeff& tail = ((i + 1) % 2 == 1) ? odd_tail : even_tail;
    d.coeffs[i] = Coeff(scale * (2.0 * static_cast<double>(i) + 1.0) * tail);
  }
  return d;
}

/// Derivative of a series evaluated at t.
template <class Coeff>
Coeff evaluate_derivative(const LegendreSeries<Coeff>& s, double t)
{
  if (s.coeffs.size() < 2) return detail::zero_like(detail::first_coeff(s));
  return evaluate(differentiate(s), t);
}

/// Boundary-value-preserving L2 projection onto degree q:
/// keeps b_0..b_{q-1} and collects the tail into the top coefficient,
/// so the right endpoint value is reproduced.
template <class Coeff>
ProjectedPoly<Coeff> project_p(const LegendreSeries<Coeff>& w, int q)
{
  if (q < 0) throw std::invalid_argument("project_p: degree must be non-negative");
  const Coeff zero = detail::zero_like(detail::first_coeff(w));
  const auto uq = static_cast<std::size_t>(q);
  ProjectedPoly<Coeff> out{{std::vector<Coeff>(uq + 1, zero), w.interval}, q};
  for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
    if (i < uq) out.series.coeffs[i] = w.coeffs[i];
    else out.series.coeffs[uq] = Coeff(out.series.coeffs[uq] + w.coeffs[i]);
  }
  return out;
}

/// Integrated projector: u(left) + integral of the degree-(q-1) projection of du/dt.
/// Coefficients are produced by integrating the projected derivative term by term,
/// which also covers the small-q layouts.
template <class Coeff>
ProjectedPoly<Coeff> project_pi(const LegendreSeries<Coeff>& u, int q)
{
  if (q < 2) throw std::invalid_argument("project_pi: degree must be at least 2");
  detail::check_interval(u.interval);
  const Coeff zero = detail::zero_like(detail::first_coeff(u));
  const auto uq = static_cast<std::size_t>(q);

  // derivative with respect to the reference variable on (-1,1)
  LegendreSeries<Coeff> ref{u.coeffs, Interval{-1.0, 1.0}};
  auto slope = project_p(differentiate(ref), q - 1).series.coeffs;

  std::vector<Coeff> c(uq + 1, zero);
  Coeff left = zero;
  for (std::size_t i = 0; i < u.coeffs.size(); ++i)
    left = Coeff(left + ((i % 2 == 0) ? 1.0 : -1.0) * u.coeffs[i]);
  c[0] = left;
  // int_{-1}^t L_0 = L_0 + L_1 ; int_{-1}^t L_i = (L_{i+1} - L_{i-1}) / (2i+1)
  for (std::size_t i = 0; i < slope.size(); ++i) {
    if (i == 0) {
      c[0] = Coeff(c[0] + slope[0]);
      c[1] = Coeff(c[1] + slope[0]);
    } else {
      const double f = 1.0 / (2.0 * static_cast<double>(i) + 1.0);
      c[i + 1] = Coeff(c[i + 1] + f * slope[i]);
      c[i - 1] = Coeff(c[i - 1] - f * slope[i]);
    }
  }
  return {{std::move(c), u.interval}, q};
}

/// Moves a projected polynomial onto another interval. The Legendre
/// coefficients are invariant under the affine change of variable.
template <class Coeff>
ProjectedPoly<Coeff> rescale(const ProjectedPoly<Coeff>& poly, const Interval& target)
{
  detail::check_interval(target);
  ProjectedPoly<Coeff> out = poly;
  out.series.interval = target;
  return out;
}

}  // namespace dgwave
