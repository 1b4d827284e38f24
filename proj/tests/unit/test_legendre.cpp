#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "dgwave/legendre.hpp"

using dgwave::gauss_rule;
using dgwave::legendre;
using dgwave::SlabBasis;

TEST(Legendre, PointValues)
{
  EXPECT_DOUBLE_EQ(legendre(0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(legendre(7, 1.0), 1.0);
  EXPECT_NEAR(legendre(2, 0.5), -0.125, 1e-15);
  for (int i = 0; i <= 12; ++i) {
    EXPECT_NEAR(legendre(i, 1.0), 1.0, 1e-14);
    EXPECT_NEAR(legendre(i, -1.0), (i % 2 == 0) ? 1.0 : -1.0, 1e-14);
  }
}

TEST(Legendre, AllMatchesSingle)
{
  const auto v = dgwave::legendre_all(9, 0.37);
  for (int i = 0; i <= 9; ++i) EXPECT_NEAR(v.value[static_cast<std::size_t>(i)], legendre(i, 0.37), 1e-15);
  // L_3 = (5t^3 - 3t)/2
  EXPECT_NEAR(v.d1[3], (15 * 0.37 * 0.37 - 3) / 2, 1e-14);
  EXPECT_NEAR(v.d2[3], 15 * 0.37, 1e-14);
}

TEST(Gauss, SmallRules)
{
  const auto r1 = gauss_rule(1);
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_NEAR(r1.nodes[0], 0.0, 1e-15);
  EXPECT_NEAR(r1.weights[0], 2.0, 1e-15);

  const auto r2 = gauss_rule(2);
  ASSERT_EQ(r2.size(), 2u);
  EXPECT_NEAR(std::abs(r2.nodes[0]), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r2.nodes[0] + r2.nodes[1], 0.0, 1e-15);
  EXPECT_NEAR(r2.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r2.weights[1], 1.0, 1e-15);
}

TEST(Gauss, WeightsAndExactness)
{
  for (int n = 1; n <= 64; ++n) {
    const auto r = gauss_rule(n);
    double sum = 0.0;
    for (double w : r.weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 2.0, 1e-13) << "n=" << n;
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double acc = 0.0;
      for (std::size_t p = 0; p < r.size(); ++p) acc += r.weights[p] * std::pow(r.nodes[p], deg);
      const double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(acc, exact, 1e-12) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(Gauss, RejectsEmptyRule) { EXPECT_THROW(gauss_rule(0), std::invalid_argument); }

TEST(Legendre, OrthogonalityAndNorm)
{
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j <= 12; ++j) {
      const auto r = gauss_rule(i + j + 2);
      double acc = 0.0;
      for (std::size_t p = 0; p < r.size(); ++p) acc += r.weights[p] * legendre(i, r.nodes[p]) * legendre(j, r.nodes[p]);
      if (i == j) EXPECT_NEAR(acc, 2.0 / (2 * i + 1), 1e-12);
      else EXPECT_LT(std::abs(acc), 1e-12);
    }
}

TEST(Legendre, AntiderivativeIdentity)
{
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 1; i <= 10; ++i)
    for (int s = 0; s < 10; ++s) {
      const double t = dist(gen);
      // integral from -1 to t by a Gauss rule mapped to (-1, t)
      const auto r = gauss_rule(i + 2);
      double acc = 0.0;
      for (std::size_t p = 0; p < r.size(); ++p) {
        const double x = -1.0 + 0.5 * (t + 1.0) * (r.nodes[p] + 1.0);
        acc += 0.5 * (t + 1.0) * r.weights[p] * legendre(i, x);
      }
      EXPECT_NEAR(acc, (legendre(i + 1, t) - legendre(i - 1, t)) / (2 * i + 1), 1e-12);
    }
}

TEST(SlabBasis, EndpointValues)
{
  const SlabBasis b(2, 0.0, 1.0);
  EXPECT_NEAR(b.eval(2, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(b.eval(2, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(b.eval(3, 0.0, 1), -6.0, 1e-13);

  const SlabBasis c(6, 0.3, 0.125);
  for (int j = 1; j <= 7; ++j) {
    EXPECT_NEAR(c.eval(j, 0.425), 1.0, 1e-13);
    EXPECT_NEAR(c.eval(j, 0.3), (j % 2 == 1) ? 1.0 : -1.0, 1e-13);
  }
}

TEST(SlabBasis, IndexOutOfRange)
{
  const SlabBasis b(3, 0.0, 0.5);
  EXPECT_THROW(b.eval(0, 0.1), std::out_of_range);
  EXPECT_THROW(b.eval(5, 0.1), std::out_of_range);
  EXPECT_NO_THROW(b.eval(4, 0.1, 2));
}

namespace {

// The explicit shifted Legendre formulas for phi^1..phi^6 with s = t - t_start.
struct Explicit
{
  std::function<double(double, double)> v, d1, d2;
};

std::vector<Explicit> explicit_formulas()
{
  return {
      {[](double, double) { return 1.0; }, [](double, double) { return 0.0; }, [](double, double) { return 0.0; }},
      {[](double s, double k) { return 2 * s / k - 1; }, [](double, double k) { return 2 / k; },
       [](double, double) { return 0.0; }},
      {[](double s, double k) { return 6 * s * s / (k * k) - 6 * s / k + 1; },
       [](double s, double k) { return 12 * s / (k * k) - 6 / k; }, [](double, double k) { return 12 / (k * k); }},
      {[](double s, double k) { return 20 * std::pow(s / k, 3) - 30 * std::pow(s / k, 2) + 12 * s / k - 1; },
       [](double s, double k) { return 60 * s * s / std::pow(k, 3) - 60 * s / (k * k) + 12 / k; },
       [](double s, double k) { return 120 * s / std::pow(k, 3) - 60 / (k * k); }},
      {[](double s, double k) {
         return 70 * std::pow(s / k, 4) - 140 * std::pow(s / k, 3) + 90 * std::pow(s / k, 2) - 20 * s / k + 1;
       },
       [](double s, double k) {
         return 280 * std::pow(s, 3) / std::pow(k, 4) - 420 * s * s / std::pow(k, 3) + 180 * s / (k * k) - 20 / k;
       },
       [](double s, double k) { return 840 * s * s / std::pow(k, 4) - 840 * s / std::pow(k, 3) + 180 / (k * k); }},
      {[](double s, double k) {
         return 252 * std::pow(s / k, 5) - 630 * std::pow(s / k, 4) + 560 * std::pow(s / k, 3) -
                210 * std::pow(s / k, 2) + 30 * s / k - 1;
       },
       [](double s, double k) {
         return 1260 * std::pow(s, 4) / std::pow(k, 5) - 2520 * std::pow(s, 3) / std::pow(k, 4) +
                1680 * s * s / std::pow(k, 3) - 420 * s / (k * k) + 30 / k;
       },
       [](double s, double k) {
         return 5040 * std::pow(s, 3) / std::pow(k, 5) - 7560 * s * s / std::pow(k, 4) + 3360 * s / std::pow(k, 3) -
                420 / (k * k);
       }},
  };
}

}  // namespace

TEST(SlabBasis, MatchesExplicitFormulas)
{
  const auto ref = explicit_formulas();
  std::mt19937 gen(11);
  for (int q = 2; q <= 5; ++q)
    for (const auto& [t0, k] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.25, 0.125}, {0.5, 0.5}}) {
      const SlabBasis b(q, t0, k);
      std::uniform_real_distribution<double> dist(t0, t0 + k);
      for (int s = 0; s < 20; ++s) {
        const double t = dist(gen);
        for (int j = 1; j <= q + 1; ++j) {
          const auto& f = ref[static_cast<std::size_t>(j - 1)];
          // relative tolerance: derivatives scale like k^-order
          EXPECT_NEAR(b.eval(j, t, 0), f.v(t - t0, k), 1e-12);
          EXPECT_NEAR(b.eval(j, t, 1) * k, f.d1(t - t0, k) * k, 1e-12);
          EXPECT_NEAR(b.eval(j, t, 2) * k * k, f.d2(t - t0, k) * k * k, 1e-11);
        }
      }
    }
}
