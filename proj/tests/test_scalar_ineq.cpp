#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fvdecay/errors.hpp"
#include "fvdecay/quadrature.hpp"
#include "fvdecay/scalar_ineq.hpp"
#include "fvdecay/verify.hpp"

using namespace fvdecay;

TEST(ChainBound, IdentityAndEqualExponents) {
  const auto s = chain_bound_sides(1.0, 1.0, 0.7, 2.3);
  EXPECT_EQ(s.lhs, 0.0);
  EXPECT_EQ(s.rhs, 0.0);
  const auto e = chain_bound_sides(0.3, 4.0, 1.7, 1.7);
  EXPECT_NEAR(e.lhs, e.rhs, 1e-12 * e.lhs);
}

TEST(ChainBound, HandValue) {
  const auto s = chain_bound_sides(1.0, 2.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(s.lhs, 3.0);
  const double rhs = 8.0 / 9.0 * std::pow(std::pow(2.0, 1.5) - 1.0, 2);
  EXPECT_NEAR(s.rhs, rhs, 1e-14);
  EXPECT_NEAR(s.rhs, 2.97169, 5e-5);
  EXPECT_GE(s.lhs, s.rhs);
}

// The proof reduces the inequality to f(z) >= 0 for z = y/x; scan it directly.
TEST(ChainBound, ScanOracle) {
  const double a = 1.0, b = 2.0;
  for (int i = 0; i <= 10000; ++i) {
    const double z = 10.0 * i / 10000.0;
    const double f = (std::pow(z, a) - 1.0) * (std::pow(z, b) - 1.0) -
                     4.0 * a * b / ((a + b) * (a + b)) * std::pow(std::pow(z, 0.5 * (a + b)) - 1.0, 2);
    ASSERT_GE(f, -1e-12) << z;
    const auto s = chain_bound_sides(1.0, z, a, b);
    EXPECT_NEAR(s.lhs - s.rhs, f, 1e-9 * std::max(1.0, s.lhs));
  }
}

TEST(ChainBound, RejectsNegative) {
  EXPECT_THROW(chain_bound_sides(-1.0, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(chain_bound_sides(1.0, 1.0, 0.0, 1.0), DomainError);
}

TEST(WeightedChainBound, HandValue) {
  const auto s = weighted_chain_bound_sides(1.0, 4.0, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(s.lhs, 15.0);
  const double rhs = 4.0 / 2.25 * std::pow(std::pow(4.0, 0.75) - 1.0, 2);
  EXPECT_NEAR(s.rhs, rhs, 1e-13);
  EXPECT_NEAR(s.rhs, 5.94337, 5e-5);
  EXPECT_GE(s.lhs, s.rhs);
}

TEST(WeightedChainBound, BetaOneReducesToChainBound) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0), e(0.01, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng), a = e(rng);
    const auto w = weighted_chain_bound_sides(x, y, a, 1.0);
    const auto c = chain_bound_sides(x, y, a, 1.0);
    EXPECT_NEAR(w.lhs, c.lhs, 1e-12 * std::max(1.0, c.lhs));
    EXPECT_NEAR(w.rhs, c.rhs, 1e-12 * std::max(1.0, c.rhs));
  }
}

TEST(WeightedChainBound, Edges) {
  const auto s = weighted_chain_bound_sides(2.0, 2.0, 0.5, 0.3);
  EXPECT_EQ(s.lhs, 0.0);
  EXPECT_EQ(s.rhs, 0.0);
  EXPECT_THROW(weighted_chain_bound_sides(0.0, 1.0, 1.0, 0.5), DomainError);
  EXPECT_NO_THROW(weighted_chain_bound_sides(0.0, 1.0, 1.0, 2.0));
}

TEST(PropertySuites, ScalarZeroViolations) {
  const auto rep = verify::scalar_suite(12345, 100000);
  for (const auto& c : rep.checks) {
    EXPECT_EQ(c.trials, 100000u);
    EXPECT_EQ(c.violations, 0u) << c.name << ": " << c.first_violation;
  }
}

TEST(PropertySuites, Deterministic) {
  EXPECT_EQ(verify::scalar_suite(3, 500).text(), verify::scalar_suite(3, 500).text());
  EXPECT_EQ(verify::gronwall_suite(3, 50).text(), verify::gronwall_suite(3, 50).text());
}

TEST(GronwallPower, Examples) {
  const GronwallPowerParams p{1.0, 0.1, 2.0};
  EXPECT_DOUBLE_EQ(gronwall_power_bound(p, 0), 1.0);
  EXPECT_NEAR(gronwall_power_bound(p, 12), 0.5, 1e-14);
  EXPECT_EQ(gronwall_power_bound({0.0, 0.1, 2.0}, 5), 0.0);
  EXPECT_THROW(GronwallPowerParams({1.0, 0.1, 1.0}).validate(), DomainError);
  EXPECT_THROW(gronwall_power_bound({1.0, -0.1, 2.0}, 3), DomainError);
}

TEST(GronwallPower, RecurrenceOracleLongRun) {
  const GronwallPowerParams p{3.0, 0.05, 2.5};
  double x = p.x0;
  for (int n = 1; n <= 10000; ++n) {
    x = verify::implicit_power_step(x, p.tau, p.gamma);
    ASSERT_LE(x, gronwall_power_bound(p, n) * (1.0 + 1e-12) + 1e-14) << n;
  }
}

TEST(GronwallPower, RandomRecurrences) {
  const auto rep = verify::gronwall_suite(99, 1000);
  EXPECT_EQ(rep.checks.front().violations, 0u) << rep.checks.front().first_violation;
}

TEST(GronwallGeneral, StartsAtX0) {
  auto f = [](double z) { return 0.01 * (z + z * z); };
  EXPECT_DOUBLE_EQ(gronwall_general_bound(2.5, f, 0.01 * (1 + 5.0), 0), 2.5);
}

// Closed form inside the same family: w(x) = (x^{1-g} - 1)/((1-g) tK).
TEST(GronwallGeneral, PowerLawClosedForm) {
  for (double g : {1.5, 2.0, 3.0}) {
    const double tk = 0.2, x0 = 4.0;
    auto f = [&](double z) { return tk * std::pow(z, g); };
    const double fp = tk * g * std::pow(x0, g - 1.0);
    for (double n : {1.0, 10.0, 250.0}) {
      const double w0 = (std::pow(x0, 1.0 - g) - 1.0) / ((1.0 - g) * tk);
      const double target = w0 - n / (1.0 + fp);
      const double expect = std::pow(1.0 + (1.0 - g) * tk * target, 1.0 / (1.0 - g));
      EXPECT_NEAR(gronwall_general_bound(x0, f, fp, n), expect, 1e-9 * expect) << g << ' ' << n;
    }
  }
}

TEST(GronwallGeneral, MatchesPowerBoundWithTauGamma) {
  // With f = tau z^gamma, 1 + f'(x0) = 1 + gamma tau x0^{gamma-1} and the two bounds coincide.
  const GronwallPowerParams p{2.0, 0.3, 2.0};
  auto f = [&](double z) { return p.tau * std::pow(z, p.gamma); };
  const double fp = p.tau * p.gamma * std::pow(p.x0, p.gamma - 1.0);
  for (int n : {1, 5, 40, 300}) {
    const double a = gronwall_general_bound(p.x0, f, fp, n), b = gronwall_power_bound(p, n);
    EXPECT_NEAR(a, b, 1e-9 * b) << n;
  }
}

TEST(GronwallGeneral, RecurrenceOracle) {
  auto f = [](double z) { return 0.01 * (z + z * z); };
  const double x0 = 5.0;
  const double fp = 0.01 * (1.0 + 2.0 * x0);
  double x = x0;
  for (int n = 1; n <= 1000; ++n) {
    const double prev = x;
    x = quad::bisect([&](double z) { return z - prev + f(z); }, 0.0, prev, 1e-14);
    if (n % 50 == 0 || n < 5) {
      const double b = gronwall_general_bound(x0, f, fp, n);
      ASSERT_LE(x, b * (1.0 + 1e-10)) << n;
    }
  }
}

TEST(Quadrature, SimpsonAndGauss) {
  const auto r = quad::adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-11);
  EXPECT_NEAR(quad::adaptive_simpson([](double x) { return x * x; }, 1.0, 0.0, 1e-12).value, -1.0 / 3.0, 1e-13);
  EXPECT_NEAR(quad::gauss5([](double x) { return std::pow(x, 9); }, 0.0, 2.0), 102.4, 1e-11);
}
