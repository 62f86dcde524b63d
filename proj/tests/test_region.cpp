#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fvdecay/io.hpp"
#include "fvdecay/region.hpp"
#include "fvdecay/verify.hpp"

using namespace fvdecay;

TEST(Strip, Examples) {
  EXPECT_TRUE(in_strip_1d(2.0, 1.0));
  EXPECT_FALSE(in_strip_1d(3.0, 1.0));
  EXPECT_FALSE(in_strip_1d(0.5, 2.0));
  EXPECT_TRUE(in_strip_1d(0.0 + 1e-9, 1.0));
  EXPECT_TRUE(classify(3.0, 1.0, 2).witness.in_strip_closed);
}

TEST(Gamma, Examples) {
  EXPECT_NEAR(gamma_opt(1.0, 1.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(gamma_opt(2.0, 2.0), 2.0, 1e-15);
  EXPECT_EQ(gamma_opt(0.25, 0.75), 0.0);
  EXPECT_FALSE(gamma_admissible(0.25, 0.75));
  EXPECT_TRUE(gamma_admissible(1.0, 1.0));
}

TEST(Md, Examples) {
  const auto v = in_Md(2.0, 1.0, 9);
  EXPECT_DOUBLE_EQ(v.witness.factor1, 9.0);
  EXPECT_DOUBLE_EQ(v.witness.factor2, 20.0);
  EXPECT_DOUBLE_EQ(v.witness.strip, -2.0);
  EXPECT_TRUE(v.in_Md);
  const auto w = in_Md(3.0, 1.0, 9);
  EXPECT_EQ(w.witness.strip, 0.0);
  EXPECT_FALSE(w.in_Md);
  for (int d = 2; d <= 12; ++d) {
    const auto u = in_Md(1.0, 1.0, d);
    EXPECT_DOUBLE_EQ(u.witness.factor1, 2.0);
    EXPECT_DOUBLE_EQ(u.witness.factor2, d + 2.0);
    EXPECT_DOUBLE_EQ(u.witness.strip, -2.0);
    EXPECT_TRUE(u.in_Md);
  }
  EXPECT_THROW(in_Md(1.0, 1.0, 1), DomainError);
}

TEST(Remark9, OneOneCoefficients) {
  for (int d = 2; d <= 9; ++d) {
    const auto p = kappa_polynomial(1.0, 1.0, d);
    EXPECT_DOUBLE_EQ(p.s2, -double(d) * d);
    EXPECT_NEAR(p(1.0), -(d - 1.0) * (d - 1.0), 1e-12);
  }
}

TEST(Remark9, FOneVanishesOnDiagonal) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> b(0.01, 3.0);
  std::uniform_int_distribution<int> dd(2, 12);
  for (int t = 0; t < 1000; ++t) {
    const double beta = b(rng);
    const int d = dd(rng);
    const auto p = kappa_polynomial(2.0 * beta, beta, d);
    const double scale = std::max({1.0, std::abs(p.s0), std::abs(p.s1), std::abs(p.s2)});
    ASSERT_NEAR(p(1.0), 0.0, 1e-12 * scale) << beta << ' ' << d;
  }
}

TEST(Remark9, IdentityOnRandomTriples) {
  const auto rep = verify::region_oracle_suite(77, 10000);
  EXPECT_EQ(rep.checks[0].violations, 0u) << rep.checks[0].first_violation;
  EXPECT_EQ(rep.checks[1].violations, 0u) << rep.checks[1].first_violation;
}

TEST(Remark9, TwoOneNine) {
  const auto v = in_remark9_region(2.0, 1.0, 9);
  EXPECT_EQ(v.in_remark9, kappa_scan_oracle(2.0, 1.0, 9));
  EXPECT_NEAR(v.witness.discriminant, v.witness.discriminant_factored,
              1e-10 * std::max(1.0, std::abs(v.witness.discriminant)));
}

TEST(Remark9, DiscriminantFactorisation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ab(0.0, 6.0);
  for (int t = 0; t < 2000; ++t) {
    const double a = ab(rng), b = ab(rng);
    const int d = 2 + t % 8;
    const auto w = classify(a, b, d).witness;
    ASSERT_NEAR(w.discriminant, w.discriminant_factored, 1e-9 * std::max(1.0, std::abs(w.discriminant)));
  }
}

class RasterOracle : public ::testing::TestWithParam<int> {};

// Closed-form sufficient region against the kappa grid, away from cells whose neighbours flip.
TEST_P(RasterOracle, AgreesAwayFromBoundaries) {
  const int d = GetParam();
  const std::size_t res = 200;
  const auto r = scan_region(d, 0.0, 6.0, 0.0, 6.0, res);
  std::size_t disagreements = 0, remark9_without_oracle = 0;
  for (std::size_t i = 0; i < res; ++i)
    for (std::size_t j = 0; j < res; ++j) {
      const auto& c = r.at(i, j);
      const bool oracle = kappa_scan_oracle(c.alpha, c.beta, d);
      if (c.in_remark9 && !oracle) ++remark9_without_oracle;
      if (c.in_remark9 == oracle) continue;
      bool boundary = false;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const long ii = long(i) + di, jj = long(j) + dj;
          if (ii < 0 || jj < 0 || ii >= long(res) || jj >= long(res)) continue;
          boundary |= r.at(ii, jj).in_remark9 != c.in_remark9;
        }
      if (!boundary) ++disagreements;
    }
  EXPECT_EQ(disagreements, 0u);
  EXPECT_EQ(remark9_without_oracle, 0u);
  EXPECT_LE(r.count_remark9(), r.count_Md());
}

INSTANTIATE_TEST_SUITE_P(Dims, RasterOracle, ::testing::Values(2, 3, 9));

// Reference counts from an independent numpy rasterization of the same formulas;
// a handful of points lie exactly on region boundaries and may round either way.
TEST(Raster, Counts600) {
  const auto r = scan_region(9, 0.0, 6.0, 0.0, 6.0, 600);
  EXPECT_NEAR(double(r.count_Md()), 82748.0, 10.0);
  EXPECT_NEAR(double(r.count_remark9()), 76133.0, 10.0);
  EXPECT_LT(r.count_remark9(), r.count_Md());
}

TEST(Raster, DeterministicCsv) {
  auto csv = [] {
    std::ostringstream os;
    io::write_raster_csv(os, scan_region(2, 0.0, 6.0, 0.0, 6.0, 40, 3));
    return os.str();
  };
  const auto a = csv();
  EXPECT_EQ(a, csv());
  EXPECT_EQ(a.rfind("# d=2 alpha=(0,6] beta=(0,6] resolution=40\nalpha,beta,in_Md,in_remark9\n", 0), 0u);
  EXPECT_THROW(scan_region(2, 0.0, 1.0, 0.0, 1.0, 1), DomainError);
}

TEST(Raster, ThreadCountIrrelevant) {
  const auto a = scan_region(3, 0.0, 6.0, 0.0, 6.0, 64, 1);
  const auto b = scan_region(3, 0.0, 6.0, 0.0, 6.0, 64, 5);
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    EXPECT_EQ(a.cells[k].in_Md, b.cells[k].in_Md);
    EXPECT_EQ(a.cells[k].in_remark9, b.cells[k].in_remark9);
  }
}
