#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "divsim/rng.hpp"
#include "divsim/stats.hpp"
#include "oracles.hpp"

using namespace divsim;
using namespace divsim::stats;

TEST(StudentT, Symmetry) {
  for (double df : {1.0, 2.0, 5.0, 30.0, 375.0}) {
    EXPECT_DOUBLE_EQ(student_t_sf(0.0, df), 0.5);
    for (double t : {0.1, 0.7, 1.5, 3.0, 12.0}) EXPECT_NEAR(student_t_sf(t, df) + student_t_sf(-t, df), 1.0, 1e-10);
  }
}

TEST(StudentT, Limits) {
  EXPECT_EQ(student_t_sf(INFINITY, 4), 0.0);
  EXPECT_EQ(student_t_sf(-INFINITY, 4), 1.0);
  EXPECT_LT(student_t_sf(1e6, 10), 1e-30);
  EXPECT_THROW(student_t_sf(1.0, 0.5), std::invalid_argument);
}

TEST(StudentT, KnownValue) {
  // Quadrature of the density, cross-checked with scipy: 0.036694017385370196.
  EXPECT_NEAR(oracle::t_sf_quadrature(2.0, 10), 0.036694017385370196, 1e-10);
  EXPECT_NEAR(student_t_sf(2.0, 10), 0.036694017385370196, 1e-10);
  // Cauchy closed form.
  EXPECT_NEAR(student_t_sf(1.0, 1), 0.25, 1e-12);
}

TEST(StudentT, MatchesQuadratureOracle) {
  for (double df : {1.0, 3.0, 10.0, 60.0, 375.0})
    for (double t : {-4.0, -1.2, 0.3, 1.0, 2.5, 5.0})
      EXPECT_NEAR(student_t_sf(t, df), oracle::t_sf_quadrature(t, df), 1e-8) << t << " " << df;
}

TEST(FDist, Limits) {
  EXPECT_EQ(f_sf(0.0, 2, 10), 1.0);
  EXPECT_EQ(f_sf(INFINITY, 2, 10), 0.0);
  EXPECT_LT(f_sf(1e8, 2, 375), 1e-30);
  EXPECT_THROW(f_sf(1.0, 0, 10), std::invalid_argument);
  EXPECT_THROW(f_sf(-1.0, 2, 10), std::invalid_argument);
}

TEST(FDist, KnownValue) {
  // scipy: 0.05098351331751034
  EXPECT_NEAR(oracle::f_sf_quadrature(3.0, 2, 375), 0.05098351331751034, 1e-9);
  EXPECT_NEAR(f_sf(3.0, 2, 375), oracle::f_sf_quadrature(3.0, 2, 375), 1e-6);
  // df1 = 2 has a closed form for df2 -> F tail: (1 + 2F/df2)^(-df2/2).
  EXPECT_NEAR(f_sf(3.0, 2, 375), std::pow(1.0 + 2.0 * 3.0 / 375.0, -375.0 / 2.0), 1e-12);
}

TEST(FDist, MatchesQuadratureOracle) {
  for (double d1 : {1.0, 2.0, 5.0})
    for (double d2 : {3.0, 20.0, 375.0})
      for (double f : {0.2, 1.0, 2.7, 8.0}) EXPECT_NEAR(f_sf(f, d1, d2), oracle::f_sf_quadrature(f, d1, d2), 1e-8);
}

TEST(RegularizedBeta, SymmetryIdentity) {
  for (double a : {0.5, 2.0, 7.5})
    for (double b : {0.5, 1.0, 30.0})
      for (double x : {0.01, 0.3, 0.8}) EXPECT_NEAR(regularized_beta(a, b, x) + regularized_beta(b, a, 1 - x), 1.0, 1e-12);
}

TEST(Ols2, ExactFit) {
  std::vector<double> x1, x2, y;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    x1.push_back(rng.uniform01());
    x2.push_back(rng.uniform01());
    y.push_back(3.0 + 2.0 * x1.back());
  }
  auto r = ols2(y, x1, x2);
  EXPECT_NEAR(r.coef[0].estimate, 3.0, 1e-9);
  EXPECT_NEAR(r.coef[1].estimate, 2.0, 1e-9);
  EXPECT_NEAR(r.coef[2].estimate, 0.0, 1e-9);
  EXPECT_EQ(r.coef[0].p, 0.0);
  EXPECT_EQ(r.coef[1].p, 0.0);
  EXPECT_EQ(r.coef[2].p, 1.0);
  EXPECT_EQ(r.residual_se, 0.0);
  EXPECT_EQ(r.df, 17);
}

TEST(Ols2, ConstantResponse) {
  std::vector<double> x1{0, 1, 2, 3, 4, 5}, x2{1, 0, 1, 0, 3, 1}, y(6, 4.0);
  auto r = ols2(y, x1, x2);
  EXPECT_NEAR(r.coef[1].estimate, 0.0, 1e-12);
  EXPECT_NEAR(r.coef[2].estimate, 0.0, 1e-12);
  EXPECT_LE(r.adj_r2, 0.0);
}

TEST(Ols2, RecoversSyntheticCoefficients) {
  Rng rng(2024);
  int covered = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> x1, x2, y;
    for (int i = 0; i < 378; ++i) {
      x1.push_back(rng.uniform01());
      x2.push_back(rng.uniform01());
      y.push_back(1.0 + x1.back() - x2.back() + rng.normal(0.0, 0.1));
    }
    auto r = ols2(y, x1, x2);
    EXPECT_EQ(r.df, 375);
    const double truth[3] = {1.0, 1.0, -1.0};
    bool all = true;
    for (int k = 0; k < 3; ++k) all = all && std::abs(r.coef[k].estimate - truth[k]) <= 3.0 * r.coef[k].se;
    covered += all;
  }
  // 3-SE coverage per trial is 0.9973^3 ~ 0.992.
  EXPECT_GE(covered, 97);
}

TEST(Ols2, ResidualsOrthogonalToDesign) {
  Rng rng(5);
  std::vector<double> x1, x2, y;
  for (int i = 0; i < 200; ++i) {
    x1.push_back(10 * rng.uniform01());
    x2.push_back(rng.normal());
    y.push_back(std::sin(x1.back()) + x2.back() * x2.back() + rng.normal());
  }
  auto r = ols2(y, x1, x2);
  double d0 = 0, d1 = 0, d2 = 0, scale = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    d0 += r.residuals[i];
    d1 += r.residuals[i] * x1[i];
    d2 += r.residuals[i] * x2[i];
    scale += std::abs(r.residuals[i]) * (1 + std::abs(x1[i]) + std::abs(x2[i]));
  }
  EXPECT_LT(std::abs(d0) / scale, 1e-6);
  EXPECT_LT(std::abs(d1) / scale, 1e-6);
  EXPECT_LT(std::abs(d2) / scale, 1e-6);
}

TEST(Ols2, AffineResponseReproducedExactly) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const double b0 = rng.normal(0, 50), b1 = rng.normal(0, 50), b2 = rng.normal(0, 50);
    std::vector<double> x1, x2, y;
    for (int i = 0; i < 30; ++i) {
      x1.push_back(rng.uniform01());
      x2.push_back(rng.uniform01());
      y.push_back(b0 + b1 * x1.back() + b2 * x2.back());
    }
    auto r = ols2(y, x1, x2);
    EXPECT_NEAR(r.coef[0].estimate, b0, 1e-8 * std::abs(b0));
    EXPECT_NEAR(r.coef[1].estimate, b1, 1e-8 * std::abs(b1));
    EXPECT_NEAR(r.coef[2].estimate, b2, 1e-8 * std::abs(b2));
  }
}

TEST(Ols2, RankDeficiencyRejected) {
  std::vector<double> x1{0, 1, 2, 3, 4}, y{1, 2, 3, 5, 4};
  std::vector<double> x2 = x1;
  EXPECT_THROW(ols2(y, x1, x2), std::invalid_argument);
  std::vector<double> flat(5, 2.0);
  EXPECT_THROW(ols2(y, x1, flat), std::invalid_argument);
  EXPECT_THROW(ols2(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}, std::vector<double>{3, 1, 2}),
               std::invalid_argument);
}

TEST(Ols2, ModelStatisticsConsistent) {
  Rng rng(7);
  std::vector<double> x1, x2, y;
  for (int i = 0; i < 100; ++i) {
    x1.push_back(rng.uniform01());
    x2.push_back(rng.uniform01());
    y.push_back(2.0 * x1.back() + rng.normal(0.0, 0.5));
  }
  auto r = ols2(y, x1, x2);
  EXPECT_NEAR(r.f, (r.r2 / 2.0) / ((1.0 - r.r2) / r.df), 1e-9);
  EXPECT_NEAR(r.f_p, f_sf(r.f, 2, r.df), 1e-15);
  EXPECT_NEAR(r.adj_r2, 1.0 - (1.0 - r.r2) * 99.0 / 97.0, 1e-12);
  for (const auto& c : r.coef) EXPECT_NEAR(c.t, c.estimate / c.se, 1e-12);
  EXPECT_LT(r.coef[1].p, 1e-6);
}

TEST(Pearson, PerfectCorrelation) {
  std::vector<double> x{1, 2, 3, 4, 5, 7}, neg;
  for (double v : x) neg.push_back(-v);
  EXPECT_NEAR(pearson(x, x).r, 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, neg).r, -1.0, 1e-15);
  EXPECT_EQ(pearson(x, x).df, 4);
}

TEST(Pearson, IndependentUniforms) {
  Rng rng(8);
  int small = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> x(1000), y(1000);
    for (auto& v : x) v = rng.uniform01();
    for (auto& v : y) v = rng.uniform01();
    small += std::abs(pearson(x, y).r) < 0.1;
  }
  EXPECT_GE(small, 990);
}

TEST(Pearson, AffineInvariance) {
  Rng rng(9);
  std::vector<double> x(50), y(50);
  for (auto& v : x) v = rng.normal();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + rng.normal();
  const double r = pearson(x, y).r;
  std::vector<double> up, down;
  for (double v : y) {
    up.push_back(3.0 + 2.5 * v);
    down.push_back(-1.0 - 0.5 * v);
  }
  EXPECT_NEAR(pearson(x, up).r, r, 1e-12);
  EXPECT_NEAR(pearson(x, down).r, -r, 1e-12);
}

TEST(Pearson, PValueFromT) {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8}, y{2, 1, 4, 3, 6, 8, 5, 7};
  const auto c = pearson(x, y);
  const double t = c.r * std::sqrt(c.df / (1 - c.r * c.r));
  EXPECT_NEAR(c.p, 2.0 * oracle::t_sf_quadrature(t, c.df), 1e-9);
}

TEST(Pearson, ConstantInputRejected) {
  std::vector<double> x{1, 2, 3}, c{4, 4, 4};
  EXPECT_THROW(pearson(x, c), std::invalid_argument);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Spearman, MonotoneAndTies) {
  std::vector<double> x{1, 2, 3, 4, 5}, y{1, 4, 9, 16, 25};
  EXPECT_NEAR(spearman(x, y).r, 1.0, 1e-15);
  EXPECT_EQ(ranks(std::vector<double>{3, 1, 3, 2}), (std::vector<double>{3.5, 1, 3.5, 2}));
}
