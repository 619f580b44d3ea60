#pragma once

// Ordinary least squares with two regressors, Pearson and Spearman
// correlation, and the Student-t / F tail probabilities they need.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace divsim::stats {

namespace detail {

// Continued fraction for the incomplete beta function, modified Lentz.
inline double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("beta_cf: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double regularized_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("regularized_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("regularized_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
  return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// P(T > t) for Student's t with df degrees of freedom.
inline double student_t_sf(double t, double df) {
  if (!(df >= 1.0)) throw std::invalid_argument("student_t_sf: df must be >= 1");
  if (std::isnan(t)) throw std::invalid_argument("student_t_sf: t is NaN");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double tail = 0.5 * regularized_beta(0.5 * df, 0.5, df / (df + t * t));
  return t >= 0.0 ? tail : 1.0 - tail;
}

/// Two-sided p-value for a t statistic.
inline double student_t_two_sided(double t, double df) { return std::min(1.0, 2.0 * student_t_sf(std::abs(t), df)); }

/// P(F > f) for the F distribution with (df1, df2) degrees of freedom.
inline double f_sf(double f, double df1, double df2) {
  if (!(df1 >= 1.0 && df2 >= 1.0)) throw std::invalid_argument("f_sf: degrees of freedom must be >= 1");
  if (!(f >= 0.0)) throw std::invalid_argument("f_sf: F must be >= 0");
  if (std::isinf(f)) return 0.0;
  if (f == 0.0) return 1.0;
  return regularized_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
};

struct RegressionReport {
  std::array<Coefficient, 3> coef;  // intercept, x1, x2
  int n = 0;
  int df = 0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double f = 0.0;
  double f_p = 1.0;
  double residual_se = 0.0;
  std::vector<double> residuals;
};

/// y = b0 + b1 x1 + b2 x2 by Householder QR.
inline RegressionReport ols2(std::span<const double> y, std::span<const double> x1, std::span<const double> x2,
                             const std::array<std::string, 3>& names = {"Intercept", "x1", "x2"}) {
  constexpr std::size_t p = 3;
  const std::size_t n = y.size();
  if (x1.size() != n || x2.size() != n) throw std::invalid_argument("ols2: vectors differ in length");
  if (n < 4) throw std::invalid_argument("ols2: need at least 4 observations");

  // Column-major design copy; reduced in place to R.
  std::vector<double> a(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = 1.0;
    a[n + i] = x1[i];
    a[2 * n + i] = x2[i];
  }
  std::vector<double> qty(y.begin(), y.end());
  std::array<double, p> col_norm{};
  for (std::size_t k = 0; k < p; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[k * n + i] * a[k * n + i];
    col_norm[k] = std::sqrt(s);
  }

  std::vector<double> v(n);
  for (std::size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += a[k * n + i] * a[k * n + i];
    norm = std::sqrt(norm);
    if (norm <= 1e-10 * std::max(col_norm[k], 1e-300))
      throw std::invalid_argument("ols2: design matrix is rank deficient (column " + names[k] + ")");
    const double alpha = a[k * n + k] > 0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      v[i] = a[k * n + i] - (i == k ? alpha : 0.0);
      vnorm2 += v[i] * v[i];
    }
    auto reflect = [&](double* col) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * col[i];
      const double scale = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < n; ++i) col[i] -= scale * v[i];
    };
    for (std::size_t j = k; j < p; ++j) reflect(&a[j * n]);
    reflect(qty.data());
  }

  // R is the upper triangle of a; solve R b = (Q^T y)[0:p].
  auto r = [&](std::size_t i, std::size_t j) { return a[j * n + i]; };
  std::array<double, p> beta{};
  for (std::size_t i = p; i-- > 0;) {
    double s = qty[i];
    for (std::size_t j = i + 1; j < p; ++j) s -= r(i, j) * beta[j];
    beta[i] = s / r(i, i);
  }
  // (X^T X)^-1 = R^-1 R^-T.
  std::array<std::array<double, p>, p> rinv{};
  for (std::size_t c = 0; c < p; ++c)
    for (std::size_t i = p; i-- > 0;) {
      double s = (i == c) ? 1.0 : 0.0;
      for (std::size_t j = i + 1; j < p; ++j) s -= r(i, j) * rinv[j][c];
      rinv[i][c] = s / r(i, i);
    }

  RegressionReport rep;
  rep.n = static_cast<int>(n);
  rep.df = static_cast<int>(n - p);
  rep.residuals.resize(n);
  double rss = 0.0, ybar = 0.0, yss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ybar += y[i];
  ybar /= static_cast<double>(n);
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (beta[0] + beta[1] * x1[i] + beta[2] * x2[i]);
    rep.residuals[i] = e;
    rss += e * e;
    tss += (y[i] - ybar) * (y[i] - ybar);
    yss += y[i] * y[i];
  }
  const bool exact = rss <= 1e-24 * std::max(yss, 1e-300);
  const double sigma2 = exact ? 0.0 : rss / rep.df;
  rep.residual_se = std::sqrt(sigma2);
  const double beta_scale = std::max({std::abs(beta[0]), std::abs(beta[1]), std::abs(beta[2]), 1.0});

  for (std::size_t k = 0; k < p; ++k) {
    double var = 0.0;
    for (std::size_t j = 0; j < p; ++j) var += rinv[k][j] * rinv[k][j];
    Coefficient& c = rep.coef[k];
    c.name = names[k];
    c.estimate = beta[k];
    c.se = std::sqrt(sigma2 * var);
    if (exact) {
      const bool nonzero = std::abs(beta[k]) > 1e-9 * beta_scale;
      c.t = nonzero ? std::copysign(std::numeric_limits<double>::infinity(), beta[k]) : 0.0;
      c.p = nonzero ? 0.0 : 1.0;
    } else {
      c.t = beta[k] / c.se;
      c.p = student_t_two_sided(c.t, rep.df);
    }
  }

  if (tss > 0.0) {
    rep.r2 = exact ? 1.0 : 1.0 - rss / tss;
  } else {
    rep.r2 = 0.0;
  }
  rep.adj_r2 = 1.0 - (1.0 - rep.r2) * (static_cast<double>(n) - 1.0) / rep.df;
  if (tss <= 0.0) {
    rep.f = 0.0;
    rep.f_p = 1.0;
  } else if (exact) {
    rep.f = std::numeric_limits<double>::infinity();
    rep.f_p = 0.0;
  } else {
    rep.f = (rep.r2 / (p - 1)) / ((1.0 - rep.r2) / rep.df);
    rep.f_p = f_sf(std::max(rep.f, 0.0), p - 1, rep.df);
  }
  return rep;
}

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-sided
  int df = 0;
};

inline Correlation pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw std::invalid_argument("pearson: vectors differ in length");
  if (n < 3) throw std::invalid_argument("pearson: need at least 3 observations");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw std::invalid_argument("pearson: constant input");
  Correlation c;
  c.df = static_cast<int>(n) - 2;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double one_minus = 1.0 - c.r * c.r;
  if (one_minus <= 0.0) {
    c.p = 0.0;
  } else {
    c.p = student_t_two_sided(c.r * std::sqrt(c.df / one_minus), c.df);
  }
  return c;
}

/// Ranks starting at 1; ties share their average rank.
inline std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[idx[k]] = avg;
    i = j + 1;
  }
  return out;
}

inline Correlation spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x), ry = ranks(y);
  return pearson(rx, ry);
}

}  // namespace divsim::stats
