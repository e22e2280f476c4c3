#pragma once

// Test-side reference computations. None of these call into the library;
// they are deliberately different routes to the same numbers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Real = long double;

// P[Poisson(x) >= K] by direct summation of Poisson terms. Below the mode the
// upper tail is summed outright; above it the complement is subtracted.
inline double poisson_tail(int K, double xd) {
  const Real x = xd;
  if (x == 0) return 0.0;
  const Real log_p0 = -x;
  auto term = [&](int j) { return std::exp(log_p0 + j * std::log(x) - std::lgamma(static_cast<Real>(j) + 1)); };
  if (x < K) {
    Real sum = 0;
    for (int j = K;; ++j) {
      const Real t = term(j);
      sum += t;
      if (t < sum * 1e-22L && j > x) break;
    }
    return static_cast<double>(sum);
  }
  Real lower = 0;
  for (int j = 0; j < K; ++j) lower += term(j);
  return static_cast<double>(1 - lower);
}

// P[Poisson(x) < K], summed directly.
inline double poisson_head(int K, double xd) {
  const Real x = xd;
  Real sum = 0;
  for (int j = 0; j < K; ++j) sum += std::exp(-x + j * std::log(x) - std::lgamma(static_cast<Real>(j) + 1));
  return static_cast<double>(sum);
}

inline Real simpson(const std::function<Real(Real)>& f, Real a, Real b, Real fa, Real fm, Real fb, Real whole,
                    Real tol, int depth) {
  const Real m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const Real flm = f(lm), frm = f(rm);
  const Real left = (m - a) / 6 * (fa + 4 * flm + fm);
  const Real right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline Real integrate(const std::function<Real(Real)>& f, Real a, Real b, Real tol = 1e-17L) {
  const Real fa = f(a), fb = f(b), fm = f((a + b) / 2);
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 60);
}

// The Erlang CDF as an integral of its density, t^{K-1} e^{-t} / (K-1)!.
inline double gamma_cdf_quadrature(int K, double x) {
  if (x == 0) return 0.0;
  const Real lg = std::lgamma(static_cast<Real>(K));
  auto density = [&](Real t) -> Real {
    if (t <= 0) return K == 1 ? 1 : 0;
    return std::exp((K - 1) * std::log(t) - t - lg);
  };
  // Integrate over whichever side of the mode is shorter, then complement.
  if (x <= K + 20) {
    Real sum = 0;
    const int panels = 16;
    for (int i = 0; i < panels; ++i) sum += integrate(density, x * i / panels, x * (i + 1) / panels);
    return static_cast<double>(sum);
  }
  Real upper = 0;
  const Real hi = x + 60 + 10 * std::sqrt(static_cast<Real>(K));
  for (int i = 0; i < 16; ++i) upper += integrate(density, x + (hi - x) * i / 16, x + (hi - x) * (i + 1) / 16);
  return static_cast<double>(1 - upper);
}

inline double kl(double x, double y) {
  auto part = [](Real a, Real b) -> Real { return a == 0 ? 0 : a * std::log(a / b); };
  return static_cast<double>(part(x, y) + part(1 - static_cast<Real>(x), 1 - static_cast<Real>(y)));
}

inline double binomial_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return 0.0;
  const Real lc = std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
  return static_cast<double>(std::exp(lc + k * std::log(static_cast<Real>(p)) + (n - k) * std::log1p(-static_cast<Real>(p))));
}

// P[Bin(n, p) <= k].
inline double binomial_cdf(int n, int k, double p) {
  Real s = 0;
  for (int j = 0; j <= std::min(k, n); ++j) s += binomial_pmf(n, j, p);
  return static_cast<double>(s);
}

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
  double statistic;
  double p_value;
};

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  if (lambda < 0.2) return {d, 1.0};
  double q = 0;
  for (int k = 1; k <= 100; ++k) q += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lambda * lambda);
  return {d, std::clamp(q, 0.0, 1.0)};
}

// Bisection on a monotone function: the x in [lo, hi] with f(x) = target.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi) {
  const bool increasing = f(hi) > f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < target) == increasing) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
