#include "retina/photon_stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "retina/errors.hpp"

namespace retina {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kEpsilon = 1e-17;

void check_order(int K) {
  if (K < 1) throw std::domain_error("perception threshold K must be >= 1, got " + std::to_string(K));
}

void check_argument(double x) {
  if (!(x >= 0.0)) throw std::domain_error("G_K argument must be >= 0");
}

// e^{-x} x^a / Gamma(a), the common prefactor of the series and the fraction.
double prefactor(double a, double x) { return std::exp(-x + a * std::log(x) - std::lgamma(a)); }

// P(a, x) by its power series; converges quickly for x < a + 1.
double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double denom = a;
  for (int n = 0; n < kMaxTerms; ++n) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * prefactor(a, x);
}

// Q(a, x) by the modified Lentz continued fraction; used for x >= a + 1.
double upper_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return prefactor(a, x) * h;
}

}  // namespace

void PerceptionModel::validate() const { check_order(K); }

double gk(int K, double x) {
  check_order(K);
  check_argument(x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double a = K;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_fraction(a, x);
}

double gk_complement(int K, double x) {
  check_order(K);
  check_argument(x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double a = K;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_fraction(a, x);
}

double gk_inverse(int K, double p) {
  check_order(K);
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("gk_inverse: p must lie in (0, 1)");

  // Work on whichever tail is not rounded away near 0 or 1.
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;
  const auto below_target = [&](double x) {
    return upper ? gk_complement(K, x) > target : gk(K, x) < target;
  };

  double lo = 0.0;
  double hi = 4.0 * K + 10.0;
  while (below_target(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below_target(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double prob_see(double alpha, double intensity, int K) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("prob_see: alpha must lie in [0, 1]");
  if (!(intensity >= 0.0)) throw std::domain_error("prob_see: intensity must be >= 0");
  return gk(K, alpha * intensity);
}

Eigen::ArrayXd prob_see(const Eigen::Ref<const Eigen::ArrayXd>& alpha, double intensity, int K) {
  return alpha.unaryExpr([&](double a) { return prob_see(a, intensity, K); });
}

double q_ratio(double q, int K) {
  if (!(q > 0.0 && q < 0.5)) throw std::domain_error("q_ratio: q must lie in (0, 1/2)");
  return gk_inverse(K, 1.0 - q) / gk_inverse(K, q);
}

ProtocolIntensity solve_q_intensity(double alpha_low, double alpha_high, int K) {
  check_order(K);
  if (!(alpha_low > 0.0) || !(alpha_high <= 1.0)) {
    throw std::domain_error("solve_q_intensity: need 0 < alpha_low < alpha_high <= 1");
  }
  if (!(alpha_high > alpha_low)) {
    throw std::domain_error("solve_q_intensity: alpha_high must exceed alpha_low");
  }
  const double target = alpha_high / alpha_low;

  double lo = 1e-12;
  double hi = 0.5 - 1e-12;
  if (!(q_ratio(lo, K) > target) || !(q_ratio(hi, K) < target)) {
    throw InfeasibleError("solve_q_intensity: ratio alpha_high/alpha_low is not bracketed on (0, 1/2)");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (q_ratio(mid, K) > target ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);
  return {q, gk_inverse(K, q) / alpha_low};
}

}  // namespace retina
