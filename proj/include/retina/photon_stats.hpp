#pragma once

#include <Eigen/Core>

namespace retina {

/// Perception threshold: a flash is seen when at least K photons are detected.
struct PerceptionModel {
  int K = 6;

  void validate() const;
};

/// G_K(x) = P[Poisson(x) >= K], the regularized lower incomplete gamma
/// function of integer order K. Throws std::domain_error for K < 1 or x < 0.
double gk(int K, double x);

/// 1 - G_K(x), evaluated without cancellation in the upper tail.
double gk_complement(int K, double x);

/// The x >= 0 with G_K(x) = p, found by bracketed bisection.
/// Throws std::domain_error unless 0 < p < 1.
double gk_inverse(int K, double p);

/// Probability that a spot with transmission `alpha` sees a coherent pulse
/// carrying `intensity` photons on average.
double prob_see(double alpha, double intensity, int K);

/// Element-wise prob_see over a batch of transmission coefficients.
Eigen::ArrayXd prob_see(const Eigen::Ref<const Eigen::ArrayXd>& alpha, double intensity, int K);

/// G_K^{-1}(1 - q) / G_K^{-1}(q); decreasing from +inf to 1 on (0, 1/2).
double q_ratio(double q, int K);

struct ProtocolIntensity {
  double q;          ///< wrong-answer probability of the honest subject
  double intensity;  ///< mean photon number per pulse
};

/// Chooses the pulse intensity that makes the honest subject equally likely
/// to see a low spot and to miss a high spot:
///   G_K(alpha_low * I) = 1 - G_K(alpha_high * I) = q.
ProtocolIntensity solve_q_intensity(double alpha_low, double alpha_high, int K);

}  // namespace retina
