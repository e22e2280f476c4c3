#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace retina {

/// Relative entropy H(x|y) between Bernoulli(x) and Bernoulli(y), in nats.
/// Uses 0 log(0/y) = 0; a mass on an outcome y rules out is +infinity.
template <typename Scalar>
Scalar relative_entropy(Scalar x, Scalar y) {
  using std::log;
  if (!(x >= Scalar(0) && x <= Scalar(1)) || !(y >= Scalar(0) && y <= Scalar(1))) {
    throw std::domain_error("relative_entropy: arguments must lie in [0, 1]");
  }
  const auto term = [](Scalar a, Scalar b) -> Scalar {
    if (a == Scalar(0)) return Scalar(0);
    if (b == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    return a * log(a / b);
  };
  return term(x, y) + term(Scalar(1) - x, Scalar(1) - y);
}

}  // namespace retina
