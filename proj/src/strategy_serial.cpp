#include "retina/strategy_serial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "retina/errors.hpp"

namespace retina {

SerialPlan::SerialPlan(double q, double w, int N) : q_(q), w_(w), N_(N) {
  if (!(q > 0.0 && q < w && w < 0.5)) throw std::domain_error("serial plan needs 0 < q < w < 1/2");
  if (N < 1) throw std::domain_error("serial plan needs N >= 1");
}

double SerialPlan::false_negative_bound() const { return std::exp(-N_ * relative_entropy(w_, q_)); }

double SerialPlan::false_positive_bound() const { return std::exp(-N_ * relative_entropy(w_, 0.5)); }

SerialPlan solve_w_N(double q, double p_fp, double p_fn) {
  if (!(q > 0.0 && q < 0.5)) throw std::domain_error("solve_w_N: q must lie in (0, 1/2)");
  if (!(p_fp > 0.0 && p_fp < 1.0) || !(p_fn > 0.0 && p_fn < 1.0)) {
    throw std::domain_error("solve_w_N: error targets must lie in (0, 1)");
  }
  const double log_fp = std::log(1.0 / p_fp);
  const double log_fn = std::log(1.0 / p_fn);
  // Positive near w = q, negative near w = 1/2.
  const auto balance = [&](double w) {
    return log_fn * relative_entropy(w, 0.5) - log_fp * relative_entropy(w, q);
  };

  double lo = q;
  double hi = 0.5;
  if (!(balance(lo) > 0.0 && balance(hi) < 0.0)) throw InfeasibleError("solve_w_N: no root on (q, 1/2)");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (balance(mid) > 0.0 ? lo : hi) = mid;
  }
  const double w = 0.5 * (lo + hi);
  const double rounds = std::max(log_fn / relative_entropy(w, q), log_fp / relative_entropy(w, 0.5));
  return SerialPlan(q, w, static_cast<int>(std::ceil(rounds)));
}

SerialOutcome run_serial(const SubjectModel& subject, const AlphaMap& map, const AlphaDistribution& dist,
                         const SerialPlan& plan, double intensity, Rng& rng) {
  validate(dist, map);
  SessionSubject session(subject, rng);
  int wrong = 0;
  for (int i = 0; i < plan.N(); ++i) {
    const auto spot = draw_interrogation_spot(dist, rng);
    const bool seen = sees(session.respond(spot.alpha, emit_pulse(intensity, rng), rng));
    wrong += (spot.hidden_class == SpotClass::High) != seen;
  }
  const bool accept = wrong < plan.N() * plan.w();
  return {accept ? Decision::Accept : Decision::Reject, wrong};
}

}  // namespace retina
