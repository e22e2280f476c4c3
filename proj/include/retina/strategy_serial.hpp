#pragma once

#include "retina/alpha_map.hpp"
#include "retina/decision.hpp"
#include "retina/relative_entropy.hpp"
#include "retina/subjects.hpp"

namespace retina {

/// Fixed-length collective test: N rounds, accept iff wrong answers < N w.
class SerialPlan {
 public:
  /// Throws std::domain_error unless 0 < q < w < 1/2 and N >= 1.
  SerialPlan(double q, double w, int N);

  double q() const { return q_; }
  double w() const { return w_; }
  int N() const { return N_; }

  /// e^{-N H(w|q)}: bound on the honest subject failing.
  double false_negative_bound() const;
  /// e^{-N H(w|1/2)}: bound on a random responder passing.
  double false_positive_bound() const;

 private:
  double q_;
  double w_;
  int N_;
};

/// Balances the two Chernoff exponents,
///   ln(1/p_fn) H(w|1/2) = ln(1/p_fp) H(w|q),
/// and takes N as the ceiling of the larger round requirement at that w.
SerialPlan solve_w_N(double q, double p_fp, double p_fn);

struct SerialOutcome {
  Decision decision;
  int wrong_answers;
};

/// Runs plan.N() rounds; a round is wrong on see at a low spot or no-see at a high spot.
SerialOutcome run_serial(const SubjectModel& subject, const AlphaMap& map, const AlphaDistribution& dist,
                         const SerialPlan& plan, double intensity, Rng& rng);

}  // namespace retina
