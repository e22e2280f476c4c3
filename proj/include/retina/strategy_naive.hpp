#pragma once

#include <vector>

#include "retina/alpha_map.hpp"
#include "retina/decision.hpp"
#include "retina/subjects.hpp"

namespace retina {

/// Integer acceptance window of the 1-spot test: pass iff n_low < sees < n_high.
struct AcceptanceCounts {
  int n_low;
  int n_high;
  bool clipped;  ///< the symmetric window had to be cut at 0 or nu
};

/// Widest window centred on nu * p_correct whose pass probability for a
/// UniformP impostor, (n_high - n_low - 1) / (nu + 1), stays below p_fp^(1/mu).
///
/// Throws InfeasibleError when p_fp^(1/mu) >= 1 (the window would accept
/// everything) or when p_fp^(1/mu) * (nu + 1) < 1 (no count fits).
AcceptanceCounts acceptance_counts(double p_correct, int nu, double p_fp, int mu);

/// Exact probability that a UniformP impostor passes one spot.
double impostor_spot_pass_probability(int nu, const AcceptanceCounts& counts);

/// Left-hand side of the false-negative requirement,
///   1 - [1 - (e^{-nu H(p_R|p_C)} + e^{-nu H(p_L|p_C)}) / sqrt(2 nu)]^mu.
double naive_failure_requirement(double p_correct, int nu, int mu, const AcceptanceCounts& counts);

/// Chernoff-type lower bound on a binomial tail beyond p_edge:
///   e^{-nu H(p_edge|p_correct)} / sqrt(8 nu p_edge (1 - p_edge)).
double chernoff_tail_lower_bound(int nu, double p_edge, double p_correct);

/// Smallest nu <= 1e6 meeting both targets; InfeasibleError otherwise.
int required_nu(double p_fp, double p_fn, int mu, double p_correct);

struct NaiveTestPlan {
  int nu;
  int mu;
  double p_correct;
  double p_fp;
  double p_fn;
  AcceptanceCounts counts;

  double p_low() const { return static_cast<double>(counts.n_low) / nu; }
  double p_high() const { return static_cast<double>(counts.n_high) / nu; }
  int interrogations() const { return nu * mu; }
};

/// Sizes the plan; ConfigError for mu < 1 or p_correct outside (0, 1).
NaiveTestPlan plan_naive(double p_fp, double p_fn, int mu, double p_correct = 0.5);

struct NaiveOutcome {
  Decision decision;
  std::vector<int> see_counts;  ///< one entry per interrogated spot, in order
  std::vector<Eigen::Index> spots;
};

/// Interrogates mu distinct map spots nu times each. Each spot gets its own
/// intensity so that its see-probability equals the plan's p_correct, and
/// every spot must pass for acceptance. Impostors start a fresh session per
/// spot (a UniformP impostor redraws p).
NaiveOutcome run_naive(const SubjectModel& subject, const AlphaMap& map, const NaiveTestPlan& plan, int K,
                       Rng& rng);

}  // namespace retina
