#include "retina/strategy_naive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "retina/errors.hpp"
#include "retina/photon_stats.hpp"
#include "retina/relative_entropy.hpp"

namespace retina {

namespace {

constexpr int kMaxNu = 1'000'000;

void check_targets(double p_fp, double p_fn) {
  if (!(p_fp > 0.0 && p_fp < 1.0) || !(p_fn > 0.0 && p_fn < 1.0)) {
    throw ConfigError("error targets must lie in (0, 1)");
  }
}

void check_plan_inputs(int nu, int mu, double p_correct) {
  if (mu < 1) throw ConfigError("naive strategy needs mu >= 1 spots");
  if (nu < 1) throw ConfigError("naive strategy needs nu >= 1 interrogations per spot");
  if (!(p_correct > 0.0 && p_correct < 1.0)) throw ConfigError("p_correct must lie in (0, 1)");
}

}  // namespace

AcceptanceCounts acceptance_counts(double p_correct, int nu, double p_fp, int mu) {
  check_plan_inputs(nu, mu, p_correct);
  if (!(p_fp > 0.0 && p_fp < 1.0)) throw ConfigError("p_fp must lie in (0, 1)");

  const double width = std::pow(p_fp, 1.0 / mu);
  if (width >= 1.0) throw InfeasibleError("p_fp^(1/mu) >= 1: the 1-spot window would accept every count");
  const double slots = width * (nu + 1);
  if (slots < 1.0) {
    throw InfeasibleError("p_fp^(1/mu) * (nu + 1) < 1: no count fits inside the acceptance window");
  }

  // gap = n_high - n_low - 1 accepted counts, centred on nu * p_correct.
  const int gap = static_cast<int>(std::floor(slots));
  const double centre = nu * p_correct;
  int n_low = static_cast<int>(std::floor(centre - 0.5 * (gap + 1) + 0.5));
  int n_high = n_low + gap + 1;
  bool clipped = false;
  if (n_low < 0) {
    n_low = 0;
    clipped = true;
  }
  if (n_high > nu) {
    n_high = nu;
    clipped = true;
  }
  return {n_low, n_high, clipped};
}

double impostor_spot_pass_probability(int nu, const AcceptanceCounts& counts) {
  return std::max(0, counts.n_high - counts.n_low - 1) / static_cast<double>(nu + 1);
}

double chernoff_tail_lower_bound(int nu, double p_edge, double p_correct) {
  return std::exp(-nu * relative_entropy(p_edge, p_correct)) /
         std::sqrt(8.0 * nu * p_edge * (1.0 - p_edge));
}

double naive_failure_requirement(double p_correct, int nu, int mu, const AcceptanceCounts& counts) {
  const double p_low = static_cast<double>(counts.n_low) / nu;
  const double p_high = static_cast<double>(counts.n_high) / nu;
  const double spot_failure =
      (std::exp(-nu * relative_entropy(p_high, p_correct)) + std::exp(-nu * relative_entropy(p_low, p_correct))) /
      std::sqrt(2.0 * nu);
  if (spot_failure >= 1.0) return 1.0;
  // 1 - (1 - w)^mu without cancellation for small w.
  return -std::expm1(mu * std::log1p(-spot_failure));
}

int required_nu(double p_fp, double p_fn, int mu, double p_correct) {
  check_targets(p_fp, p_fn);
  check_plan_inputs(1, mu, p_correct);
  if (std::pow(p_fp, 1.0 / mu) >= 1.0) {
    throw InfeasibleError("p_fp^(1/mu) >= 1: the plan would be vacuous");
  }
  for (int nu = 1; nu <= kMaxNu; ++nu) {
    if (std::pow(p_fp, 1.0 / mu) * (nu + 1) < 1.0) continue;
    const auto counts = acceptance_counts(p_correct, nu, p_fp, mu);
    if (naive_failure_requirement(p_correct, nu, mu, counts) <= p_fn) return nu;
  }
  throw InfeasibleError("no nu <= 1e6 meets the naive strategy targets");
}

NaiveTestPlan plan_naive(double p_fp, double p_fn, int mu, double p_correct) {
  const int nu = required_nu(p_fp, p_fn, mu, p_correct);
  return {nu, mu, p_correct, p_fp, p_fn, acceptance_counts(p_correct, nu, p_fp, mu)};
}

NaiveOutcome run_naive(const SubjectModel& subject, const AlphaMap& map, const NaiveTestPlan& plan, int K,
                       Rng& rng) {
  check_plan_inputs(plan.nu, plan.mu, plan.p_correct);
  if (plan.mu > map.size()) {
    throw ConfigError("naive strategy needs " + std::to_string(plan.mu) + " spots, map has " +
                      std::to_string(map.size()));
  }

  // Partial Fisher-Yates: mu distinct spots.
  std::vector<Eigen::Index> spots(static_cast<std::size_t>(map.size()));
  std::iota(spots.begin(), spots.end(), Eigen::Index{0});
  for (int i = 0; i < plan.mu; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(map.size() - i)));
    std::swap(spots[i], spots[j]);
  }
  spots.resize(static_cast<std::size_t>(plan.mu));

  const double detected_mean = gk_inverse(K, plan.p_correct);
  NaiveOutcome outcome{Decision::Accept, {}, spots};
  outcome.see_counts.reserve(spots.size());
  for (const auto spot : spots) {
    const double alpha = map.at(spot);
    const double intensity = detected_mean / alpha;
    SessionSubject session(subject, rng);
    int seen = 0;
    for (int j = 0; j < plan.nu; ++j) {
      seen += sees(session.respond(alpha, emit_pulse(intensity, rng), rng));
    }
    outcome.see_counts.push_back(seen);
    if (!(plan.counts.n_low < seen && seen < plan.counts.n_high)) outcome.decision = Decision::Reject;
  }
  return outcome;
}

}  // namespace retina
