#include "retina/strategy_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "retina/errors.hpp"
#include "retina/photon_stats.hpp"
#include "retina/relative_entropy.hpp"

namespace retina {

namespace {

template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson quadrature of f over [a, b].
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-13) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

double band_mean_see(const Interval& band, double intensity, int K) {
  if (!(band.hi > band.lo)) return prob_see(band.lo, intensity, K);
  const auto see = [&](double a) { return prob_see(a, intensity, K); };
  return integrate(see, band.lo, band.hi) / (band.hi - band.lo);
}

void accumulate(double x, std::int64_t& count, double& mean, double& m2) {
  ++count;
  const double delta = x - mean;
  mean += delta / count;
  m2 += delta * (x - mean);
}

double std_error(std::int64_t count, double m2) {
  return count > 1 ? std::sqrt(m2 / (count - 1) / count) : std::numeric_limits<double>::infinity();
}

// G_K(alpha I) for the last two alphas seen; PointPair walks only ever use two.
class SeeCache {
 public:
  SeeCache(double intensity, int K) : intensity_(intensity), K_(K) {}

  std::pair<double, double> operator()(double alpha) {
    for (auto& e : entries_) {
      if (e.alpha == alpha) return {e.see, e.miss};
    }
    const double x = alpha * intensity_;
    entries_[slot_] = {alpha, gk(K_, x), gk_complement(K_, x)};
    const auto& e = entries_[slot_];
    slot_ ^= 1;
    return {e.see, e.miss};
  }

 private:
  struct Entry {
    double alpha = -1.0;
    double see = 0.0;
    double miss = 0.0;
  };
  double intensity_;
  int K_;
  Entry entries_[2];
  int slot_ = 0;
};

double increment_from(double see, double miss, Response r, double p) {
  const double z_alice = sees(r) ? see : miss;
  const double z_eve = sees(r) ? p : 1.0 - p;
  if (z_alice <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(z_alice / z_eve);
}

}  // namespace

double prior_p(const AlphaDistribution& dist, double intensity, int K) {
  validate(dist);
  if (const auto* pp = std::get_if<PointPair>(&dist)) {
    return 0.5 * (prob_see(pp->low, intensity, K) + prob_see(pp->high, intensity, K));
  }
  const auto& ub = std::get<UniformBands>(dist);
  return 0.5 * (band_mean_see(ub.low, intensity, K) + band_mean_see(ub.high, intensity, K));
}

double wrong_answer_probability(const AlphaDistribution& dist, double intensity, int K) {
  validate(dist);
  const auto edges = class_edges(dist);
  return std::max(prob_see(edges.low_max, intensity, K), gk_complement(K, edges.high_min * intensity));
}

double q_min(double alpha_min, double alpha_max, double intensity, int K) {
  return std::min(prob_see(alpha_min, intensity, K), gk_complement(K, alpha_max * intensity));
}

SequentialPlan SequentialPlan::make(const AlphaDistribution& sampled, double intensity, int K, double p_fp,
                                    double p_fn, const std::optional<AlphaDistribution>& assumed) {
  if (!(p_fp > 0.0 && p_fp < 1.0) || !(p_fn > 0.0 && p_fn < 1.0)) {
    throw ConfigError("error targets must lie in (0, 1)");
  }
  if (!(intensity > 0.0)) throw ConfigError("intensity must be positive");
  validate(sampled);
  const double q = wrong_answer_probability(sampled, intensity, K);
  if (!(q < 0.5)) throw ConfigError("honest subject has no advantage: wrong-answer probability >= 1/2");
  const double p = prior_p(assumed.value_or(sampled), intensity, K);
  if (!(p > 0.5 * (1.0 - q) && p < 0.5 * (1.0 + q))) {
    throw ConfigError("designer p lies outside ((1 - q)/2, (1 + q)/2)");
  }
  return {p, std::log(p_fn), -std::log(p_fp), intensity, K, sampled, q};
}

double log_odds_increment(double alpha, Response response, const SequentialPlan& plan) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
  const double x = alpha * plan.intensity;
  return increment_from(gk(plan.K, x), gk_complement(plan.K, x), response, plan.p);
}

OddsState update_odds(OddsState state, double alpha, Response response, const SequentialPlan& plan) {
  const double inc = log_odds_increment(alpha, response, plan);
  state.log_odds += inc;
  state.n += 1;
  if (std::isinf(inc)) state.impossible = true;
  state.transcript.push_back({alpha, response, inc});
  return state;
}

SequentialOutcome run_sequential(const SubjectModel& subject, const SequentialPlan& plan, Rng& rng,
                                 int max_rounds, bool record_transcript) {
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  SessionSubject session(subject, rng);
  SeeCache cache(plan.intensity, plan.K);
  SequentialOutcome out{Decision::Timeout, 0, {}};
  auto& state = out.state;
  for (int n = 1; n <= max_rounds; ++n) {
    const auto spot = draw_interrogation_spot(plan.distribution, rng);
    const Response r = session.respond(spot.alpha, emit_pulse(plan.intensity, rng), rng);
    const auto [see, miss] = cache(spot.alpha);
    const double inc = increment_from(see, miss, r, plan.p);
    state.log_odds += inc;
    state.n = n;
    if (record_transcript) state.transcript.push_back({spot.alpha, r, inc});
    if (std::isinf(inc)) state.impossible = true;
    if (state.impossible || state.log_odds <= plan.log_lower) {
      out.decision = Decision::Reject;
      out.T = n;
      return out;
    }
    if (state.log_odds >= plan.log_upper) {
      out.decision = Decision::Accept;
      out.T = n;
      return out;
    }
  }
  out.T = max_rounds;
  return out;
}

StoppingTimeBounds stopping_time_bounds(double q, double q_minimum, double p_fp, double p_fn) {
  if (!(q > 0.0 && q < 0.5)) throw std::domain_error("stopping_time_bounds: q must lie in (0, 1/2)");
  if (!(q_minimum > 0.0 && q_minimum <= q)) throw std::domain_error("stopping_time_bounds: need 0 < q_min <= q");
  const double alice = std::log(2.0 / ((1.0 - q) * p_fp)) / relative_entropy(q, 0.5);
  const double eve = 2.0 * std::log(2.0 * q_minimum * p_fn / (1.0 + q)) / std::log(4.0 * q * (1.0 - q));
  return {alice, eve};
}

DriftBounds drift_bounds(double q) {
  if (!(q > 0.0 && q < 0.5)) throw std::domain_error("drift_bounds: q must lie in (0, 1/2)");
  return {relative_entropy(q, 0.5), 0.5 * std::log(4.0 * q * (1.0 - q))};
}

int optimality_lower_bound(double q, double p_fp) {
  if (!(q > 0.0 && q < 0.5)) throw std::domain_error("optimality_lower_bound: q must lie in (0, 1/2)");
  if (!(p_fp > 0.0 && p_fp < 1.0)) throw std::domain_error("optimality_lower_bound: p_fp must lie in (0, 1)");
  const double h = relative_entropy(q, 0.5);
  const double target = std::log(1.0 / p_fp);
  for (int N = 1;; ++N) {
    if (N * h + 0.5 * std::log(8.0 * N * q * (1.0 - q)) >= target) return N;
  }
}

MartingaleReport martingale_diagnostics(const SequentialPlan& plan, const SubjectModel& subject, int n_trials,
                                        int horizon, std::uint64_t seed) {
  if (horizon < 1) throw ConfigError("martingale horizon must be >= 1");
  if (n_trials < 2) throw ConfigError("martingale diagnostics need at least 2 trials");
  const std::set<int> marks = {1, std::max(1, horizon / 2), horizon};
  const std::vector<int> checkpoints(marks.begin(), marks.end());
  const bool inverse = is_alice(subject);

  std::vector<std::int64_t> count(checkpoints.size(), 0);
  std::vector<double> mean(checkpoints.size(), 0.0), m2(checkpoints.size(), 0.0);
  for (int t = 0; t < n_trials; ++t) {
    Rng rng = trial_stream(seed, static_cast<std::uint64_t>(t));
    SessionSubject session(subject, rng);
    SeeCache cache(plan.intensity, plan.K);
    double log_odds = 0.0;
    std::size_t next = 0;
    for (int n = 1; n <= horizon; ++n) {
      const auto spot = draw_interrogation_spot(plan.distribution, rng);
      const Response r = session.respond(spot.alpha, emit_pulse(plan.intensity, rng), rng);
      const auto [see, miss] = cache(spot.alpha);
      log_odds += increment_from(see, miss, r, plan.p);
      if (n == checkpoints[next]) {
        accumulate(std::exp(inverse ? -log_odds : log_odds), count[next], mean[next], m2[next]);
        ++next;
      }
    }
  }

  MartingaleReport report{inverse, {}};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    report.checkpoints.push_back({checkpoints[i], mean[i], std_error(count[i], m2[i])});
  }
  return report;
}

DriftEstimate empirical_drift(const SequentialPlan& plan, const SubjectModel& subject, int n_trials, int rounds,
                              std::uint64_t seed) {
  if (rounds < 1 || n_trials < 2) throw ConfigError("drift estimate needs rounds >= 1 and at least 2 trials");
  std::int64_t count = 0;
  double mean = 0.0, m2 = 0.0;
  for (int t = 0; t < n_trials; ++t) {
    Rng rng = trial_stream(seed, static_cast<std::uint64_t>(t));
    SessionSubject session(subject, rng);
    SeeCache cache(plan.intensity, plan.K);
    double sum = 0.0;
    for (int n = 1; n <= rounds; ++n) {
      const auto spot = draw_interrogation_spot(plan.distribution, rng);
      const Response r = session.respond(spot.alpha, emit_pulse(plan.intensity, rng), rng);
      const auto [see, miss] = cache(spot.alpha);
      sum += increment_from(see, miss, r, plan.p);
    }
    accumulate(sum / rounds, count, mean, m2);
  }
  return {mean, std_error(count, m2), count * rounds};
}

}  // namespace retina
