#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "retina/alpha_map.hpp"
#include "retina/decision.hpp"
#include "retina/subjects.hpp"

namespace retina {

/// E_alpha[G_K(alpha I)] under the device's spot distribution: the designer's
/// see-probability for a subject who is not the enrolled user. Closed form
/// for PointPair, adaptive quadrature for UniformBands.
double prior_p(const AlphaDistribution& dist, double intensity, int K);

/// Largest wrong-answer probability of the honest subject under `dist`:
/// max(G_K(low edge * I), 1 - G_K(high edge * I)).
double wrong_answer_probability(const AlphaDistribution& dist, double intensity, int K);

/// min{G_K(alpha_min I), 1 - G_K(alpha_max I)}.
double q_min(double alpha_min, double alpha_max, double intensity, int K);

/// Constants of the sequential odds-ratio test.
struct SequentialPlan {
  double p;             ///< impostor see-probability assumed by the designer
  double log_lower;     ///< ln p_fn: reject at or below
  double log_upper;     ///< -ln p_fp: accept at or above
  double intensity;
  int K;
  AlphaDistribution distribution;  ///< what the device samples spots from
  double q;             ///< wrong-answer probability of the honest subject

  /// Builds the plan with p = prior_p(assumed or sampled distribution).
  /// Passing `assumed` runs the mismatch mode in which the designer's p
  /// comes from a different distribution than the spots actually drawn.
  /// Throws ConfigError if p falls outside ((1 - q)/2, (1 + q)/2).
  static SequentialPlan make(const AlphaDistribution& sampled, double intensity, int K, double p_fp, double p_fn,
                             const std::optional<AlphaDistribution>& assumed = std::nullopt);
};

struct TranscriptEntry {
  double alpha;
  Response response;
  double increment;
};

/// Running log-odds ln(R_n / R_0) with its interrogation transcript.
struct OddsState {
  double log_odds = 0.0;
  int n = 0;
  bool impossible = false;  ///< an answer Alice's model gives probability zero
  std::vector<TranscriptEntry> transcript;
};

/// ln(Z_A(alpha, S) / Z_E(p, S)); -infinity when Z_A vanishes.
double log_odds_increment(double alpha, Response response, const SequentialPlan& plan);

OddsState update_odds(OddsState state, double alpha, Response response, const SequentialPlan& plan);

struct SequentialOutcome {
  Decision decision;
  int T;
  OddsState state;
};

/// Interrogates until ln(R_n/R_0) leaves (ln p_fn, -ln p_fp); Timeout after
/// max_rounds. With record_transcript = false only log_odds and n are kept.
SequentialOutcome run_sequential(const SubjectModel& subject, const SequentialPlan& plan, Rng& rng,
                                 int max_rounds = 10000, bool record_transcript = true);

struct StoppingTimeBounds {
  double alice;
  double eve;
};

/// Upper bounds on E_A[T] and E_E[T]:
///   alice = ln(2 / ((1 - q) p_fp)) / H(q|1/2)
///   eve   = 2 ln(2 q_min p_fn / (1 + q)) / ln(4 q (1 - q))
StoppingTimeBounds stopping_time_bounds(double q, double q_min, double p_fp, double p_fn);

struct DriftBounds {
  double alice_min;  ///< H(q|1/2)
  double eve_max;    ///< ln(4 q (1 - q)) / 2
};

DriftBounds drift_bounds(double q);

/// Smallest N with N H(q|1/2) + ln(8 N q (1 - q)) / 2 >= ln(1/p_fp).
int optimality_lower_bound(double q, double p_fp);

struct Checkpoint {
  int n;
  double mean;
  double std_error;
};

struct MartingaleReport {
  bool inverse_odds;  ///< true: statistics of R_0/R_n (honest subject)
  std::vector<Checkpoint> checkpoints;
};

/// Runs n_trials fixed-horizon walks and reports the mean of R_n/R_0
/// (impostors) or R_0/R_n (Alice) at n = 1, horizon/2 and horizon.
/// Trial t uses trial_stream(seed, t).
MartingaleReport martingale_diagnostics(const SequentialPlan& plan, const SubjectModel& subject, int n_trials,
                                        int horizon, std::uint64_t seed);

struct DriftEstimate {
  double mean;
  double std_error;
  std::int64_t rounds;
};

/// Mean per-round log-odds increment over n_trials walks of `rounds` rounds.
DriftEstimate empirical_drift(const SequentialPlan& plan, const SubjectModel& subject, int n_trials, int rounds,
                              std::uint64_t seed);

}  // namespace retina
