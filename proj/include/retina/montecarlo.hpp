#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "retina/config.hpp"
#include "retina/decision.hpp"
#include "retina/strategy_bayes.hpp"
#include "retina/strategy_naive.hpp"
#include "retina/strategy_pattern.hpp"
#include "retina/strategy_serial.hpp"

namespace retina {

/// Result of one session, whatever the strategy.
struct TrialRecord {
  Decision decision = Decision::Timeout;
  int T = 0;                   ///< interrogations used
  double log_odds = 0.0;       ///< final ln(R_T/R_0) (sequential test only)
  double increment_sum = 0.0;  ///< sum of log-odds increments (sequential test only)
  std::vector<TranscriptEntry> transcript;
};

/// Aggregate over trials. Sums of T are integers so aggregation order
/// cannot change the result.
struct TrialStats {
  std::int64_t trials = 0;
  std::int64_t accept = 0;
  std::int64_t reject = 0;
  std::int64_t timeout = 0;
  std::map<int, std::int64_t> histogram;  ///< T of terminated trials
  std::int64_t sum_T = 0;
  std::int64_t sum_T2 = 0;
  std::int64_t rounds = 0;      ///< interrogations over all trials
  double increment_sum = 0.0;  ///< summed in trial order
  std::int64_t false_accepts = 0;
  std::int64_t false_rejects = 0;

  /// `honest` selects which decision counts as a threshold violation.
  void add(const TrialRecord& r, bool honest);

  double mean_T() const;
  double std_error_T() const;
  /// Mean per-round log-odds increment.
  double drift() const;
  std::int64_t terminated() const { return accept + reject; }
};

/// A run's map, spot distribution, intensity and sized plan, built once and
/// shared read-only by all trials.
class Protocol {
 public:
  explicit Protocol(RunConfig config);

  const RunConfig& config() const { return config_; }
  const AlphaMap& map() const { return map_; }
  double intensity() const { return intensity_; }

  const SequentialPlan& sequential() const { return *sequential_; }
  const SerialPlan& serial() const { return *serial_; }
  const NaiveTestPlan& naive() const { return *naive_; }
  ChallengeFactory& patterns() const { return *patterns_; }

  /// One session with the given subject. Trial streams come from
  /// trial_stream(config.seed, trial).
  TrialRecord run(const SubjectModel& subject, Rng& rng, bool keep_transcript) const;

 private:
  RunConfig config_;
  AlphaMap map_;
  double intensity_ = 0.0;
  std::optional<SequentialPlan> sequential_;
  std::optional<SerialPlan> serial_;
  std::optional<NaiveTestPlan> naive_;
  std::unique_ptr<ChallengeFactory> patterns_;
};

struct MonteCarloResult {
  TrialStats stats;
  std::vector<TrialRecord> traced;  ///< the first trace_walks trials
};

/// Runs config.trials sessions on `threads` workers (0 = config.threads,
/// and 0 there = hardware concurrency). Trial t always uses
/// trial_stream(seed, t), so results do not depend on the worker count.
MonteCarloResult run_montecarlo(const Protocol& protocol, const SubjectModel& subject, int threads = 0);

/// trial,n,alpha,S,increment,log_odds
std::string traces_csv(const std::vector<TrialRecord>& traced);
/// T,count
std::string histogram_csv(const TrialStats& stats);
/// Config echo plus statistics, as JSON.
std::string summary_json(const Protocol& protocol, const std::string& subject, const TrialStats& stats);

}  // namespace retina
