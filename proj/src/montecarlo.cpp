#include "retina/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "json.hpp"
#include "retina/errors.hpp"
#include "retina/photon_stats.hpp"

namespace retina {

void TrialStats::add(const TrialRecord& r, bool honest) {
  ++trials;
  switch (r.decision) {
    case Decision::Accept:
      ++accept;
      if (!honest) ++false_accepts;
      break;
    case Decision::Reject:
      ++reject;
      if (honest) ++false_rejects;
      break;
    case Decision::Timeout:
      ++timeout;
      break;
  }
  if (r.decision != Decision::Timeout) {
    ++histogram[r.T];
    sum_T += r.T;
    sum_T2 += static_cast<std::int64_t>(r.T) * r.T;
  }
  rounds += r.T;
  increment_sum += r.increment_sum;
}

double TrialStats::mean_T() const {
  const auto n = terminated();
  return n > 0 ? static_cast<double>(sum_T) / n : std::numeric_limits<double>::quiet_NaN();
}

double TrialStats::std_error_T() const {
  const auto n = terminated();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mean = mean_T();
  const double var = (static_cast<double>(sum_T2) - n * mean * mean) / (n - 1);
  return std::sqrt(std::max(var, 0.0) / n);
}

double TrialStats::drift() const {
  return rounds > 0 ? increment_sum / rounds : std::numeric_limits<double>::quiet_NaN();
}

Protocol::Protocol(RunConfig config) : config_(std::move(config)), map_(resolve_map(config_)) {
  config_.validate();
  const auto edges = class_edges(config_.distribution);
  if (config_.intensity) {
    intensity_ = *config_.intensity;
  } else {
    intensity_ = solve_q_intensity(edges.low_max, edges.high_min, config_.K).intensity;
  }
  switch (config_.strategy) {
    case StrategyKind::Bayes:
      sequential_ = SequentialPlan::make(config_.distribution, intensity_, config_.K, config_.p_fp, config_.p_fn,
                                         config_.assumed_distribution);
      break;
    case StrategyKind::Serial: {
      validate(config_.distribution, map_);
      const double q = wrong_answer_probability(config_.distribution, intensity_, config_.K);
      if (!(q < 0.5)) throw InfeasibleError("honest subject has no advantage at this intensity");
      serial_ = solve_w_N(q, config_.p_fp, config_.p_fn);
      break;
    }
    case StrategyKind::Naive:
      naive_ = plan_naive(config_.p_fp, config_.p_fn, config_.naive_mu, config_.naive_p_correct);
      break;
    case StrategyKind::Pattern:
      patterns_ = std::make_unique<ChallengeFactory>(map_, GlyphLibrary::builtin(), config_.pattern);
      // Fill the placement cache now; trials then only read it.
      if (patterns_->placeable_glyphs().empty()) throw PlacementError("no glyph can be placed on this map");
      break;
  }
}

TrialRecord Protocol::run(const SubjectModel& subject, Rng& rng, bool keep_transcript) const {
  TrialRecord rec;
  switch (config_.strategy) {
    case StrategyKind::Bayes: {
      auto out = run_sequential(subject, *sequential_, rng, config_.max_rounds, keep_transcript);
      rec.decision = out.decision;
      rec.T = out.T;
      rec.log_odds = out.state.log_odds;
      rec.increment_sum = out.state.log_odds;
      rec.transcript = std::move(out.state.transcript);
      break;
    }
    case StrategyKind::Serial: {
      const auto out = run_serial(subject, map_, config_.distribution, *serial_, intensity_, rng);
      rec.decision = out.decision;
      rec.T = serial_->N();
      break;
    }
    case StrategyKind::Naive: {
      const auto out = run_naive(subject, map_, *naive_, config_.K, rng);
      rec.decision = out.decision;
      rec.T = naive_->interrogations();
      break;
    }
    case StrategyKind::Pattern: {
      PatternTestConfig pc = config_.pattern_test;
      pc.K = config_.K;
      const auto out = run_pattern_test(subject, *patterns_, pc, rng);
      rec.decision = out.decision;
      rec.T = pc.m;
      break;
    }
  }
  return rec;
}

MonteCarloResult run_montecarlo(const Protocol& protocol, const SubjectModel& subject, int threads) {
  if (std::holds_alternative<InteractiveModel>(subject)) {
    throw ConfigError("interactive subjects cannot be used for Monte Carlo runs");
  }
  const auto& cfg = protocol.config();
  const std::int64_t n = cfg.trials;
  if (threads <= 0) threads = cfg.threads;
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::int64_t>(threads, n));

  std::vector<TrialRecord> records(static_cast<std::size_t>(n));
  const auto work = [&](int worker) {
    for (std::int64_t t = worker; t < n; t += threads) {
      Rng rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(t));
      records[t] = protocol.run(subject, rng, t < cfg.trace_walks);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  MonteCarloResult result;
  const bool honest = is_alice(subject);
  for (std::int64_t t = 0; t < n; ++t) {
    result.stats.add(records[t], honest);
    if (t < cfg.trace_walks) result.traced.push_back(std::move(records[t]));
  }
  return result;
}

std::string traces_csv(const std::vector<TrialRecord>& traced) {
  std::string out = "trial,n,alpha,S,increment,log_odds\n";
  char buf[160];
  for (std::size_t t = 0; t < traced.size(); ++t) {
    double log_odds = 0.0;
    int n = 0;
    for (const auto& e : traced[t].transcript) {
      log_odds += e.increment;
      std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%d,%.17g,%.17g\n", t, ++n, e.alpha, sees(e.response) ? 1 : 0,
                    e.increment, log_odds);
      out += buf;
    }
  }
  return out;
}

std::string histogram_csv(const TrialStats& stats) {
  std::string out = "T,count\n";
  for (const auto& [T, count] : stats.histogram) out += std::to_string(T) + "," + std::to_string(count) + "\n";
  return out;
}

std::string summary_json(const Protocol& protocol, const std::string& subject, const TrialStats& s) {
  using nlohmann::ordered_json;
  const auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json j;
  j["config"] = ordered_json::parse(to_json(protocol.config()));
  j["subject"] = subject;
  j["intensity"] = protocol.intensity();
  j["map_checksum"] = protocol.map().size() > 0 ? checksum(protocol.map()) : 0;
  j["trials"] = s.trials;
  j["accept"] = s.accept;
  j["reject"] = s.reject;
  j["timeout"] = s.timeout;
  j["false_accepts"] = s.false_accepts;
  j["false_rejects"] = s.false_rejects;
  j["mean_T"] = num(s.mean_T());
  j["std_error_T"] = num(s.std_error_T());
  j["drift"] = num(s.drift());
  return j.dump(2) + "\n";
}

}  // namespace retina
