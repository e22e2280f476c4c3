#include <gtest/gtest.h>

#include "retina/config.hpp"
#include "retina/errors.hpp"
#include "retina/montecarlo.hpp"

using namespace retina;

namespace {

std::string config_error(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

RunConfig small(StrategyKind s) {
  RunConfig c;
  c.strategy = s;
  c.trials = 200;
  c.seed = 77;
  c.trace_walks = 5;
  c.synthetic.width = 60;
  c.synthetic.height = 60;
  return c;
}

}  // namespace

TEST(Config, DefaultsWhenEmpty) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.strategy, StrategyKind::Bayes);
  EXPECT_EQ(c.p_fp, 1e-10);
  EXPECT_EQ(c.K, 6);
  EXPECT_FALSE(c.intensity);
  EXPECT_EQ(c.pattern_test.M, 18);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(config_error(R"({"targets": {"p_fp": 2}})").find("targets.p_fp"), std::string::npos);
  EXPECT_NE(config_error(R"({"map": {"synthetic": {"alpha_max": 0.001}}})").find("map.synthetic.alpha_max"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"trials": "many"})").find("'trials'"), std::string::npos);
  EXPECT_NE(config_error(R"({"pattern": {"colour": 1}})").find("pattern.colour': unknown key"), std::string::npos);
  EXPECT_NE(config_error(R"({"strategy": "psychic"})").find("strategy"), std::string::npos);
  EXPECT_NE(config_error(R"({"distribution": {"kind": "point_pair", "low": 0.2, "high": 0.1}})"), "");
  EXPECT_THROW(parse_config("{\"K\": 6,"), ParseError);
}

TEST(Config, RoundTripsThroughJson) {
  RunConfig c;
  c.strategy = StrategyKind::Pattern;
  c.distribution = UniformBands{{0.02, 0.05}, {0.15, 0.18}};
  c.assumed_distribution = PointPair{0.05, 0.15};
  c.intensity = 61.5;
  c.seed = 123456789012345ull;
  c.pattern_test.m = 4;
  c.pattern.n_noise = 60;
  c.naive_mu = 33;
  const auto text = to_json(c);
  EXPECT_EQ(to_json(parse_config(text)), text);
}

TEST(Config, Subjects) {
  EXPECT_TRUE(is_alice(parse_subject("alice", 6)));
  EXPECT_EQ(describe(parse_subject("eve:fair", 6)), "eve:fair");
  EXPECT_EQ(describe(parse_subject("eve:echo", 6)), "eve:adaptive:echo");
  const auto fixed = parse_subject("eve:fixed:0.25", 6);
  EXPECT_DOUBLE_EQ(std::get<FixedP>(std::get<EveStrategy>(fixed)).p, 0.25);
  EXPECT_THROW(parse_subject("eve:fixed:1.5", 6), ConfigError);
  EXPECT_THROW(parse_subject("eve:fixed:0.2x", 6), ConfigError);
  EXPECT_THROW(parse_subject("bob", 6), ConfigError);
}

TEST(Protocol, EveryStrategyBuildsAndRuns) {
  for (auto s : {StrategyKind::Naive, StrategyKind::Serial, StrategyKind::Bayes}) {
    auto c = small(s);
    c.synthetic.width = c.synthetic.height = 100;
    const Protocol p(c);
    EXPECT_NEAR(p.intensity(), 62.3254, 1e-3);
    Rng rng = trial_stream(1, 0);
    const auto rec = p.run(AliceModel{6}, rng, false);
    EXPECT_NE(rec.decision, Decision::Timeout) << to_string(s);
    EXPECT_GT(rec.T, 0);
  }
  auto c = small(StrategyKind::Pattern);
  c.synthetic.width = c.synthetic.height = 100;
  c.pattern_test.m = 2;
  const Protocol p(c);
  Rng rng = trial_stream(1, 0);
  EXPECT_EQ(p.run(EveStrategy{FairCoin{}}, rng, false).T, 2);
}

TEST(Protocol, FixedIntensityOverridesTheSolve) {
  auto c = small(StrategyKind::Bayes);
  c.intensity = 70.0;
  EXPECT_DOUBLE_EQ(Protocol(c).intensity(), 70.0);
}

TEST(Protocol, SerialSizesFromTheWrongAnswerRate) {
  auto c = small(StrategyKind::Serial);
  c.synthetic.width = c.synthetic.height = 100;
  const Protocol p(c);
  EXPECT_EQ(p.serial().N(), 138);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
  for (auto s : {StrategyKind::Bayes, StrategyKind::Serial}) {
    auto c = small(s);
    c.synthetic.width = c.synthetic.height = 100;
    const Protocol p(c);
    const auto one = run_montecarlo(p, AliceModel{6}, 1);
    const auto four = run_montecarlo(p, AliceModel{6}, 4);
    EXPECT_EQ(one.stats.histogram, four.stats.histogram);
    EXPECT_EQ(one.stats.accept, four.stats.accept);
    EXPECT_EQ(one.stats.sum_T2, four.stats.sum_T2);
    EXPECT_EQ(one.stats.increment_sum, four.stats.increment_sum);
    EXPECT_EQ(traces_csv(one.traced), traces_csv(four.traced));
  }
}

TEST(MonteCarlo, SeedDeterminesTheRun) {
  auto c = small(StrategyKind::Bayes);
  const Protocol a(c);
  const auto x = run_montecarlo(a, EveStrategy{FairCoin{}}, 2);
  const auto y = run_montecarlo(a, EveStrategy{FairCoin{}}, 3);
  EXPECT_EQ(histogram_csv(x.stats), histogram_csv(y.stats));
  c.seed = 78;
  const auto z = run_montecarlo(Protocol(c), EveStrategy{FairCoin{}}, 1);
  EXPECT_NE(traces_csv(x.traced), traces_csv(z.traced));
}

TEST(MonteCarlo, CountsAddUp) {
  auto c = small(StrategyKind::Bayes);
  c.max_rounds = 40;
  const Protocol p(c);
  const auto r = run_montecarlo(p, EveStrategy{FixedP{0.5}}, 1);
  const auto& s = r.stats;
  EXPECT_EQ(s.accept + s.reject + s.timeout, s.trials);
  EXPECT_EQ(s.trials, 200);
  std::int64_t mass = 0;
  for (const auto& [T, n] : s.histogram) mass += n;
  EXPECT_EQ(mass, s.terminated());
  EXPECT_EQ(s.false_rejects, 0);
  EXPECT_EQ(s.false_accepts, s.accept);
  EXPECT_EQ(r.traced.size(), 5u);
  EXPECT_EQ(histogram_csv(s).rfind("T,count\n", 0), 0u);
  const auto traces = traces_csv(r.traced);
  EXPECT_EQ(traces.rfind("trial,n,alpha,S,increment,log_odds\n", 0), 0u);
  std::size_t rows = 0;
  for (const auto& rec : r.traced) rows += rec.transcript.size();
  EXPECT_EQ(static_cast<std::size_t>(std::count(traces.begin(), traces.end(), '\n')), rows + 1);
}

TEST(MonteCarlo, SummaryEchoesTheConfig) {
  const Protocol p(small(StrategyKind::Bayes));
  const auto r = run_montecarlo(p, AliceModel{6}, 1);
  const auto json = summary_json(p, "alice", r.stats);
  EXPECT_NE(json.find("\"strategy\": \"bayes\""), std::string::npos);
  EXPECT_NE(json.find("\"subject\": \"alice\""), std::string::npos);
  EXPECT_NE(json.find("\"mean_T\""), std::string::npos);
}

TEST(MonteCarlo, InteractiveSubjectsAreRefused) {
  const Protocol p(small(StrategyKind::Bayes));
  EXPECT_THROW(run_montecarlo(p, InteractiveModel{}, 1), ConfigError);
}
