// retina: command-line front end for enrolment, single sessions, Monte Carlo
// runs and the protocol calculators.
//
// Exit codes: 0 accept / success, 1 reject or timeout, 2 usage or config
// error, 3 infeasible plan.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "retina/config.hpp"
#include "retina/errors.hpp"
#include "retina/montecarlo.hpp"
#include "retina/photon_stats.hpp"
#include "retina/physics_bounds.hpp"
#include "retina/strategy_bayes.hpp"
#include "retina/strategy_naive.hpp"
#include "retina/strategy_pattern.hpp"
#include "retina/strategy_serial.hpp"

namespace {

using namespace retina;

constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::string strategy;
  std::string subject = "alice";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "master seed (overrides config)");
  cmd->add_option("--trials", f.trials, "number of sessions (overrides config)");
  cmd->add_option("--strategy", f.strategy, "naive|serial|bayes|pattern (overrides config)");
  cmd->add_option("--subject", f.subject, "alice|eve:fair|eve:fixed:<p>|eve:uniform|eve:echo|interactive");
  cmd->add_option("--out", f.out, "output directory (overrides config)");
}

RunConfig make_config(const CommonFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.trials) c.trials = *f.trials;
  if (!f.strategy.empty()) c.strategy = parse_strategy(f.strategy);
  if (!f.out.empty()) c.out = f.out;
  c.pattern_test.K = c.K;
  c.validate();
  return c;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SubjectModel interactive_subject() {
  return InteractiveModel{[](const RoundContext& ctx) {
    for (;;) {
      std::printf("round %zu: flash fired (detector counted %lld photons). seen? [y/n] ", ctx.round + 1,
                  static_cast<long long>(ctx.photon_count));
      std::fflush(stdout);
      std::string line;
      if (!std::getline(std::cin, line)) throw std::runtime_error("input closed");
      if (line == "y" || line == "Y") return Response::See;
      if (line == "n" || line == "N") return Response::NoSee;
    }
  }};
}

SubjectModel make_subject(const std::string& spec, int K) {
  return spec == "interactive" ? interactive_subject() : parse_subject(spec, K);
}

int cmd_enroll(const CommonFlags& f) {
  const RunConfig c = make_config(f);
  const AlphaMap map = resolve_map(c);
  const auto path = c.out / "map.json";
  std::filesystem::create_directories(c.out);
  save(map, path);
  std::printf("wrote %s (%ldx%ld, alpha in [%g, %g], checksum %016llx)\n", path.string().c_str(),
              static_cast<long>(map.width()), static_cast<long>(map.height()), map.alpha_min(), map.alpha_max(),
              static_cast<unsigned long long>(checksum(map)));
  return 0;
}

int cmd_identify(const CommonFlags& f) {
  const RunConfig c = make_config(f);
  const Protocol protocol(c);
  const SubjectModel subject = make_subject(f.subject, c.K);
  Rng rng = trial_stream(c.seed, 0);
  std::printf("strategy %s, subject %s, intensity %.6g\n", std::string(to_string(c.strategy)).c_str(),
              describe(subject).c_str(), protocol.intensity());

  Decision decision;
  if (c.strategy == StrategyKind::Bayes) {
    const auto out = run_sequential(subject, protocol.sequential(), rng, c.max_rounds, true);
    std::printf("%5s %10s %2s %12s %12s\n", "n", "alpha", "S", "increment", "log_odds");
    double log_odds = 0.0;
    int n = 0;
    for (const auto& e : out.state.transcript) {
      log_odds += e.increment;
      std::printf("%5d %10.6f %2d %12.6f %12.6f\n", ++n, e.alpha, sees(e.response) ? 1 : 0, e.increment, log_odds);
    }
    std::printf("thresholds: reject <= %.6f, accept >= %.6f\n", protocol.sequential().log_lower,
                protocol.sequential().log_upper);
    decision = out.decision;
    std::printf("decision %s after T = %d\n", std::string(to_string(decision)).c_str(), out.T);
  } else {
    const auto rec = protocol.run(subject, rng, false);
    decision = rec.decision;
    std::printf("decision %s after T = %d interrogations\n", std::string(to_string(decision)).c_str(), rec.T);
  }
  return decision == Decision::Accept ? 0 : kExitReject;
}

int cmd_montecarlo(const CommonFlags& f) {
  const RunConfig c = make_config(f);
  const Protocol protocol(c);
  const SubjectModel subject = make_subject(f.subject, c.K);
  const auto result = run_montecarlo(protocol, subject);
  const auto& s = result.stats;
  write_file(c.out / "summary.json", summary_json(protocol, f.subject, s));
  write_file(c.out / "histogram.csv", histogram_csv(s));
  if (c.strategy == StrategyKind::Bayes) write_file(c.out / "traces.csv", traces_csv(result.traced));
  std::printf("%lld trials: %lld accept, %lld reject, %lld timeout\n", static_cast<long long>(s.trials),
              static_cast<long long>(s.accept), static_cast<long long>(s.reject), static_cast<long long>(s.timeout));
  std::printf("mean T %.4f (stderr %.4f), drift per round %.6f\n", s.mean_T(), s.std_error_T(), s.drift());
  std::printf("outputs in %s\n", c.out.string().c_str());
  return 0;
}

int cmd_solve(const CommonFlags& f, double alpha_min, double alpha_max) {
  const RunConfig c = make_config(f);
  const auto edges = class_edges(c.distribution);
  const auto pi = solve_q_intensity(edges.low_max, edges.high_min, c.K);
  const double intensity = c.intensity.value_or(pi.intensity);
  const double q = wrong_answer_probability(c.distribution, intensity, c.K);
  std::printf("classes: alpha_L = %g, alpha_H = %g, K = %d\n", edges.low_max, edges.high_min, c.K);
  std::printf("symmetric design: q = %.6f, intensity = %.4f\n", pi.q, pi.intensity);
  std::printf("targets: p_fp = %g, p_fn = %g\n\n", c.p_fp, c.p_fn);

  const double qm = q_min(alpha_min, alpha_max, intensity, c.K);
  std::printf("%-34s %14s %14s\n", "", "solved q", "q = 0.1");
  const auto row = [](const char* label, double a, double b) { std::printf("%-34s %14.6g %14.6g\n", label, a, b); };
  const auto w1 = solve_w_N(q, c.p_fp, c.p_fn);
  const auto w2 = solve_w_N(0.1, c.p_fp, c.p_fn);
  row("q", q, 0.1);
  row("serial: w", w1.w(), w2.w());
  row("serial: N", w1.N(), w2.N());
  const auto b1 = stopping_time_bounds(q, std::min(qm, q), c.p_fp, c.p_fn);
  const auto b2 = stopping_time_bounds(0.1, std::min(qm, 0.1), c.p_fp, c.p_fn);
  row("sequential: E_A[T] bound", b1.alice, b2.alice);
  row("sequential: E_E[T] bound", b1.eve, b2.eve);
  const auto d1 = drift_bounds(q);
  const auto d2 = drift_bounds(0.1);
  row("drift: Alice >=", d1.alice_min, d2.alice_min);
  row("drift: impostor <=", d1.eve_max, d2.eve_max);
  row("any test: N >=", optimality_lower_bound(q, c.p_fp), optimality_lower_bound(0.1, c.p_fp));
  std::printf("(q_min = %.6g from alpha in [%g, %g])\n\n", qm, alpha_min, alpha_max);

  const auto plan = plan_naive(c.p_fp, c.p_fn, c.naive_mu, c.naive_p_correct);
  std::printf("naive: mu = %d spots, nu = %d per spot, nu*mu = %d, pass iff %d < sees < %d\n", plan.mu, plan.nu,
              plan.interrogations(), plan.counts.n_low, plan.counts.n_high);
  return 0;
}

int cmd_pattern(const CommonFlags& f, int n_H) {
  const RunConfig c = make_config(f);
  const auto& pc = c.pattern_test;
  std::printf("false-positive rate (1/M)^m\n%6s", "M \\ m");
  for (int m : {4, 6, 8, 10}) std::printf(" %12d", m);
  std::printf("\n");
  for (int M : {10, 18, 40}) {
    std::printf("%6d", M);
    for (int m : {4, 6, 8, 10}) std::printf(" %12.4g", false_positive_rate(M, m));
    std::printf("\n");
  }

  PatternBoundParams params{n_H, c.pattern.n_noise, pc.rule, c.pattern.classes.low_max, c.pattern.classes.high_min,
                            c.K, pc.m};
  const auto best = optimize_intensity(params);
  std::printf("\nfailure bound for n_H = %d, n_L = %d, k = %d, l = %d, m = %d, alpha_L = %g, alpha_H = %g:\n", n_H,
              params.n_L, pc.rule.k, pc.rule.l, pc.m, params.alpha_L, params.alpha_H);
  std::printf("  best intensity %.2f, p_fn <= %.4g\n\n", best.intensity, best.p_fn);
  std::printf("p_fn surface (alpha_L down, alpha_H across)\n%8s", "");
  const double highs[] = {0.14, 0.16, 0.18, 0.20};
  for (double h : highs) std::printf(" %10.2f", h);
  std::printf("\n");
  for (double lo : {0.02, 0.03, 0.04, 0.05}) {
    std::printf("%8.2f", lo);
    for (double h : highs) {
      PatternBoundParams p = params;
      p.alpha_L = lo;
      p.alpha_H = h;
      try {
        std::printf(" %10.3g", optimize_intensity(p).p_fn);
      } catch (const BoundInapplicableError&) {
        std::printf(" %10s", "n/a");
      }
    }
    std::printf("\n");
  }

  const AlphaMap map = resolve_map(c);
  ChallengeFactory factory(map, GlyphLibrary::builtin(), c.pattern);
  Rng rng = trial_stream(c.seed, 0);
  const auto glyphs = factory.placeable_glyphs();
  if (glyphs.empty()) throw PlacementError("no glyph can be placed on this map");
  const std::string glyph = std::find(glyphs.begin(), glyphs.end(), "2") != glyphs.end() ? "2" : glyphs.front();
  const auto ch = factory.build(glyph, rng);
  const auto seen = simulate_perception(ch, map, c.K, rng);
  const auto menu = candidate_menu(ch, map, factory.library(), pc.M, rng);
  write_file(c.out / "challenge.txt", render_grid(ch, map, factory.library()));
  write_file(c.out / "perceived.txt", render_grid(ch, map, factory.library(), &seen));
  write_file(c.out / "challenge.csv", render_csv(ch, map, &seen));
  std::printf("\nsample challenge '%s': %zu pattern + %zu noise spots at intensity %g, %zu seen, %s\n", glyph.c_str(),
              ch.pattern_spots.size(), ch.noise_spots.size(), ch.intensity, seen.size(),
              recognize(seen, ch, pc.rule) ? "recognized" : "not recognized");
  std::printf("menu:");
  for (const auto& e : menu) std::printf(" %s", e.glyph.c_str());
  std::printf("\nrenders in %s\n", c.out.string().c_str());
  return 0;
}

int cmd_bounds(const EyeThermalModel& eye, double sensitivity, double tau) {
  const double dtheta = temperature_resolution(eye);
  std::printf("eye: mass %g kg, specific heat %g J/(kg K)\n", eye.mass, eye.specific_heat);
  std::printf("light: %g photons at %g m (%.4g J each), pulse time %g s\n", eye.n_scattered, eye.wavelength,
              photon_energy(eye), eye.pulse_time);
  std::printf("temperature rise          %.4g K\n", dtheta);
  std::printf("thermal energy resolution %.4g hbar  (k_B dtheta tau / hbar)\n", thermal_energy_resolution(eye));
  std::printf("magnetometer at %g T/sqrt(Hz) over %g s:\n", sensitivity, tau);
  std::printf("  energy resolution       %.4g hbar  (mu_B B tau / hbar, B = sensitivity / sqrt(tau))\n",
              magnetic_energy_resolution(sensitivity, tau));
  std::printf("dipole field 0.1 m -> 1 m attenuation: %g\n", dipole_attenuation(0.1, 1.0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"retina: photon-counting retinal identification"};
  app.require_subcommand(1);

  CommonFlags f;
  auto* enroll = app.add_subcommand("enroll", "generate or import an alpha map and store it");
  auto* identify = app.add_subcommand("identify", "run one session");
  auto* mc = app.add_subcommand("montecarlo", "run many sessions and write statistics");
  auto* solve = app.add_subcommand("solve", "print protocol constants");
  auto* pattern = app.add_subcommand("pattern", "pattern-challenge constants and a sample challenge");
  auto* bounds = app.add_subcommand("bounds", "eavesdropper sensing requirements");
  for (auto* cmd : {enroll, identify, mc, solve, pattern}) add_common(cmd, f);

  double alpha_min = 0.02, alpha_max = 0.18;
  solve->add_option("--alpha-min", alpha_min, "smallest alpha on the retina (for q_min)");
  solve->add_option("--alpha-max", alpha_max, "largest alpha on the retina (for q_min)");
  int n_H = 25;
  pattern->add_option("--n-high", n_H, "pattern size used in the failure bound");
  EyeThermalModel eye;
  double sensitivity = 1e-19, tau = 1.0;
  bounds->add_option("--mass", eye.mass, "eye mass [kg]");
  bounds->add_option("--specific-heat", eye.specific_heat, "specific heat [J/(kg K)]");
  bounds->add_option("--wavelength", eye.wavelength, "wavelength [m]");
  bounds->add_option("--photons", eye.n_scattered, "scattered photons");
  bounds->add_option("--pulse-time", eye.pulse_time, "pulse time [s]");
  bounds->add_option("--sensitivity", sensitivity, "magnetometer sensitivity [T/sqrt(Hz)]");
  bounds->add_option("--time", tau, "magnetometer measurement time [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*enroll) return cmd_enroll(f);
    if (*identify) return cmd_identify(f);
    if (*mc) return cmd_montecarlo(f);
    if (*solve) return cmd_solve(f, alpha_min, alpha_max);
    if (*pattern) return cmd_pattern(f, n_H);
    if (*bounds) return cmd_bounds(eye, sensitivity, tau);
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const BoundInapplicableError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
