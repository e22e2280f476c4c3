#include "retina/subjects.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "retina/errors.hpp"

namespace retina {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Pulse emit_pulse(double intensity, Rng& rng) {
  if (!(intensity >= 0.0)) throw std::domain_error("pulse intensity must be >= 0");
  return {rng.poisson(intensity)};
}

Adaptive echo_last_answer() {
  return {"echo", [](const RoundContext& ctx) {
            if (ctx.history.empty()) return 0.5;
            return sees(ctx.history.back()) ? 1.0 : 0.0;
          }};
}

std::string describe(const EveStrategy& strategy) {
  return std::visit(overloaded{[](const FairCoin&) { return std::string("fair"); },
                               [](const FixedP& s) {
                                 std::ostringstream os;
                                 os << "fixed:" << s.p;
                                 return os.str();
                               },
                               [](const UniformP&) { return std::string("uniform"); },
                               [](const Adaptive& s) { return "adaptive:" + s.name; }},
                    strategy);
}

bool is_alice(const SubjectModel& subject) { return std::holds_alternative<AliceModel>(subject); }

std::string describe(const SubjectModel& subject) {
  return std::visit(overloaded{[](const AliceModel& a) { return "alice(K=" + std::to_string(a.K) + ")"; },
                               [](const EveStrategy& s) { return "eve:" + describe(s); },
                               [](const InteractiveModel&) { return std::string("interactive"); }},
                    subject);
}

Response alice_response(double alpha, double intensity, int K, Rng& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
  if (!(intensity >= 0.0)) throw std::domain_error("intensity must be >= 0");
  return response_from(rng.poisson(alpha * intensity) >= K);
}

Response alice_perceives(const Pulse& pulse, double alpha, int K, Rng& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
  if (pulse.photons < K) return Response::NoSee;
  std::binomial_distribution<std::int64_t> detected(pulse.photons, alpha);
  return response_from(detected(rng) >= K);
}

EveSession::EveSession(EveStrategy strategy, Rng& rng)
    : strategy_(std::move(strategy)), session_p_(std::numeric_limits<double>::quiet_NaN()) {
  if (const auto* fixed = std::get_if<FixedP>(&strategy_)) {
    check_probability(fixed->p, "fixed see-probability");
    session_p_ = fixed->p;
  } else if (std::holds_alternative<UniformP>(strategy_)) {
    session_p_ = rng.uniform();
  } else if (const auto* adaptive = std::get_if<Adaptive>(&strategy_)) {
    if (!adaptive->see_probability) throw ConfigError("adaptive strategy has no callable");
  }
}

Response EveSession::respond(const RoundContext& context, Rng& rng) {
  const double p = std::visit(overloaded{[](const FairCoin&) { return 0.5; },
                                         [this](const FixedP&) { return session_p_; },
                                         [this](const UniformP&) { return session_p_; },
                                         [&](const Adaptive& s) { return s.see_probability(context); }},
                              strategy_);
  check_probability(p, "strategy see-probability");
  return response_from(rng.bernoulli(p));
}

std::vector<std::int64_t> eve_photon_view(std::span<const Pulse> pulses) {
  std::vector<std::int64_t> counts;
  counts.reserve(pulses.size());
  for (const auto& pulse : pulses) counts.push_back(pulse.photons);
  return counts;
}

SessionSubject::SessionSubject(const SubjectModel& model, Rng& rng) : model_(&model) {
  if (const auto* strategy = std::get_if<EveStrategy>(model_)) eve_.emplace<EveSession>(*strategy, rng);
  if (const auto* alice = std::get_if<AliceModel>(model_)) {
    if (alice->K < 1) throw std::domain_error("perception threshold K must be >= 1");
  }
}

Response SessionSubject::respond(double alpha, const Pulse& pulse, Rng& rng) {
  const RoundContext context{history_.size() + 1, pulse.photons, history_};
  Response r;
  if (const auto* alice = std::get_if<AliceModel>(model_)) {
    r = alice_perceives(pulse, alpha, alice->K, rng);
  } else if (const auto* human = std::get_if<InteractiveModel>(model_)) {
    r = human->ask(context);
  } else {
    r = std::get<EveSession>(eve_).respond(context, rng);
  }
  history_.push_back(r);
  return r;
}

}  // namespace retina
