#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "retina/rng.hpp"

namespace retina {

enum class Response : std::uint8_t { NoSee = 0, See = 1 };

constexpr bool sees(Response r) { return r == Response::See; }
constexpr Response response_from(bool see) { return see ? Response::See : Response::NoSee; }

/// One coherent pulse as it leaves the device: the incident photon number.
struct Pulse {
  std::int64_t photons = 0;
};

/// Incident photon number ~ Poisson(intensity).
Pulse emit_pulse(double intensity, Rng& rng);

/// Everything an impostor can observe in one round: the round number, what
/// an ideal detector in front of the eye would count, and her own earlier
/// answers. There is deliberately no field for alpha or the spot class.
struct RoundContext {
  std::size_t round;
  std::int64_t photon_count;
  std::span<const Response> history;
};

struct FairCoin {};

struct FixedP {
  double p;
};

/// Draws p ~ Uniform(0, 1) once per session, then answers i.i.d.
struct UniformP {};

/// Arbitrary strategy: see-probability as a function of the round context.
struct Adaptive {
  std::string name;
  std::function<double(const RoundContext&)> see_probability;
};

using EveStrategy = std::variant<FairCoin, FixedP, UniformP, Adaptive>;

/// Repeats the previous answer; the first answer is a fair coin.
Adaptive echo_last_answer();

std::string describe(const EveStrategy& strategy);

/// The enrolled user: sees a pulse iff at least K photons are detected.
struct AliceModel {
  int K = 6;
};

/// A human at the keyboard, asked once per round.
struct InteractiveModel {
  std::function<Response(const RoundContext&)> ask;
};

using SubjectModel = std::variant<AliceModel, EveStrategy, InteractiveModel>;

bool is_alice(const SubjectModel& subject);
std::string describe(const SubjectModel& subject);

/// See iff a Poisson(alpha * intensity) sample is >= K.
Response alice_response(double alpha, double intensity, int K, Rng& rng);

/// Alice's answer to a concrete pulse: each incident photon is detected with
/// probability alpha, so the detected count is Poisson(alpha * intensity).
Response alice_perceives(const Pulse& pulse, double alpha, int K, Rng& rng);

/// Per-session state of an impostor strategy.
class EveSession {
 public:
  EveSession(EveStrategy strategy, Rng& rng);

  Response respond(const RoundContext& context, Rng& rng);

  /// The session-level p drawn by UniformP (or the fixed p); NaN otherwise.
  double session_p() const { return session_p_; }

 private:
  EveStrategy strategy_;
  double session_p_;
};

/// Photon counts an ideal detector registers for a pulse train.
std::vector<std::int64_t> eve_photon_view(std::span<const Pulse> pulses);

/// Drives one subject through one session. Alpha reaches Alice's physics
/// only; impostor and interactive subjects receive a RoundContext.
class SessionSubject {
 public:
  SessionSubject(const SubjectModel& model, Rng& rng);

  Response respond(double alpha, const Pulse& pulse, Rng& rng);

  std::span<const Response> history() const { return history_; }

 private:
  const SubjectModel* model_;
  std::variant<std::monostate, EveSession> eve_;
  std::vector<Response> history_;
};

}  // namespace retina
