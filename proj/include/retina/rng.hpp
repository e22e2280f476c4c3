#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace retina {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream): the seed is the Philox key and
/// the stream index occupies the upper half of the 128-bit counter, so any
/// trial's random numbers can be regenerated without replaying earlier
/// trials. Satisfies std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = std::uint32_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform double in [lo, hi]; returns lo when the interval is degenerate.
  double uniform(double lo, double hi);

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson variate; mean zero yields zero.
  std::int64_t poisson(double mean);

  /// Uniform index in [0, n).
  std::uint64_t index(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;
};

/// One Philox4x32-10 block, exposed for known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Independent stream for trial `trial` of a run keyed by `master_seed`.
inline Rng trial_stream(std::uint64_t master_seed, std::uint64_t trial) {
  return Rng(master_seed, trial);
}

}  // namespace retina
