#pragma once

#include <cstdint>
#include <initializer_list>

namespace nns {

// Streams are identified by (master seed, label path). Every consumer that
// needs randomness derives its own stream, so the values it sees do not
// depend on scheduling or on which other consumers ran before it.

/// One SplitMix64 step; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stateless 64-bit finalizer (the SplitMix64 output mix).
std::uint64_t mix64(std::uint64_t x);

/// Key of the child stream `label` under `parent`.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label);
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> labels);

/// Fixed stream labels used across the toolkit.
namespace stream {
inline constexpr std::uint64_t kPoints = 0x706f696e7473ULL;     // server locations
inline constexpr std::uint64_t kArrivals = 0x617272697673ULL;   // event simulation
inline constexpr std::uint64_t kIntegral = 0x696e7467726cULL;   // union-of-balls integrals
}  // namespace stream

/// xoshiro256** seeded through SplitMix64.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_low();
  /// Exponential with the given rate.
  double exponential(double rate);
  /// Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::uint64_t s_[4];
};

}  // namespace nns
