#pragma once

#include <cstdint>
#include <string_view>

namespace connect_later {

// Counter-based 64-bit generator: the i-th output is a SplitMix64 finalizer
// applied to seed + i * golden-ratio increment. Outputs depend only on the
// seed and the number of prior draws, so two instances with the same seed and
// call sequence agree bit for bit on every platform.
//
// Normal draws use Box-Muller on two uniforms (no cached spare) rather than
// std::normal_distribution, whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double stddev = 1.0);
  bool bernoulli(double p);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Independent child stream keyed by a label; depends on seed and label only.
  Rng split(std::string_view label) const;
  Rng split(std::uint64_t index) const;

  // UniformRandomBitGenerator, for std::shuffle and friends.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

// exp(u) with u uniform on [ln lo, ln hi]. Throws ValidationError unless 0 < lo <= hi.
double loguniform(Rng& rng, double lo, double hi);

}  // namespace connect_later
