#include "connect_later/rng.hpp"

#include <cmath>
#include <numbers>

#include "connect_later/errors.hpp"

namespace connect_later {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal(double mean, double stddev) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("Rng::below: empty range");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Rng Rng::split(std::string_view label) const { return Rng(mix64(seed_ ^ mix64(fnv1a(label)))); }

Rng Rng::split(std::uint64_t index) const { return Rng(mix64(seed_ ^ mix64(index + kGolden))); }

double loguniform(Rng& rng, double lo, double hi) {
  if (!(lo > 0.0)) throw ValidationError("loguniform: lower bound must be positive");
  if (!(hi >= lo)) throw ValidationError("loguniform: upper bound below lower bound");
  if (lo == hi) return lo;
  const double v = std::exp(rng.uniform(std::log(lo), std::log(hi)));
  // exp(log(x)) can drift one ulp outside the interval.
  return std::fmin(std::fmax(v, lo), hi);
}

}  // namespace connect_later
