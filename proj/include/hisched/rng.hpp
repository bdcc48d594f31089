#pragma once

#include <cstdint>
#include <random>

namespace hisched {

// Random-number contract for a run.
//
// A run seed feeds three independent mt19937_64 substreams:
//
//   arrivals - one uniform per non-throughput UE per slot, ascending id
//   policy   - randomized policy only: exactly one uniform per slot
//   channel  - one uniform per transmission attempt
//
// Within a slot draws happen in that order. Arrivals never share a stream
// with policy or channel draws, so every policy sees the same arrival trace
// for a given seed. Uniforms are built from the top 53 bits of the engine
// output, which keeps traces identical across standard libraries.

/// splitmix64 finalizer; used to spread seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for grid point `point`, replicate `replicate` of a sweep:
/// mix64(base ^ mix64((point << 32) | replicate)).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point, std::uint64_t replicate) {
  return mix64(base ^ mix64((point << 32) | (replicate & 0xFFFFFFFFULL)));
}

class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double prob) { return next() < prob; }

 private:
  std::mt19937_64 engine_;
};

struct RunStreams {
  explicit RunStreams(std::uint64_t seed)
      : arrivals(mix64(seed ^ 0xA55A0001ULL)),
        policy(mix64(seed ^ 0xA55A0002ULL)),
        channel(mix64(seed ^ 0xA55A0003ULL)) {}

  UniformStream arrivals;
  UniformStream policy;
  UniformStream channel;
};

}  // namespace hisched
