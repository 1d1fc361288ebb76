#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cphmm {

/// Mixes a base seed with a job identity into an independent stream seed.
/// Used so that parallel jobs draw from streams fixed by what they compute,
/// not by when they run.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> identity);

/// Random source with platform-independent output. std::mt19937_64 is fully
/// specified by the standard; the distributions in <random> are not, so the
/// conversions to real/integer ranges are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [lo, hi] (inclusive), rejection sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cphmm
