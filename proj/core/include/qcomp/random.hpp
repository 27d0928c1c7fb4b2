#pragma once

#include <cstdint>
#include <limits>

namespace qcomp {

/// Counter-based random stream. Output i of stream (seed, id) is a pure
/// function of (seed, id, i), so trials keyed by index can run in any order
/// or in parallel and still reproduce bit for bit.
///
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  /// Independent stream for trial `index` of a run seeded with `seed`.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(seed, index);
  }

  /// Child stream derived from this stream's key; does not advance it.
  RandomStream split(std::uint64_t child_id) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double on the open interval (0, 1).
  double uniform();

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson variate; mean 0 returns 0 without consuming output.
  std::uint64_t poisson(double mean);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter, int);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace qcomp
