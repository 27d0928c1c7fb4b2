#include "qcomp/random.hpp"

#include <cmath>
#include <random>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : key_(mix64(mix64(seed + kGolden) ^ mix64(stream_id * kGolden + 1))) {}

RandomStream::RandomStream(std::uint64_t key, std::uint64_t counter, int)
    : key_(key), counter_(counter) {}

RandomStream RandomStream::split(std::uint64_t child_id) const {
  return RandomStream(mix64(key_ ^ mix64((child_id + 1) * kGolden)), 0, 0);
}

RandomStream::result_type RandomStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform() {
  // 53 random bits centred in their cell: never exactly 0 or 1.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RandomStream::poisson(double mean) {
  detail::require(mean >= 0.0 && std::isfinite(mean),
                  "Poisson mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Inversion by sequential search.
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      const double next = cdf + p;
      if (next == cdf) break;
      cdf = next;
    }
    return k;
  }
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(*this);
}

}  // namespace qcomp
