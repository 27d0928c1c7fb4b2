#include "qcomp/detection.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "qcomp/errors.hpp"

namespace qcomp {

void DetectorModel::validate() const {
  detail::require(efficiency >= 0.0 && efficiency <= 1.0,
                  "detector efficiency must lie in [0,1]");
  detail::require(dark_mean >= 0.0 && std::isfinite(dark_mean),
                  "dark count mean must be finite and nonnegative");
}

double DetectorModel::click_probability(double mean_photon) const {
  detail::require(mean_photon >= 0.0, "mean photon number must be nonnegative");
  return -std::expm1(-(efficiency * mean_photon + dark_mean));
}

bool DetectionRecord::any_click() const {
  for (auto c : counts) {
    if (c > 0) return true;
  }
  return false;
}

std::uint64_t DetectionRecord::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t sample_counts(double mean_photon, const DetectorModel& model,
                            RandomStream& rng) {
  detail::require(mean_photon >= 0.0 && std::isfinite(mean_photon),
                  "mean photon number must be finite and nonnegative");
  model.validate();
  const std::uint64_t n =
      rng.poisson(model.efficiency * mean_photon + model.dark_mean);
  if (!model.number_resolving) return n > 0 ? 1 : 0;
  return n;
}

DetectionRecord detect(const CoherentRegister& state,
                       std::span<const std::size_t> modes,
                       const DetectorModel& model, RandomStream& rng) {
  DetectionRecord rec;
  rec.counts.reserve(modes.size());
  for (auto mode : modes) {
    rec.counts.push_back(
        sample_counts(state.mean_photon_number(mode), model, rng));
  }
  return rec;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z) {
  detail::require(trials > 0, "Wilson interval needs at least one trial");
  detail::require(successes <= trials, "more successes than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  const double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double high = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {low, high};
}

double TrialSummary::standard_error(double p) const {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double TrialSummary::sigma_distance(double expected) const {
  const double diff = std::abs(rate - expected);
  if (diff == 0.0) return 0.0;
  double se = standard_error(expected);
  // Expected 0 or 1 has zero spread; fall back to the observed spread.
  if (se == 0.0) se = standard_error(rate);
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return diff / se;
}

TrialSummary run_trials(const CoherentRegister& input, const LinearNetwork& net,
                        std::span<const std::size_t> watched_modes,
                        const DetectorModel& model, std::uint64_t trials,
                        std::uint64_t seed) {
  detail::require(trials >= 1, "need at least one trial");
  detail::require(!watched_modes.empty(), "watched mode set is empty");
  model.validate();
  const CoherentRegister out = apply_network(net, input);
  for (auto m : watched_modes) {
    detail::require(m < out.size(), "watched mode index out of range");
  }
  const std::uint64_t hits = count_hits(trials, [&](std::uint64_t i) {
    RandomStream rng = RandomStream::substream(seed, i);
    for (auto m : watched_modes) {
      if (sample_counts(out.mean_photon_number(m), model, rng) > 0) return true;
    }
    return false;
  });
  TrialSummary s;
  s.trials = trials;
  s.hits = hits;
  s.rate = static_cast<double>(hits) / static_cast<double>(trials);
  s.wilson95 = wilson_interval(hits, trials);
  return s;
}

}  // namespace qcomp
