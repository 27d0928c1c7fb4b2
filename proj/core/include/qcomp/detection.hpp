#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qcomp/linear_core.hpp"
#include "qcomp/random.hpp"

namespace qcomp {

/// Photon detector. Counts from a coherent mode with mean m are
/// Poisson(efficiency * m + dark_mean); inefficiency is binomial thinning of
/// the signal and dark counts are an independent additive Poisson term per
/// detection window. Defaults describe the ideal detector.
struct DetectorModel {
  double efficiency = 1.0;
  double dark_mean = 0.0;
  bool number_resolving = true;

  static DetectorModel ideal() { return {}; }

  /// Throws ValidationError when a field is out of range.
  void validate() const;

  /// Probability of at least one count for a mode with the given mean.
  double click_probability(double mean_photon) const;
};

/// Per-mode detector outcomes of one detection window. When the detector is
/// not number resolving, each entry is 0 (no click) or 1 (click).
struct DetectionRecord {
  std::vector<std::uint64_t> counts;

  bool any_click() const;
  std::uint64_t total() const;
};

std::uint64_t sample_counts(double mean_photon, const DetectorModel& model,
                            RandomStream& rng);

/// Detects the listed modes of a coherent product (one window).
DetectionRecord detect(const CoherentRegister& state,
                       std::span<const std::size_t> modes,
                       const DetectorModel& model, RandomStream& rng);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z = 1.959963984540054);

struct TrialSummary {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double rate = 0.0;
  Interval wilson95;

  /// Binomial standard error sqrt(p(1-p)/n) evaluated at `p`.
  double standard_error(double p) const;
  /// |rate - expected| in units of the binomial standard error at expected
  /// (0 when both agree exactly).
  double sigma_distance(double expected) const;
};

/// Repeats "send `input` through `net`, detect `watched_modes`" for the given
/// number of trials. A trial is a hit when any watched detector registers at
/// least one count. Trial i draws from RandomStream::substream(seed, i).
TrialSummary run_trials(const CoherentRegister& input, const LinearNetwork& net,
                        std::span<const std::size_t> watched_modes,
                        const DetectorModel& model, std::uint64_t trials,
                        std::uint64_t seed);

/// Order-independent parallel count of trial indices in [0, trials) for which
/// `hit(i)` is true. `hit` must be safe to call concurrently.
template <typename Pred>
std::uint64_t count_hits(std::uint64_t trials, Pred&& hit);

}  // namespace qcomp

#include "qcomp/detail/parallel.hpp"
