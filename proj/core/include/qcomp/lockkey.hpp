#pragma once

// Quantum lock-and-key: a key of M coherent states with a common magnitude and
// uniformly random phases 2 pi k / N, validated position by position against
// an identical lock string with balanced-splitter comparison.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qcomp/detection.hpp"
#include "qcomp/linear_core.hpp"
#include "qcomp/random.hpp"

namespace qcomp {

struct KeyString {
  int alphabet = 2;         ///< N, number of phases
  double amp = 0.0;         ///< common |alpha|
  std::vector<int> phases;  ///< k_j in [0, N)

  std::size_t length() const { return phases.size(); }
  /// amp * exp(2 pi i k_j / N)
  Amplitude amplitude(std::size_t position) const;
  std::vector<Amplitude> amplitudes() const;
  void validate() const;
};

/// Amplitude amp * exp(2 pi i k / N) of phase index k.
Amplitude phase_state(double amp, int k, int alphabet);

KeyString generate_key(int length, int alphabet, double amp, RandomStream& rng);

struct LockTestResult {
  bool pass = false;
  /// Counts in the difference port at each position.
  std::vector<std::uint64_t> clicks;
  /// (lock + candidate)/2 per position: what the second splitter returns as
  /// the lock state after the test, whether or not the candidate matched.
  std::vector<Amplitude> recovered;
};

/// Compares the lock (a copy of `key`) against `candidate` position by
/// position. Passes iff no difference port registers a count.
LockTestResult lock_test(const KeyString& key,
                         std::span<const Amplitude> candidate,
                         const DetectorModel& detectors, RandomStream& rng);

/// Ideal-detector pass probability prod_j exp(-|key_j - cand_j|^2 / 2).
double lock_pass_probability(const KeyString& key,
                             std::span<const Amplitude> candidate);

/// Single-position pass probability of a coherent forgery |beta| against a
/// key phase that is uniform on the circle:
/// exp(-(amp^2 + beta^2)/2) I0(amp beta).
double attack_pass_probability(double amp, double beta_mag);

/// Same average over the N discrete key phases for a forgery beta:
/// (1/N) sum_k exp(-|amp w^k - beta|^2 / 2).
double attack_pass_probability_discrete(double amp, Amplitude beta,
                                        int alphabet);

struct OptimalAttack {
  double beta_star = 0.0;
  double p_star = 0.0;
};

/// Maximises attack_pass_probability over beta in [0, 2 amp + 5]: grid scan
/// with step 1e-3 followed by golden-section refinement to 1e-8.
OptimalAttack optimal_coherent_attack(double amp);

/// p_single^M.
double forgery_string_probability(double p_single, int length);

enum class AttackKind { Vacuum, Coherent, CoherentGrid };

std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view name);

/// Forger's per-position state. Forgeries are independent across positions
/// and use a fixed phase (0): the forger does not know the key phases.
struct AttackSpec {
  AttackKind kind = AttackKind::Vacuum;
  double beta = 0.0;               ///< |beta| for Coherent
  std::vector<double> beta_grid;   ///< magnitudes for CoherentGrid

  /// Candidate string for a Vacuum or Coherent attack.
  std::vector<Amplitude> candidate(std::size_t length) const;
};

struct LockSimulation {
  TrialSummary summary;
  double analytic = 0.0;  ///< expected pass probability for the whole string
};

/// Monte Carlo of the lock test: each trial draws a fresh key from its own
/// substream and tests the forged candidate against it.
LockSimulation simulate_lock(const AttackSpec& attack, int length, int alphabet,
                             double amp, const DetectorModel& detectors,
                             std::uint64_t trials, std::uint64_t seed);

struct PhotonBudgetCheck {
  std::uint64_t measured = 0;  ///< total photon count of the candidate
  double expected = 0.0;       ///< M amp^2
  double tolerance = 0.0;
  bool pass = false;
};

/// Counts the candidate's photons and compares them with the key's mean
/// M amp^2. Default tolerance is 3 sqrt(M) amp counts (negative = default).
PhotonBudgetCheck photon_budget_check(const KeyString& key,
                                      std::span<const Amplitude> candidate,
                                      RandomStream& rng,
                                      double tolerance = -1.0);

enum class EntropyMethod { Finite, Infinite, Stirling };

std::string_view to_string(EntropyMethod method);

struct EntropyReport {
  double bits = 0.0;
  std::vector<double> eigenvalues;  ///< lambda_m (finite method only)
  EntropyMethod method = EntropyMethod::Finite;
};

/// Von Neumann entropy (bits) of rho = (1/N) sum_k |amp w^k><amp w^k|, from
/// its closed-form eigenvalues lambda_m = (1/N) sum_k
/// exp(-amp^2 (1 - w^k) + i m k 2 pi / N). Bounds the information one key
/// position can reveal.
EntropyReport holevo_entropy_finite(double amp, int alphabet);

/// Entropy of the phase-randomised state (N -> infinity), a Poisson
/// distribution with mean amp^2.
EntropyReport holevo_entropy_infinite(double amp);

/// Large-amplitude form 0.5 * log2(2 pi e amp^2) of holevo_entropy_infinite.
double stirling_entropy_approx(double amp);

}  // namespace qcomp
