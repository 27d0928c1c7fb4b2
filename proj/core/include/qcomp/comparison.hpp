#pragma once

// Success probabilities for unambiguous comparison of coherent states by a
// beam splitter or balanced multiport, and the universal (symmetric-subspace)
// strategy they are measured against.

#include <cstddef>
#include <span>
#include <vector>

#include "qcomp/linear_core.hpp"

namespace qcomp {

/// <a|b> = exp(-(|a|^2 + |b|^2)/2 + conj(a) b).
Amplitude coherent_overlap(Amplitude a, Amplitude b);

/// Rounds p into [0,1]. Values further than 1e-14 outside the interval are
/// treated as a logic error (InvariantViolation), not rounding.
double clamp_probability(double p);

/// 1 - exp(-|a - b|^2 / 2): a click in the difference port of a balanced
/// splitter.
double p_success_two(Amplitude a, Amplitude b);

/// Equal magnitudes with relative phase delta: 1 - exp(-2 amp^2 sin^2(delta/2)),
/// the two-state formula with |a - a e^{i delta}|^2 = 4 amp^2 sin^2(delta/2).
double p_success_phase(double amp, double delta);

/// 1 - exp(-|a + b|^2 / 2): a click in the sum port, which shows a != -b.
double p_success_conjugate(Amplitude a, Amplitude b);

struct OutputMeans {
  double first = 0.0;   ///< |sqrt(T) e^{i theta} a + sqrt(R) b|^2
  double second = 0.0;  ///< |sqrt(R) e^{i theta} a - sqrt(T) b|^2
};

/// Mean photon numbers of the two outputs of an unbalanced splitter.
OutputMeans unbalanced_test(Amplitude a, Amplitude b, double transmittance,
                            double input_phase);

/// The three equivalent closed forms of the multiport success probability.
struct MultiportForms {
  /// 1 - exp(-(1/2N) sum_{j,l} |a_j - a_l|^2)
  double pairwise = 0.0;
  /// 1 - prod_{k>=1} p_k(0), with output amplitudes from linear_core.
  double per_mode = 0.0;
  /// 1 - (prod_{j,l} <a_j|a_l>)^{1/N}
  double overlap_product = 0.0;
  /// Imaginary part of log prod_{j,l} <a_j|a_l>, which cancels analytically.
  double overlap_imag_residue = 0.0;
  /// p_k(0) = exp(-|g_k|^2) for every output k = 0..N-1.
  std::vector<double> no_click;
};

MultiportForms multiport_success_forms(std::span<const Amplitude> amps);

/// Probability that a balanced N-port flags the inputs as different
/// (a click in any of the outputs 1..N-1). N >= 2.
double p_success_multiport(std::span<const Amplitude> amps);

inline constexpr std::size_t kMaxUniversalInputs = 8;

/// <psi|P_sym|psi> for the product of coherent states: the average over all
/// N! permutations s of prod_j <a_j|a_{s(j)}>. 2 <= N <= 8.
double p_symmetric(std::span<const Amplitude> amps);

/// Success probability 1 - p_symm of the universal comparison. For two
/// states this is (1 - |<a|b>|^2)/2.
double p_success_universal(std::span<const Amplitude> amps);

struct ComparisonReport {
  double p_succ_coherent = 0.0;
  double p_succ_universal = 0.0;
  std::vector<double> no_click;
};

ComparisonReport compare(std::span<const Amplitude> amps);

struct AmGmReport {
  double lhs = 0.0;  ///< 1 - p_success_multiport
  double rhs = 0.0;  ///< p_symm
  bool holds = false;
};

/// Checks 1 - p_succ <= p_symm (+1e-12), i.e. the tailored multiport never
/// fails more often than the universal strategy.
AmGmReport verify_amgm_inequality(std::span<const Amplitude> amps);

}  // namespace qcomp
