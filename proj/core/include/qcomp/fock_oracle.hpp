#pragma once

// Truncated photon-number representation of one- and two-mode states. Used
// as a brute-force reference for the coherent-state algebra and to host the
// squeezed-vacuum comparison and the "always passes" state families.

#include <cstddef>
#include <vector>

#include "qcomp/linear_core.hpp"

namespace qcomp {

/// Amplitudes over number states |n> (one mode) or |n_a, n_b> (two modes),
/// each occupation running 0..cutoff.
class FockVector {
 public:
  FockVector(int cutoff, int modes);

  int cutoff() const { return cutoff_; }
  int modes() const { return modes_; }
  std::size_t dimension_per_mode() const {
    return static_cast<std::size_t>(cutoff_) + 1;
  }

  Amplitude& operator()(int n);
  const Amplitude& operator()(int n) const;
  Amplitude& operator()(int na, int nb);
  const Amplitude& operator()(int na, int nb) const;

  const std::vector<Amplitude>& amplitudes() const { return amps_; }

  double norm_squared() const;
  /// 1 - <v|v>: probability mass lost to truncation.
  double truncation_deficit() const { return 1.0 - norm_squared(); }

  /// Mean photon number of one mode.
  double mean_photon_number(int mode = 0) const;

 private:
  std::size_t index(int na, int nb) const;

  int cutoff_;
  int modes_;
  std::vector<Amplitude> amps_;
};

/// |<a|b>|^2. Both vectors must have the same shape.
double fidelity(const FockVector& a, const FockVector& b);

/// <a|b>.
Amplitude inner_product(const FockVector& a, const FockVector& b);

/// Two-mode product state; both factors must be single-mode with equal cutoff.
FockVector tensor_product(const FockVector& a, const FockVector& b);

/// max(20, ceil(|alpha|^2 + 10|alpha|)).
int default_cutoff(double magnitude);

/// amps[n] = e^{-|alpha|^2/2} alpha^n / sqrt(n!), n <= cutoff.
FockVector coherent_fock(Amplitude alpha, int cutoff);

struct SqueezedVacuum {
  FockVector state;
  /// s in s * exp(xi a^dag^2)|0>, s = (1 - 4|xi|^2)^{1/4}.
  double normalization;
};

/// s * exp(xi a^dag^2)|0>: amps[2k] = s xi^k sqrt((2k)!)/k!, odd entries 0.
/// The series converges only for |xi| < 1/2.
SqueezedVacuum squeezed_vacuum_fock(Amplitude xi, int cutoff);

/// Applies a two-mode linear network exactly, one total-photon-number block
/// at a time: every input creation operator a_l^dag is replaced by
/// sum_k W_kl b_k^dag and the resulting polynomial is re-expanded. Components
/// with n_a + n_b > cutoff cannot be represented on output and are dropped
/// (they add to the truncation deficit).
FockVector apply_network_fock(const LinearNetwork& net, const FockVector& state);

/// apply_network_fock with make_beam_splitter(transmittance, input_phase).
FockVector apply_bs_fock(const FockVector& state, double transmittance,
                         double input_phase = 0.0);

/// Photon-number distribution of one mode (marginal for two-mode states).
std::vector<double> photon_distribution(const FockVector& state, int mode);

/// Probability that at least one output of a balanced beam splitter fed with
/// squeezed vacua xi1 (mode a) and xi2 (mode b) carries an odd photon count.
/// Zero when xi1 == xi2.
double odd_photon_probability(Amplitude xi1, Amplitude xi2, int cutoff = 40);

/// Input state that the balanced splitter maps to |n>_a |0>_b:
/// 2^{-n/2} sum_k sqrt(C(n,k)) |n-k>_a |k>_b.
FockVector su2_pass_state(int n, int cutoff);

/// Input state that the balanced splitter maps to |m>_a |n>_b for even m, n;
/// these always pass the squeezed-vacuum parity comparison.
FockVector squeezed_pass_state(int m, int n, int cutoff);

/// Eigenvalues (descending) of rho = (1/N) sum_k |amp w^k><amp w^k|,
/// w = exp(2 pi i/N), obtained by building rho in the Fock basis truncated at
/// `cutoff` and diagonalising it numerically.
std::vector<double> phase_ensemble_eigenvalues(double amp, int phases,
                                               int cutoff);

}  // namespace qcomp
