#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qcomp {

using Amplitude = std::complex<double>;

/// Product of single-mode coherent states |a_0> (x) ... (x) |a_{N-1}>,
/// represented exactly by its list of complex amplitudes.
class CoherentRegister {
 public:
  CoherentRegister() = default;
  explicit CoherentRegister(std::vector<Amplitude> amplitudes);

  /// N copies of the vacuum.
  static CoherentRegister vacuum(std::size_t modes);

  std::size_t size() const { return amps_.size(); }
  const Amplitude& operator[](std::size_t mode) const { return amps_[mode]; }
  std::span<const Amplitude> amplitudes() const { return amps_; }

  /// Sum of |a_j|^2.
  double mean_photon_number() const;

  /// Mean photon number of a single mode, |a_mode|^2.
  double mean_photon_number(std::size_t mode) const;

 private:
  std::vector<Amplitude> amps_;
};

/// Lossless N-mode linear-optical network.
///
/// The stored matrix W is the amplitude-transfer matrix: a coherent product
/// with amplitudes a leaves the network as the coherent product with
/// amplitudes g = W a. Equivalently each input creation operator maps as
/// a_l^dag -> sum_k W_kl b_k^dag. For the balanced multiport W is the complex
/// conjugate of the DFT matrix u_kl = exp(2 pi i k l / N)/sqrt(N), so that
/// g_k = sum_l a_l u*_lk.
class LinearNetwork {
 public:
  static constexpr double kUnitarityTolerance = 1e-10;

  /// Row-major N*N entries. Throws InvariantViolation if W W^dag deviates
  /// from the identity by more than kUnitarityTolerance (max-norm).
  LinearNetwork(std::size_t dimension, std::vector<Amplitude> entries,
                std::string label = {});

  std::size_t dimension() const { return dim_; }
  const std::string& label() const { return label_; }
  const Amplitude& operator()(std::size_t row, std::size_t col) const {
    return m_[row * dim_ + col];
  }
  std::span<const Amplitude> entries() const { return m_; }

  /// Max-norm of W W^dag - I.
  double unitarity_defect() const;

  /// Row-major matrix u of the output creation operators,
  /// b_k^dag = sum_l u_kl a_l^dag. For a unitary W this is conj(W).
  std::vector<Amplitude> creation_operator_matrix() const;

  /// Network that applies `second` after `first`: W = W_second * W_first.
  friend LinearNetwork compose(const LinearNetwork& second,
                               const LinearNetwork& first);
  friend LinearNetwork operator*(const LinearNetwork& lhs,
                                 const LinearNetwork& rhs) {
    return compose(lhs, rhs);
  }

 private:
  std::size_t dim_;
  std::vector<Amplitude> m_;
  std::string label_;
};

/// Diagonal network applying phase e^{i phi_j} to mode j.
LinearNetwork make_phase_shifter(std::span<const double> phases);

/// Two-mode beam splitter with transmittance T (R = 1 - T) and a phase theta
/// on input mode 0. Rows are (sqrt(T) e^{i theta}, sqrt(R)) and
/// (sqrt(R) e^{i theta}, -sqrt(T)), so (a, b) -> (sqrt(T)e^{i theta}a +
/// sqrt(R)b, sqrt(R)e^{i theta}a - sqrt(T)b). T = 1/2, theta = 0 is the
/// balanced splitter (a, b) -> ((a+b)/sqrt2, (a-b)/sqrt2).
LinearNetwork make_beam_splitter(double transmittance, double input_phase = 0.0);

/// N-port balanced multiport (DFT); N >= 2.
LinearNetwork make_balanced_multiport(std::size_t ports);

/// Propagates a coherent product through the network; g = W a.
CoherentRegister apply_network(const LinearNetwork& net,
                               const CoherentRegister& in);

}  // namespace qcomp
