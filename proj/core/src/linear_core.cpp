#include "qcomp/linear_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

bool finite(const Amplitude& a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

}  // namespace

CoherentRegister::CoherentRegister(std::vector<Amplitude> amplitudes)
    : amps_(std::move(amplitudes)) {
  detail::require(!amps_.empty(), "coherent register needs at least one mode");
  for (const auto& a : amps_) {
    detail::require(finite(a), "coherent amplitude must be finite");
  }
}

CoherentRegister CoherentRegister::vacuum(std::size_t modes) {
  return CoherentRegister(std::vector<Amplitude>(modes, Amplitude{}));
}

double CoherentRegister::mean_photon_number() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

double CoherentRegister::mean_photon_number(std::size_t mode) const {
  detail::require(mode < amps_.size(), "mode index out of range");
  return std::norm(amps_[mode]);
}

LinearNetwork::LinearNetwork(std::size_t dimension,
                             std::vector<Amplitude> entries, std::string label)
    : dim_(dimension), m_(std::move(entries)), label_(std::move(label)) {
  detail::require(dim_ >= 1, "network dimension must be positive");
  detail::require(m_.size() == dim_ * dim_,
                  "network entries must form a square matrix");
  for (const auto& a : m_) {
    detail::require(finite(a), "network entries must be finite");
  }
  const double defect = unitarity_defect();
  detail::ensure(defect <= kUnitarityTolerance,
                 "network '" + label_ + "' is not unitary (defect " +
                     std::to_string(defect) + ")");
}

double LinearNetwork::unitarity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      Amplitude acc{};
      for (std::size_t k = 0; k < dim_; ++k) {
        acc += (*this)(i, k) * std::conj((*this)(j, k));
      }
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

std::vector<Amplitude> LinearNetwork::creation_operator_matrix() const {
  std::vector<Amplitude> u(m_.size());
  std::transform(m_.begin(), m_.end(), u.begin(),
                 [](const Amplitude& w) { return std::conj(w); });
  return u;
}

LinearNetwork compose(const LinearNetwork& second, const LinearNetwork& first) {
  detail::require(second.dim_ == first.dim_,
                  "cannot compose networks of different dimension");
  const std::size_t n = first.dim_;
  std::vector<Amplitude> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Amplitude acc{};
      for (std::size_t k = 0; k < n; ++k) acc += second(i, k) * first(k, j);
      out[i * n + j] = acc;
    }
  }
  return LinearNetwork(n, std::move(out), second.label_ + "*" + first.label_);
}

LinearNetwork make_phase_shifter(std::span<const double> phases) {
  const std::size_t n = phases.size();
  detail::require(n >= 1, "phase shifter needs at least one mode");
  std::vector<Amplitude> m(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    detail::require(std::isfinite(phases[j]), "phase must be finite");
    m[j * n + j] = std::polar(1.0, phases[j]);
  }
  return LinearNetwork(n, std::move(m), "phase");
}

LinearNetwork make_beam_splitter(double transmittance, double input_phase) {
  detail::require(transmittance >= 0.0 && transmittance <= 1.0,
                  "beam splitter transmittance must lie in [0,1]");
  detail::require(std::isfinite(input_phase), "input phase must be finite");
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  LinearNetwork splitter(2, {t, r, r, -t}, "bs");
  if (input_phase == 0.0) return splitter;
  const double phases[2] = {input_phase, 0.0};
  const LinearNetwork shifted = compose(splitter, make_phase_shifter(phases));
  return LinearNetwork(
      2, std::vector<Amplitude>(shifted.entries().begin(),
                                shifted.entries().end()),
      "bs");
}

LinearNetwork make_balanced_multiport(std::size_t ports) {
  detail::require(ports >= 2, "balanced multiport needs at least 2 ports");
  const double scale = 1.0 / std::sqrt(static_cast<double>(ports));
  std::vector<Amplitude> m(ports * ports);
  for (std::size_t k = 0; k < ports; ++k) {
    for (std::size_t l = 0; l < ports; ++l) {
      // Reduce k*l mod N first so the phase stays accurate for large N.
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>((k * l) % ports) /
                           static_cast<double>(ports);
      m[k * ports + l] = std::polar(scale, angle);
    }
  }
  return LinearNetwork(ports, std::move(m),
                       "multiport" + std::to_string(ports));
}

CoherentRegister apply_network(const LinearNetwork& net,
                               const CoherentRegister& in) {
  detail::require(net.dimension() == in.size(),
                  "register length does not match network dimension");
  const std::size_t n = net.dimension();
  std::vector<Amplitude> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Amplitude acc{};
    for (std::size_t l = 0; l < n; ++l) acc += net(k, l) * in[l];
    out[k] = acc;
  }
  return CoherentRegister(std::move(out));
}

}  // namespace qcomp
