#include "qcomp/fock_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

// log(n!) for n = 0..max_n, accumulated exactly term by term.
std::vector<double> log_factorials(int max_n) {
  std::vector<double> lf(static_cast<std::size_t>(max_n) + 1, 0.0);
  for (int n = 1; n <= max_n; ++n) lf[n] = lf[n - 1] + std::log(double(n));
  return lf;
}

// powers[e] = w^e for e = 0..max_e.
std::vector<Amplitude> powers(Amplitude w, int max_e) {
  std::vector<Amplitude> p(static_cast<std::size_t>(max_e) + 1);
  p[0] = 1.0;
  for (int e = 1; e <= max_e; ++e) p[e] = p[e - 1] * w;
  return p;
}

}  // namespace

FockVector::FockVector(int cutoff, int modes) : cutoff_(cutoff), modes_(modes) {
  detail::require(cutoff >= 1, "Fock cutoff must be at least 1");
  detail::require(modes == 1 || modes == 2, "Fock oracle supports 1 or 2 modes");
  const std::size_t d = dimension_per_mode();
  amps_.assign(modes == 1 ? d : d * d, Amplitude{});
}

std::size_t FockVector::index(int na, int nb) const {
  detail::require(na >= 0 && na <= cutoff_ && nb >= 0 && nb <= cutoff_,
                  "photon number outside the truncated space");
  return static_cast<std::size_t>(na) * dimension_per_mode() +
         static_cast<std::size_t>(nb);
}

Amplitude& FockVector::operator()(int n) {
  detail::require(modes_ == 1, "single-index access needs a one-mode state");
  detail::require(n >= 0 && n <= cutoff_,
                  "photon number outside the truncated space");
  return amps_[static_cast<std::size_t>(n)];
}

const Amplitude& FockVector::operator()(int n) const {
  return const_cast<FockVector&>(*this)(n);
}

Amplitude& FockVector::operator()(int na, int nb) {
  detail::require(modes_ == 2, "two-index access needs a two-mode state");
  return amps_[index(na, nb)];
}

const Amplitude& FockVector::operator()(int na, int nb) const {
  return const_cast<FockVector&>(*this)(na, nb);
}

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

double FockVector::mean_photon_number(int mode) const {
  const auto dist = photon_distribution(*this, mode);
  double m = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) m += double(n) * dist[n];
  return m;
}

Amplitude inner_product(const FockVector& a, const FockVector& b) {
  detail::require(a.modes() == b.modes() && a.cutoff() == b.cutoff(),
                  "Fock vectors have different shapes");
  Amplitude s{};
  const auto& x = a.amplitudes();
  const auto& y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double fidelity(const FockVector& a, const FockVector& b) {
  return std::norm(inner_product(a, b));
}

FockVector tensor_product(const FockVector& a, const FockVector& b) {
  detail::require(a.modes() == 1 && b.modes() == 1,
                  "tensor product takes two single-mode states");
  detail::require(a.cutoff() == b.cutoff(), "cutoffs differ");
  FockVector out(a.cutoff(), 2);
  for (int i = 0; i <= a.cutoff(); ++i) {
    for (int j = 0; j <= b.cutoff(); ++j) out(i, j) = a(i) * b(j);
  }
  return out;
}

int default_cutoff(double magnitude) {
  detail::require(magnitude >= 0.0 && std::isfinite(magnitude),
                  "amplitude magnitude must be finite and nonnegative");
  return std::max(20, static_cast<int>(std::ceil(magnitude * magnitude +
                                                 10.0 * magnitude)));
}

FockVector coherent_fock(Amplitude alpha, int cutoff) {
  detail::require(cutoff >= 1, "Fock cutoff must be at least 1");
  FockVector v(cutoff, 1);
  Amplitude term = std::exp(-0.5 * std::norm(alpha));
  v(0) = term;
  for (int n = 1; n <= cutoff; ++n) {
    term *= alpha / std::sqrt(static_cast<double>(n));
    v(n) = term;
  }
  return v;
}

SqueezedVacuum squeezed_vacuum_fock(Amplitude xi, int cutoff) {
  detail::require(std::abs(xi) < 0.5,
                  "squeezing parameter must satisfy |xi| < 1/2");
  detail::require(cutoff >= 2 && cutoff % 2 == 0,
                  "squeezed-vacuum cutoff must be even and at least 2");
  const double s = std::pow(1.0 - 4.0 * std::norm(xi), 0.25);
  FockVector v(cutoff, 1);
  Amplitude c = s;
  for (int k = 0; 2 * k <= cutoff; ++k) {
    v(2 * k) = c;
    // c_{k+1} = c_k xi sqrt((2k+1)(2k+2)) / (k+1)
    c *= xi * std::sqrt(double(2 * k + 1) * double(2 * k + 2)) / double(k + 1);
  }
  return {std::move(v), s};
}

FockVector apply_network_fock(const LinearNetwork& net, const FockVector& state) {
  detail::require(net.dimension() == 2, "Fock network must be two-mode");
  detail::require(state.modes() == 2, "Fock network needs a two-mode state");
  const int cutoff = state.cutoff();
  const auto lf = log_factorials(cutoff);
  // a^dag -> W00 A^dag + W10 B^dag, b^dag -> W01 A^dag + W11 B^dag.
  const auto w00 = powers(net(0, 0), cutoff);
  const auto w10 = powers(net(1, 0), cutoff);
  const auto w01 = powers(net(0, 1), cutoff);
  const auto w11 = powers(net(1, 1), cutoff);

  FockVector out(cutoff, 2);
  for (int n = 0; n <= cutoff; ++n) {
    for (int q = 0; q <= n; ++q) {
      const int p = n - q;
      const Amplitude in = state(p, q);
      if (in == Amplitude{}) continue;
      // |p,q> = a^dag^p b^dag^q / sqrt(p! q!) |0>
      for (int i = 0; i <= p; ++i) {
        const double lb_i = lf[p] - lf[i] - lf[p - i];
        const Amplitude fa = w00[p - i] * w10[i];
        for (int j = 0; j <= q; ++j) {
          const int m = i + j;  // photons in output mode b
          const double lb_j = lf[q] - lf[j] - lf[q - j];
          const double mag = std::exp(lb_i + lb_j +
                                      0.5 * (lf[n - m] + lf[m] - lf[p] - lf[q]));
          out(n - m, m) += in * fa * w01[q - j] * w11[j] * mag;
        }
      }
    }
  }
  return out;
}

FockVector apply_bs_fock(const FockVector& state, double transmittance,
                         double input_phase) {
  return apply_network_fock(make_beam_splitter(transmittance, input_phase),
                            state);
}

std::vector<double> photon_distribution(const FockVector& state, int mode) {
  detail::require(mode >= 0 && mode < state.modes(), "mode index out of range");
  const int c = state.cutoff();
  std::vector<double> p(static_cast<std::size_t>(c) + 1, 0.0);
  if (state.modes() == 1) {
    for (int n = 0; n <= c; ++n) p[n] = std::norm(state(n));
    return p;
  }
  for (int i = 0; i <= c; ++i) {
    for (int j = 0; j <= c; ++j) {
      p[mode == 0 ? i : j] += std::norm(state(i, j));
    }
  }
  return p;
}

double odd_photon_probability(Amplitude xi1, Amplitude xi2, int cutoff) {
  const auto a = squeezed_vacuum_fock(xi1, cutoff);
  const auto b = squeezed_vacuum_fock(xi2, cutoff);
  const FockVector out = apply_bs_fock(tensor_product(a.state, b.state), 0.5);
  double odd = 0.0;
  for (int i = 0; i <= cutoff; ++i) {
    for (int j = 0; j <= cutoff; ++j) {
      if ((i % 2) == 1 || (j % 2) == 1) odd += std::norm(out(i, j));
    }
  }
  return odd;
}

FockVector su2_pass_state(int n, int cutoff) {
  detail::require(n >= 0, "photon number must be nonnegative");
  detail::require(n <= cutoff, "photon number exceeds the cutoff");
  const auto lf = log_factorials(n);
  FockVector v(cutoff, 2);
  for (int k = 0; k <= n; ++k) {
    const double log_binom = lf[n] - lf[k] - lf[n - k];
    v(n - k, k) = std::exp(0.5 * log_binom - 0.5 * n * std::numbers::ln2);
  }
  return v;
}

FockVector squeezed_pass_state(int m, int n, int cutoff) {
  detail::require(m >= 0 && n >= 0, "photon numbers must be nonnegative");
  detail::require(m % 2 == 0 && n % 2 == 0,
                  "squeezed pass states need even photon numbers");
  detail::require(m + n <= cutoff, "m + n exceeds the cutoff");
  const int total = m + n;
  const auto lf = log_factorials(total);
  const double log_norm =
      -0.5 * (total * std::numbers::ln2 + lf[m] + lf[n]);
  FockVector v(cutoff, 2);
  for (int k = 0; k <= m; ++k) {
    for (int l = 0; l <= n; ++l) {
      const double log_mag = log_norm + (lf[m] - lf[k] - lf[m - k]) +
                             (lf[n] - lf[l] - lf[n - l]) +
                             0.5 * (lf[total - k - l] + lf[k + l]);
      const double sign = (l % 2 == 0) ? 1.0 : -1.0;
      v(total - k - l, k + l) += sign * std::exp(log_mag);
    }
  }
  return v;
}

std::vector<double> phase_ensemble_eigenvalues(double amp, int phases,
                                               int cutoff) {
  detail::require(phases >= 1, "need at least one phase");
  detail::require(amp >= 0.0 && std::isfinite(amp),
                  "amplitude must be finite and nonnegative");
  const int d = cutoff + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < phases; ++k) {
    const Amplitude alpha =
        std::polar(amp, 2.0 * std::numbers::pi * k / phases);
    const FockVector v = coherent_fock(alpha, cutoff);
    Eigen::VectorXcd col(d);
    for (int n = 0; n < d; ++n) col(n) = v(n);
    rho += col * col.adjoint();
  }
  rho /= static_cast<double>(phases);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      rho, Eigen::EigenvaluesOnly);
  detail::ensure(solver.info() == Eigen::Success,
                 "density matrix diagonalisation failed");
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + d);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

}  // namespace qcomp
