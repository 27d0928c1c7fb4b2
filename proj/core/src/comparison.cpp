#include "qcomp/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

constexpr double kProbabilitySlack = 1e-14;
constexpr double kOverlapImagTolerance = 1e-12;

void require_finite(std::span<const Amplitude> amps) {
  for (const auto& a : amps) {
    detail::require(std::isfinite(a.real()) && std::isfinite(a.imag()),
                    "amplitudes must be finite");
  }
}

}  // namespace

Amplitude coherent_overlap(Amplitude a, Amplitude b) {
  return std::exp(-0.5 * (std::norm(a) + std::norm(b)) + std::conj(a) * b);
}

double clamp_probability(double p) {
  detail::ensure(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack,
                 "probability " + std::to_string(p) + " outside [0,1]");
  return std::clamp(p, 0.0, 1.0);
}

double p_success_two(Amplitude a, Amplitude b) {
  return clamp_probability(-std::expm1(-0.5 * std::norm(a - b)));
}

double p_success_phase(double amp, double delta) {
  detail::require(amp >= 0.0, "amplitude magnitude must be nonnegative");
  const double s = std::sin(0.5 * delta);
  return clamp_probability(-std::expm1(-2.0 * amp * amp * s * s));
}

double p_success_conjugate(Amplitude a, Amplitude b) {
  return clamp_probability(-std::expm1(-0.5 * std::norm(a + b)));
}

OutputMeans unbalanced_test(Amplitude a, Amplitude b, double transmittance,
                            double input_phase) {
  const LinearNetwork bs = make_beam_splitter(transmittance, input_phase);
  const CoherentRegister out = apply_network(bs, CoherentRegister({a, b}));
  return {out.mean_photon_number(0), out.mean_photon_number(1)};
}

MultiportForms multiport_success_forms(std::span<const Amplitude> amps) {
  const std::size_t n = amps.size();
  detail::require(n >= 2, "multiport comparison needs at least 2 states");
  require_finite(amps);
  const double nd = static_cast<double>(n);
  MultiportForms f;

  double pair_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) pair_sum += std::norm(amps[j] - amps[l]);
  }
  f.pairwise = clamp_probability(-std::expm1(-pair_sum / (2.0 * nd)));

  const CoherentRegister out = apply_network(
      make_balanced_multiport(n),
      CoherentRegister(std::vector<Amplitude>(amps.begin(), amps.end())));
  f.no_click.resize(n);
  double exponent = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double m = out.mean_photon_number(k);
    f.no_click[k] = std::exp(-m);
    if (k > 0) exponent += m;
  }
  f.per_mode = clamp_probability(-std::expm1(-exponent));

  Amplitude log_prod{};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      log_prod += -0.5 * (std::norm(amps[j]) + std::norm(amps[l])) +
                  std::conj(amps[j]) * amps[l];
    }
  }
  f.overlap_imag_residue = log_prod.imag();
  const double scale =
      std::max(1.0, std::accumulate(amps.begin(), amps.end(), 0.0,
                                    [](double s, const Amplitude& a) {
                                      return s + std::norm(a);
                                    }));
  detail::ensure(std::abs(f.overlap_imag_residue) <=
                     kOverlapImagTolerance * nd * scale,
                 "overlap product is not real");
  f.overlap_product = clamp_probability(-std::expm1(log_prod.real() / nd));
  return f;
}

double p_success_multiport(std::span<const Amplitude> amps) {
  return multiport_success_forms(amps).pairwise;
}

double p_symmetric(std::span<const Amplitude> amps) {
  const std::size_t n = amps.size();
  detail::require(n >= 2, "universal comparison needs at least 2 states");
  detail::require(n <= kMaxUniversalInputs,
                  "universal comparison limited to 8 states (N! terms)");
  require_finite(amps);

  std::vector<Amplitude> gram(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      gram[j * n + l] = coherent_overlap(amps[j], amps[l]);
    }
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Amplitude sum{};
  std::size_t count = 0;
  do {
    Amplitude term = 1.0;
    for (std::size_t j = 0; j < n; ++j) term *= gram[j * n + perm[j]];
    sum += term;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  // Each permutation pairs with its inverse (complex conjugate term).
  detail::ensure(std::abs(sum.imag()) <= 1e-10 * static_cast<double>(count),
                 "symmetric-subspace probability is not real");
  return clamp_probability(sum.real() / static_cast<double>(count));
}

double p_success_universal(std::span<const Amplitude> amps) {
  if (amps.size() == 2) {
    require_finite(amps);
    return clamp_probability(
        0.5 * (1.0 - std::norm(coherent_overlap(amps[0], amps[1]))));
  }
  return clamp_probability(1.0 - p_symmetric(amps));
}

ComparisonReport compare(std::span<const Amplitude> amps) {
  const MultiportForms f = multiport_success_forms(amps);
  ComparisonReport r;
  r.p_succ_coherent = f.pairwise;
  r.p_succ_universal = p_success_universal(amps);
  r.no_click = f.no_click;
  detail::ensure(r.p_succ_coherent >= r.p_succ_universal - 1e-12,
                 "coherent comparison below universal baseline");
  return r;
}

AmGmReport verify_amgm_inequality(std::span<const Amplitude> amps) {
  detail::require(amps.size() >= 2, "need at least 2 states");
  AmGmReport r;
  // 1 - p_succ computed directly to avoid cancellation near 1.
  double pair_sum = 0.0;
  for (const auto& a : amps) {
    for (const auto& b : amps) pair_sum += std::norm(a - b);
  }
  r.lhs = std::exp(-pair_sum / (2.0 * static_cast<double>(amps.size())));
  r.rhs = p_symmetric(amps);
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

}  // namespace qcomp
