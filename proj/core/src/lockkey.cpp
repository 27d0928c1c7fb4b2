#include "qcomp/lockkey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcomp/bessel.hpp"
#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Per-position pass probability for a given difference |lock - cand|^2 and a
// (possibly non-ideal) detector in the difference port.
double position_pass(double diff_norm, const DetectorModel& det) {
  return std::exp(-(det.efficiency * 0.5 * diff_norm + det.dark_mean));
}

// log of exp(-b^2/2) I0(a b), i.e. log p_pass + a^2/2. Written with log1p so
// the curvature near b = 0 survives rounding.
double log_pass_shifted(double amp, double beta) {
  return -0.5 * beta * beta + std::log1p(bessel_i0m1(amp * beta));
}

}  // namespace

Amplitude phase_state(double amp, int k, int alphabet) {
  detail::require(alphabet >= 1, "phase alphabet must be positive");
  return std::polar(amp, kTwoPi * double(k % alphabet) / double(alphabet));
}

Amplitude KeyString::amplitude(std::size_t position) const {
  detail::require(position < phases.size(), "key position out of range");
  return phase_state(amp, phases[position], alphabet);
}

std::vector<Amplitude> KeyString::amplitudes() const {
  std::vector<Amplitude> out(phases.size());
  for (std::size_t j = 0; j < phases.size(); ++j) out[j] = amplitude(j);
  return out;
}

void KeyString::validate() const {
  detail::require(!phases.empty(), "key must have at least one position");
  detail::require(alphabet >= 2, "key alphabet must have at least 2 phases");
  detail::require(amp >= 0.0 && std::isfinite(amp),
                  "key amplitude must be finite and nonnegative");
  for (int k : phases) {
    detail::require(k >= 0 && k < alphabet, "key phase index out of range");
  }
}

KeyString generate_key(int length, int alphabet, double amp, RandomStream& rng) {
  detail::require(length >= 1, "key length must be at least 1");
  detail::require(alphabet >= 2, "key alphabet must have at least 2 phases");
  detail::require(amp >= 0.0 && std::isfinite(amp),
                  "key amplitude must be finite and nonnegative");
  KeyString key;
  key.alphabet = alphabet;
  key.amp = amp;
  key.phases.resize(static_cast<std::size_t>(length));
  for (auto& k : key.phases) {
    k = std::min(alphabet - 1, static_cast<int>(rng.uniform() * alphabet));
  }
  return key;
}

LockTestResult lock_test(const KeyString& key,
                         std::span<const Amplitude> candidate,
                         const DetectorModel& detectors, RandomStream& rng) {
  key.validate();
  detectors.validate();
  detail::require(candidate.size() == key.length(),
                  "candidate length does not match the key");
  const LinearNetwork bs = make_beam_splitter(0.5);
  const LinearNetwork rebuild = make_beam_splitter(0.5);
  LockTestResult r;
  r.pass = true;
  r.clicks.resize(key.length());
  r.recovered.resize(key.length());
  for (std::size_t j = 0; j < key.length(); ++j) {
    const CoherentRegister out =
        apply_network(bs, CoherentRegister({key.amplitude(j), candidate[j]}));
    r.clicks[j] = sample_counts(out.mean_photon_number(1), detectors, rng);
    if (r.clicks[j] > 0) r.pass = false;
    // Split the sum port again; both halves carry (lock + candidate)/2.
    const CoherentRegister halves =
        apply_network(rebuild, CoherentRegister({out[0], Amplitude{}}));
    r.recovered[j] = halves[0];
  }
  return r;
}

double lock_pass_probability(const KeyString& key,
                             std::span<const Amplitude> candidate) {
  detail::require(candidate.size() == key.length(),
                  "candidate length does not match the key");
  double log_p = 0.0;
  for (std::size_t j = 0; j < key.length(); ++j) {
    log_p -= 0.5 * std::norm(key.amplitude(j) - candidate[j]);
  }
  return std::exp(log_p);
}

double attack_pass_probability(double amp, double beta_mag) {
  detail::require(amp >= 0.0 && beta_mag >= 0.0,
                  "amplitude magnitudes must be nonnegative");
  return std::exp(-0.5 * (amp * amp + beta_mag * beta_mag) +
                  log_bessel_i0(amp * beta_mag));
}

double attack_pass_probability_discrete(double amp, Amplitude beta,
                                        int alphabet) {
  detail::require(alphabet >= 1, "phase alphabet must be positive");
  detail::require(amp >= 0.0, "amplitude magnitude must be nonnegative");
  double sum = 0.0;
  for (int k = 0; k < alphabet; ++k) {
    sum += std::exp(-0.5 * std::norm(phase_state(amp, k, alphabet) - beta));
  }
  return sum / alphabet;
}

OptimalAttack optimal_coherent_attack(double amp) {
  detail::require(amp >= 0.0 && std::isfinite(amp),
                  "amplitude must be finite and nonnegative");
  constexpr double kStep = 1e-3;
  constexpr double kRefineTol = 1e-8;
  const double upper = 2.0 * amp + 5.0;
  const auto steps = static_cast<std::size_t>(std::ceil(upper / kStep));

  std::size_t best = 0;
  double best_val = log_pass_shifted(amp, 0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double v = log_pass_shifted(amp, std::min(upper, double(i) * kStep));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }

  double lo = best == 0 ? 0.0 : double(best - 1) * kStep;
  double hi = std::min(upper, double(best + 1) * kStep);
  const double lo0 = lo;
  const double hi0 = hi;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = log_pass_shifted(amp, x1);
  double f2 = log_pass_shifted(amp, x2);
  while (hi - lo > kRefineTol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = log_pass_shifted(amp, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = log_pass_shifted(amp, x1);
    }
  }

  // The bracket endpoints compete too; this keeps an exact 0 when the
  // optimum sits on the boundary.
  double beta = 0.5 * (lo + hi);
  double val = log_pass_shifted(amp, beta);
  for (double cand : {lo0, hi0}) {
    const double v = log_pass_shifted(amp, cand);
    if (v >= val) {
      val = v;
      beta = cand;
    }
  }
  return {beta, std::exp(val - 0.5 * amp * amp)};
}

double forgery_string_probability(double p_single, int length) {
  detail::require(p_single >= 0.0 && p_single <= 1.0,
                  "single-position probability must lie in [0,1]");
  detail::require(length >= 1, "key length must be at least 1");
  return std::pow(p_single, length);
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::Vacuum: return "vacuum";
    case AttackKind::Coherent: return "coherent";
    case AttackKind::CoherentGrid: return "coherent-grid";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view name) {
  if (name == "vacuum") return AttackKind::Vacuum;
  if (name == "coherent") return AttackKind::Coherent;
  if (name == "coherent-grid") return AttackKind::CoherentGrid;
  throw ValidationError("unknown attack kind '" + std::string(name) + "'");
}

std::vector<Amplitude> AttackSpec::candidate(std::size_t length) const {
  detail::require(beta >= 0.0, "forgery magnitude must be nonnegative");
  switch (kind) {
    case AttackKind::Vacuum:
      return std::vector<Amplitude>(length, Amplitude{});
    case AttackKind::Coherent:
      return std::vector<Amplitude>(length, Amplitude{beta, 0.0});
    case AttackKind::CoherentGrid:
      break;
  }
  throw ValidationError("a coherent-grid attack is a scan, not one candidate");
}

LockSimulation simulate_lock(const AttackSpec& attack, int length, int alphabet,
                             double amp, const DetectorModel& detectors,
                             std::uint64_t trials, std::uint64_t seed) {
  detail::require(trials >= 1, "need at least one trial");
  detectors.validate();
  const std::vector<Amplitude> cand =
      attack.candidate(static_cast<std::size_t>(length));
  // Validates length/alphabet/amp up front.
  {
    RandomStream probe(seed, 0);
    (void)generate_key(length, alphabet, amp, probe);
  }

  const std::uint64_t hits = count_hits(trials, [&](std::uint64_t i) {
    RandomStream rng = RandomStream::substream(seed, i);
    const KeyString key = generate_key(length, alphabet, amp, rng);
    return lock_test(key, cand, detectors, rng).pass;
  });

  double per_position = 0.0;
  for (int k = 0; k < alphabet; ++k) {
    per_position +=
        position_pass(std::norm(phase_state(amp, k, alphabet) - cand[0]),
                      detectors);
  }
  per_position /= alphabet;

  LockSimulation s;
  s.summary.trials = trials;
  s.summary.hits = hits;
  s.summary.rate = double(hits) / double(trials);
  s.summary.wilson95 = wilson_interval(hits, trials);
  s.analytic = std::pow(per_position, length);
  return s;
}

PhotonBudgetCheck photon_budget_check(const KeyString& key,
                                      std::span<const Amplitude> candidate,
                                      RandomStream& rng, double tolerance) {
  key.validate();
  detail::require(candidate.size() == key.length(),
                  "candidate length does not match the key");
  PhotonBudgetCheck c;
  const double m = static_cast<double>(key.length());
  c.expected = m * key.amp * key.amp;
  c.tolerance = tolerance >= 0.0 ? tolerance : 3.0 * std::sqrt(m) * key.amp;
  double mean = 0.0;
  for (const auto& b : candidate) mean += std::norm(b);
  c.measured = rng.poisson(mean);
  c.pass = std::abs(double(c.measured) - c.expected) <= c.tolerance;
  return c;
}

std::string_view to_string(EntropyMethod method) {
  switch (method) {
    case EntropyMethod::Finite: return "finite";
    case EntropyMethod::Infinite: return "infinite";
    case EntropyMethod::Stirling: return "stirling";
  }
  return "?";
}

EntropyReport holevo_entropy_finite(double amp, int alphabet) {
  detail::require(alphabet >= 2, "phase alphabet must have at least 2 phases");
  detail::require(amp >= 0.0 && std::isfinite(amp),
                  "amplitude must be finite and nonnegative");
  const double a2 = amp * amp;
  const double n = alphabet;
  EntropyReport r;
  r.method = EntropyMethod::Finite;
  r.eigenvalues.resize(static_cast<std::size_t>(alphabet));
  // <amp|amp w^k> = exp(-amp^2 (1 - w^k)), independent of m.
  std::vector<Amplitude> overlap(static_cast<std::size_t>(alphabet));
  for (int k = 0; k < alphabet; ++k) {
    const Amplitude w = std::polar(1.0, kTwoPi * k / n);
    overlap[k] = std::exp(-a2 * (1.0 - w));
  }
  for (int m = 0; m < alphabet; ++m) {
    Amplitude inv_k2{};  // K_m^{-2}
    for (int k = 0; k < alphabet; ++k) {
      inv_k2 += overlap[k] *
                std::polar(1.0, kTwoPi * double((m * k) % alphabet) / n);
    }
    const double lambda = inv_k2.real() / n;
    detail::ensure(std::abs(inv_k2.imag()) / n < 1e-10,
                   "eigenvalue has a non-negligible imaginary part");
    detail::ensure(lambda >= -1e-12, "negative density-matrix eigenvalue");
    r.eigenvalues[m] = std::max(0.0, lambda);
  }
  double s = 0.0;
  for (double l : r.eigenvalues) {
    if (l > 0.0) s -= l * std::log2(l);
  }
  r.bits = std::max(0.0, s);
  return r;
}

EntropyReport holevo_entropy_infinite(double amp) {
  detail::require(amp >= 0.0 && std::isfinite(amp),
                  "amplitude must be finite and nonnegative");
  EntropyReport r;
  r.method = EntropyMethod::Infinite;
  const double a2 = amp * amp;
  if (a2 == 0.0) return r;
  const double log_a2 = std::log(a2);
  double nats = 0.0;
  for (long k = 0;; ++k) {
    const double log_p = -a2 + double(k) * log_a2 - std::lgamma(double(k) + 1.0);
    const double p = std::exp(log_p);
    nats -= p * log_p;
    if (double(k) > a2 && p < 1e-14) break;
  }
  r.bits = nats / std::numbers::ln2;
  return r;
}

double stirling_entropy_approx(double amp) {
  detail::require(amp > 0.0 && std::isfinite(amp),
                  "Stirling entropy needs a positive amplitude");
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * amp * amp);
}

}  // namespace qcomp
