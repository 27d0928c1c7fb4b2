#include "qcomp/pkd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcomp/errors.hpp"
#include "qcomp/lockkey.hpp"

namespace qcomp::pkd {

namespace {

constexpr std::size_t kBob = 0;
constexpr std::size_t kCharlie = 1;

std::vector<int> random_private_key(const Params& p, RandomStream& rng) {
  return generate_key(p.length, p.alphabet, p.amp, rng).phases;
}

double binomial_se(double p, std::uint64_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::Unsure: return "unsure";
    case Verdict::Reject: return "reject";
  }
  return "?";
}

Verdict classify_errors(std::uint64_t errors, double security, int length) {
  if (errors == 0) return Verdict::Accept;
  if (static_cast<double>(errors) >= security * length) return Verdict::Reject;
  return Verdict::Unsure;
}

double cheat_bound(double security, int length) {
  const double sm = security * length;
  detail::require(sm >= 1.0, "cheat bound needs sM >= 1");
  return std::exp2(-(sm - 1.0));
}

void Params::validate() const {
  detail::require(length >= 1, "public key length M must be at least 1");
  detail::require(alphabet >= 2, "phase alphabet N must be at least 2");
  detail::require(amp >= 0.0 && std::isfinite(amp),
                  "public key amplitude must be finite and nonnegative");
  detail::require(security > 0.0 && security <= 1.0,
                  "security parameter s must lie in (0,1]");
  detail::require(security * length >= 1.0, "need sM >= 1");
}

PublicKeyState public_key(std::span<const int> private_key, int alphabet,
                          double amp) {
  detail::require(alphabet >= 2, "phase alphabet N must be at least 2");
  PublicKeyState k;
  k.positions.reserve(private_key.size());
  for (int idx : private_key) {
    detail::require(idx >= 0 && idx < alphabet, "private key index out of range");
    k.positions.push_back(phase_state(amp, idx, alphabet));
  }
  return k;
}

std::vector<PublicKeyState> trusted_center_split(
    std::span<const Amplitude> alice_input, int copies) {
  detail::require(copies >= 1, "number of copies T must be at least 1");
  const auto t = static_cast<std::size_t>(copies);
  std::vector<PublicKeyState> out(t);
  for (auto& c : out) c.positions.resize(alice_input.size());
  if (t == 1) {
    out[0].positions.assign(alice_input.begin(), alice_input.end());
    return out;
  }
  const LinearNetwork mp = make_balanced_multiport(t);
  for (std::size_t j = 0; j < alice_input.size(); ++j) {
    std::vector<Amplitude> in(t);
    in[0] = alice_input[j];
    const CoherentRegister o = apply_network(mp, CoherentRegister(std::move(in)));
    for (std::size_t c = 0; c < t; ++c) out[c].positions[j] = o[c];
  }
  return out;
}

std::vector<PublicKeyState> trusted_center_distribute(
    std::span<const int> private_key, int alphabet, double amp, int copies) {
  detail::require(copies >= 1, "number of copies T must be at least 1");
  const PublicKeyState k = public_key(private_key, alphabet, amp);
  const double boost = std::sqrt(static_cast<double>(copies));
  std::vector<Amplitude> input(k.positions.size());
  for (std::size_t j = 0; j < input.size(); ++j) input[j] = boost * k.positions[j];
  return trusted_center_split(input, copies);
}

VerificationResult verify_against_private(const PublicKeyState& copy,
                                          std::span<const int> claimed_key,
                                          const Params& params,
                                          RandomStream& rng) {
  detail::require(claimed_key.size() == copy.positions.size(),
                  "claimed key length does not match the public key");
  const PublicKeyState expected =
      public_key(claimed_key, params.alphabet, params.amp);
  VerificationResult r;
  r.incorrect.resize(copy.positions.size());
  for (std::size_t j = 0; j < copy.positions.size(); ++j) {
    // 1 - |<a|b>|^2 = 1 - exp(-|a-b|^2)
    const double p_wrong =
        -std::expm1(-std::norm(expected.positions[j] - copy.positions[j]));
    r.incorrect[j] = rng.bernoulli(p_wrong);
    if (r.incorrect[j]) ++r.errors;
  }
  r.verdict = classify_errors(r.errors, params.security,
                              static_cast<int>(copy.positions.size()));
  return r;
}

void Party::record(Event e) { transcript_.push_back(std::move(e)); }

std::string recipient_name(std::size_t index) {
  if (index == kBob) return "Bob";
  if (index == kCharlie) return "Charlie";
  return "recipient" + std::to_string(index);
}

bool ShareTamper::applies_to(std::size_t position) const {
  return positions.empty() ||
         std::find(positions.begin(), positions.end(), position) !=
             positions.end();
}

ExchangeResult distributed_exchange(std::span<const PublicKeyState> copies,
                                    const ExchangeOptions& options,
                                    RandomStream& rng) {
  const std::size_t t = copies.size();
  detail::require(t >= 2, "distributed exchange needs at least 2 recipients");
  options.detectors.validate();
  const std::size_t m = copies[0].positions.size();
  for (const auto& c : copies) {
    detail::require(c.positions.size() == m,
                    "recipients hold public keys of different length");
  }
  for (const auto& tm : options.tampering) {
    detail::require(tm.from < t && tm.to < t && tm.from != tm.to,
                    "tamper refers to an invalid sender/recipient pair");
  }

  const LinearNetwork mp = make_balanced_multiport(t);
  ExchangeResult res;
  for (std::size_t r = 0; r < t; ++r) {
    res.recipients.emplace_back(recipient_name(r));
    res.recipients[r].held() = copies[r].positions;
  }
  res.recovered.assign(t, std::vector<Amplitude>(m));
  res.difference_mean.assign(t, std::vector<double>(m, 0.0));
  res.clicks.assign(t, 0);

  // shares[r][q][j]: what recipient r sends recipient q at position j
  // (q == r is the share r keeps).
  std::vector<std::vector<std::vector<Amplitude>>> shares(
      t, std::vector<std::vector<Amplitude>>(t, std::vector<Amplitude>(m)));

  // Phase 1: split.
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Amplitude> in(t);
      in[0] = copies[r].positions[j];
      const CoherentRegister out =
          apply_network(mp, CoherentRegister(std::move(in)));
      for (std::size_t q = 0; q < t; ++q) shares[r][q][j] = out[q];
      if (options.log_events) {
        res.recipients[r].record({res.recipients[r].id(), "split", int(j),
                                  std::vector<Amplitude>(out.amplitudes().begin(),
                                                         out.amplitudes().end()),
                                  {}, false});
      }
    }
  }

  // Exchange over authenticated channels; tampering is flagged in the record.
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t q = 0; q < t; ++q) {
      if (q == r) continue;
      for (std::size_t j = 0; j < m; ++j) {
        bool tampered = false;
        for (const auto& tm : options.tampering) {
          if (tm.from == r && tm.to == q && tm.applies_to(j)) {
            shares[r][q][j] = tm.scale * shares[r][q][j] + tm.displacement;
            tampered = true;
          }
        }
        if (options.log_events) {
          res.recipients[r].record({res.recipients[r].id(),
                                    "send:" + res.recipients[q].id(), int(j),
                                    {shares[r][q][j]}, {}, tampered});
        }
      }
    }
  }

  // Phase 2: compare.
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Amplitude> in;
      in.reserve(t);
      in.push_back(shares[r][r][j]);
      for (std::size_t q = 0; q < t; ++q) {
        if (q != r) in.push_back(shares[q][r][j]);
      }
      const CoherentRegister out =
          apply_network(mp, CoherentRegister(std::move(in)));
      Event ev{res.recipients[r].id(), "compare", int(j),
               std::vector<Amplitude>(out.amplitudes().begin(),
                                      out.amplitudes().end()),
               {}, false};
      for (std::size_t k = 1; k < t; ++k) {
        const double mean = out.mean_photon_number(k);
        res.difference_mean[r][j] += mean;
        const std::uint64_t c = sample_counts(mean, options.detectors, rng);
        res.clicks[r] += c;
        ev.counts.push_back(c);
      }
      res.recovered[r][j] = out[0];
      if (options.log_events) res.recipients[r].record(std::move(ev));
    }
    res.recipients[r].held() = res.recovered[r];
  }
  return res;
}

Amplitude AliceStrategy::substitute(Amplitude alpha) const {
  switch (kind) {
    case AliceStrategyKind::Honest:
      return alpha;
    case AliceStrategyKind::Overlap: {
      detail::require(overlap > 0.0 && overlap <= 1.0,
                      "target overlap must lie in (0,1]");
      // |<beta|alpha>|^2 = exp(-|beta - alpha|^2)
      const double shift = std::sqrt(-std::log(overlap));
      const double mag = std::abs(alpha);
      const Amplitude dir = mag > 0.0 ? alpha / mag : Amplitude{1.0, 0.0};
      return alpha + shift * dir;
    }
    case AliceStrategyKind::Scale:
      return scale * alpha;
  }
  return alpha;
}

CenterTrial run_center_trial(const AliceStrategy& strategy, const Params& params,
                             RandomStream& rng, bool log_events) {
  constexpr int kCopies = 2;
  CenterTrial trial;
  const std::vector<int> key = random_private_key(params, rng);
  const PublicKeyState honest = public_key(key, params.alphabet, params.amp);

  std::vector<Amplitude> input(honest.positions.size());
  const double boost = std::sqrt(double(kCopies));
  for (std::size_t j = 0; j < input.size(); ++j) {
    Amplitude a = honest.positions[j];
    if (static_cast<int>(j) < strategy.positions) a = strategy.substitute(a);
    input[j] = boost * a;
  }
  if (log_events) {
    trial.transcript.push_back(
        {"Alice", "prepare", -1, input, {},
         strategy.kind != AliceStrategyKind::Honest});
  }
  const auto copies = trusted_center_split(input, kCopies);
  if (log_events) {
    for (std::size_t c = 0; c < copies.size(); ++c) {
      trial.transcript.push_back({"TrustedCenter", "send:" + recipient_name(c),
                                  -1, copies[c].positions, {}, false});
    }
  }

  // Bob and Charlie measure independently once k is announced.
  trial.bob = verify_against_private(copies[kBob], key, params, rng);
  trial.charlie = verify_against_private(copies[kCharlie], key, params, rng);
  if (log_events) {
    std::vector<Amplitude> none;
    trial.transcript.push_back({"Alice", "announce", -1, none,
                                std::vector<std::uint64_t>(key.begin(), key.end()),
                                false});
    trial.transcript.push_back({"Bob", "verify", -1, none, {trial.bob.errors},
                                false});
    trial.transcript.push_back(
        {"Charlie", "verify", -1, none, {trial.charlie.errors}, false});
  }
  return trial;
}

DisagreementReport simulate_dishonest_alice_center(
    const AliceStrategy& strategy, const Params& params, std::uint64_t trials,
    std::uint64_t seed, std::vector<PkdTrialRow>* rows) {
  params.validate();
  detail::require(trials >= 1, "need at least one trial");
  detail::require(strategy.positions >= 0 && strategy.positions <= params.length,
                  "number of tampered positions must lie in [0, M]");
  DisagreementReport rep;
  rep.trials = trials;
  rep.bound = cheat_bound(params.security, params.length);
  if (rows) rows->clear();

  for (std::uint64_t i = 0; i < trials; ++i) {
    RandomStream rng = RandomStream::substream(seed, i);
    const CenterTrial t = run_center_trial(strategy, params, rng, false);
    const bool disagree =
        (t.bob.verdict == Verdict::Accept && t.charlie.verdict == Verdict::Reject) ||
        (t.charlie.verdict == Verdict::Accept && t.bob.verdict == Verdict::Reject);
    if (disagree) ++rep.disagreements;
    for (std::size_t j = 0; j < t.bob.incorrect.size(); ++j) {
      if (t.bob.incorrect[j] && !t.charlie.incorrect[j]) ++rep.errors_bob_only;
      if (t.charlie.incorrect[j] && !t.bob.incorrect[j]) ++rep.errors_charlie_only;
    }
    if (rows) {
      rows->push_back({i, t.bob.errors, t.charlie.errors, t.bob.verdict,
                       t.charlie.verdict, 0});
    }
  }
  rep.rate = double(rep.disagreements) / double(trials);

  // Each tampered position errs independently at each recipient with the
  // same probability; the strategy does not depend on the key phase.
  const Amplitude ref = phase_state(params.amp, 0, params.alphabet);
  const double q = -std::expm1(-std::norm(strategy.substitute(ref) - ref));
  std::vector<double> p(static_cast<std::size_t>(strategy.positions), q);
  const double all_clear = std::pow(1.0 - q, strategy.positions);
  rep.analytic = 2.0 * all_clear * poisson_binomial_tail(p, params.threshold());

  rep.standard_error = binomial_se(std::max(rep.rate, rep.analytic), trials);
  rep.within_bound = rep.rate <= rep.bound + 3.0 * rep.standard_error;
  const double b = double(rep.errors_bob_only);
  const double c = double(rep.errors_charlie_only);
  if (b + c > 0.0) {
    const double chi2 = (b - c) * (b - c) / (b + c);
    rep.symmetry_p_value = std::erfc(std::sqrt(0.5 * chi2));
  }
  return rep;
}

DistributedTrial run_distributed_trial(const std::optional<ShareTamper>& tamper,
                                       const AliceStrategy& alice,
                                       const Params& params,
                                       const DetectorModel& detectors,
                                       RandomStream& rng, bool log_events) {
  DistributedTrial trial;
  const std::vector<int> key = random_private_key(params, rng);
  const PublicKeyState honest = public_key(key, params.alphabet, params.amp);
  std::vector<PublicKeyState> copies(2, honest);
  for (std::size_t j = 0; j < copies[kCharlie].positions.size(); ++j) {
    if (static_cast<int>(j) < alice.positions) {
      copies[kCharlie].positions[j] = alice.substitute(honest.positions[j]);
    }
  }
  if (log_events) {
    for (std::size_t r = 0; r < copies.size(); ++r) {
      trial.transcript.push_back({"Alice", "send:" + recipient_name(r), -1,
                                  copies[r].positions, {},
                                  r == kCharlie &&
                                      alice.kind != AliceStrategyKind::Honest});
    }
  }

  ExchangeOptions opts;
  opts.detectors = detectors;
  opts.log_events = log_events;
  if (tamper) opts.tampering.push_back(*tamper);
  trial.exchange = distributed_exchange(copies, opts, rng);

  PublicKeyState bob_key{trial.exchange.recovered[kBob]};
  PublicKeyState charlie_key{trial.exchange.recovered[kCharlie]};
  trial.bob = verify_against_private(bob_key, key, params, rng);
  trial.charlie = verify_against_private(charlie_key, key, params, rng);

  if (log_events) {
    for (const auto& party : trial.exchange.recipients) {
      trial.transcript.insert(trial.transcript.end(),
                              party.transcript().begin(),
                              party.transcript().end());
    }
    std::vector<Amplitude> none;
    trial.transcript.push_back({"Alice", "announce", -1, none,
                                std::vector<std::uint64_t>(key.begin(), key.end()),
                                false});
    trial.transcript.push_back({"Bob", "verify", -1, none, {trial.bob.errors},
                                false});
    trial.transcript.push_back(
        {"Charlie", "verify", -1, none, {trial.charlie.errors}, false});
  }
  return trial;
}

TamperEffect tamper_effect(const ShareTamper& tamper, const Params& params,
                           const DetectorModel& detectors) {
  detectors.validate();
  // Two recipients: Bob keeps x/sqrt2, receives y'/sqrt2 -> scale y + d.
  const LinearNetwork mp = make_balanced_multiport(2);
  TamperEffect eff;
  for (int k = 0; k < params.alphabet; ++k) {
    const Amplitude alpha = phase_state(params.amp, k, params.alphabet);
    const CoherentRegister split =
        apply_network(mp, CoherentRegister({alpha, Amplitude{}}));
    const Amplitude kept = split[kBob];
    const Amplitude sent = tamper.scale * split[kCharlie] + tamper.displacement;
    const CoherentRegister out = apply_network(mp, CoherentRegister({kept, sent}));
    eff.click_probability += detectors.click_probability(out.mean_photon_number(1));
    eff.incorrect_probability += -std::expm1(-std::norm(out[0] - alpha));
  }
  eff.click_probability /= params.alphabet;
  eff.incorrect_probability /= params.alphabet;
  return eff;
}

CharlieReport simulate_dishonest_charlie(const ShareTamper& tamper,
                                         const Params& params,
                                         const DetectorModel& detectors,
                                         std::uint64_t trials,
                                         std::uint64_t seed,
                                         std::vector<PkdTrialRow>* rows) {
  params.validate();
  detectors.validate();
  detail::require(trials >= 1, "need at least one trial");
  detail::require(tamper.from == kCharlie && tamper.to == kBob,
                  "dishonest-Charlie tamper must act on Charlie -> Bob shares");
  for (auto j : tamper.positions) {
    detail::require(j < static_cast<std::size_t>(params.length),
                    "tampered position out of range");
  }
  const AliceStrategy honest{AliceStrategyKind::Honest, 1.0, 1.0, 0};
  std::uint64_t rejects = 0;
  std::uint64_t detections = 0;
  if (rows) rows->clear();
  for (std::uint64_t i = 0; i < trials; ++i) {
    RandomStream rng = RandomStream::substream(seed, i);
    const DistributedTrial t =
        run_distributed_trial(tamper, honest, params, detectors, rng, false);
    if (t.bob.verdict == Verdict::Reject) ++rejects;
    if (t.exchange.clicks[kBob] > 0) ++detections;
    if (rows) {
      rows->push_back({i, t.bob.errors, t.charlie.errors, t.bob.verdict,
                       t.charlie.verdict,
                       t.exchange.clicks[kBob] + t.exchange.clicks[kCharlie]});
    }
  }
  CharlieReport rep;
  rep.trials = trials;
  rep.bob_reject_rate = double(rejects) / double(trials);
  rep.bob_detection_rate = double(detections) / double(trials);

  const TamperEffect eff = tamper_effect(tamper, params, detectors);
  const ShareTamper none{};
  const TamperEffect base = tamper_effect(none, params, detectors);
  std::vector<double> p_inc(static_cast<std::size_t>(params.length));
  double log_no_click = 0.0;
  for (std::size_t j = 0; j < p_inc.size(); ++j) {
    const TamperEffect& e = tamper.applies_to(j) ? eff : base;
    p_inc[j] = e.incorrect_probability;
    log_no_click += std::log1p(-e.click_probability);
  }
  rep.analytic_detection = -std::expm1(log_no_click);
  rep.analytic_reject = poisson_binomial_tail(p_inc, params.threshold());
  rep.standard_error_reject = binomial_se(rep.analytic_reject, trials);
  rep.standard_error_detection = binomial_se(rep.analytic_detection, trials);
  return rep;
}

std::string_view to_string(Scheme s) {
  return s == Scheme::Center ? "center" : "distributed";
}

HonestReport simulate_honest(Scheme scheme, int recipients, const Params& params,
                             const DetectorModel& detectors,
                             std::uint64_t trials, std::uint64_t seed,
                             std::vector<PkdTrialRow>* rows) {
  params.validate();
  detectors.validate();
  detail::require(trials >= 1, "need at least one trial");
  detail::require(recipients >= (scheme == Scheme::Center ? 1 : 2),
                  "too few recipients for this scheme");
  HonestReport rep;
  rep.trials = trials;
  if (rows) rows->clear();
  for (std::uint64_t i = 0; i < trials; ++i) {
    RandomStream rng = RandomStream::substream(seed, i);
    const std::vector<int> key = random_private_key(params, rng);
    const PublicKeyState original = public_key(key, params.alphabet, params.amp);
    std::vector<PublicKeyState> held;
    std::uint64_t clicks = 0;
    if (scheme == Scheme::Center) {
      held = trusted_center_distribute(key, params.alphabet, params.amp,
                                       recipients);
    } else {
      ExchangeOptions opts;
      opts.detectors = detectors;
      opts.log_events = false;
      const std::vector<PublicKeyState> copies(std::size_t(recipients), original);
      ExchangeResult ex = distributed_exchange(copies, opts, rng);
      for (auto c : ex.clicks) clicks += c;
      for (auto& r : ex.recovered) held.push_back({std::move(r)});
    }
    std::vector<VerificationResult> v;
    for (const auto& h : held) {
      for (std::size_t j = 0; j < h.positions.size(); ++j) {
        rep.max_recovery_error = std::max(
            rep.max_recovery_error, std::abs(h.positions[j] - original.positions[j]));
      }
      v.push_back(verify_against_private(h, key, params, rng));
      if (v.back().verdict != Verdict::Accept) ++rep.non_accepting;
    }
    rep.clicks += clicks;
    if (rows) {
      const VerificationResult& bob = v[0];
      const VerificationResult& charlie = v.size() > 1 ? v[1] : v[0];
      rows->push_back({i, bob.errors, charlie.errors, bob.verdict,
                       charlie.verdict, clicks});
    }
  }
  return rep;
}

double poisson_binomial_tail(std::span<const double> p, double threshold) {
  // dist[e] = P(exactly e successes so far)
  std::vector<double> dist(p.size() + 1, 0.0);
  dist[0] = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t e = i + 1; e > 0; --e) {
      dist[e] = dist[e] * (1.0 - p[i]) + dist[e - 1] * p[i];
    }
    dist[0] *= 1.0 - p[i];
  }
  double tail = 0.0;
  for (std::size_t e = 0; e < dist.size(); ++e) {
    if (static_cast<double>(e) >= threshold) tail += dist[e];
  }
  return tail;
}

}  // namespace qcomp::pkd
