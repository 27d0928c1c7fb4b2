#pragma once

// Quantum public-key distribution with coherent-state public keys: a
// trusted-center scheme (one T-port multiport per position) and a distributed
// scheme in which recipients split their copies, swap shares and run
// comparison multiports. Runs are deterministic event loops driven by
// counter-based random substreams.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcomp/detection.hpp"
#include "qcomp/linear_core.hpp"
#include "qcomp/random.hpp"

namespace qcomp::pkd {

enum class Verdict { Accept, Unsure, Reject };

std::string_view to_string(Verdict v);

/// accept iff e = 0, unsure iff 0 < e < sM, reject iff e >= sM.
Verdict classify_errors(std::uint64_t errors, double security, int length);

/// (1/2)^{sM - 1}; requires sM >= 1.
double cheat_bound(double security, int length);

struct Params {
  int length = 10;        ///< M
  int alphabet = 4;       ///< N
  double amp = 1.0;       ///< |alpha| of every public-key position
  double security = 1.0;  ///< s in [0,1]

  void validate() const;
  double threshold() const { return security * length; }
};

/// One copy of a public key: the coherent amplitude at every position.
struct PublicKeyState {
  std::vector<Amplitude> positions;
};

/// The public map k -> |psi_k>: position j holds amp * exp(2 pi i k_j / N).
PublicKeyState public_key(std::span<const int> private_key, int alphabet,
                          double amp);

/// Trusted center: Alice's input sqrt(T) * alpha_j enters port 0 of the
/// j-th T-port multiport (other ports vacuum); output port t is copy t.
std::vector<PublicKeyState> trusted_center_split(
    std::span<const Amplitude> alice_input, int copies);

/// Honest Alice feeding the trusted center for private key k.
std::vector<PublicKeyState> trusted_center_distribute(
    std::span<const int> private_key, int alphabet, double amp, int copies);

struct VerificationResult {
  std::uint64_t errors = 0;
  Verdict verdict = Verdict::Accept;
  std::vector<bool> incorrect;  ///< per position
};

/// Projects every position onto |alpha_j^{k'}><alpha_j^{k'}| vs its
/// complement; the complement fires with probability
/// 1 - |<alpha_j^{k'}|psi_j>|^2.
VerificationResult verify_against_private(const PublicKeyState& copy,
                                          std::span<const int> claimed_key,
                                          const Params& params,
                                          RandomStream& rng);

// ---------------------------------------------------------------------------
// Transcripts

struct Event {
  std::string party;
  std::string action;
  int position = -1;  ///< -1 when the event is not tied to a position
  std::vector<Amplitude> amplitudes;
  std::vector<std::uint64_t> counts;
  bool tampered = false;
};

/// A protocol participant. Its transcript only grows.
class Party {
 public:
  explicit Party(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  const std::vector<Event>& transcript() const { return transcript_; }
  std::vector<Amplitude>& held() { return held_; }
  const std::vector<Amplitude>& held() const { return held_; }

  void record(Event e);

 private:
  std::string id_;
  std::vector<Amplitude> held_;
  std::vector<Event> transcript_;
};

/// "Bob", "Charlie", then "recipient<i>".
std::string recipient_name(std::size_t index);

// ---------------------------------------------------------------------------
// Distributed scheme

/// Replaces the share that recipient `from` sends to recipient `to` by
/// scale * share + displacement, at `positions` (all when empty).
struct ShareTamper {
  std::size_t from = 1;
  std::size_t to = 0;
  double scale = 1.0;
  Amplitude displacement{};
  std::vector<std::size_t> positions;

  bool applies_to(std::size_t position) const;
};

struct ExchangeOptions {
  DetectorModel detectors;
  std::vector<ShareTamper> tampering;
  bool log_events = true;
};

struct ExchangeResult {
  std::vector<Party> recipients;
  /// Output port 0 of each recipient's comparison multiport, per position.
  std::vector<std::vector<Amplitude>> recovered;
  /// Sum of the mean photon numbers in ports 1..T-1, per recipient/position.
  std::vector<std::vector<double>> difference_mean;
  /// Total counts in ports 1..T-1, per recipient.
  std::vector<std::uint64_t> clicks;
};

/// Runs both phases for T = copies.size() >= 2 recipients. Copy r is what
/// Alice delivered to recipient r. Phase 1: each recipient splits every
/// position with a T-port multiport, keeps port r and sends port q to
/// recipient q. Phase 2: each recipient feeds its kept share (port 0) and the
/// received shares (ports 1..T-1, by sender index) into a comparison
/// multiport and watches ports 1..T-1.
ExchangeResult distributed_exchange(std::span<const PublicKeyState> copies,
                                    const ExchangeOptions& options,
                                    RandomStream& rng);

// ---------------------------------------------------------------------------
// Cheating scenarios

enum class AliceStrategyKind { Honest, Overlap, Scale };

/// Dishonest Alice: at the first `positions` positions she replaces alpha by
/// beta, either with |<beta|alpha>|^2 = overlap (beta displaced radially from
/// alpha) or beta = scale * alpha.
struct AliceStrategy {
  AliceStrategyKind kind = AliceStrategyKind::Overlap;
  double overlap = 0.5;
  double scale = 1.0;
  int positions = 1;

  Amplitude substitute(Amplitude alpha) const;
};

struct PkdTrialRow {
  std::uint64_t trial = 0;
  std::uint64_t e_bob = 0;
  std::uint64_t e_charlie = 0;
  Verdict verdict_bob = Verdict::Accept;
  Verdict verdict_charlie = Verdict::Accept;
  std::uint64_t clicks = 0;
};

struct DisagreementReport {
  std::uint64_t trials = 0;
  std::uint64_t disagreements = 0;
  double rate = 0.0;
  double analytic = 0.0;  ///< exact disagreement probability of the strategy
  double bound = 0.0;     ///< (1/2)^{sM-1}
  double standard_error = 0.0;
  bool within_bound = false;  ///< rate <= bound + 3 standard errors
  /// Positions where exactly one recipient saw an error, by recipient.
  std::uint64_t errors_bob_only = 0;
  std::uint64_t errors_charlie_only = 0;
  double symmetry_p_value = 1.0;  ///< chi-square (1 dof) on the two counts
};

struct CenterTrial {
  VerificationResult bob;
  VerificationResult charlie;
  std::vector<Event> transcript;
};

/// One run of the trusted-center scheme with two recipients: Alice prepares
/// her key (possibly cheating), the center splits it, Alice announces k and
/// both recipients verify. Draws everything from `rng`.
CenterTrial run_center_trial(const AliceStrategy& strategy, const Params& params,
                             RandomStream& rng, bool log_events);

DisagreementReport simulate_dishonest_alice_center(
    const AliceStrategy& strategy, const Params& params, std::uint64_t trials,
    std::uint64_t seed, std::vector<PkdTrialRow>* rows = nullptr);

struct CharlieReport {
  std::uint64_t trials = 0;
  double bob_reject_rate = 0.0;
  double bob_detection_rate = 0.0;
  double analytic_reject = 0.0;
  double analytic_detection = 0.0;
  double standard_error_reject = 0.0;
  double standard_error_detection = 0.0;
};

struct DistributedTrial {
  ExchangeResult exchange;
  VerificationResult bob;
  VerificationResult charlie;
  std::vector<Event> transcript;  ///< Alice's events then each recipient's
};

/// One run of the distributed scheme with Bob (0) and Charlie (1). `alice`
/// is applied to the copy Alice sends Charlie (Bob's copy is always honest);
/// `tamper` is Charlie's substitution on the shares he sends Bob.
DistributedTrial run_distributed_trial(
    const std::optional<ShareTamper>& tamper, const AliceStrategy& alice,
    const Params& params, const DetectorModel& detectors, RandomStream& rng,
    bool log_events);

/// Monte Carlo of a dishonest Charlie against honest Alice and Bob.
CharlieReport simulate_dishonest_charlie(const ShareTamper& tamper,
                                         const Params& params,
                                         const DetectorModel& detectors,
                                         std::uint64_t trials,
                                         std::uint64_t seed,
                                         std::vector<PkdTrialRow>* rows = nullptr);

/// Exact per-position statistics of Charlie's tampering, averaged over the
/// uniformly random key phase: probability that Bob's comparison multiport
/// clicks and probability that his verification flags the position.
struct TamperEffect {
  double click_probability = 0.0;
  double incorrect_probability = 0.0;
};

TamperEffect tamper_effect(const ShareTamper& tamper, const Params& params,
                           const DetectorModel& detectors);

// ---------------------------------------------------------------------------
// Honest runs with any number of recipients

enum class Scheme { Center, Distributed };

std::string_view to_string(Scheme s);

struct HonestReport {
  std::uint64_t trials = 0;
  std::uint64_t clicks = 0;            ///< summed over trials and recipients
  std::uint64_t non_accepting = 0;     ///< recipient verdicts other than accept
  double max_recovery_error = 0.0;     ///< max |held - Alice's original|
};

/// Honest Alice, honest recipients, T >= 2 (T >= 1 for the center). Rows
/// report recipient 0 as Bob and recipient 1 as Charlie.
HonestReport simulate_honest(Scheme scheme, int recipients, const Params& params,
                             const DetectorModel& detectors,
                             std::uint64_t trials, std::uint64_t seed,
                             std::vector<PkdTrialRow>* rows = nullptr);

/// P(X >= threshold) for a sum of independent Bernoulli(p_j).
double poisson_binomial_tail(std::span<const double> p, double threshold);

}  // namespace qcomp::pkd
