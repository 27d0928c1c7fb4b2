#include "commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcomp/comparison.hpp"
#include "qcomp/detection.hpp"
#include "qcomp/errors.hpp"
#include "qcomp/fock_oracle.hpp"
#include "qcomp/linear_core.hpp"
#include "qcomp/lockkey.hpp"
#include "qcomp/pkd.hpp"
#include "table.hpp"

namespace qcomp::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchema = 1;

struct Global {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
};

struct Report {
  std::string command;
  json params = json::object();
  json summary = json::object();
  std::optional<Table> table;
  std::optional<PlotSpec> plot;
  bool table_in_json = false;
  std::string default_format = "json";
};

double parse_double(std::string_view s, const std::string& what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError("invalid number '" + std::string(s) + "' for " + what);
  }
  return v;
}

/// "re,im" or "re".
Amplitude parse_amplitude(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(text, what), 0.0};
  return {parse_double(std::string_view(text).substr(0, comma), what),
          parse_double(std::string_view(text).substr(comma + 1), what)};
}

json amp_json(Amplitude a) { return json::array({a.real(), a.imag()}); }

json amps_json(std::span<const Amplitude> v) {
  json out = json::array();
  for (auto a : v) out.push_back(amp_json(a));
  return out;
}

json interval_json(const Interval& i) { return json::array({i.low, i.high}); }

json summary_json(const TrialSummary& s, double expected) {
  return {{"trials", s.trials},
          {"hits", s.hits},
          {"rate", s.rate},
          {"wilson95", interval_json(s.wilson95)},
          {"expected", expected},
          {"sigma_distance", s.sigma_distance(expected)}};
}

DetectorModel detector_from(double efficiency, double dark, bool threshold) {
  DetectorModel m{efficiency, dark, !threshold};
  m.validate();
  return m;
}

void add_detector_flags(CLI::App* sub, double& eff, double& dark, bool& thr) {
  sub->add_option("--efficiency", eff, "Detector efficiency in [0,1]")
      ->capture_default_str();
  sub->add_option("--dark", dark, "Mean dark counts per detection window")
      ->capture_default_str();
  sub->add_flag("--threshold", thr, "Click/no-click detectors");
}

void emit(const Global& g, const Report& r) {
  const std::string fmt = g.format.empty() ? r.default_format : g.format;
  std::ostringstream os;
  if (fmt == "json") {
    json doc{{"schema", kSchema},
             {"command", r.command},
             {"seed", g.seed},
             {"params", r.params},
             {"summary", r.summary}};
    if (r.table && r.table_in_json) doc["table"] = table_to_json(*r.table);
    os << doc.dump(2) << '\n';
  } else if (fmt == "csv") {
    if (!r.table) throw ValidationError(r.command + " has no CSV output");
    write_csv(os, *r.table,
              {"schema=" + std::to_string(kSchema), "command=" + r.command,
               "seed=" + std::to_string(g.seed)});
  } else if (fmt == "svg") {
    if (!r.table || !r.plot) throw ValidationError(r.command + " has no SVG output");
    write_svg(os, *r.table, *r.plot);
  } else {
    throw ValidationError("unknown format '" + fmt + "'");
  }
  if (g.out.empty()) {
    std::cout << os.str();
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot open output file " + g.out);
  f << os.str();
  if (!f.flush()) throw ValidationError("cannot write output file " + g.out);
}

// ---------------------------------------------------------------------------
// compare

struct CompareOpts {
  std::string alpha, beta;
  std::uint64_t trials = 0;
  double d_max = 4.0;
  double step = 0.05;
  double eff = 1.0, dark = 0.0;
  bool threshold = false;
};

Table figure2_table(double d_max, double step, const std::string& xname) {
  detail::require(d_max > 0.0 && std::isfinite(d_max), "range must be positive");
  detail::require(step > 0.0 && step <= d_max, "step must lie in (0, range]");
  Table t{{xname, "p_succ", "p_asymm"}, {}};
  const auto n = static_cast<std::int64_t>(std::floor(d_max / step + 1e-9));
  for (std::int64_t i = 0; i <= n; ++i) {
    const double d = static_cast<double>(i) * step;
    // alpha - beta = d on the real axis; both forms depend only on |alpha-beta|
    const Amplitude a{d / 2, 0.0}, b{-d / 2, 0.0};
    const std::vector<Amplitude> pair{a, b};
    t.add({d, p_success_two(a, b), p_success_universal(pair)});
  }
  return t;
}

PlotSpec figure2_plot(const std::string& xname) {
  return {"Comparing two coherent states",
          xname,
          {"p_succ", "p_asymm"},
          {},
          "|alpha - beta|",
          "success probability",
          {{1.0, "1"}, {0.5, "1/2"}}};
}

Report cmd_compare(const CompareOpts& o, const Global& g) {
  const Amplitude a = parse_amplitude(o.alpha, "--alpha");
  const Amplitude b = parse_amplitude(o.beta, "--beta");
  const std::vector<Amplitude> pair{a, b};
  const ComparisonReport cmp = compare(pair);
  const OutputMeans means = unbalanced_test(a, b, 0.5, 0.0);

  Report r;
  r.command = "compare";
  r.params = {{"alpha", amp_json(a)}, {"beta", amp_json(b)}};
  r.summary = {{"p_succ", cmp.p_succ_coherent},
               {"p_asymm", cmp.p_succ_universal},
               {"p_succ_conjugate", p_success_conjugate(a, b)},
               {"output_means", json::array({means.first, means.second})},
               {"no_click", cmp.no_click},
               {"coherent_dominates", cmp.p_succ_coherent >= cmp.p_succ_universal}};
  if (o.trials > 0) {
    const DetectorModel det = detector_from(o.eff, o.dark, o.threshold);
    const std::size_t watched[] = {1};
    const TrialSummary s = run_trials(CoherentRegister(pair),
                                      make_beam_splitter(0.5), watched, det,
                                      o.trials, g.seed);
    const double expected =
        det.click_probability(std::norm(a - b) / 2.0);
    r.summary["monte_carlo"] = summary_json(s, expected);
  }
  r.table = figure2_table(o.d_max, o.step, "delta_abs");
  r.plot = figure2_plot("delta_abs");
  return r;
}

// ---------------------------------------------------------------------------
// multiport

struct MultiportOpts {
  std::vector<std::string> amps;
  std::uint64_t trials = 0;
  double eff = 1.0, dark = 0.0;
  bool threshold = false;
};

Report cmd_multiport(const MultiportOpts& o, const Global& g) {
  std::vector<Amplitude> amps;
  for (const auto& s : o.amps) amps.push_back(parse_amplitude(s, "--amp"));
  detail::require(amps.size() >= 2, "multiport needs at least two --amp values");
  const MultiportForms f = multiport_success_forms(amps);
  const LinearNetwork net = make_balanced_multiport(amps.size());
  const CoherentRegister out = apply_network(net, CoherentRegister(amps));

  Report r;
  r.command = "multiport";
  r.params = {{"amplitudes", amps_json(amps)}};
  r.summary = {{"N", amps.size()},
               {"p_succ", f.pairwise},
               {"p_succ_per_mode", f.per_mode},
               {"p_succ_overlap_product", f.overlap_product},
               {"overlap_imag_residue", f.overlap_imag_residue},
               {"outputs", amps_json(out.amplitudes())},
               {"no_click", f.no_click}};
  if (amps.size() <= kMaxUniversalInputs) {
    const AmGmReport am = verify_amgm_inequality(amps);
    r.summary["p_universal"] = p_success_universal(amps);
    r.summary["p_symm"] = am.rhs;
    r.summary["inequality_holds"] = am.holds;
  } else {
    r.summary["p_universal"] = nullptr;
  }
  if (o.trials > 0) {
    const DetectorModel det = detector_from(o.eff, o.dark, o.threshold);
    std::vector<std::size_t> watched;
    double log_quiet = 0.0;
    for (std::size_t k = 1; k < amps.size(); ++k) {
      watched.push_back(k);
      log_quiet += std::log1p(-det.click_probability(out.mean_photon_number(k)));
    }
    const TrialSummary s = run_trials(CoherentRegister(amps), net, watched, det,
                                      o.trials, g.seed);
    r.summary["monte_carlo"] = summary_json(s, -std::expm1(log_quiet));
  }
  Table t{{"mode", "gamma_re", "gamma_im", "mean_photons", "p_no_click"}, {}};
  for (std::size_t k = 0; k < out.size(); ++k) {
    t.add({static_cast<std::int64_t>(k), out[k].real(), out[k].imag(),
           out.mean_photon_number(k), f.no_click[k]});
  }
  r.table = std::move(t);
  r.table_in_json = true;
  return r;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOpts {
  std::string which = "bs-coherent";
  std::string alpha = "0.8,0", beta = "0.8,0";
  std::string xi1 = "0.2,0", xi2 = "0.2,0";
  int n = 2, m = 0;
  int cutoff = 40;
  double transmittance = 0.5;
};

Table distribution_table(const FockVector& v) {
  Table t{{"n", "p_a", "p_b"}, {}};
  const auto pa = photon_distribution(v, 0);
  const auto pb = photon_distribution(v, 1);
  for (std::size_t k = 0; k < pa.size(); ++k) {
    t.add({static_cast<std::int64_t>(k), pa[k], pb[k]});
  }
  return t;
}

Report cmd_oracle(const OracleOpts& o, const Global&) {
  Report r;
  r.command = "oracle";
  r.params = {{"case", o.which}, {"cutoff", o.cutoff}};
  r.table_in_json = false;
  if (o.which == "bs-coherent") {
    const Amplitude a = parse_amplitude(o.alpha, "--alpha");
    const Amplitude b = parse_amplitude(o.beta, "--beta");
    r.params["alpha"] = amp_json(a);
    r.params["beta"] = amp_json(b);
    r.params["transmittance"] = o.transmittance;
    const FockVector in =
        tensor_product(coherent_fock(a, o.cutoff), coherent_fock(b, o.cutoff));
    const FockVector fock_out = apply_bs_fock(in, o.transmittance);
    const CoherentRegister analytic = apply_network(
        make_beam_splitter(o.transmittance), CoherentRegister({a, b}));
    const FockVector expected = tensor_product(coherent_fock(analytic[0], o.cutoff),
                                               coherent_fock(analytic[1], o.cutoff));
    r.summary = {{"analytic_outputs", amps_json(analytic.amplitudes())},
                 {"fidelity", fidelity(fock_out, expected)},
                 {"truncation_deficit", fock_out.truncation_deficit()}};
    r.table = distribution_table(fock_out);
  } else if (o.which == "squeezed") {
    const Amplitude x1 = parse_amplitude(o.xi1, "--xi1");
    const Amplitude x2 = parse_amplitude(o.xi2, "--xi2");
    r.params["xi1"] = amp_json(x1);
    r.params["xi2"] = amp_json(x2);
    const SqueezedVacuum s1 = squeezed_vacuum_fock(x1, o.cutoff);
    const SqueezedVacuum s2 = squeezed_vacuum_fock(x2, o.cutoff);
    const FockVector out = apply_bs_fock(tensor_product(s1.state, s2.state), 0.5);
    r.summary = {{"odd_photon_probability", odd_photon_probability(x1, x2, o.cutoff)},
                 {"normalization", json::array({s1.normalization, s2.normalization})},
                 {"truncation_deficit", out.truncation_deficit()}};
    r.table = distribution_table(out);
  } else if (o.which == "su2-pass" || o.which == "squeezed-pass") {
    const bool su2 = o.which == "su2-pass";
    const FockVector pass =
        su2 ? su2_pass_state(o.n, o.cutoff) : squeezed_pass_state(o.m, o.n, o.cutoff);
    const FockVector out = apply_bs_fock(pass, 0.5);
    FockVector target(o.cutoff, 2);
    if (su2) {
      target(o.n, 0) = 1.0;
    } else {
      target(o.m, o.n) = 1.0;
    }
    double odd = 0.0;
    for (int na = 0; na <= o.cutoff; ++na) {
      for (int nb = 0; na + nb <= o.cutoff; ++nb) {
        if (na % 2 || nb % 2) odd += std::norm(out(na, nb));
      }
    }
    r.params["n"] = o.n;
    if (!su2) r.params["m"] = o.m;
    r.summary = {{"norm_squared", pass.norm_squared()},
                 {"fidelity_with_target", fidelity(out, target)},
                 {"odd_output_probability", odd}};
    r.table = distribution_table(out);
  } else {
    throw ValidationError("unknown oracle case '" + o.which + "'");
  }
  return r;
}

// ---------------------------------------------------------------------------
// figure 2 / figure 4

struct Figure2Opts {
  double d_max = 4.0;
  double step = 0.05;
};

Report cmd_figure2(const Figure2Opts& o, const Global&) {
  Report r;
  r.command = "figure2";
  r.default_format = "csv";
  r.params = {{"d_max", o.d_max}, {"step", o.step}};
  r.table = figure2_table(o.d_max, o.step, "d");
  r.plot = figure2_plot("d");
  r.table_in_json = true;
  return r;
}

struct Figure4Opts {
  double alpha_sq_max = 25.0;
  double step = 0.25;
  std::vector<int> alphabets{2, 3, 4, 8, 16};
};

Table entropy_table(std::span<const double> alpha_sq, std::span<const int> ns) {
  Table t{{"alpha_sq", "N", "S_bits"}, {}};
  for (int n : ns) {
    for (double a2 : alpha_sq) {
      detail::require(a2 >= 0.0, "alpha_sq must be nonnegative");
      t.add({a2, static_cast<std::int64_t>(n),
             holevo_entropy_finite(std::sqrt(a2), n).bits});
    }
  }
  return t;
}

PlotSpec entropy_plot(std::span<const int> ns) {
  PlotSpec p{"Entropy of one key position", "alpha_sq", {"S_bits"}, "N",
             "mean photon number |alpha|^2", "S (bits)", {}};
  for (int n : ns) {
    p.guides.emplace_back(std::log2(double(n)), "log2 " + std::to_string(n));
  }
  return p;
}

Report cmd_figure4(const Figure4Opts& o, const Global&) {
  detail::require(o.alpha_sq_max > 0.0, "alpha_sq range must be positive");
  detail::require(o.step > 0.0 && o.step <= o.alpha_sq_max,
                  "step must lie in (0, range]");
  detail::require(!o.alphabets.empty(), "need at least one N");
  std::vector<double> grid;
  const auto n = static_cast<std::int64_t>(std::floor(o.alpha_sq_max / o.step + 1e-9));
  for (std::int64_t i = 0; i <= n; ++i) grid.push_back(double(i) * o.step);
  Report r;
  r.command = "figure4";
  r.default_format = "csv";
  r.params = {{"alpha_sq_max", o.alpha_sq_max}, {"step", o.step}, {"N", o.alphabets}};
  r.table = entropy_table(grid, o.alphabets);
  r.plot = entropy_plot(o.alphabets);
  r.table_in_json = true;
  return r;
}

// ---------------------------------------------------------------------------
// lockkey

struct LockSimOpts {
  std::string attack = "vacuum";
  double beta = 0.0;
  std::vector<double> betas;
  int length = 5, alphabet = 8;
  double amp = 1.0;
  std::uint64_t trials = 100000;
  double eff = 1.0, dark = 0.0;
  bool threshold = false;
};

Report cmd_lock_simulate(const LockSimOpts& o, const Global& g) {
  const DetectorModel det = detector_from(o.eff, o.dark, o.threshold);
  const AttackKind kind = parse_attack_kind(o.attack);
  std::vector<double> betas;
  if (kind == AttackKind::Vacuum) betas = {0.0};
  if (kind == AttackKind::Coherent) betas = {o.beta};
  if (kind == AttackKind::CoherentGrid) {
    betas = o.betas;
    detail::require(!betas.empty(), "coherent-grid needs --betas");
  }
  Table t{{"attack", "beta", "trials", "passes", "rate", "analytic", "sigma"}, {}};
  for (double b : betas) {
    AttackSpec spec;
    spec.kind = kind == AttackKind::Vacuum ? AttackKind::Vacuum : AttackKind::Coherent;
    spec.beta = b;
    const LockSimulation s =
        simulate_lock(spec, o.length, o.alphabet, o.amp, det, o.trials, g.seed);
    t.add({std::string(to_string(kind)), b, static_cast<std::int64_t>(s.summary.trials),
           static_cast<std::int64_t>(s.summary.hits), s.summary.rate, s.analytic,
           s.summary.sigma_distance(s.analytic)});
  }
  Report r;
  r.command = "lockkey simulate";
  r.params = {{"attack", o.attack}, {"M", o.length}, {"N", o.alphabet},
              {"amp", o.amp}, {"trials", o.trials},
              {"detector", {{"efficiency", det.efficiency},
                            {"dark_mean", det.dark_mean},
                            {"number_resolving", det.number_resolving}}}};
  r.summary = {{"forgery_continuum",
                forgery_string_probability(attack_pass_probability(o.amp, betas[0]),
                                           o.length)}};
  r.table = std::move(t);
  r.table_in_json = true;
  return r;
}

struct EntropyOpts {
  std::vector<int> alphabets{4};
  std::vector<double> alpha_sq;
};

Report cmd_lock_entropy(const EntropyOpts& o, const Global&) {
  detail::require(!o.alphabets.empty(), "need at least one N");
  std::vector<double> grid = o.alpha_sq;
  if (grid.empty()) {
    for (int i = 0; i <= 25; ++i) grid.push_back(i);
  }
  Report r;
  r.command = "lockkey entropy";
  r.default_format = "csv";
  r.params = {{"N", o.alphabets}, {"alpha_sq", grid}};
  json inf = json::array();
  for (double a2 : grid) {
    detail::require(a2 >= 0.0, "alpha_sq must be nonnegative");
    json row{{"alpha_sq", a2},
             {"S_infinite_bits", holevo_entropy_infinite(std::sqrt(a2)).bits}};
    row["S_stirling_bits"] =
        a2 > 0.0 ? json(stirling_entropy_approx(std::sqrt(a2))) : json(nullptr);
    inf.push_back(std::move(row));
  }
  r.summary = {{"phase_randomised", inf}};
  r.table = entropy_table(grid, o.alphabets);
  r.plot = entropy_plot(o.alphabets);
  r.table_in_json = true;
  return r;
}

struct AttackScanOpts {
  double amp = 2.0;
  double beta_max = -1.0;
  double step = 0.01;
  int alphabet = 0;
};

Report cmd_attack_scan(const AttackScanOpts& o, const Global&) {
  detail::require(o.amp >= 0.0, "--amp must be nonnegative");
  const double hi = o.beta_max < 0 ? 2.0 * o.amp + 5.0 : o.beta_max;
  detail::require(o.step > 0.0 && o.step <= hi, "step must lie in (0, beta_max]");
  detail::require(o.alphabet == 0 || o.alphabet >= 2, "--N must be 0 or >= 2");
  Table t{{"beta", "p_pass"}, {}};
  if (o.alphabet) t.columns.push_back("p_pass_discrete");
  const auto n = static_cast<std::int64_t>(std::floor(hi / o.step + 1e-9));
  for (std::int64_t i = 0; i <= n; ++i) {
    const double b = double(i) * o.step;
    std::vector<Cell> row{b, attack_pass_probability(o.amp, b)};
    if (o.alphabet) {
      row.emplace_back(attack_pass_probability_discrete(o.amp, b, o.alphabet));
    }
    t.add(std::move(row));
  }
  const OptimalAttack best = optimal_coherent_attack(o.amp);
  Report r;
  r.command = "lockkey attack-scan";
  r.default_format = "csv";
  r.params = {{"amp", o.amp}, {"beta_max", hi}, {"step", o.step}, {"N", o.alphabet}};
  r.summary = {{"beta_star", best.beta_star}, {"p_star", best.p_star}};
  std::vector<std::string> ys{"p_pass"};
  if (o.alphabet) ys.push_back("p_pass_discrete");
  r.plot = PlotSpec{"Single-position forgery", "beta", ys, {}, "|beta|",
                    "pass probability", {}};
  r.table = std::move(t);
  r.table_in_json = true;
  return r;
}

// ---------------------------------------------------------------------------
// pkd

struct PkdOpts {
  std::string scheme = "center";
  int recipients = 2;
  pkd::Params params;
  std::uint64_t trials = 1000;
  std::string adversary = "none";
  double overlap = 0.5;
  double scale = -1.0;
  int positions = 1;
  std::string delta = "1,0";
  double eff = 1.0, dark = 0.0;
  bool threshold = false;
  bool no_transcript = false;
};

json event_json(const pkd::Event& e) {
  json j{{"party", e.party}, {"action", e.action}, {"position", e.position},
         {"amplitudes", amps_json(e.amplitudes)}, {"counts", e.counts}};
  if (e.tampered) j["tampered"] = true;
  return j;
}

Table pkd_table(const std::vector<pkd::PkdTrialRow>& rows) {
  Table t{{"trial", "e_bob", "e_charlie", "verdict_bob", "verdict_charlie", "clicks"},
          {}};
  t.rows.reserve(rows.size());
  for (const auto& row : rows) {
    t.add({static_cast<std::int64_t>(row.trial), static_cast<std::int64_t>(row.e_bob),
           static_cast<std::int64_t>(row.e_charlie),
           std::string(pkd::to_string(row.verdict_bob)),
           std::string(pkd::to_string(row.verdict_charlie)),
           static_cast<std::int64_t>(row.clicks)});
  }
  return t;
}

Report cmd_pkd(const PkdOpts& o, const Global& g) {
  const pkd::Params& p = o.params;
  p.validate();
  const DetectorModel det = detector_from(o.eff, o.dark, o.threshold);
  const bool center = o.scheme == "center";
  detail::require(center || o.scheme == "distributed",
                  "--scheme must be center or distributed");
  const auto& adv = o.adversary;

  Report r;
  r.command = "pkd";
  r.params = {{"scheme", o.scheme}, {"recipients", o.recipients},
              {"M", p.length},      {"N", p.alphabet},
              {"amp", p.amp},       {"s", p.security},
              {"trials", o.trials}, {"adversary", adv}};
  std::vector<pkd::PkdTrialRow> rows;

  pkd::AliceStrategy alice{pkd::AliceStrategyKind::Honest, 1.0, 1.0, 0};
  if (adv == "alice-overlap-half" || adv == "alice-overlap") {
    alice = {pkd::AliceStrategyKind::Overlap,
             adv == "alice-overlap-half" ? 0.5 : o.overlap, 1.0, o.positions};
  } else if (adv == "alice-scale") {
    alice = {pkd::AliceStrategyKind::Scale, 1.0, o.scale, o.positions};
  }
  std::optional<pkd::ShareTamper> tamper;
  if (adv == "charlie-flip" || adv == "charlie-vacuum" || adv == "charlie-displace") {
    pkd::ShareTamper t;
    if (adv == "charlie-flip") t.scale = -1.0;
    if (adv == "charlie-vacuum") t.scale = 0.0;
    if (adv == "charlie-displace") t.displacement = parse_amplitude(o.delta, "--delta");
    tamper = t;
  }
  const bool alice_cheats = alice.kind != pkd::AliceStrategyKind::Honest;
  detail::require(adv == "none" || alice_cheats || tamper.has_value(),
                  "unknown adversary '" + adv + "'");
  detail::require(adv == "none" || o.recipients == 2,
                  "adversarial runs use two recipients (Bob and Charlie)");
  detail::require(!(center && tamper), "Charlie's share tampering needs --scheme distributed");

  if (adv == "none") {
    const pkd::HonestReport h = pkd::simulate_honest(
        center ? pkd::Scheme::Center : pkd::Scheme::Distributed, o.recipients, p,
        det, o.trials, g.seed, &rows);
    r.summary = {{"clicks", h.clicks},
                 {"non_accepting_verdicts", h.non_accepting},
                 {"max_recovery_error", h.max_recovery_error}};
  } else if (center) {
    const pkd::DisagreementReport d =
        pkd::simulate_dishonest_alice_center(alice, p, o.trials, g.seed, &rows);
    r.summary = {{"disagreements", d.disagreements},
                 {"disagreement_rate", d.rate},
                 {"analytic", d.analytic},
                 {"bound", d.bound},
                 {"standard_error", d.standard_error},
                 {"within_bound", d.within_bound},
                 {"errors_bob_only", d.errors_bob_only},
                 {"errors_charlie_only", d.errors_charlie_only},
                 {"symmetry_p_value", d.symmetry_p_value}};
  } else if (tamper) {
    const pkd::CharlieReport c =
        pkd::simulate_dishonest_charlie(*tamper, p, det, o.trials, g.seed, &rows);
    r.summary = {{"bob_reject_rate", c.bob_reject_rate},
                 {"bob_detection_rate", c.bob_detection_rate},
                 {"analytic_reject", c.analytic_reject},
                 {"analytic_detection", c.analytic_detection},
                 {"standard_error_reject", c.standard_error_reject},
                 {"standard_error_detection", c.standard_error_detection}};
  } else {
    // dishonest Alice in the distributed scheme: different copies to Bob and
    // Charlie, caught by the comparison multiports
    std::uint64_t detected = 0;
    for (std::uint64_t i = 0; i < o.trials; ++i) {
      RandomStream rng = RandomStream::substream(g.seed, i);
      const pkd::DistributedTrial t =
          pkd::run_distributed_trial(std::nullopt, alice, p, det, rng, false);
      const std::uint64_t clicks = t.exchange.clicks[0] + t.exchange.clicks[1];
      if (clicks > 0) ++detected;
      rows.push_back({i, t.bob.errors, t.charlie.errors, t.bob.verdict,
                      t.charlie.verdict, clicks});
    }
    r.summary = {{"detection_rate", double(detected) / double(o.trials)}};
  }

  // Trial 0 replayed with event logging; only the two-recipient runs have a
  // Bob/Charlie transcript.
  if (!o.no_transcript && o.recipients == 2) {
    RandomStream rng = RandomStream::substream(g.seed, 0);
    const std::vector<pkd::Event> transcript =
        center ? pkd::run_center_trial(alice, p, rng, true).transcript
               : pkd::run_distributed_trial(tamper, alice, p, det, rng, true)
                     .transcript;
    json events = json::array();
    for (const auto& e : transcript) events.push_back(event_json(e));
    r.summary["transcript_trial"] = 0;
    r.summary["transcript"] = std::move(events);
  }
  r.table = pkd_table(rows);
  return r;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Coherent-state comparison, lock-and-key and public-key "
               "distribution simulations",
               "qcomp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "qcomp 0.1.0");

  Global g;
  app.add_option("--seed", g.seed, "Seed of the random streams")->capture_default_str();
  app.add_option("--out", g.out, "Write the output to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  CompareOpts co;
  auto* compare_cmd = app.add_subcommand("compare", "Two-state beam-splitter comparison");
  compare_cmd->add_option("--alpha", co.alpha, "First amplitude re,im")->required();
  compare_cmd->add_option("--beta", co.beta, "Second amplitude re,im")->required();
  compare_cmd->add_option("--trials", co.trials, "Monte Carlo trials (0 = none)");
  compare_cmd->add_option("--d-max", co.d_max, "Sweep range of |alpha-beta|")
      ->capture_default_str();
  compare_cmd->add_option("--step", co.step, "Sweep step")->capture_default_str();
  add_detector_flags(compare_cmd, co.eff, co.dark, co.threshold);

  MultiportOpts mo;
  auto* multiport_cmd =
      app.add_subcommand("multiport", "N-state comparison with a balanced multiport");
  multiport_cmd->add_option("--amp", mo.amps, "Input amplitude re,im (repeat)")
      ->required()
      ->allow_extra_args(false);
  multiport_cmd->add_option("--trials", mo.trials, "Monte Carlo trials (0 = none)");
  add_detector_flags(multiport_cmd, mo.eff, mo.dark, mo.threshold);

  OracleOpts oo;
  auto* oracle_cmd = app.add_subcommand("oracle", "Fock-space reference calculations");
  oracle_cmd->add_option("--case", oo.which, "What to evaluate")
      ->check(CLI::IsMember({"bs-coherent", "squeezed", "su2-pass", "squeezed-pass"}))
      ->capture_default_str();
  oracle_cmd->add_option("--alpha", oo.alpha, "Mode a amplitude (bs-coherent)");
  oracle_cmd->add_option("--beta", oo.beta, "Mode b amplitude (bs-coherent)");
  oracle_cmd->add_option("--xi1", oo.xi1, "Mode a squeezing (squeezed)");
  oracle_cmd->add_option("--xi2", oo.xi2, "Mode b squeezing (squeezed)");
  oracle_cmd->add_option("--n", oo.n, "Photon number (pass states)");
  oracle_cmd->add_option("--m", oo.m, "Mode a photon number (squeezed-pass)");
  oracle_cmd->add_option("--cutoff", oo.cutoff, "Fock cutoff")->capture_default_str();
  oracle_cmd->add_option("--transmittance", oo.transmittance, "Beam splitter T");

  Figure2Opts f2;
  auto* figure2_cmd = app.add_subcommand("figure2", "p_succ and p_asymm against |alpha-beta|");
  figure2_cmd->add_option("--d-max", f2.d_max, "Largest |alpha-beta|")->capture_default_str();
  figure2_cmd->add_option("--step", f2.step, "Grid step")->capture_default_str();

  Figure4Opts f4;
  auto* figure4_cmd = app.add_subcommand("figure4", "Key-position entropy against |alpha|^2");
  figure4_cmd->add_option("--alpha-sq-max", f4.alpha_sq_max, "Largest |alpha|^2")
      ->capture_default_str();
  figure4_cmd->add_option("--step", f4.step, "Grid step")->capture_default_str();
  figure4_cmd->add_option("--N", f4.alphabets, "Phase alphabet sizes")
      ->capture_default_str();

  auto* lock_cmd = app.add_subcommand("lockkey", "Quantum lock-and-key");
  lock_cmd->require_subcommand(1);
  LockSimOpts lo;
  auto* lsim = lock_cmd->add_subcommand("simulate", "Monte Carlo pass rates of a forgery");
  lsim->add_option("--attack", lo.attack, "vacuum, coherent or coherent-grid")
      ->check(CLI::IsMember({"vacuum", "coherent", "coherent-grid"}))
      ->capture_default_str();
  lsim->add_option("--beta", lo.beta, "|beta| of a coherent forgery");
  lsim->add_option("--betas", lo.betas, "|beta| values of a coherent-grid attack");
  lsim->add_option("--M", lo.length, "Key length")->capture_default_str();
  lsim->add_option("--N", lo.alphabet, "Number of phases")->capture_default_str();
  lsim->add_option("--amp", lo.amp, "Key amplitude |alpha|")->capture_default_str();
  lsim->add_option("--trials", lo.trials, "Monte Carlo trials")->capture_default_str();
  add_detector_flags(lsim, lo.eff, lo.dark, lo.threshold);

  EntropyOpts eo;
  auto* lent = lock_cmd->add_subcommand("entropy", "Entropy of one key position");
  lent->add_option("--N", eo.alphabets, "Phase alphabet sizes")->capture_default_str();
  lent->add_option("--alpha-sq", eo.alpha_sq, "Mean photon numbers (default 0..25)");

  AttackScanOpts ao;
  auto* lscan = lock_cmd->add_subcommand("attack-scan", "Forgery pass probability against |beta|");
  lscan->add_option("--amp", ao.amp, "Key amplitude |alpha|")->capture_default_str();
  lscan->add_option("--beta-max", ao.beta_max, "Largest |beta| (default 2 amp + 5)");
  lscan->add_option("--step", ao.step, "Grid step")->capture_default_str();
  lscan->add_option("--N", ao.alphabet, "Also average over N discrete phases (0 = off)");

  PkdOpts po;
  auto* pkd_cmd = app.add_subcommand("pkd", "Quantum public-key distribution");
  pkd_cmd->add_option("--scheme", po.scheme, "center or distributed")
      ->check(CLI::IsMember({"center", "distributed"}))
      ->capture_default_str();
  pkd_cmd->add_option("--recipients", po.recipients, "Number of recipients T")
      ->capture_default_str();
  pkd_cmd->add_option("--M", po.params.length, "Key length")->capture_default_str();
  pkd_cmd->add_option("--N", po.params.alphabet, "Number of phases")->capture_default_str();
  pkd_cmd->add_option("--amp", po.params.amp, "Public-key amplitude")->capture_default_str();
  pkd_cmd->add_option("--s", po.params.security, "Security parameter s")
      ->capture_default_str();
  pkd_cmd->add_option("--trials", po.trials, "Protocol runs")->capture_default_str();
  pkd_cmd->add_option("--adversary", po.adversary,
                      "none, alice-overlap-half, alice-overlap, alice-scale, "
                      "charlie-flip, charlie-vacuum, charlie-displace")
      ->check(CLI::IsMember({"none", "alice-overlap-half", "alice-overlap",
                             "alice-scale", "charlie-flip", "charlie-vacuum",
                             "charlie-displace"}))
      ->capture_default_str();
  pkd_cmd->add_option("--overlap", po.overlap, "alice-overlap: |<beta|alpha>|^2");
  pkd_cmd->add_option("--scale", po.scale, "alice-scale: beta = scale * alpha");
  pkd_cmd->add_option("--positions", po.positions, "Positions Alice tampers with");
  pkd_cmd->add_option("--delta", po.delta, "charlie-displace: displacement re,im");
  pkd_cmd->add_flag("--no-transcript", po.no_transcript, "Omit the trial-0 transcript");
  add_detector_flags(pkd_cmd, po.eff, po.dark, po.threshold);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    Report r;
    if (*compare_cmd) r = cmd_compare(co, g);
    else if (*multiport_cmd) r = cmd_multiport(mo, g);
    else if (*oracle_cmd) r = cmd_oracle(oo, g);
    else if (*figure2_cmd) r = cmd_figure2(f2, g);
    else if (*figure4_cmd) r = cmd_figure4(f4, g);
    else if (*lsim) r = cmd_lock_simulate(lo, g);
    else if (*lent) r = cmd_lock_entropy(eo, g);
    else if (*lscan) r = cmd_attack_scan(ao, g);
    else if (*pkd_cmd) r = cmd_pkd(po, g);
    emit(g, r);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace qcomp::cli
