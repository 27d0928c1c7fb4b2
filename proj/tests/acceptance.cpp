// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "qcomp/comparison.hpp"
#include "qcomp/detection.hpp"
#include "qcomp/fock_oracle.hpp"
#include "qcomp/lockkey.hpp"
#include "qcomp/pkd.hpp"
#include "support/oracles.hpp"

using namespace qcomp;
using oracle::cd;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome c1_difference_detection() {
  const auto t0 = Clock::now();
  Outcome o;
  double worst = 0.0;
  for (double d : {0.5, 1.0, 2.0, 3.0}) {
    const cd a{0.4, -0.2};
    const cd b = a - std::polar(d, 1.1);
    const std::size_t watched[] = {1};
    const auto s = run_trials(CoherentRegister({a, b}), make_beam_splitter(0.5), watched,
                              DetectorModel::ideal(), 100000, 1000 + std::uint64_t(d * 10));
    const double p = 1 - std::exp(-d * d / 2);
    const double z = s.sigma_distance(p);
    worst = std::max(worst, z);
    o.pass &= z <= 3.0;
  }
  const double secs = seconds_since(t0);
  o.pass &= secs < 10.0;
  o.detail = fmt("max deviation %.2f sigma over |a-b| in {0.5,1,2,3}, %.2f s", worst, secs);
  return o;
}

Outcome c2_dominance() {
  const auto t0 = Clock::now();
  std::mt19937_64 g(2);
  std::uniform_int_distribution<int> dim(2, 5);
  double min_slack = 1e9;
  for (int i = 0; i < 10000; ++i) {
    std::vector<cd> v(static_cast<std::size_t>(dim(g)));
    for (auto& a : v) a = oracle::random_in_disc(g, 3.0);
    const double lhs = 1 - p_success_multiport(v);
    const double rhs = p_symmetric(v);
    min_slack = std::min(min_slack, rhs - lhs);
  }
  const double secs = seconds_since(t0);
  return {min_slack >= -1e-12 && secs < 30.0,
          fmt("min slack p_symm - (1 - p_succ) = %.3e over 10^4 tuples, %.2f s",
              min_slack, secs)};
}

Outcome c3_three_forms() {
  std::mt19937_64 g(3);
  std::uniform_int_distribution<int> dim(2, 8);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<cd> v(static_cast<std::size_t>(dim(g)));
    for (auto& a : v) a = oracle::random_in_disc(g, 3.0);
    const auto f = multiport_success_forms(v);
    worst = std::max({worst, std::abs(f.pairwise - f.per_mode),
                      std::abs(f.pairwise - f.overlap_product),
                      std::abs(f.per_mode - f.overlap_product)});
  }
  return {worst <= 1e-10, fmt("max disagreement %.3e over 10^3 instances", worst)};
}

Outcome c4_fock_fidelity() {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 1.0;
  for (int i = 0; i < 200; ++i) {
    const cd a = oracle::random_in_disc(g, 1.5), b = oracle::random_in_disc(g, 1.5);
    const double t = u(g);
    const auto out = apply_network(make_beam_splitter(t), CoherentRegister({a, b}));
    const FockVector fock =
        apply_bs_fock(tensor_product(coherent_fock(a, 40), coherent_fock(b, 40)), t);
    const FockVector want =
        tensor_product(coherent_fock(out[0], 40), coherent_fock(out[1], 40));
    worst = std::min(worst, fidelity(fock, want));
  }
  return {worst >= 1 - 1e-8, fmt("min fidelity 1 - %.3e over 200 cases", 1 - worst)};
}

Outcome c5_parity() {
  double equal_max = 0.0;
  for (cd xi : {cd(0.0), cd(0.1), cd(0.2), cd(0.35), cd(0.1, 0.25), cd(-0.3, 0.1)}) {
    equal_max = std::max(equal_max, odd_photon_probability(xi, xi, 40));
  }
  double unequal_min = 1.0;
  for (auto [x1, x2] : {std::pair{cd(0.2), cd(0.1)}, {cd(0.2), cd(-0.2)},
                        {cd(0.0), cd(0.05)}, {cd(0.1, 0.1), cd(0.1, -0.1)}}) {
    unequal_min = std::min(unequal_min, odd_photon_probability(x1, x2, 40));
  }
  return {equal_max < 1e-10 && unequal_min > 0.0,
          fmt("equal xi: max odd probability %.2e; unequal xi: min %.3e", equal_max,
              unequal_min)};
}

Outcome c6_vacuum_threshold() {
  double worst_below = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double amp = std::numbers::sqrt2 * i / 49.0;
    worst_below = std::max(worst_below, optimal_coherent_attack(amp).beta_star);
  }
  double min_above = 1e9;
  for (double da : {0.01, 0.05, 0.1, 0.5, 1.0, 3.0}) {
    min_above = std::min(min_above,
                         optimal_coherent_attack(std::numbers::sqrt2 + da).beta_star);
  }
  const double p1 = optimal_coherent_attack(1.0).p_star;
  const double err = std::abs(p1 - std::exp(-0.5));
  return {worst_below <= 1e-6 && min_above > 0.0 && err <= 1e-9,
          fmt("max beta* below threshold %.1e, min beta* above %.4f, |p*(1) - e^-1/2| = %.1e",
              worst_below, min_above, err)};
}

Outcome c7_asymptote() {
  Outcome o;
  o.detail = "p* sqrt(2 pi) amp:";
  for (double amp : {5.0, 8.0, 10.0}) {
    const double r = optimal_coherent_attack(amp).p_star * std::sqrt(2 * std::numbers::pi) * amp;
    o.pass &= r >= 0.9 && r <= 1.1;
    o.detail += fmt(" %.4f", r);
  }
  return o;
}

Outcome c8_entropy_consistency() {
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (double amp : {0.5, 1.0, 2.0}) {
      auto closed = holevo_entropy_finite(amp, n).eigenvalues;
      std::sort(closed.rbegin(), closed.rend());
      const auto diag = phase_ensemble_eigenvalues(amp, n, 30);
      for (int m = 0; m < n; ++m) worst = std::max(worst, std::abs(closed[m] - diag[m]));
    }
  }
  bool shape = true;
  double worst_asym = 0.0;
  for (int n = 2; n <= 8; ++n) {
    shape &= holevo_entropy_finite(0.0, n).bits == 0.0;
    double prev = 0.0;
    for (double a2 = 0.0; a2 <= 25.0 + 1e-12; a2 += 0.25) {
      const double s = holevo_entropy_finite(std::sqrt(a2), n).bits;
      shape &= s >= prev - 1e-12;
      prev = s;
    }
    worst_asym = std::max(worst_asym, std::abs(prev - std::log2(double(n))));
  }
  return {worst <= 1e-6 && shape && worst_asym <= 0.05,
          fmt("eigenvalue gap %.2e; S(0)=0 and monotone: %s; |S(25) - log2 N| <= %.2e",
              worst, shape ? "yes" : "no", worst_asym)};
}

Outcome c9_stirling() {
  double worst = 0.0;
  for (double a2 = 10.0; a2 <= 1000.0; a2 *= 1.1) {
    const double exact = holevo_entropy_infinite(std::sqrt(a2)).bits;
    worst = std::max(worst, std::abs(stirling_entropy_approx(std::sqrt(a2)) - exact) / exact);
  }
  const double gap =
      std::abs(holevo_entropy_finite(1.0, 64).bits - holevo_entropy_infinite(1.0).bits);
  return {worst < 0.05 && gap <= 1e-3,
          fmt("max relative error %.3f%% for |a|^2 in [10,1000]; |S_64 - S_inf| = %.1e at amp 1",
              100 * worst, gap)};
}

Outcome c10_alice_cheating() {
  const auto t0 = Clock::now();
  const pkd::AliceStrategy single{pkd::AliceStrategyKind::Overlap, 0.5, 1.0, 1};
  const auto small = pkd::simulate_dishonest_alice_center(single, {1, 4, 1.0, 1.0},
                                                          100000, 10);
  const bool ok_small = oracle::within_3_sigma(small.rate, 0.5, small.trials);
  const pkd::Params strict{10, 4, 1.0, 1.0};
  const auto big1 = pkd::simulate_dishonest_alice_center(single, strict, 1000000, 11);
  const pkd::AliceStrategy all{pkd::AliceStrategyKind::Overlap, 0.5, 1.0, 10};
  const auto big2 = pkd::simulate_dishonest_alice_center(all, strict, 1000000, 12);
  const double bound = std::pow(0.5, 9);
  auto ok_big = [&](const pkd::DisagreementReport& r) {
    const double se = std::sqrt(bound * (1 - bound) / double(r.trials));
    return r.rate <= bound + 3 * se;
  };
  const double secs = seconds_since(t0);
  return {ok_small && ok_big(big1) && ok_big(big2) && secs < 120.0,
          fmt("sM=1: rate %.4f (0.5 +- %.4f); sM=10: rates %.1e, %.1e <= %.2e; %.1f s",
              small.rate, 3 * std::sqrt(0.25 / small.trials), big1.rate, big2.rate, bound,
              secs)};
}

Outcome c11_distributed_honest() {
  std::uint64_t clicks = 0;
  double worst = 0.0;
  for (std::size_t t : {2u, 3u}) {
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
      RandomStream rng = RandomStream::substream(11, trial);
      const KeyString k = generate_key(8, 4, 1.0, rng);
      const std::vector<pkd::PublicKeyState> copies(t, {k.amplitudes()});
      const auto res = pkd::distributed_exchange(copies, {}, rng);
      for (std::size_t q = 0; q < t; ++q) {
        clicks += res.clicks[q];
        for (std::size_t j = 0; j < 8; ++j) {
          worst = std::max(worst, std::abs(res.recovered[q][j] - k.amplitude(j)));
        }
      }
    }
  }
  return {clicks == 0 && worst <= 1e-12,
          fmt("T in {2,3}, M=8, 1000 runs each: %llu clicks, max recovery error %.1e",
              static_cast<unsigned long long>(clicks), worst)};
}

#ifdef QCOMP_CLI_PATH
std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

Outcome c12_determinism() {
  const std::vector<std::string> invocations = {
      "compare --alpha 1,0 --beta=-1,0 --trials 20000",
      "--format csv compare --alpha 0.3,0.2 --beta 1,1",
      "multiport --amp 1,0 --amp 1,0 --amp=-1,0 --trials 20000",
      "oracle --case squeezed --xi1 0.2 --xi2 0.1",
      "figure2",
      "--format svg figure2",
      "figure4 --step 1",
      "--format svg figure4 --step 1",
      "lockkey simulate --attack coherent --beta 0.5 --trials 20000",
      "lockkey simulate --attack coherent-grid --betas 0 0.5 1 --trials 5000 --dark 0.01",
      "lockkey entropy --N 2 4 8",
      "lockkey attack-scan --amp 2 --N 8",
      "pkd --scheme center --adversary alice-overlap-half --M 1 --trials 5000",
      "--format csv pkd --scheme center --adversary alice-overlap --positions 3 --s 0.3",
      "pkd --scheme distributed --adversary charlie-flip --trials 2000",
      "--format csv pkd --scheme distributed --recipients 3 --trials 500 --M 8",
      "pkd --scheme distributed --adversary charlie-displace --delta 0.3,0.1 --dark 0.01",
  };
  const auto dir = std::filesystem::temp_directory_path() /
                   ("qcomp_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  Outcome o;
  int idx = 0;
  for (const auto& args : invocations) {
    std::string first, second;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / (std::to_string(idx) + "_" + std::to_string(rep));
      const std::string cmd = std::string("\"") + QCOMP_CLI_PATH + "\" --seed 424242 --out \"" +
                              out.string() + "\" " + args + " 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        o.pass = false;
        o.detail = "command failed: " + args;
        return o;
      }
      (rep ? second : first) = slurp(out);
    }
    if (first.empty() || first != second) {
      o.pass = false;
      o.detail = "output differs between runs: " + args;
      return o;
    }
    ++idx;
  }
  std::filesystem::remove_all(dir);
  o.detail = fmt("%d invocations, every subcommand, byte-identical on rerun", idx);
  return o;
}
#else
Outcome c12_determinism() { return {false, "CLI not built"}; }
#endif

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1  two-state difference detection (Monte Carlo vs closed form)", c1_difference_detection},
      {"C2  multiport never fails more often than universal comparison", c2_dominance},
      {"C3  three forms of the multiport success probability agree", c3_three_forms},
      {"C4  Fock-space beam splitter reproduces coherent outputs", c4_fock_fidelity},
      {"C5  squeezed-vacuum parity test", c5_parity},
      {"C6  vacuum forgery optimal up to amp = sqrt 2", c6_vacuum_threshold},
      {"C7  large-amplitude forgery asymptote", c7_asymptote},
      {"C8  key-position entropy: eigenvalues and curve shape", c8_entropy_consistency},
      {"C9  phase-randomised entropy vs large-amplitude form", c9_stirling},
      {"C10 dishonest Alice with a trusted center", c10_alice_cheating},
      {"C11 honest distributed exchange", c11_distributed_honest},
      {"C12 CLI determinism", c12_determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed ? 1 : 0;
}
