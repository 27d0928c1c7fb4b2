#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qcomp/errors.hpp"
#include "qcomp/fock_oracle.hpp"
#include "qcomp/linear_core.hpp"
#include "support/oracles.hpp"

using namespace qcomp;
using oracle::cd;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

cd determinant(std::vector<cd> m, std::size_t n) {
  cd det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[c * n + k], m[piv * n + k]);
      det = -det;
    }
    det *= m[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const cd f = m[r * n + c] / m[c * n + c];
      for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return det;
}

void expect_near(cd got, cd want, double tol) {
  EXPECT_NEAR(got.real(), want.real(), tol);
  EXPECT_NEAR(got.imag(), want.imag(), tol);
}

}  // namespace

TEST(CoherentRegister, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(CoherentRegister(std::vector<Amplitude>{}), ValidationError);
  EXPECT_THROW(CoherentRegister({Amplitude{NAN, 0.0}}), ValidationError);
  EXPECT_THROW(CoherentRegister({Amplitude{0.0, INFINITY}}), ValidationError);
  EXPECT_EQ(CoherentRegister::vacuum(3).mean_photon_number(), 0.0);
}

TEST(BeamSplitter, BalancedEqualInputsLeaveVacuumInB) {
  const cd a{0.7, -0.3};
  const auto out = apply_network(make_beam_splitter(0.5), CoherentRegister({a, a}));
  expect_near(out[0], kSqrt2 * a, 1e-15);
  expect_near(out[1], 0.0, 1e-15);
}

TEST(BeamSplitter, FullTransmissionFlipsSecondMode) {
  const cd a{1.2, 0.4}, b{-0.3, 2.0};
  const auto out = apply_network(make_beam_splitter(1.0), CoherentRegister({a, b}));
  expect_near(out[0], a, 1e-15);
  expect_near(out[1], -b, 1e-15);
}

TEST(BeamSplitter, OppositeInputsExitInB) {
  const auto out =
      apply_network(make_beam_splitter(0.5), CoherentRegister({1.0, -1.0}));
  expect_near(out[0], 0.0, 1e-15);
  expect_near(out[1], kSqrt2, 1e-15);
  // the same transformation in the photon-number basis
  const int cutoff = 40;
  const FockVector fock = apply_bs_fock(
      tensor_product(coherent_fock(1.0, cutoff), coherent_fock(-1.0, cutoff)), 0.5);
  const FockVector want =
      tensor_product(coherent_fock(0.0, cutoff), coherent_fock(kSqrt2, cutoff));
  EXPECT_GE(fidelity(fock, want), 1.0 - 1e-8);
}

TEST(BeamSplitter, RowsMatchDocumentedForm) {
  const double t = 0.3, theta = 0.9;
  const auto bs = make_beam_splitter(t, theta);
  const cd e = std::polar(1.0, theta);
  expect_near(bs(0, 0), std::sqrt(t) * e, 1e-15);
  expect_near(bs(0, 1), std::sqrt(1 - t), 1e-15);
  expect_near(bs(1, 0), std::sqrt(1 - t) * e, 1e-15);
  expect_near(bs(1, 1), -std::sqrt(t), 1e-15);
}

TEST(BeamSplitter, RejectsBadTransmittance) {
  EXPECT_THROW(make_beam_splitter(-0.1), ValidationError);
  EXPECT_THROW(make_beam_splitter(1.5), ValidationError);
  EXPECT_THROW(make_beam_splitter(NAN), ValidationError);
  EXPECT_NO_THROW(make_beam_splitter(0.0));
}

TEST(Multiport, TwoPortIsTheBalancedSplitter) {
  const auto mp = make_balanced_multiport(2);
  const auto bs = make_beam_splitter(0.5);
  for (std::size_t i = 0; i < 4; ++i) expect_near(mp.entries()[i], bs.entries()[i], 1e-15);
}

TEST(Multiport, ThreePortRowSums) {
  const auto mp = make_balanced_multiport(3);
  for (std::size_t k = 0; k < 3; ++k) {
    cd sum = 0.0;
    for (std::size_t l = 0; l < 3; ++l) sum += mp(k, l);
    expect_near(sum, k == 0 ? std::sqrt(3.0) : 0.0, 1e-14);
  }
}

TEST(Multiport, FivePortDeterminantHasUnitModulus) {
  const auto mp = make_balanced_multiport(5);
  const auto e = mp.entries();
  EXPECT_NEAR(std::abs(determinant({e.begin(), e.end()}, 5)), 1.0, 1e-10);
}

TEST(Multiport, CreationOperatorMatrixIsTheDft) {
  for (std::size_t n : {2u, 3u, 6u}) {
    const auto u = make_balanced_multiport(n).creation_operator_matrix();
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) {
        const cd want = std::polar(1.0 / std::sqrt(double(n)),
                                   2 * std::numbers::pi * double(k * l) / double(n));
        expect_near(u[k * n + l], want, 1e-14);
      }
    }
  }
}

TEST(Multiport, RejectsFewerThanTwoPorts) {
  EXPECT_THROW(make_balanced_multiport(1), ValidationError);
  EXPECT_THROW(make_balanced_multiport(0), ValidationError);
}

TEST(Multiport, EqualInputsConcentrateInModeZero) {
  for (std::size_t n = 2; n <= 9; ++n) {
    const cd a{0.4, 1.1};
    const auto out = apply_network(make_balanced_multiport(n),
                                   CoherentRegister(std::vector<cd>(n, a)));
    expect_near(out[0], std::sqrt(double(n)) * a, 1e-13);
    for (std::size_t k = 1; k < n; ++k) EXPECT_LT(std::abs(out[k]), 1e-13);
  }
}

TEST(Multiport, RootOfUnityInputLightsOneMode) {
  const cd w = std::polar(1.0, 2 * std::numbers::pi / 3);
  const auto out = apply_network(make_balanced_multiport(3),
                                 CoherentRegister({1.0, w, w * w}));
  int lit = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (std::norm(out[k]) > 1e-20) {
      ++lit;
      EXPECT_NE(k, 0u);
      EXPECT_NEAR(std::norm(out[k]), 3.0, 1e-13);
    }
  }
  EXPECT_EQ(lit, 1);
}

TEST(Network, BalancedPairMapsToSumAndDifference) {
  const cd a{0.3, 0.2}, b{-1.0, 0.5};
  const auto out = apply_network(make_balanced_multiport(2), CoherentRegister({a, b}));
  expect_near(out[0], (a + b) / kSqrt2, 1e-15);
  expect_near(out[1], (a - b) / kSqrt2, 1e-15);
}

TEST(Network, DimensionMismatchRejected) {
  EXPECT_THROW(apply_network(make_balanced_multiport(3), CoherentRegister({1.0, 2.0})),
               ValidationError);
}

TEST(Network, NonUnitaryMatrixIsAnInvariantViolation) {
  EXPECT_THROW(LinearNetwork(2, {1.0, 0.0, 0.0, 1.0 + 1e-8}), InvariantViolation);
  EXPECT_THROW(LinearNetwork(2, {1.0, 0.0, 0.0}), ValidationError);
}

TEST(Network, PhotonNumberConservedOnRandomRegisters) {
  std::mt19937_64 g(7);
  std::uniform_int_distribution<int> dim(2, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(dim(g));
    std::vector<cd> in(n);
    for (auto& a : in) a = oracle::random_in_disc(g, 3.0);
    const CoherentRegister reg(in);
    const LinearNetwork net =
        trial % 2 ? make_balanced_multiport(n)
                  : (n == 2 ? make_beam_splitter(u(g), 6 * u(g))
                            : make_balanced_multiport(n));
    const auto out = apply_network(net, reg);
    const double before = reg.mean_photon_number();
    EXPECT_NEAR(out.mean_photon_number(), before, 1e-12 * std::max(before, 1e-300));
    EXPECT_LT(net.unitarity_defect(), 1e-10);
  }
}

TEST(Network, CompositionMatchesSequentialApplication) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = make_beam_splitter(u(g), 6 * u(g));
    const double phases[] = {6 * u(g), 6 * u(g)};
    const auto b = compose(make_phase_shifter(phases), make_balanced_multiport(2));
    const CoherentRegister x(
        {oracle::random_in_disc(g, 2.0), oracle::random_in_disc(g, 2.0)});
    const auto seq = apply_network(a, apply_network(b, x));
    const auto once = apply_network(a * b, x);
    for (std::size_t k = 0; k < 2; ++k) expect_near(seq[k], once[k], 1e-10);
  }
}

TEST(Network, FockClosureForCoherentProducts) {
  // the network acts on coherent products as the amplitude map
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 20; ++trial) {
    const cd a = oracle::random_in_disc(g, 2.0), b = oracle::random_in_disc(g, 2.0);
    const auto net = make_beam_splitter(0.5);
    const auto out = apply_network(net, CoherentRegister({a, b}));
    const FockVector fock = apply_network_fock(
        net, tensor_product(coherent_fock(a, 40), coherent_fock(b, 40)));
    const FockVector want =
        tensor_product(coherent_fock(out[0], 40), coherent_fock(out[1], 40));
    EXPECT_GE(fidelity(fock, want), 1.0 - 1e-8);
  }
}
