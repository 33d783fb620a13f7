#include <gtest/gtest.h>

#include "reference.hpp"

using namespace qdoeblin;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

/// Direct eigenvalue evaluation of Tr(A - gamma B)_+ for diagonal qubit states.
double hockey_diag(double a0, double a1, double b0, double b1, double gamma) {
  return std::max(0.0, a0 - gamma * b0) + std::max(0.0, a1 - gamma * b1);
}

}  // namespace

TEST(EtaTr, Examples) {
  for (double p : {0.0, 0.3, 0.8, 1.0, 1.2, 4.0 / 3.0}) {
    const auto d = depolarizing(p, 2);
    EXPECT_NEAR(eta_tr_qubit(d), std::abs(1 - p), 1e-4) << p;
    EXPECT_NEAR(eta_tr_qubit(d), ref::eta_tr(d), 1e-4);
  }
  ComplexMatrix u(2, 2);
  u << Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.8), Complex(0.6, 0.0);
  EXPECT_NEAR(eta_tr_qubit(unitary_channel(u)), 1.0, 1e-6);
  for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.25) EXPECT_NEAR(eta_tr_qubit(bitflip(p)), 1.0, 1e-4);
  EXPECT_THROW(eta_tr_qubit(depolarizing(0.2, 3)), InvalidInput);
}

TEST(EtaTr, AgreesWithBlochMapOnRandomChannels) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto n = random_channel(2, 2, 3, s);
    EXPECT_NEAR(eta_tr_qubit(n), ref::eta_tr(n), 1e-5);
    EXPECT_NEAR(eta_tr_expansion_qubit(n, s), ref::eta_tr_expansion(n), 1e-3);
  }
}

TEST(EtaTrExpansion, Examples) {
  for (double p : {0.1, 0.6, 1.25}) EXPECT_NEAR(eta_tr_expansion_qubit(depolarizing(p, 2)), std::abs(1 - p), 1e-3);
  for (auto [p, eta] : {std::pair{0.3, 0.6}, {1.0, 0.2}, {0.5, 0.9}})
    EXPECT_NEAR(eta_tr_expansion_qubit(gad(p, eta)), eta, 1e-3);
  EXPECT_NEAR(eta_tr_expansion_qubit(replacer(diag2(0.4, 0.6), 2)), 0.0, 1e-12);
}

TEST(HockeyStick, Examples) {
  std::mt19937_64 rng(2);
  const ComplexMatrix rho = ref::random_density(3, rng);
  EXPECT_NEAR(hockey_stick(rho, rho, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(hockey_stick(rho, rho, 2.5), 0.0, 1e-12);
  const auto [r, s] = divergence_pair(0.6);
  EXPECT_NEAR(hockey_stick(r, s, 2.0), 0.2, 1e-12);
  EXPECT_THROW(hockey_stick(r, s, 0.5), InvalidParameter);
}

TEST(HockeyStick, DepolarizedPairMatchesEigenvalues) {
  // D_p(rho) = diag(1 - p/2, p/2), D_p(sigma) = diag((1-p)(1-eps) + p/2, (1-p) eps + p/2).
  for (double p : {0.2, 0.5, 0.8})
    for (double eps : {0.1, 0.5, 0.7})
      for (double gamma : {1.0, 1.5, 3.0}) {
        const auto [r, s] = divergence_pair(eps);
        const auto d = depolarizing(p, 2);
        const double direct = hockey_diag(1 - p / 2, p / 2, (1 - p) * (1 - eps) + p / 2,
                                          (1 - p) * eps + p / 2, gamma);
        EXPECT_NEAR(hockey_stick(qdoeblin::apply(d, r), qdoeblin::apply(d, s), gamma), direct, 1e-12);
        // For gamma >= 1 only the first eigenvalue can be positive.
        EXPECT_NEAR(direct, std::max(0.0, 1 - p / 2 - gamma * ((1 - p) * (1 - eps) + p / 2)), 1e-15);
      }
}

TEST(FDivergence, Examples) {
  const auto [r, s] = divergence_pair(0.5);
  EXPECT_NEAR(f_divergence_commuting(r, s, FDivergence::chi_square), 1.0, 1e-12);
  EXPECT_NEAR(f_divergence_commuting(s, s, FDivergence::chi_square), 0.0, 1e-15);
  EXPECT_NEAR(f_divergence_commuting(s, s, FDivergence::relative_entropy), 0.0, 1e-15);
  EXPECT_NEAR(f_divergence_commuting(r, s, FDivergence::relative_entropy), std::log(2.0), 1e-12);
  EXPECT_TRUE(std::isinf(f_divergence_commuting(s, r, FDivergence::relative_entropy)));
}

TEST(FDivergence, SlopesAtZero) {
  const double h = 1e-5, eps = 1e-5;
  auto in = [](double e) {
    const auto [r, s] = divergence_pair(e);
    return f_divergence_commuting(r, s, FDivergence::chi_square);
  };
  const auto d = depolarizing(0.5, 2);
  auto out = [&](double e) {
    const auto [r, s] = divergence_pair(e);
    return f_divergence_commuting(qdoeblin::apply(d, r), qdoeblin::apply(d, s), FDivergence::chi_square);
  };
  EXPECT_NEAR((in(eps + h) - in(eps - h)) / (2 * h), 1.0, 1e-3);
  EXPECT_NEAR((out(eps + h) - out(eps - h)) / (2 * h), 0.0, 1e-3);
}

TEST(Witness, Examples) {
  const auto w = expansion_witness_hockey_stick(0.5, 2.0);
  EXPECT_NEAR(w.lower, 0.5, 1e-15);
  EXPECT_NEAR(w.upper, 0.75, 1e-15);
  EXPECT_NEAR(w.epsilon, 0.625, 1e-15);
  EXPECT_EQ(w.e_out, 0.0);
  EXPECT_GT(w.e_in, 0.0);
  const auto w2 = expansion_witness_hockey_stick(0.2, 1.5);
  EXPECT_LE(w2.e_out, 1e-12);
  EXPECT_GT(w2.e_in, 0.0);
  const auto [r, s] = divergence_pair(w2.epsilon);
  EXPECT_NEAR(w2.e_in, hockey_stick(r, s, 1.5), 1e-15);
  EXPECT_THROW(expansion_witness_hockey_stick(0.0, 2.0), InvalidParameter);
}

TEST(GadIdentity, Examples) {
  EXPECT_LE(gad_dephasing_identity(0.3, 0.5), 1e-10);
  EXPECT_LE(gad_dephasing_identity(0.7, 1.0), 1e-10);
  EXPECT_LE(max_entry_distance(compose(dephasing(0.0), gad(0.7, 1.0)).choi().matrix(),
                               identity_channel(2).choi().matrix()),
            1e-12);
  EXPECT_LE(gad_dephasing_identity(0.4, 0.0), 1e-10);
  EXPECT_LE(max_entry_distance(compose(dephasing(0.5), gad(0.4, 0.0)).choi().matrix(),
                               replacer(diag2(0.4, 0.6), 2).choi().matrix()),
            1e-12);
}

TEST(MinorizationConstant, MatchesBisection) {
  std::mt19937_64 rng(6);
  const auto n = random_channel(2, 2, 4, 17);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix sigma = ref::random_density(2, rng);
    EXPECT_NEAR(minorization_constant(n.choi().matrix(), sigma),
                ref::minorization(n.choi().matrix(), sigma), 1e-9);
  }
}

TEST(Classical, DoeblinExamples) {
  for (double p : {0.0, 0.1, 0.5, 0.8}) EXPECT_NEAR(classical_doeblin(bsc(p)), 2 * std::min(p, 1 - p), 1e-15);
  EXPECT_NEAR(classical_doeblin(bec(0.3)), 0.3, 1e-15);
  EXPECT_EQ(classical_doeblin(ClassicalChannel((RealMatrix(2, 2) << 0, 1, 1, 0).finished())), 0.0);
}

TEST(Classical, CapacityExamples) {
  EXPECT_NEAR(classical_capacity_biso(bsc(0.11)), 1 - ref::h2(0.11), 1e-12);
  EXPECT_NEAR(classical_capacity_biso(bsc(0.11)), 0.5, 1e-3);
  EXPECT_NEAR(classical_capacity_biso(bec(0.3)), 0.7, 1e-12);
  EXPECT_EQ(binary_entropy(0.5), 1.0);
  EXPECT_THROW(classical_capacity_biso(ClassicalChannel((RealMatrix(2, 2) << 0.9, 0.3, 0.1, 0.7).finished())),
               InvalidInput);
}

TEST(Classical, ReverseAlphaExamples) {
  for (double q : {0.05, 0.11, 0.3}) EXPECT_NEAR(classical_reverse_alpha(bsc(q)), ref::h2(q), 1e-4);
  for (double eps : {0.2, 0.5}) {
    const double rev = classical_reverse_alpha(bec(eps));
    EXPECT_GE(rev, eps - 1e-5);
    EXPECT_NEAR(classical_gamma(bec(eps)), eps, 1e-12);
  }
  EXPECT_NEAR(classical_reverse_alpha(bsc(0.0)), 0.0, 1e-9);
  EXPECT_NEAR(classical_gamma(bsc(0.0)), 0.0, 1e-12);
  EXPECT_NEAR(classical_gamma(bsc(0.2)), ref::h2(0.2), 1e-12);
}

TEST(Classical, ChainOnRandomBiso) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_biso(2 + t % 4, rng);
    ASSERT_TRUE(c.is_biso());
    const double one_minus_c = 1 - classical_capacity_biso(c);
    EXPECT_LE(classical_doeblin(c), one_minus_c + 1e-12);
    EXPECT_LE(one_minus_c, classical_reverse_alpha(c) + 1e-5);
  }
}
