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

double value(const CoefficientResult& r) {
  EXPECT_TRUE(r.ok()) << to_string(r.kind) << " status " << to_string(r.status);
  return r.value;
}

}  // namespace

TEST(Alpha, Examples) {
  EXPECT_NEAR(value(alpha(depolarizing(0.5, 2))), 0.5, 1e-6);
  EXPECT_NEAR(value(alpha(identity_channel(2))), 0.0, 1e-7);
  const auto amp = gad(1.0, 0.5);
  EXPECT_NEAR(value(alpha(amp)), ref::alpha_grid(amp), 1e-4);
}

TEST(Alpha, MatchesBlochGridOnFullRankChannels) {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const auto n = random_channel(2, 2, 4, seed);
    const double sdp = value(alpha(n));
    const double grid = ref::alpha_grid(n);
    // The grid value is a feasible point, so it may only fall short.
    EXPECT_LE(grid, sdp + 1e-7);
    EXPECT_NEAR(sdp, grid, 1e-4) << "seed " << seed;
  }
  const auto g = gad(0.3, 0.4);
  EXPECT_NEAR(value(alpha(g)), ref::alpha_grid(g), 1e-4);
}

TEST(Alpha, WitnessIsAState) {
  const auto r = alpha(depolarizing(0.7, 3));
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_NEAR(r.witness->matrix.trace().real(), 1.0, 1e-9);
  EXPECT_GE(ref::min_eig(r.witness->matrix), -1e-8);
  EXPECT_NEAR(r.value, 0.7, 1e-6);
}

TEST(Alpha, ClassicalEmbedding) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const RealMatrix p = random_stochastic(2 + t % 2, 2 + t % 2, rng);
    EXPECT_NEAR(value(alpha(classical_embed(p))), ref::classical_alpha(p), 1e-5);
  }
}

TEST(AlphaTranspose, Examples) {
  const auto id = alpha_transpose(identity_channel(2));
  EXPECT_TRUE(id.not_applicable);
  EXPECT_EQ(format_value(id), "nan_not_ppt");
  const auto d = depolarizing(4.0 / 3.0, 2);
  EXPECT_NEAR(std::max(value(alpha(d)), value(alpha_transpose(d))), 2.0 / 3.0, 1e-5);
  // T o D^T_q = D_q on qubits, so the roles of the two coefficients swap.
  for (double q : {2.0 / 3.0, 1.0, 1.2}) {
    EXPECT_NEAR(value(alpha_transpose(transpose_depolarizing(q, 2))),
                value(alpha(depolarizing(q, 2))), 1e-5);
  }
}

TEST(AlphaHermitian, Examples) {
  EXPECT_NEAR(value(alpha_hermitian(depolarizing(0.5, 2))), 0.5, 1e-6);
  EXPECT_NEAR(value(alpha_hermitian(bitflip(0.3))), 0.0, 1e-6);
  const auto amp = gad(1.0, 0.7);
  EXPECT_GT(value(alpha_hermitian(amp)), 1e-3);
  EXPECT_NEAR(value(alpha(amp)), 0.0, 1e-6);
  const auto r = alpha_hermitian(amp);
  ASSERT_TRUE(r.witness.has_value());
  // The relaxed minorant is feasible and attains the value.
  const ComplexMatrix slack =
      amp.choi().matrix() - kron(r.witness->matrix, ComplexMatrix::Identity(2, 2) / 2.0);
  EXPECT_GE(ref::min_eig(slack), -1e-7);
  EXPECT_NEAR(r.witness->matrix.trace().real(), r.value, 1e-7);
}

TEST(AlphaTransposeHermitian, BoundsBothRelaxations) {
  const auto d = depolarizing(1.2, 2);
  const double th = value(alpha_transpose_hermitian(d));
  EXPECT_GE(th, value(alpha_transpose(d)) - 1e-6);
  EXPECT_TRUE(alpha_transpose_hermitian(identity_channel(2)).not_applicable);
}

TEST(P1, Examples) {
  EXPECT_NEAR(value(p1_eb_ppt(replacer(diag2(0.2, 0.8), 2))), 1.0, 1e-7);
  EXPECT_NEAR(value(p1_eb_ppt(identity_channel(2))), 0.0, 1e-7);
  for (double p : {0.5, 0.2, 0.9})
    EXPECT_NEAR(value(p1_eb_ppt(depolarizing(p, 2))), ref::p1_isotropic_depolarizing(p), 1e-5)
        << "p=" << p;
}

TEST(ReverseAlpha, Examples) {
  for (double p : {0.2, 0.6, 1.0}) EXPECT_NEAR(value(reverse_alpha(depolarizing(p, 2))), p, 1e-6);
  EXPECT_NEAR(value(reverse_alpha(identity_channel(2))), 0.0, 1e-6);
  EXPECT_NEAR(value(reverse_alpha(bitflip(0.5))), 1.0, 1e-6);
}

TEST(ReverseAlpha, WitnessDegradesToTarget) {
  const auto n = random_channel(2, 2, 3, 12);
  const auto r = reverse_alpha(n);
  ASSERT_TRUE(r.witness.has_value());
  const ComplexMatrix& dj = r.witness->matrix;
  EXPECT_GE(ref::min_eig(dj), -1e-7);
  const ComplexMatrix linked = link_product(dj, 2, 2, n.choi().matrix(), 2);
  EXPECT_LE(max_entry_distance(linked, depolarizing(r.value, 2).choi().matrix()), 1e-6);
}

TEST(ReverseAlphaTranspose, Examples) {
  EXPECT_NEAR(value(reverse_alpha_transpose(identity_channel(2))), 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(value(reverse_alpha_transpose(depolarizing(4.0 / 3.0, 2))), 2.0 / 3.0, 1e-5);
  for (std::uint64_t s = 1; s <= 5; ++s)
    EXPECT_GE(value(reverse_alpha_transpose(random_channel(2, 2, 2 + s % 3, s))), 2.0 / 3.0 - 1e-6);
}

TEST(ReverseAlphaHermitian, Examples) {
  for (auto [p, eta] : {std::pair{1.0, 0.3}, {0.5, 0.5}, {0.2, 0.8}})
    EXPECT_NEAR(value(reverse_alpha_hermitian(gad(p, eta))), 1.0 - eta, 1e-5);
  std::mt19937_64 rng(31);
  for (double q : {0.1, 0.4, 0.85}) {
    const ComplexMatrix sigma = ref::random_density(2, rng);
    EXPECT_NEAR(value(reverse_alpha_hermitian(generalized_depolarizing(q, sigma))), q, 1e-5);
  }
  EXPECT_NEAR(value(reverse_alpha_hermitian(identity_channel(2))), 0.0, 1e-6);
}

TEST(Compute, DispatchesAndParses) {
  for (auto k : {CoefficientKind::alpha, CoefficientKind::alpha_T, CoefficientKind::alpha_H,
                 CoefficientKind::alpha_TH, CoefficientKind::p1_ppt, CoefficientKind::rev_alpha,
                 CoefficientKind::rev_alpha_T, CoefficientKind::rev_alpha_H}) {
    EXPECT_EQ(parse_kind(to_string(k)), k);
    EXPECT_EQ(compute(k, depolarizing(0.9, 2)).kind, k);
  }
  EXPECT_FALSE(parse_kind("beta").has_value());
  EXPECT_THROW(reverse_alpha(erasure(0.2, 2)), InvalidInput);
}

TEST(Bounds, Examples) {
  const auto d = depolarizing(1.2, 2);
  EXPECT_NEAR(contraction_upper_bound(d), 0.2, 1e-5);
  EXPECT_NEAR(expansion_lower_bound(d), 0.2, 1e-5);
  const auto b = bitflip(0.3);
  EXPECT_NEAR(contraction_upper_bound(b), 1.0, 1e-6);
  EXPECT_LE(expansion_lower_bound(b), 0.4 + 1e-6);
  const auto r = replacer(diag2(0.3, 0.7), 2);
  EXPECT_NEAR(contraction_upper_bound(r), 0.0, 1e-6);
  EXPECT_NEAR(expansion_lower_bound(r), 0.0, 1e-6);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto range = dp_range(random_channel(2, 2, 3, s), "random " + std::to_string(s));
    EXPECT_LE(range.lower, range.upper + 1e-6) << range.channel;
  }
}

TEST(CapacityBounds, Examples) {
  EXPECT_EQ(capacity_bounds(erasure(0.5, 2)).q_bound.value(), 0.0);
  const auto d = capacity_bounds(depolarizing(0.3, 2));
  EXPECT_NEAR(d.q_bound.value(), 0.4, 1e-8);
  EXPECT_NEAR(d.q2_bound, 0.7, 1e-8);
  EXPECT_NEAR(d.c_bound, 0.7, 1e-8);
  const auto r = capacity_bounds(replacer(diag2(0.5, 0.5), 2));
  EXPECT_EQ(r.q_bound.value(), 0.0);
  EXPECT_EQ(r.q2_bound, 0.0);
  EXPECT_EQ(r.c_bound, 0.0);
  EXPECT_FALSE(capacity_bounds(depolarizing(0.3, 3)).q_bound.has_value());
}
