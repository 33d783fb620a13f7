#include <gtest/gtest.h>

#include "reference.hpp"

using namespace qdoeblin;

namespace {

ComplexMatrix ket_bra(int d, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(Choi, Examples) {
  const ComplexMatrix id = identity_channel(2).choi().matrix();
  EXPECT_LE(max_entry_distance(id, maximally_entangled(2)), 1e-15);
  EXPECT_NEAR(id.trace().real(), 1.0, 1e-15);
  EXPECT_EQ(range_basis(id, 1e-10).cols(), 1);
  EXPECT_LE(max_entry_distance(depolarizing(1.0, 2).choi().matrix(),
                               ComplexMatrix::Identity(4, 4) / 4.0),
            1e-15);
}

TEST(Choi, GadMatchesClosedForm) {
  for (double p : {0.0, 0.3, 1.0})
    for (double eta : {0.0, 0.45, 1.0}) {
      // Closed form with the input system first.
      ComplexMatrix in_out = ComplexMatrix::Zero(4, 4);
      in_out(0, 0) = p + (1 - p) * eta;
      in_out(1, 1) = (1 - p) * (1 - eta);
      in_out(2, 2) = p * (1 - eta);
      in_out(3, 3) = p * eta + (1 - p);
      in_out(0, 3) = in_out(3, 0) = std::sqrt(eta);
      in_out /= 2.0;
      const ComplexMatrix s = ref::swap_qubits();
      EXPECT_LE(max_entry_distance(gad(p, eta).choi().matrix(), s * in_out * s), 1e-15)
          << "p=" << p << " eta=" << eta;
    }
}

TEST(KrausFromChoi, Examples) {
  const auto k1 = kraus_from_choi(identity_channel(2).choi());
  ASSERT_EQ(k1.size(), 1u);
  EXPECT_LE(max_entry_distance(k1[0] * k1[0].adjoint(), ComplexMatrix::Identity(2, 2)), 1e-12);
  EXPECT_NEAR(std::abs(k1[0](0, 1)) + std::abs(k1[0](1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(k1[0](0, 0) - k1[0](1, 1)), 0.0, 1e-12);
  EXPECT_EQ(kraus_from_choi(depolarizing(1.0, 2).choi()).size(), 4u);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto n = random_channel(2, 3, 3, seed);
    const auto k = kraus_from_choi(n.choi());
    EXPECT_LE(max_entry_distance(choi_from_kraus(k, 2, 3).matrix(), n.choi().matrix()), 1e-9);
    EXPECT_EQ(k.size(), 3u);
  }
}

TEST(Validate, Examples) {
  auto flags = [](const QuantumChannel& n) { return validate(n.choi().as_choi_like()); };
  const auto id = flags(identity_channel(2));
  EXPECT_TRUE(id.is_cp && id.is_tp);
  EXPECT_FALSE(id.is_ppt);
  const auto d8 = flags(depolarizing(0.8, 2));
  EXPECT_TRUE(d8.is_cp && d8.is_tp && d8.is_ppt);
  const auto d5 = flags(depolarizing(0.5, 2));
  EXPECT_TRUE(d5.is_cp && d5.is_tp);
  EXPECT_FALSE(d5.is_ppt);
  EXPECT_TRUE(flags(depolarizing(4.0 / 3.0, 2)).is_cp);
  // T o id is not CP.
  EXPECT_FALSE(validate(transpose_output(identity_channel(2).choi())).is_cp);
}

TEST(Validate, PptThresholdAtTwoThirds) {
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (validate(depolarizing(mid, 2).choi().as_choi_like()).is_ppt ? hi : lo) = mid;
  }
  EXPECT_NEAR(hi, 2.0 / 3.0, 1e-6);
}

TEST(Compose, Examples) {
  const auto n = random_channel(2, 2, 3, 5);
  EXPECT_LE(max_entry_distance(compose(identity_channel(2), n).choi().matrix(), n.choi().matrix()),
            1e-12);
  for (double p : {0.1, 0.5, 0.9})
    for (double q : {0.2, 0.7}) {
      const auto c = compose(depolarizing(p, 2), depolarizing(q, 2));
      EXPECT_LE(max_entry_distance(c.choi().matrix(), depolarizing(p + q - p * q, 2).choi().matrix()),
                1e-12);
      // Bloch vectors shrink by (1-p)(1-q).
      EXPECT_NEAR(ref::eta_tr(c), (1 - p) * (1 - q), 1e-12);
    }
  const double eps = 0.3, delta = 0.4;
  const auto ee = compose(erasure(eps, 3), erasure(delta, 2));
  const ComplexMatrix out = qdoeblin::apply(ee, ket_bra(2, 0, 0));
  EXPECT_NEAR(out.topLeftCorner(2, 2).trace().real(), (1 - eps) * (1 - delta), 1e-12);
  EXPECT_NEAR(1.0 - out.topLeftCorner(2, 2).trace().real(), 1 - (1 - eps) * (1 - delta), 1e-12);
  EXPECT_THROW(compose(erasure(0.1, 2), erasure(0.1, 2)), InvalidInput);
}

TEST(Compose, MatchesSequentialApply) {
  std::mt19937_64 rng(3);
  const auto n = random_channel(3, 2, 2, 8), m = random_channel(2, 3, 4, 9);
  const ComplexMatrix rho = ref::random_density(2, rng);
  EXPECT_LE(max_entry_distance(qdoeblin::apply(compose(n, m), rho), qdoeblin::apply(n, qdoeblin::apply(m, rho))), 1e-10);
}

TEST(Tensor, Examples) {
  const auto ii = tensor(identity_channel(2), identity_channel(2));
  EXPECT_LE(max_entry_distance(ii.choi().matrix(), identity_channel(4).choi().matrix()), 1e-12);

  std::mt19937_64 rng(4);
  const auto n = random_channel(2, 2, 3, 21), m = random_channel(2, 2, 2, 22);
  const ComplexMatrix rho = ref::random_density(2, rng), sigma = ref::random_density(2, rng);
  EXPECT_LE(max_entry_distance(qdoeblin::apply(tensor(n, m), kron(rho, sigma)),
                               kron(qdoeblin::apply(n, rho), qdoeblin::apply(m, sigma))),
            1e-10);

  const double p = 0.35;
  const auto dp = depolarizing(p, 2);
  const ComplexMatrix phi = maximally_entangled(2);
  const ComplexMatrix out = qdoeblin::apply(tensor(dp, dp), phi);
  ComplexMatrix direct = ComplexMatrix::Zero(4, 4);
  for (const auto& a : dp.kraus())
    for (const auto& b : dp.kraus()) direct += kron(a, b) * phi * kron(a, b).adjoint();
  EXPECT_LE(max_entry_distance(out, direct), 1e-12);
  const double fidelity = (phi * out).trace().real();
  EXPECT_NEAR(fidelity, (1 - p) * (1 - p) + (1 - (1 - p) * (1 - p)) / 4.0, 1e-12);
  EXPECT_THROW(tensor(identity_channel(4), identity_channel(4)), SizeError);
}

TEST(LinkProduct, Examples) {
  const auto n = random_channel(2, 2, 3, 31);
  EXPECT_LE(max_entry_distance(link_product(identity_channel(2).choi(), n.choi()).matrix(),
                               n.choi().matrix()),
            1e-12);
  const auto r = replacer(diag2(0.3, 0.7), 2);
  EXPECT_LE(max_entry_distance(link_product(r.choi(), n.choi()).matrix(), r.choi().matrix()), 1e-12);
  EXPECT_THROW(link_product(erasure(0.2, 2).choi(), erasure(0.2, 2).choi()), InvalidInput);
}

TEST(LinkProduct, AgreesWithCompose) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const int d = s % 2 ? 3 : 2;
    const auto outer = random_channel(d, d, 1 + s % 3, 1000 + s);
    const auto inner = random_channel(d, d, 2 + s % 3, 5000 + s);
    ASSERT_LE(max_entry_distance(link_product(outer.choi(), inner.choi()).matrix(),
                                 compose(outer, inner).choi().matrix()),
              1e-10)
        << "pair " << s;
  }
}

TEST(Constructors, AreChannels) {
  std::vector<QuantumChannel> all = {
      erasure(0.3, 2), depolarizing(0.4, 3), depolarizing(4.0 / 3.0, 2),
      transpose_depolarizing(2.0 / 3.0, 2), transpose_depolarizing(2.0, 2),
      gad(0.2, 0.9), pauli_channel({0.1, 0.2, 0.3, 0.4}), bitflip(0.3), dephasing(0.2),
      werner_holevo(3), generalized_depolarizing(0.4, diag2(0.1, 0.9)),
      replacer(diag2(0.5, 0.5), 3), classical_embed((RealMatrix(2, 2) << 0.9, 0.2, 0.1, 0.8).finished()),
      random_channel(2, 3, 2, 1)};
  for (const auto& n : all) {
    const auto f = validate(n.choi().as_choi_like());
    EXPECT_TRUE(f.is_cp && f.is_tp);
    EXPECT_NEAR(n.choi().matrix().trace().real(), 1.0, 1e-12);
  }
}

TEST(Constructors, Examples) {
  const auto e = erasure(0.25, 2);
  EXPECT_EQ(e.d_out(), 3);
  // Weight of the erasure flag in J.
  const ComplexMatrix flag_block = partial_trace(e.choi().matrix(), 3, 2, Subsystem::first);
  EXPECT_NEAR(flag_block(2, 2).real(), 0.25, 1e-15);

  for (double eta : {0.0, 0.3, 1.0}) {
    const ComplexMatrix out = qdoeblin::apply(gad(1.0, eta), ket_bra(2, 1, 1));
    EXPECT_LE(max_entry_distance(out, diag2(1 - eta, eta)), 1e-15);
  }
}

TEST(Constructors, RejectOutOfRange) {
  auto message = [](auto&& f) {
    try {
      f();
    } catch (const InvalidParameter& e) {
      return std::string(e.what());
    }
    return std::string("no throw");
  };
  EXPECT_NE(message([] { erasure(1.1, 2); }).find("[0, 1]"), std::string::npos);
  EXPECT_NE(message([] { depolarizing(1.4, 2); }).find("1.33333333"), std::string::npos);
  EXPECT_NE(message([] { transpose_depolarizing(0.5, 2); }).find("[0.666666667, 2]"),
            std::string::npos);
  EXPECT_THROW(gad(0.5, -0.1), InvalidParameter);
  EXPECT_THROW(dephasing(2.0), InvalidParameter);
  EXPECT_THROW(pauli_channel({0.5, 0.5, 0.5, -0.5}), InvalidParameter);
}

TEST(Random, Reproducible) {
  const auto a = random_channel(2, 2, 3, 77), b = random_channel(2, 2, 3, 77);
  EXPECT_EQ(a.choi().matrix(), b.choi().matrix());
  EXPECT_NE(a.choi().matrix(), random_channel(2, 2, 3, 78).choi().matrix());
}

TEST(Apply, Examples) {
  std::mt19937_64 rng(5);
  const ComplexMatrix rho = ref::random_density(2, rng);
  EXPECT_LE(max_entry_distance(qdoeblin::apply(identity_channel(2), rho), rho), 1e-15);
  EXPECT_LE(max_entry_distance(qdoeblin::apply(bitflip(0.5), ket_bra(2, 0, 0)), ComplexMatrix::Identity(2, 2) / 2.0),
            1e-15);
  const ComplexMatrix sigma = ref::random_density(2, rng);
  EXPECT_LE(max_entry_distance(qdoeblin::apply(replacer(sigma, 3), ref::random_density(3, rng)), sigma), 1e-12);
  const ComplexMatrix out = qdoeblin::apply(random_channel(2, 3, 2, 4), rho);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
  EXPECT_GE(ref::min_eig(out), -1e-12);
  EXPECT_THROW(qdoeblin::apply(identity_channel(3), rho), InvalidInput);
}
