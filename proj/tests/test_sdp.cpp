#include <gtest/gtest.h>

#include <sstream>

#include "reference.hpp"

using namespace qdoeblin;

namespace {

/// Reads the SDPA sparse format back into LMI form (no box bounds).
SdpProblem read_sdpa(std::istream& in) {
  std::string line;
  std::vector<std::string> data;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '*' && line[0] != '"') data.push_back(line);
  std::istringstream head(data[0] + " " + data[1] + " " + data[2] + " " + data[3]);
  int m = 0, nblocks = 0;
  head >> m >> nblocks;
  std::vector<int> sizes(static_cast<std::size_t>(nblocks));
  for (auto& s : sizes) head >> s;
  SdpProblem p(m);
  for (int i = 0; i < m; ++i) {
    double c;
    head >> c;
    p.objective(i) = -c;
  }
  for (int s : sizes) p.add_block(std::abs(s));
  for (std::size_t k = 4; k < data.size(); ++k) {
    std::istringstream row(data[k]);
    int mat, blk, r, c;
    double v;
    row >> mat >> blk >> r >> c >> v;
    RealMatrix& target = mat == 0 ? p.blocks[static_cast<std::size_t>(blk - 1)].c
                                  : p.blocks[static_cast<std::size_t>(blk - 1)].a[static_cast<std::size_t>(mat - 1)];
    target(r - 1, c - 1) = -v;
    target(c - 1, r - 1) = -v;
  }
  return p;
}

/// alpha_H of a qubit channel built directly from Pauli coordinates:
/// max Tr X s.t. J - X (x) 1/2 >= 0.
SdpProblem alpha_h_problem(const QuantumChannel& n) {
  const auto paulis = pauli_matrices();
  SdpProblem p(4);
  SdpBlock& blk = p.add_block(8);
  blk.c = real_embed(n.choi().matrix());
  for (int i = 0; i < 4; ++i) {
    p.objective(i) = paulis[static_cast<std::size_t>(i)].trace().real();
    blk.a[static_cast<std::size_t>(i)] =
        real_embed(kron(paulis[static_cast<std::size_t>(i)], ComplexMatrix::Identity(2, 2) / 2.0));
  }
  return p;
}

}  // namespace

TEST(Sdp, SmallestEigenvalue) {
  SdpProblem p(1);
  p.objective(0) = 1.0;
  SdpBlock& b = p.add_block(2);
  b.c << 1, 0, 0, 2;
  b.a[0] = RealMatrix::Identity(2, 2);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-8);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-8);
}

TEST(Sdp, DiagonalLp) {
  SdpProblem p(2);
  p.objective << 1, 1;
  SdpBlock& b1 = p.add_block(1);
  b1.c(0, 0) = 1;
  b1.a[0](0, 0) = 1;
  SdpBlock& b2 = p.add_block(1);
  b2.c(0, 0) = 2;
  b2.a[1](0, 0) = 1;
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 3.0, 1e-8);
  EXPECT_NEAR(s.y(0), 1.0, 1e-6);
  EXPECT_NEAR(s.y(1), 2.0, 1e-6);
}

TEST(Sdp, BoxBounds) {
  SdpProblem p(1);
  p.objective(0) = -1.0;
  p.set_bounds(0, 0.25, 1.0);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.y(0), 0.25, 1e-7);
}

TEST(Sdp, DoeblinInstance) {
  const auto r = alpha(depolarizing(0.5, 2));
  ASSERT_EQ(r.status, SdpStatus::optimal);
  EXPECT_NEAR(r.value, 0.5, 1e-6);
  EXPECT_LE(r.diagnostics.gap, 1e-8);
}

TEST(Sdp, RejectsMalformed) {
  SdpProblem p(1);
  SdpBlock& b = p.add_block(2);
  b.c << 0, 1, 0, 0;
  EXPECT_THROW(solve(p), InvalidInput);
}

TEST(Sdp, RandomInstancesCertifyDuality) {
  const CheckReport r = check_sdp(4242);
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_GE(r.passed, 60);
}

TEST(Sdp, EqualityElimination) {
  // max y0 + y1 + y2 subject to y0 + y1 = 1, y2 = 0.5, 1 - y0 >= 0, y0 >= 0, y1 >= 0.
  RealMatrix e(2, 3);
  e << 1, 1, 0, 0, 0, 1;
  RealVector f(2);
  f << 1, 0.5;
  const AffineMap map = solve_equalities(e, f);
  EXPECT_EQ(map.basis.cols(), 1);
  SdpProblem p(3);
  p.objective << 1, 1, 1;
  for (int i = 0; i < 2; ++i) {
    SdpBlock& b = p.add_block(1);
    b.a[static_cast<std::size_t>(i)](0, 0) = -1.0;
  }
  const SdpSolution s = solve(restrict_problem(p, map));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective_value, 1.5, 1e-8);
  RealMatrix bad(2, 1);
  bad << 1, 1;
  EXPECT_THROW(solve_equalities(bad, (RealVector(2) << 0, 1).finished()), InvalidInput);
}

TEST(Sdp, SdpaRoundTrip) {
  // Hermitian relaxation of the amplitude damping channel at eta = 0.7.
  const QuantumChannel n = gad(1.0, 0.7);
  const SdpProblem p = alpha_h_problem(n);
  std::stringstream ss;
  write_sdpa(p, ss);
  const SdpProblem back = read_sdpa(ss);
  ASSERT_EQ(back.blocks.size(), 1u);
  EXPECT_LE((back.blocks[0].c - p.blocks[0].c).cwiseAbs().maxCoeff(), 1e-15);
  const SdpSolution direct = solve(p), reread = solve(back);
  ASSERT_EQ(reread.status, SdpStatus::optimal);
  EXPECT_NEAR(direct.objective_value, reread.objective_value, 1e-9);
  const auto lib = alpha_hermitian(n);
  EXPECT_NEAR(lib.value, reread.objective_value, 1e-7);
}
