#pragma once

// Classical channels P(y|x): Doeblin coefficient, BISO capacity and the
// reverse Doeblin coefficient against binary symmetric channels.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "qdoeblin/error.hpp"
#include "qdoeblin/hermlin.hpp"
#include "qdoeblin/sdp.hpp"

namespace qdoeblin {

class ClassicalChannel {
 public:
  /// Column-stochastic: rows are outputs y, columns inputs x.
  explicit ClassicalChannel(RealMatrix p) : p_(std::move(p)) {
    if (p_.rows() == 0 || p_.cols() == 0)
      throw InvalidInput("ClassicalChannel: empty matrix");
    for (Eigen::Index x = 0; x < p_.cols(); ++x) {
      if ((p_.col(x).array() < 0.0).any())
        throw InvalidInput("ClassicalChannel: negative transition probability");
      if (std::abs(p_.col(x).sum() - 1.0) > 1e-12)
        throw InvalidInput("ClassicalChannel: columns must sum to 1");
    }
    if (p_.cols() == 2) involution_ = find_involution();
  }

  const RealMatrix& matrix() const { return p_; }
  Eigen::Index inputs() const { return p_.cols(); }
  Eigen::Index outputs() const { return p_.rows(); }
  bool is_biso() const { return involution_.has_value(); }
  /// Output permutation pi with P(y|0) = P(pi(y)|1), when BISO.
  const std::optional<std::vector<int>>& involution() const { return involution_; }

 private:
  std::optional<std::vector<int>> find_involution() const {
    const int m = static_cast<int>(p_.rows());
    std::vector<int> pi(static_cast<std::size_t>(m), -1);
    if (match(pi, 0)) return pi;
    return std::nullopt;
  }

  bool close(double a, double b) const { return std::abs(a - b) <= 1e-12; }

  bool match(std::vector<int>& pi, int y) const {
    const int m = static_cast<int>(p_.rows());
    while (y < m && pi[static_cast<std::size_t>(y)] >= 0) ++y;
    if (y == m) return true;
    for (int z = y; z < m; ++z) {
      if (pi[static_cast<std::size_t>(z)] >= 0) continue;
      if (!close(p_(y, 0), p_(z, 1)) || !close(p_(z, 0), p_(y, 1))) continue;
      pi[static_cast<std::size_t>(y)] = z;
      pi[static_cast<std::size_t>(z)] = y;
      if (match(pi, y + 1)) return true;
      pi[static_cast<std::size_t>(y)] = -1;
      pi[static_cast<std::size_t>(z)] = -1;
    }
    return false;
  }

  RealMatrix p_;
  std::optional<std::vector<int>> involution_;
};

inline ClassicalChannel bsc(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("bsc: p must lie in [0, 1]");
  RealMatrix m(2, 2);
  m << 1.0 - p, p, p, 1.0 - p;
  return ClassicalChannel(m);
}

/// Binary erasure channel; the erasure symbol is the last output.
inline ClassicalChannel bec(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidParameter("bec: eps must lie in [0, 1]");
  RealMatrix m(3, 2);
  m << 1.0 - eps, 0.0, 0.0, 1.0 - eps, eps, eps;
  return ClassicalChannel(m);
}

/// Random BISO channel with `outputs` symbols: symmetric pairs plus at most
/// one self-symmetric output.
inline ClassicalChannel random_biso(int outputs, std::mt19937_64& rng) {
  if (outputs < 2) throw InvalidParameter("random_biso: need at least 2 outputs");
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  RealMatrix m = RealMatrix::Zero(outputs, 2);
  for (int y = 0; y + 1 < outputs; y += 2) {
    const double a = unit(rng), b = unit(rng);
    m(y, 0) = a;
    m(y + 1, 0) = b;
    m(y, 1) = b;
    m(y + 1, 1) = a;
  }
  if (outputs % 2 == 1) m(outputs - 1, 0) = m(outputs - 1, 1) = unit(rng);
  const double total = m.col(0).sum();
  m /= total;
  // Renormalize exactly so the column sums pass the 1e-12 check.
  for (int x = 0; x < 2; ++x) m(0, x) = 1.0 - (m.col(x).sum() - m(0, x));
  return ClassicalChannel(m);
}

/// Random column-stochastic matrix with entries from normalized uniforms.
inline RealMatrix random_stochastic(int outputs, int inputs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealMatrix m(outputs, inputs);
  for (int x = 0; x < inputs; ++x) {
    for (int y = 0; y < outputs; ++y) m(y, x) = unit(rng);
    m.col(x) /= m.col(x).sum();
    m(0, x) = 1.0 - (m.col(x).sum() - m(0, x));
  }
  return m;
}

/// alpha = sum_y min_x P(y|x).
inline double classical_doeblin(const ClassicalChannel& c) {
  return c.matrix().rowwise().minCoeff().sum();
}

/// h(p) in bits.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("binary_entropy: p must lie in [0, 1]");
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

namespace detail {
inline void require_biso(const ClassicalChannel& c, const char* what) {
  if (!c.is_biso())
    throw InvalidInput(std::string(what) + ": binary-input symmetric-output channel required");
}
}  // namespace detail

/// Capacity of a BISO channel in bits (uniform input is optimal).
inline double classical_capacity_biso(const ClassicalChannel& c) {
  detail::require_biso(c, "classical_capacity_biso");
  const RealMatrix& p = c.matrix();
  double info = 0.0;
  for (Eigen::Index y = 0; y < p.rows(); ++y) {
    const double py = 0.5 * (p(y, 0) + p(y, 1));
    for (Eigen::Index x = 0; x < 2; ++x)
      if (p(y, x) > 0.0) info += 0.5 * p(y, x) * std::log2(p(y, x) / py);
  }
  return info;
}

/// gamma = 1 - C.
inline double classical_gamma(const ClassicalChannel& c) {
  return 1.0 - classical_capacity_biso(c);
}

/// Smallest l_inf residual of D P = B_p over stochastic D (2 outputs), as an
/// LP on 1x1 blocks: max -t s.t. |sum_y u_y P(y|x) - B_p(0|x)| <= t, u in [0,1].
inline double bsc_degrading_residual(const ClassicalChannel& c, double p,
                                     const SdpSettings& settings = {}) {
  const RealMatrix& m = c.matrix();
  const Eigen::Index ny = m.rows();
  SdpProblem lp(ny + 1);
  const Eigen::Index t = ny;
  lp.objective(t) = -1.0;
  for (Eigen::Index y = 0; y < ny; ++y) lp.set_bounds(y, 0.0, 1.0);
  const double target[2] = {1.0 - p, p};
  for (Eigen::Index x = 0; x < 2; ++x)
    for (double sign : {1.0, -1.0}) {
      // t - sign (sum u P - target) >= 0
      SdpBlock& blk = lp.add_block(1);
      blk.a[static_cast<std::size_t>(t)](0, 0) = -1.0;
      blk.c(0, 0) = sign * target[x];
      for (Eigen::Index y = 0; y < ny; ++y) blk.a[static_cast<std::size_t>(y)](0, 0) = sign * m(y, x);
    }
  const SdpSolution sol = solve(lp, settings);
  // Degenerate optimal faces (e.g. p = 1/2) can trip the conditioning guard
  // right at the end; the residual estimate is still good enough to compare
  // against the feasibility threshold.
  const bool usable = sol.status == SdpStatus::optimal ||
                      (sol.gap <= 1e-6 && sol.primal_residual <= 1e-6 &&
                       sol.dual_residual <= 1e-6);
  if (!usable)
    throw SolverFailure(std::string("bsc_degrading_residual: solver status ") +
                        to_string(sol.status));
  return -sol.objective_value;
}

/// inf { h(p) : P degrades into BSC_p }, by bisection on p in [0, 1/2].
inline double classical_reverse_alpha(const ClassicalChannel& c,
                                      const SdpSettings& settings = {}) {
  detail::require_biso(c, "classical_reverse_alpha");
  constexpr double kFeasible = 1e-7;
  auto feasible = [&](double p) { return bsc_degrading_residual(c, p, settings) <= kFeasible; };
  if (feasible(0.0)) return 0.0;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return binary_entropy(hi);
}

}  // namespace qdoeblin
