#pragma once

// Independent brute-force estimators used to cross-check the SDP results:
// trace-distance contraction/expansion of qubit channels by Bloch-sphere
// search, divergences of commuting pairs, and explicit witnesses.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "qdoeblin/channel.hpp"
#include "qdoeblin/error.hpp"
#include "qdoeblin/hermlin.hpp"

namespace qdoeblin {

using Bloch = Eigen::Vector3d;

/// Qubit state (1 + r.sigma)/2.
inline ComplexMatrix bloch_state(const Bloch& r) {
  const auto s = pauli_matrices();
  return 0.5 * (s[0] + r(0) * s[1] + r(1) * s[2] + r(2) * s[3]);
}

/// Fibonacci lattice of n unit vectors.
inline std::vector<Bloch> fibonacci_sphere(int n) {
  std::vector<Bloch> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

namespace detail {

inline void require_qubit(const QuantumChannel& n, const char* what) {
  if (n.d_in() != 2 || n.d_out() != 2)
    throw InvalidInput(std::string(what) + ": qubit-to-qubit channel required");
}

inline Bloch clamp_ball(Bloch r) {
  const double norm = r.norm();
  return norm > 1.0 ? Bloch(r / norm) : r;
}

/// Coordinate pattern search maximizing f over the unit ball from `start`.
template <class F>
Bloch pattern_search(F&& f, Bloch x, double step, int rounds, bool sphere) {
  double best = f(x);
  for (int r = 0; r < rounds; ++r) {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis)
      for (double sign : {1.0, -1.0}) {
        Bloch y = x;
        y(axis) += sign * step;
        y = sphere ? Bloch(y.normalized()) : clamp_ball(y);
        const double v = f(y);
        if (v > best) {
          best = v;
          x = y;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  return x;
}

constexpr int kSphereGrid = 10000;
constexpr int kRefineRounds = 60;

}  // namespace detail

/// Max over antipodal pure pairs of (1/2)||N(psi_n) - N(psi_-n)||_1; a lower
/// bound on eta_Tr that is tight up to grid resolution.
inline double eta_tr_qubit(const QuantumChannel& n) {
  detail::require_qubit(n, "eta_tr_qubit");
  auto objective = [&](const Bloch& r) {
    return 0.5 * trace_norm(qdoeblin::apply(n, bloch_state(r)) - qdoeblin::apply(n, bloch_state(-r)));
  };
  double best = -1.0;
  Bloch arg = Bloch::UnitZ();
  for (const Bloch& r : fibonacci_sphere(detail::kSphereGrid)) {
    const double v = objective(r);
    if (v > best) {
      best = v;
      arg = r;
    }
  }
  arg = detail::pattern_search(objective, arg, 0.02, detail::kRefineRounds, true);
  return std::max(best, objective(arg));
}

/// Upper bound on the expansion coefficient: minimum trace-distance ratio
/// over seeded antipodal, non-antipodal pure and mixed pairs, refined locally
/// along the best difference direction.
inline double eta_tr_expansion_qubit(const QuantumChannel& n, std::uint64_t seed = 1) {
  detail::require_qubit(n, "eta_tr_expansion_qubit");
  auto ratio = [&](const Bloch& r, const Bloch& s) {
    const double in = 0.5 * (r - s).norm();  // trace distance of qubit states
    if (in < 1e-9) return std::numeric_limits<double>::infinity();
    return 0.5 * trace_norm(qdoeblin::apply(n, bloch_state(r)) - qdoeblin::apply(n, bloch_state(s))) / in;
  };
  const auto sphere = fibonacci_sphere(detail::kSphereGrid / 2);
  double best = std::numeric_limits<double>::infinity();
  Bloch dir = Bloch::UnitZ();
  for (const Bloch& r : sphere) {
    const double v = ratio(r, -r);
    if (v < best) {
      best = v;
      dir = r;
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  auto random_ball = [&](bool pure) {
    Bloch v(normal(rng), normal(rng), normal(rng));
    v.normalize();
    return pure ? v : Bloch(v * std::cbrt(unit(rng)));
  };
  for (int i = 0; i < detail::kSphereGrid / 2; ++i) {
    const bool pure = i % 2 == 0;
    const Bloch r = random_ball(pure);
    const Bloch s = random_ball(pure);
    const double v = ratio(r, s);
    if (v < best) {
      best = v;
      dir = (r - s).normalized();
    }
  }
  auto neg = [&](const Bloch& r) { return -ratio(r, -r); };
  dir = detail::pattern_search(neg, dir, 0.02, detail::kRefineRounds, true);
  return std::min(best, ratio(dir, -dir));
}

/// E_gamma(rho||sigma) = Tr(rho - gamma sigma)_+.
inline double hockey_stick(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                           double gamma) {
  if (!(gamma >= 1.0))
    throw InvalidParameter("hockey_stick: gamma must be >= 1");
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw InvalidInput("hockey_stick: dimension mismatch");
  const HermitianEigen e = eig_hermitian(hermitize(rho - gamma * sigma));
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) s += std::max(0.0, e.values(i));
  return s;
}

enum class FDivergence { chi_square, relative_entropy };

/// sum_i sigma_i f(rho_i / sigma_i) for diagonal rho, sigma; relative
/// entropy in nats. Returns +inf when rho is not supported on sigma.
inline double f_divergence_commuting(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                                     FDivergence f) {
  if (rho.rows() != sigma.rows())
    throw InvalidInput("f_divergence_commuting: dimension mismatch");
  auto off_diagonal = [](const ComplexMatrix& m) {
    ComplexMatrix o = m;
    o.diagonal().setZero();
    return o.cwiseAbs().maxCoeff();
  };
  if (off_diagonal(rho) > 1e-12 || off_diagonal(sigma) > 1e-12)
    throw InvalidInput("f_divergence_commuting: inputs must be diagonal");
  double total = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    const double r = rho(i, i).real();
    const double s = sigma(i, i).real();
    if (s <= 0.0) {
      if (r <= 0.0) continue;  // f(0/0) = 0
      return std::numeric_limits<double>::infinity();
    }
    const double t = r / s;
    switch (f) {
      case FDivergence::chi_square: total += s * (t * t - 1.0); break;
      case FDivergence::relative_entropy:
        if (r > 0.0) total += r * std::log(t);
        break;
    }
  }
  return total;
}

/// rho = |0><0|, sigma = (1-eps)|0><0| + eps|1><1|.
inline std::array<ComplexMatrix, 2> divergence_pair(double eps) {
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2), sigma = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  sigma(0, 0) = 1.0 - eps;
  sigma(1, 1) = eps;
  return {rho, sigma};
}

struct HockeyStickWitness {
  double epsilon = 0.0;
  double lower = 0.0;  ///< open interval of eps with E_out = 0 < E_in
  double upper = 0.0;
  double e_in = 0.0;
  double e_out = 0.0;
};

/// A pair (rho, sigma_eps) with E_gamma(rho||sigma) > 0 but
/// E_gamma(D_p rho || D_p sigma) = 0, so the hockey-stick expansion
/// coefficient of the qubit depolarizing channel vanishes.
inline HockeyStickWitness expansion_witness_hockey_stick(double p, double gamma) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidParameter("expansion_witness_hockey_stick: p must lie in (0, 1)");
  if (!(gamma > 1.0))
    throw InvalidParameter("expansion_witness_hockey_stick: gamma must be > 1");
  HockeyStickWitness w;
  // E_in > 0 iff 1 - gamma(1-eps) > 0; E_out = 0 iff
  // 1 - p/2 <= gamma[(1-p)(1-eps) + p/2].
  w.lower = (gamma - 1.0) / gamma;
  w.upper = std::min(1.0, w.lower * (1.0 - p / 2.0) / (1.0 - p));
  if (!(w.upper > w.lower))
    throw Error("expansion_witness_hockey_stick: empty witness interval");
  w.epsilon = 0.5 * (w.lower + w.upper);
  const auto [rho, sigma] = divergence_pair(w.epsilon);
  const QuantumChannel dep = depolarizing(p, 2);
  w.e_in = hockey_stick(rho, sigma, gamma);
  w.e_out = hockey_stick(qdoeblin::apply(dep, rho), qdoeblin::apply(dep, sigma), gamma);
  return w;
}

/// Max-entry deviation between D^Z_b o A_{p,eta} and D_{1-eta, diag(p, 1-p)}
/// with b = (1 - sqrt(eta))/2.
inline double gad_dephasing_identity(double p, double eta) {
  const double b = (1.0 - std::sqrt(eta)) / 2.0;
  ComplexMatrix sigma = ComplexMatrix::Zero(2, 2);
  sigma(0, 0) = p;
  sigma(1, 1) = 1.0 - p;
  const QuantumChannel lhs = compose(dephasing(b), gad(p, eta));
  const QuantumChannel rhs = generalized_depolarizing(1.0 - eta, sigma);
  return max_entry_distance(lhs.choi().matrix(), rhs.choi().matrix());
}

/// Largest c with c sigma (x) 1/2 <= J(N), via a generalized eigenvalue
/// computed with Eigen's solver (independent of the Jacobi kernel).
inline double minorization_constant(const ComplexMatrix& j, const ComplexMatrix& sigma) {
  const ComplexMatrix s = kron(sigma, ComplexMatrix::Identity(2, 2) / 2.0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ej(j);
  const double top = ej.eigenvalues().maxCoeff();
  const double cut = 1e-11 * std::max(1.0, top);
  // Restrict to range(J); any component of S outside it forces c = 0.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ej.eigenvalues().size(); ++i)
    if (ej.eigenvalues()(i) > cut) keep.push_back(i);
  if (keep.empty()) return 0.0;
  ComplexMatrix w(j.rows(), static_cast<Eigen::Index>(keep.size()));
  Eigen::VectorXd inv_sqrt(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    w.col(static_cast<Eigen::Index>(k)) = ej.eigenvectors().col(keep[k]);
    inv_sqrt(static_cast<Eigen::Index>(k)) = 1.0 / std::sqrt(ej.eigenvalues()(keep[k]));
  }
  const ComplexMatrix outside = s - w * (w.adjoint() * s * w) * w.adjoint();
  if (outside.cwiseAbs().maxCoeff() > 1e-10) return 0.0;
  const ComplexMatrix m =
      inv_sqrt.asDiagonal() * (w.adjoint() * s * w) * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> em(0.5 * (m + m.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  const double lmax = em.eigenvalues().maxCoeff();
  return lmax > 0.0 ? 1.0 / lmax : 0.0;
}

/// Doeblin coefficient of a qubit-output channel (d_in = 2) by brute force:
/// max over a Bloch-ball grid of the minorization constant, refined locally.
inline double alpha_bloch_grid(const QuantumChannel& n) {
  if (n.d_in() != 2 || n.d_out() != 2)
    throw InvalidInput("alpha_bloch_grid: qubit-to-qubit channel required");
  const ComplexMatrix& j = n.choi().matrix();
  auto objective = [&](const Bloch& r) { return minorization_constant(j, bloch_state(r)); };
  constexpr int kShells = 20;
  const auto dirs = fibonacci_sphere(detail::kSphereGrid / kShells);
  double best = objective(Bloch::Zero());
  Bloch arg = Bloch::Zero();
  for (int shell = 1; shell <= kShells; ++shell) {
    const double radius = double(shell) / kShells;
    for (const Bloch& d : dirs) {
      const double v = objective(radius * d);
      if (v > best) {
        best = v;
        arg = radius * d;
      }
    }
  }
  arg = detail::pattern_search(objective, arg, 0.05, detail::kRefineRounds, false);
  return std::max(best, objective(arg));
}

}  // namespace qdoeblin
