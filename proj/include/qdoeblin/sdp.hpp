#pragma once

// Dense primal-dual interior-point solver for small semidefinite programs in
// linear-matrix-inequality form:
//
//   maximize   b.y + const
//   subject to C_k - sum_i y_i A_{k,i}  >= 0   for every block k,
//              lower_i <= y_i <= upper_i       (optional box)
//
// with the associated primal
//
//   minimize   sum_k <C_k, X_k> + const
//   subject to sum_k <A_{k,i}, X_k> = b_i,  X_k >= 0.
//
// The iteration is an infeasible-start path-following method with the HKM
// search direction and Mehrotra predictor-corrector steps. Linear programs
// are the special case of 1x1 blocks.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdoeblin/error.hpp"

namespace qdoeblin {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct SdpBlock {
  RealMatrix c;
  std::vector<RealMatrix> a;  ///< one symmetric matrix per variable
};

struct SdpProblem {
  RealVector objective;  ///< b, maximized
  std::vector<SdpBlock> blocks;
  RealVector lower;  ///< empty, or one bound per variable (-inf for none)
  RealVector upper;  ///< empty, or one bound per variable (+inf for none)
  double objective_constant = 0.0;

  explicit SdpProblem(Eigen::Index num_vars = 0)
      : objective(RealVector::Zero(num_vars)) {}

  Eigen::Index num_vars() const { return objective.size(); }

  /// Appends an empty block of dimension `dim` and returns it.
  SdpBlock& add_block(Eigen::Index dim) {
    SdpBlock blk;
    blk.c = RealMatrix::Zero(dim, dim);
    blk.a.assign(static_cast<std::size_t>(num_vars()), RealMatrix::Zero(dim, dim));
    blocks.push_back(std::move(blk));
    return blocks.back();
  }

  void set_bounds(Eigen::Index var, double lo, double hi) {
    if (lower.size() == 0) {
      lower = RealVector::Constant(num_vars(), -HUGE_VAL);
      upper = RealVector::Constant(num_vars(), HUGE_VAL);
    }
    lower(var) = lo;
    upper(var) = hi;
  }

  /// Throws InvalidInput on inconsistent shapes or asymmetric data.
  void validate() const {
    const Eigen::Index n = num_vars();
    for (const auto& blk : blocks) {
      const Eigen::Index m = blk.c.rows();
      if (blk.c.cols() != m || static_cast<Eigen::Index>(blk.a.size()) != n)
        throw InvalidInput("SdpProblem: block has wrong number of matrices");
      const double scale = std::max(1.0, blk.c.cwiseAbs().maxCoeff());
      if ((blk.c - blk.c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidInput("SdpProblem: C block is not symmetric");
      for (const auto& a : blk.a) {
        if (a.rows() != m || a.cols() != m)
          throw InvalidInput("SdpProblem: matrices within a block differ in size");
        const double s = std::max(1.0, a.cwiseAbs().maxCoeff());
        if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * s)
          throw InvalidInput("SdpProblem: A block is not symmetric");
      }
    }
    if (lower.size() != 0 && (lower.size() != n || upper.size() != n))
      throw InvalidInput("SdpProblem: box bounds have wrong length");
  }
};

enum class SdpStatus { optimal, max_iter, numerical_failure };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  RealVector y;
  double objective_value = 0.0;  ///< b.y + const (dual objective)
  double primal_objective = 0.0;
  double gap = HUGE_VAL;
  double primal_residual = HUGE_VAL;
  double dual_residual = HUGE_VAL;
  double min_slack_eigenvalue = -HUGE_VAL;  ///< over C_k - sum y_i A_{k,i}
  int iterations = 0;
  /// X_k for every block of expand_box(problem), in that order.
  std::vector<RealMatrix> primal;
};

struct SdpSettings {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 100;
  double step_fraction = 0.98;
  double max_condition = 1e14;
  /// After convergence, up to `polish_iter` further steps aim for this gap;
  /// a failing polish step falls back to the last converged iterate.
  double polish_gap = 1e-11;
  int polish_iter = 4;
};

/// Rewrites box bounds as 1x1 blocks: y_i - lower_i >= 0 and upper_i - y_i >= 0.
inline SdpProblem expand_box(const SdpProblem& p) {
  SdpProblem out = p;
  out.lower.resize(0);
  out.upper.resize(0);
  if (p.lower.size() == 0) return out;
  for (Eigen::Index i = 0; i < p.num_vars(); ++i) {
    if (std::isfinite(p.lower(i))) {
      SdpBlock& blk = out.add_block(1);
      blk.c(0, 0) = -p.lower(i);
      blk.a[static_cast<std::size_t>(i)](0, 0) = -1.0;
    }
    if (std::isfinite(p.upper(i))) {
      SdpBlock& blk = out.add_block(1);
      blk.c(0, 0) = p.upper(i);
      blk.a[static_cast<std::size_t>(i)](0, 0) = 1.0;
    }
  }
  return out;
}

/// Smallest eigenvalue of C_k - sum_i y_i A_{k,i} over all blocks (and box).
inline double min_slack_eigenvalue(const SdpProblem& p, const RealVector& y) {
  const SdpProblem q = expand_box(p);
  double lo = HUGE_VAL;
  for (const auto& blk : q.blocks) {
    RealMatrix s = blk.c;
    for (std::size_t i = 0; i < blk.a.size(); ++i)
      s -= y(static_cast<Eigen::Index>(i)) * blk.a[i];
    if (s.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(s, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

namespace detail {

inline double frob_dot(const RealMatrix& a, const RealMatrix& b) {
  return a.cwiseProduct(b).sum();
}

/// Largest alpha with X + alpha dX still PSD (+inf when unbounded).
inline double max_psd_step(const Eigen::LLT<RealMatrix>& chol_x, const RealMatrix& dx) {
  const RealMatrix l_inv_dx = chol_x.matrixL().solve(dx);
  RealMatrix m = chol_x.matrixL().solve(l_inv_dx.transpose());
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  return lo >= 0.0 ? HUGE_VAL : -1.0 / lo;
}

struct SparseTag {
  std::vector<std::vector<bool>> nonzero;  // [block][var]
};

}  // namespace detail

inline SdpSolution solve(const SdpProblem& problem, const SdpSettings& settings = {}) {
  problem.validate();
  const SdpProblem p = expand_box(problem);
  const Eigen::Index n = p.num_vars();
  const std::size_t nb = p.blocks.size();
  const RealVector& b = p.objective;

  SdpSolution sol;
  sol.y = RealVector::Zero(n);

  detail::SparseTag tag;
  tag.nonzero.resize(nb);
  Eigen::Index total_dim = 0;
  double c_norm = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    const auto& blk = p.blocks[k];
    total_dim += blk.c.rows();
    c_norm += blk.c.squaredNorm();
    tag.nonzero[k].resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
      tag.nonzero[k][static_cast<std::size_t>(i)] =
          blk.a[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff() > 0.0;
  }
  c_norm = std::sqrt(c_norm);
  const double b_norm = b.norm();

  if (n == 0 || total_dim == 0) {
    sol.status = SdpStatus::optimal;
    sol.objective_value = p.objective_constant;
    sol.primal_objective = p.objective_constant;
    sol.gap = sol.primal_residual = sol.dual_residual = 0.0;
    sol.min_slack_eigenvalue = nb == 0 ? HUGE_VAL : min_slack_eigenvalue(p, sol.y);
    for (const auto& blk : p.blocks)
      sol.primal.push_back(RealMatrix::Zero(blk.c.rows(), blk.c.rows()));
    return sol;
  }

  // Infeasible starting point X = xi I, S = eta I, y = 0.
  std::vector<RealMatrix> x(nb), s(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const auto& blk = p.blocks[k];
    const double m = double(blk.c.rows());
    double xi = std::max(10.0, std::sqrt(m));
    double eta = std::max({10.0, std::sqrt(m), blk.c.norm()});
    for (Eigen::Index i = 0; i < n; ++i) {
      const double an = blk.a[static_cast<std::size_t>(i)].norm();
      if (an == 0.0) continue;
      xi = std::max(xi, m * (1.0 + std::abs(b(i))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    x[k] = xi * RealMatrix::Identity(blk.c.rows(), blk.c.rows());
    s[k] = eta * RealMatrix::Identity(blk.c.rows(), blk.c.rows());
  }
  RealVector y = RealVector::Zero(n);

  auto a_adjoint = [&](std::size_t k, const RealVector& v) {
    RealMatrix out = RealMatrix::Zero(p.blocks[k].c.rows(), p.blocks[k].c.rows());
    for (Eigen::Index i = 0; i < n; ++i)
      if (tag.nonzero[k][static_cast<std::size_t>(i)])
        out += v(i) * p.blocks[k].a[static_cast<std::size_t>(i)];
    return out;
  };
  auto a_apply = [&](const std::vector<RealMatrix>& mats) {
    RealVector out = RealVector::Zero(n);
    for (std::size_t k = 0; k < nb; ++k)
      for (Eigen::Index i = 0; i < n; ++i)
        if (tag.nonzero[k][static_cast<std::size_t>(i)])
          out(i) += detail::frob_dot(p.blocks[k].a[static_cast<std::size_t>(i)], mats[k]);
    return out;
  };

  int stalled = 0, polished = 0;
  std::optional<SdpSolution> accepted;
  for (int iter = 0;; ++iter) {
    sol.iterations = iter;
    std::vector<RealMatrix> rd(nb);
    double rd_norm2 = 0.0, xs = 0.0, pobj = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      rd[k] = p.blocks[k].c - a_adjoint(k, y) - s[k];
      rd_norm2 += rd[k].squaredNorm();
      xs += detail::frob_dot(x[k], s[k]);
      pobj += detail::frob_dot(p.blocks[k].c, x[k]);
    }
    const RealVector rp = b - a_apply(x);
    const double dobj = b.dot(y);
    const double mu = xs / double(total_dim);
    sol.primal_residual = rp.norm() / (1.0 + b_norm);
    sol.dual_residual = std::sqrt(rd_norm2) / (1.0 + c_norm);
    sol.gap = std::max(std::abs(pobj - dobj), xs) / (1.0 + std::abs(dobj));
    sol.y = y;
    sol.objective_value = dobj + p.objective_constant;
    sol.primal_objective = pobj + p.objective_constant;
    sol.primal = x;

    if (sol.gap <= settings.gap_tol && sol.primal_residual <= settings.feas_tol &&
        sol.dual_residual <= settings.feas_tol) {
      sol.status = SdpStatus::optimal;
      accepted = sol;
      if (sol.gap <= settings.polish_gap || polished++ >= settings.polish_iter) break;
    }
    if (iter >= settings.max_iter) {
      sol.status = SdpStatus::max_iter;
      break;
    }

    // S^{-1} and the Cholesky factors used for step lengths.
    std::vector<RealMatrix> s_inv(nb);
    std::vector<Eigen::LLT<RealMatrix>> chol_x(nb), chol_s(nb);
    bool ok = true;
    for (std::size_t k = 0; k < nb && ok; ++k) {
      chol_s[k].compute(s[k]);
      chol_x[k].compute(x[k]);
      if (chol_s[k].info() != Eigen::Success || chol_x[k].info() != Eigen::Success) {
        ok = false;
        break;
      }
      s_inv[k] = chol_s[k].solve(RealMatrix::Identity(s[k].rows(), s[k].rows()));
      s_inv[k] = 0.5 * (s_inv[k] + s_inv[k].transpose());
    }
    if (!ok) {
      sol.status = SdpStatus::numerical_failure;
      break;
    }

    // Schur complement M_ij = sum_k Tr(A_ki X_k A_kj S_k^{-1}).
    RealMatrix schur = RealMatrix::Zero(n, n);
    std::vector<std::vector<RealMatrix>> g(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      g[k].resize(static_cast<std::size_t>(n));
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!tag.nonzero[k][static_cast<std::size_t>(j)]) continue;
        g[k][static_cast<std::size_t>(j)] =
            x[k] * p.blocks[k].a[static_cast<std::size_t>(j)] * s_inv[k];
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!tag.nonzero[k][static_cast<std::size_t>(i)]) continue;
        const RealMatrix& ai = p.blocks[k].a[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j <= i; ++j) {
          if (!tag.nonzero[k][static_cast<std::size_t>(j)]) continue;
          const double v =
              ai.cwiseProduct(g[k][static_cast<std::size_t>(j)].transpose()).sum();
          schur(i, j) += v;
          if (i != j) schur(j, i) += v;
        }
      }
    }
    schur = 0.5 * (schur + schur.transpose());
    // Equilibrate with the diagonal; conditioning is judged on the scaled
    // system, which is what the factorization actually sees.
    const RealVector scale = schur.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    const RealMatrix scaled = scale.asDiagonal() * schur * scale.asDiagonal();
    Eigen::LLT<RealMatrix> chol_m(scaled);
    if (chol_m.info() != Eigen::Success) {
      sol.status = SdpStatus::numerical_failure;
      break;
    }
    {
      const RealVector diag = chol_m.matrixLLT().diagonal().cwiseAbs();
      const double ratio = diag.maxCoeff() / diag.minCoeff();
      if (!(ratio * ratio <= settings.max_condition)) {
        sol.status = SdpStatus::numerical_failure;
        break;
      }
    }
    auto schur_solve = [&](const RealVector& r) -> RealVector {
      return scale.asDiagonal() * chol_m.solve(scale.asDiagonal() * r);
    };

    // rhs base: b_i + <A_i, X Rd S^{-1}>.
    std::vector<RealMatrix> x_rd_sinv(nb);
    for (std::size_t k = 0; k < nb; ++k) x_rd_sinv[k] = x[k] * rd[k] * s_inv[k];
    const RealVector rhs_base = b + a_apply(x_rd_sinv);

    struct Direction {
      RealVector dy;
      std::vector<RealMatrix> dx, ds;
      double alpha_p = 0.0, alpha_d = 0.0;
    };
    auto make_direction = [&](const RealVector& rhs,
                              const std::vector<RealMatrix>& target) {
      // target_k is the X-update without the -X ds S^{-1} term.
      Direction d;
      d.dy = schur_solve(rhs);
      d.dx.resize(nb);
      d.ds.resize(nb);
      d.alpha_p = d.alpha_d = 1.0;
      for (std::size_t k = 0; k < nb; ++k) {
        d.ds[k] = rd[k] - a_adjoint(k, d.dy);
        RealMatrix dx = target[k] - x[k] * d.ds[k] * s_inv[k];
        d.dx[k] = 0.5 * (dx + dx.transpose());
        d.alpha_p = std::min(d.alpha_p, detail::max_psd_step(chol_x[k], d.dx[k]));
        d.alpha_d = std::min(d.alpha_d, detail::max_psd_step(chol_s[k], d.ds[k]));
      }
      return d;
    };

    // Predictor (sigma = 0).
    std::vector<RealMatrix> target(nb);
    for (std::size_t k = 0; k < nb; ++k) target[k] = -x[k];
    const Direction pred = make_direction(rhs_base, target);
    double mu_aff = 0.0;
    {
      const double ap = std::min(1.0, pred.alpha_p);
      const double ad = std::min(1.0, pred.alpha_d);
      for (std::size_t k = 0; k < nb; ++k)
        mu_aff += detail::frob_dot(x[k] + ap * pred.dx[k], s[k] + ad * pred.ds[k]);
      mu_aff /= double(total_dim);
    }
    double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff) / mu, 3.0) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector with centering and the second-order term.
    RealVector rhs = rhs_base;
    std::vector<RealMatrix> second(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      second[k] = pred.dx[k] * pred.ds[k] * s_inv[k];
      target[k] = sigma * mu * s_inv[k] - x[k] - second[k];
    }
    {
      std::vector<RealMatrix> corr(nb);
      for (std::size_t k = 0; k < nb; ++k) corr[k] = sigma * mu * s_inv[k] - second[k];
      rhs -= a_apply(corr);
    }
    const Direction dir = make_direction(rhs, target);

    const double ap = std::min(1.0, settings.step_fraction * dir.alpha_p);
    const double ad = std::min(1.0, settings.step_fraction * dir.alpha_d);
    if (ap < 1e-12 && ad < 1e-12) {
      if (++stalled >= 3) {
        sol.status = SdpStatus::numerical_failure;
        break;
      }
    } else {
      stalled = 0;
    }
    for (std::size_t k = 0; k < nb; ++k) {
      x[k] += ap * dir.dx[k];
      s[k] += ad * dir.ds[k];
      x[k] = 0.5 * (x[k] + x[k].transpose());
      s[k] = 0.5 * (s[k] + s[k].transpose());
    }
    y += ad * dir.dy;
  }

  if (accepted && sol.status != SdpStatus::optimal) sol = std::move(*accepted);
  sol.min_slack_eigenvalue = min_slack_eigenvalue(p, sol.y);
  return sol;
}

// --- equality elimination ----------------------------------------------------

/// Affine parametrization y = offset + basis * z of the solution set of E y = f.
struct AffineMap {
  RealVector offset;
  RealMatrix basis;
};

/// Solves E y = f through an SVD. Throws InvalidInput when inconsistent.
inline AffineMap solve_equalities(const RealMatrix& e, const RealVector& f,
                                  double rank_tol = 1e-10) {
  if (e.rows() != f.size()) throw InvalidInput("solve_equalities: shape mismatch");
  const Eigen::Index n = e.cols();
  if (e.rows() == 0) return {RealVector::Zero(n), RealMatrix::Identity(n, n)};
  Eigen::JacobiSVD<RealMatrix> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double cut = rank_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  const RealMatrix& u = svd.matrixU();
  const RealMatrix& v = svd.matrixV();
  RealVector offset = RealVector::Zero(n);
  for (Eigen::Index r = 0; r < rank; ++r)
    offset += v.col(r) * (u.col(r).dot(f) / sv(r));
  if ((e * offset - f).norm() > 1e-9 * (1.0 + f.norm()))
    throw InvalidInput("solve_equalities: equality constraints are inconsistent");
  return {offset, v.rightCols(n - rank)};
}

/// The problem in the reduced variables z of y = offset + basis z.
inline SdpProblem restrict_problem(const SdpProblem& p, const AffineMap& map) {
  const SdpProblem q = expand_box(p);
  const Eigen::Index nz = map.basis.cols();
  SdpProblem out(nz);
  out.objective = map.basis.transpose() * q.objective;
  out.objective_constant = q.objective_constant + q.objective.dot(map.offset);
  for (const auto& blk : q.blocks) {
    SdpBlock nb;
    nb.c = blk.c;
    for (std::size_t i = 0; i < blk.a.size(); ++i)
      nb.c -= map.offset(static_cast<Eigen::Index>(i)) * blk.a[i];
    nb.c = 0.5 * (nb.c + nb.c.transpose());
    nb.a.assign(static_cast<std::size_t>(nz), RealMatrix::Zero(blk.c.rows(), blk.c.rows()));
    for (Eigen::Index j = 0; j < nz; ++j)
      for (std::size_t i = 0; i < blk.a.size(); ++i) {
        const double w = map.basis(static_cast<Eigen::Index>(i), j);
        if (w != 0.0) nb.a[static_cast<std::size_t>(j)] += w * blk.a[i];
      }
    out.blocks.push_back(std::move(nb));
  }
  return out;
}

// --- SDPA export ------------------------------------------------------------

/// Writes the problem in SDPA sparse format. SDPA minimizes c.x subject to
/// sum_i F_i x_i - F_0 >= 0, so c = -b, F_0 = -C and F_i = -A_i. Box bounds
/// appear as extra 1x1 blocks; the objective constant is not representable
/// and is emitted as a comment.
inline void write_sdpa(const SdpProblem& problem, std::ostream& os) {
  const SdpProblem p = expand_box(problem);
  os << std::setprecision(17);
  os << "* qdoeblin problem; objective constant " << p.objective_constant << "\n";
  os << p.num_vars() << "\n" << p.blocks.size() << "\n";
  for (std::size_t k = 0; k < p.blocks.size(); ++k)
    os << p.blocks[k].c.rows() << (k + 1 < p.blocks.size() ? " " : "\n");
  if (p.blocks.empty()) os << "\n";
  for (Eigen::Index i = 0; i < p.num_vars(); ++i)
    os << -p.objective(i) << (i + 1 < p.num_vars() ? " " : "\n");
  auto emit = [&](std::size_t matno, std::size_t blk, const RealMatrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = r; c < m.cols(); ++c)
        if (m(r, c) != 0.0)
          os << matno << " " << blk + 1 << " " << r + 1 << " " << c + 1 << " "
             << -m(r, c) << "\n";
  };
  for (std::size_t k = 0; k < p.blocks.size(); ++k) emit(0, k, p.blocks[k].c);
  for (Eigen::Index i = 0; i < p.num_vars(); ++i)
    for (std::size_t k = 0; k < p.blocks.size(); ++k)
      emit(static_cast<std::size_t>(i) + 1, k, p.blocks[k].a[static_cast<std::size_t>(i)]);
}

}  // namespace qdoeblin
