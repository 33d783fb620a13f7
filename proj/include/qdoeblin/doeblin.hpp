#pragma once

// Doeblin-type coefficients of quantum channels as small SDPs, and the
// contraction / expansion / capacity bounds derived from them.
//
// Forward coefficients (alpha, alpha_T, alpha_H, p1) maximize the weight of
// a "useless" component that fits below J(N) in the PSD order. Reverse
// coefficients (rev_*) minimize the noise parameter of a depolarizing-type
// target that N can be degraded into; the degrading map is optimized as a
// Choi matrix through the link product.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qdoeblin/channel.hpp"
#include "qdoeblin/hermlin.hpp"
#include "qdoeblin/sdp.hpp"

namespace qdoeblin {

enum class CoefficientKind {
  alpha,
  alpha_T,
  alpha_H,
  alpha_TH,
  p1_ppt,
  rev_alpha,
  rev_alpha_T,
  rev_alpha_H,
};

inline const char* to_string(CoefficientKind k) {
  switch (k) {
    case CoefficientKind::alpha: return "alpha";
    case CoefficientKind::alpha_T: return "alphaT";
    case CoefficientKind::alpha_H: return "alphaH";
    case CoefficientKind::alpha_TH: return "alphaTH";
    case CoefficientKind::p1_ppt: return "p1";
    case CoefficientKind::rev_alpha: return "rev";
    case CoefficientKind::rev_alpha_T: return "revT";
    case CoefficientKind::rev_alpha_H: return "revH";
  }
  return "unknown";
}

inline std::optional<CoefficientKind> parse_kind(const std::string& s) {
  for (auto k : {CoefficientKind::alpha, CoefficientKind::alpha_T,
                 CoefficientKind::alpha_H, CoefficientKind::alpha_TH,
                 CoefficientKind::p1_ppt, CoefficientKind::rev_alpha,
                 CoefficientKind::rev_alpha_T, CoefficientKind::rev_alpha_H})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

struct SolverDiagnostics {
  int iterations = 0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct CoefficientResult {
  CoefficientKind kind = CoefficientKind::alpha;
  double value = 0.0;
  /// Normalized optimizer state (forward kinds, d_in = 1), relaxed optimizer
  /// (alpha_H) or degrading-map Choi matrix (reverse kinds).
  std::optional<HermitianChoiLike> witness;
  SdpStatus status = SdpStatus::optimal;
  /// alpha_T on a non-PPT channel: the value is -inf and must be skipped.
  bool not_applicable = false;
  SolverDiagnostics diagnostics;

  bool ok() const { return not_applicable || status == SdpStatus::optimal; }
};

namespace detail {

/// Adds the real embedding of the complex LMI C - sum_i y_i A_i >= 0.
/// `a` may be shorter than the variable count; missing entries are zero.
inline void add_complex_block(SdpProblem& p, const ComplexMatrix& c,
                              const std::vector<ComplexMatrix>& a) {
  SdpBlock& blk = p.add_block(2 * c.rows());
  blk.c = real_embed(c);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].size() != 0) blk.a[i] = real_embed(a[i]);
}

/// Rows of the real linear system  H0 + sum_i y_i H_i = 0  where H_i are
/// Hermitian of a common dimension, in orthonormal Hermitian coordinates.
struct EqualityBuilder {
  RealMatrix e;
  RealVector f;

  void add(const ComplexMatrix& constant, const std::vector<ComplexMatrix>& terms,
           Eigen::Index num_vars) {
    const auto basis = hermitian_basis(static_cast<int>(constant.rows()));
    const Eigen::Index rows = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index start = e.rows();
    e.conservativeResize(start + rows, num_vars);
    f.conservativeResize(start + rows);
    e.bottomRows(rows).setZero();
    f.tail(rows) = -hermitian_coordinates(constant, basis);
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (terms[i].size() != 0)
        e.block(start, static_cast<Eigen::Index>(i), rows, 1) =
            hermitian_coordinates(terms[i], basis);
  }
};

inline SolverDiagnostics diagnostics_of(const SdpSolution& s) {
  return {s.iterations, s.gap, s.primal_residual, s.dual_residual};
}

/// Basis of the output subspace V with V (x) C^{d_in} inside range(J).
inline ComplexMatrix minorant_support(const ComplexMatrix& j, int d_in, int d_out,
                                      double cut) {
  const HermitianEigen e = eig_hermitian(j);
  ComplexMatrix gram = ComplexMatrix::Zero(d_out, d_out);
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) > cut) continue;
    for (int c = 0; c < d_in; ++c) {
      ComplexVector u(d_out);
      for (int i = 0; i < d_out; ++i) u(i) = e.vectors(i * d_in + c, k);
      gram += u * u.adjoint();
    }
  }
  const HermitianEigen g = eig_hermitian(gram);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < g.values.size(); ++k)
    if (g.values(k) <= 1e-9) keep.push_back(k);
  ComplexMatrix v(d_out, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    v.col(static_cast<Eigen::Index>(k)) = g.vectors.col(keep[k]);
  return v;
}

constexpr double kRankCut = 1e-10;

/// max Tr(s) subject to s >= 0 (unless `hermitian`) and s (x) 1/d_in <= J.
///
/// For the positive variant s is supported on the largest output subspace V
/// with V (x) C^{d_in} inside range(J), and the LMI is restricted to range(J);
/// this keeps the feasible set full-dimensional for rank-deficient Chois.
inline CoefficientResult minorant_sdp(const ComplexMatrix& j, int d_in, int d_out,
                                      bool hermitian, CoefficientKind kind,
                                      const SdpSettings& settings) {
  CoefficientResult res;
  res.kind = kind;
  const ComplexMatrix id_in = ComplexMatrix::Identity(d_in, d_in) / double(d_in);

  ComplexMatrix support = ComplexMatrix::Identity(d_out, d_out);
  ComplexMatrix range = ComplexMatrix::Identity(j.rows(), j.rows());
  if (!hermitian) {
    range = range_basis(j, kRankCut);
    if (range.cols() < j.rows()) support = minorant_support(j, d_in, d_out, kRankCut);
  }
  const int v = static_cast<int>(support.cols());
  if (v == 0) {
    res.value = 0.0;
    return res;
  }

  const auto basis = hermitian_basis(v);
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  std::vector<ComplexMatrix> lifted(basis.size());
  SdpProblem p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lifted[static_cast<std::size_t>(i)] =
        support * basis[static_cast<std::size_t>(i)] * support.adjoint();
    p.objective(i) = basis[static_cast<std::size_t>(i)].trace().real();
  }
  if (!hermitian) {
    std::vector<ComplexMatrix> neg(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) neg[i] = -basis[i];
    add_complex_block(p, ComplexMatrix::Zero(v, v), neg);
  }
  std::vector<ComplexMatrix> a(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    a[i] = hermitize(range.adjoint() * kron(lifted[i], id_in) * range);
  add_complex_block(p, hermitize(range.adjoint() * j * range), a);

  const SdpSolution sol = solve(p, settings);
  res.status = sol.status;
  res.diagnostics = diagnostics_of(sol);
  res.value = sol.objective_value;
  ComplexMatrix opt = ComplexMatrix::Zero(d_out, d_out);
  for (Eigen::Index i = 0; i < n; ++i) opt += sol.y(i) * lifted[static_cast<std::size_t>(i)];
  opt = hermitize(opt);
  if (hermitian) {
    res.witness = HermitianChoiLike(opt, 1, d_out);
  } else if (opt.trace().real() >= 1e-7) {
    res.witness = HermitianChoiLike(opt / opt.trace().real(), 1, d_out);
  }
  return res;
}

inline void require_endomorphic(const QuantumChannel& n, const char* what) {
  if (n.d_in() != n.d_out())
    throw InvalidInput(std::string(what) +
                       ": reverse coefficients need d_in == d_out");
}

enum class ReverseTarget { depolarizing, transpose_depolarizing, generalized };

/// min p such that some channel D gives D o N = target(p), optimized over
/// the Choi matrix of D with the link product.
inline CoefficientResult reverse_sdp(const QuantumChannel& ch, ReverseTarget target,
                                     CoefficientKind kind, const SdpSettings& settings) {
  const int d = ch.d_in();
  const int m = d * d;  // D lives on C (x) B with d_C = d_B = d
  const auto d_basis = hermitian_basis(m);
  const auto x_basis = hermitian_basis(d);
  const Eigen::Index nd = static_cast<Eigen::Index>(d_basis.size());
  const Eigen::Index nx = target == ReverseTarget::generalized
                              ? static_cast<Eigen::Index>(x_basis.size())
                              : 1;
  const Eigen::Index n = nd + nx;

  const ComplexMatrix phi = maximally_entangled(d);
  const ComplexMatrix mixed = ComplexMatrix::Identity(m, m) / double(m);
  const ComplexMatrix anchor =
      target == ReverseTarget::transpose_depolarizing ? transpose_map_choi(d) : phi;

  EqualityBuilder eq;
  {
    // Tr_C D = 1/d_B.
    std::vector<ComplexMatrix> terms(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < nd; ++i)
      terms[static_cast<std::size_t>(i)] =
          partial_trace(d_basis[static_cast<std::size_t>(i)], d, d, Subsystem::second);
    eq.add(-ComplexMatrix::Identity(d, d) / double(d), terms, n);
  }
  {
    // J(N) * D = target.
    std::vector<ComplexMatrix> terms(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < nd; ++i)
      terms[static_cast<std::size_t>(i)] = link_product(
          d_basis[static_cast<std::size_t>(i)], d, d, ch.choi().matrix(), d);
    if (target == ReverseTarget::generalized) {
      for (Eigen::Index k = 0; k < nx; ++k) {
        const ComplexMatrix& xk = x_basis[static_cast<std::size_t>(k)];
        terms[static_cast<std::size_t>(nd + k)] =
            -(kron(xk, ComplexMatrix::Identity(d, d) / double(d)) - xk.trace() * phi);
      }
    } else {
      terms[static_cast<std::size_t>(nd)] = -(mixed - anchor);
    }
    eq.add(-anchor, terms, n);
  }

  SdpProblem p(n);
  if (target == ReverseTarget::generalized) {
    for (Eigen::Index k = 0; k < nx; ++k)
      p.objective(nd + k) = -x_basis[static_cast<std::size_t>(k)].trace().real();
  } else {
    p.objective(nd) = -1.0;
  }
  std::vector<ComplexMatrix> neg(static_cast<std::size_t>(nd));
  for (Eigen::Index i = 0; i < nd; ++i)
    neg[static_cast<std::size_t>(i)] = -d_basis[static_cast<std::size_t>(i)];
  add_complex_block(p, ComplexMatrix::Zero(m, m), neg);

  const AffineMap map = solve_equalities(eq.e, eq.f);
  const SdpSolution sol = solve(restrict_problem(p, map), settings);

  CoefficientResult res;
  res.kind = kind;
  res.status = sol.status;
  res.diagnostics = diagnostics_of(sol);
  res.value = -sol.objective_value;
  const RealVector y = map.offset + map.basis * sol.y;
  ComplexMatrix dmat = ComplexMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < nd; ++i) dmat += y(i) * d_basis[static_cast<std::size_t>(i)];
  res.witness = HermitianChoiLike(hermitize(dmat), d, d);
  return res;
}

}  // namespace detail

/// Quantum Doeblin coefficient: max Tr(s) over s >= 0 with s (x) 1/d <= J(N).
inline CoefficientResult alpha(const QuantumChannel& n, const SdpSettings& settings = {}) {
  return detail::minorant_sdp(n.choi().matrix(), n.d_in(), n.d_out(), false,
                              CoefficientKind::alpha, settings);
}

/// Same SDP on J(T o N); not applicable when N is not PPT.
inline CoefficientResult alpha_transpose(const QuantumChannel& n,
                                         const SdpSettings& settings = {}) {
  const HermitianChoiLike jt = transpose_output(n.choi());
  if (!validate(jt).is_cp) {
    CoefficientResult res;
    res.kind = CoefficientKind::alpha_T;
    res.not_applicable = true;
    res.value = -std::numeric_limits<double>::infinity();
    return res;
  }
  return detail::minorant_sdp(jt.matrix, n.d_in(), n.d_out(), false,
                              CoefficientKind::alpha_T, settings);
}

/// Relaxation with a Hermitian (not necessarily positive) minorant.
inline CoefficientResult alpha_hermitian(const QuantumChannel& n,
                                         const SdpSettings& settings = {}) {
  return detail::minorant_sdp(n.choi().matrix(), n.d_in(), n.d_out(), true,
                              CoefficientKind::alpha_H, settings);
}

/// Transpose and Hermitian relaxation combined; not applicable for non-PPT N.
inline CoefficientResult alpha_transpose_hermitian(const QuantumChannel& n,
                                                   const SdpSettings& settings = {}) {
  const HermitianChoiLike jt = transpose_output(n.choi());
  if (!validate(jt).is_cp) {
    CoefficientResult res;
    res.kind = CoefficientKind::alpha_TH;
    res.not_applicable = true;
    res.value = -std::numeric_limits<double>::infinity();
    return res;
  }
  return detail::minorant_sdp(jt.matrix, n.d_in(), n.d_out(), true,
                              CoefficientKind::alpha_TH, settings);
}

/// Largest weight of a PPT (entanglement-breaking for qubits) CP map below N:
/// max Tr(K) with K >= 0, K^{T_in} >= 0, Tr_out K = Tr(K) 1/d_in, K <= J(N).
inline CoefficientResult p1_eb_ppt(const QuantumChannel& n,
                                   const SdpSettings& settings = {}) {
  const int d_in = n.d_in();
  const int d_out = n.d_out();
  const ComplexMatrix& j = n.choi().matrix();
  const ComplexMatrix range = range_basis(j, detail::kRankCut);
  const int r = static_cast<int>(range.cols());
  CoefficientResult res;
  res.kind = CoefficientKind::p1_ppt;
  if (r == 0) return res;

  const auto basis = hermitian_basis(r);
  const Eigen::Index nv = static_cast<Eigen::Index>(basis.size());
  std::vector<ComplexMatrix> lifted(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    lifted[i] = hermitize(range * basis[i] * range.adjoint());

  SdpProblem p(nv);
  std::vector<ComplexMatrix> neg(basis.size()), neg_pt(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    p.objective(static_cast<Eigen::Index>(i)) = basis[i].trace().real();
    neg[i] = -basis[i];
    neg_pt[i] = -partial_transpose(lifted[i], d_out, d_in, Subsystem::second);
  }
  detail::add_complex_block(p, ComplexMatrix::Zero(r, r), neg);
  detail::add_complex_block(p, ComplexMatrix::Zero(d_in * d_out, d_in * d_out), neg_pt);
  detail::add_complex_block(p, hermitize(range.adjoint() * j * range), basis);

  detail::EqualityBuilder eq;
  {
    std::vector<ComplexMatrix> terms(basis.size());
    const ComplexMatrix id_in = ComplexMatrix::Identity(d_in, d_in) / double(d_in);
    for (std::size_t i = 0; i < basis.size(); ++i)
      terms[i] = partial_trace(lifted[i], d_out, d_in, Subsystem::second) -
                 lifted[i].trace() * id_in;
    eq.add(ComplexMatrix::Zero(d_in, d_in), terms, nv);
  }
  const AffineMap map = solve_equalities(eq.e, eq.f);
  const SdpSolution sol = solve(restrict_problem(p, map), settings);
  res.status = sol.status;
  res.diagnostics = detail::diagnostics_of(sol);
  res.value = sol.objective_value;
  const RealVector y = map.offset + map.basis * sol.y;
  ComplexMatrix k = ComplexMatrix::Zero(j.rows(), j.rows());
  for (Eigen::Index i = 0; i < nv; ++i) k += y(i) * lifted[static_cast<std::size_t>(i)];
  res.witness = HermitianChoiLike(hermitize(k), d_in, d_out);
  return res;
}

/// min p with N degradable into the depolarizing channel D_p.
inline CoefficientResult reverse_alpha(const QuantumChannel& n,
                                       const SdpSettings& settings = {}) {
  detail::require_endomorphic(n, "reverse_alpha");
  return detail::reverse_sdp(n, detail::ReverseTarget::depolarizing,
                             CoefficientKind::rev_alpha, settings);
}

/// min p with N degradable into the transpose-depolarizing channel D^T_p;
/// never below d/(d+1).
inline CoefficientResult reverse_alpha_transpose(const QuantumChannel& n,
                                                 const SdpSettings& settings = {}) {
  detail::require_endomorphic(n, "reverse_alpha_transpose");
  return detail::reverse_sdp(n, detail::ReverseTarget::transpose_depolarizing,
                             CoefficientKind::rev_alpha_T, settings);
}

/// min Tr(X) with N degradable into (1 - Tr X) id + X Tr(.), X Hermitian.
inline CoefficientResult reverse_alpha_hermitian(const QuantumChannel& n,
                                                 const SdpSettings& settings = {}) {
  detail::require_endomorphic(n, "reverse_alpha_hermitian");
  return detail::reverse_sdp(n, detail::ReverseTarget::generalized,
                             CoefficientKind::rev_alpha_H, settings);
}

inline CoefficientResult compute(CoefficientKind kind, const QuantumChannel& n,
                                 const SdpSettings& settings = {}) {
  switch (kind) {
    case CoefficientKind::alpha: return alpha(n, settings);
    case CoefficientKind::alpha_T: return alpha_transpose(n, settings);
    case CoefficientKind::alpha_H: return alpha_hermitian(n, settings);
    case CoefficientKind::alpha_TH: return alpha_transpose_hermitian(n, settings);
    case CoefficientKind::p1_ppt: return p1_eb_ppt(n, settings);
    case CoefficientKind::rev_alpha: return reverse_alpha(n, settings);
    case CoefficientKind::rev_alpha_T: return reverse_alpha_transpose(n, settings);
    case CoefficientKind::rev_alpha_H: return reverse_alpha_hermitian(n, settings);
  }
  throw InvalidInput("compute: unknown coefficient kind");
}

namespace detail {
inline const CoefficientResult& require_ok(const CoefficientResult& r) {
  if (!r.ok())
    throw SolverFailure(std::string(to_string(r.kind)) + ": solver status " +
                        to_string(r.status) + " after " +
                        std::to_string(r.diagnostics.iterations) + " iterations (gap " +
                        std::to_string(r.diagnostics.gap) + ")");
  return r;
}
}  // namespace detail

/// 1 - max{alpha_H, alpha_T}; alpha_T is skipped when not applicable.
inline double contraction_upper_bound(const QuantumChannel& n,
                                      const SdpSettings& settings = {}) {
  double best = detail::require_ok(alpha_hermitian(n, settings)).value;
  const CoefficientResult t = detail::require_ok(alpha_transpose(n, settings));
  if (!t.not_applicable) best = std::max(best, t.value);
  return 1.0 - best;
}

/// 1 - min{rev_alpha, rev_alpha_T, rev_alpha_H}.
inline double expansion_lower_bound(const QuantumChannel& n,
                                    const SdpSettings& settings = {}) {
  const double a = detail::require_ok(reverse_alpha(n, settings)).value;
  const double t = detail::require_ok(reverse_alpha_transpose(n, settings)).value;
  const double h = detail::require_ok(reverse_alpha_hermitian(n, settings)).value;
  return 1.0 - std::min({a, t, h});
}

/// Bounds on the data processing range [expansion, contraction] of the
/// trace distance.
struct DpRange {
  double lower = 0.0;
  double upper = 1.0;
  std::string channel;
};

inline DpRange dp_range(const QuantumChannel& n, std::string channel_id = {},
                        const SdpSettings& settings = {}) {
  return {expansion_lower_bound(n, settings), contraction_upper_bound(n, settings),
          std::move(channel_id)};
}

struct CapacityBounds {
  std::optional<double> q_bound;  ///< only for qubit-input channels
  double q2_bound = 1.0;
  double c_bound = 1.0;
};

/// Q <= max{0, 1 - 2 alpha} (qubit input), Q2 <= 1 - alpha, C <= 1 - alpha.
inline CapacityBounds capacity_bounds(const QuantumChannel& n,
                                      const SdpSettings& settings = {}) {
  // Round like the reported values so that exact closed forms survive.
  const double a =
      std::round(detail::require_ok(alpha(n, settings)).value * 1e9) / 1e9;
  CapacityBounds out;
  if (n.d_in() == 2) out.q_bound = std::max(0.0, 1.0 - 2.0 * a);
  out.q2_bound = 1.0 - a;
  out.c_bound = 1.0 - a;
  return out;
}

}  // namespace qdoeblin
