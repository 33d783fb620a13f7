#pragma once

// Dense complex linear algebra for small Hermitian matrices.
//
// Composite spaces are ordered (first (x) second) in row-major Kronecker
// order: the basis index of |i>|k> is i*d_second + k. Choi matrices put the
// output system first.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdoeblin/error.hpp"
#include "qdoeblin/tolerances.hpp"

namespace qdoeblin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class Subsystem { first, second };

/// Largest |m(i,j) - conj(m(j,i))|; +inf for non-square input.
inline double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return HUGE_VAL;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

/// Throws InvalidInput unless m is Hermitian within `tol` relative to its scale.
inline void require_hermitian(const ComplexMatrix& m, const char* what,
                              double tol = Tolerances::herm) {
  if (m.rows() != m.cols())
    throw InvalidInput(std::string(what) + ": matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!m.allFinite())
    throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
  if (hermiticity_defect(m) > tol * scale)
    throw InvalidInput(std::string(what) + ": matrix is not Hermitian");
}

/// (m + m^dagger) / 2, which removes rounding-level anti-Hermitian parts.
inline ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = h(i, i).real();
  return h;
}

struct HermitianEigen {
  RealVector values;      ///< ascending
  ComplexMatrix vectors;  ///< columns are eigenvectors, unitary
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix of dimension <= 64.
///
/// Each rotation first removes the phase of the pivot a_pq and then applies
/// the real symmetric Jacobi rotation with the smaller rotation angle.
inline HermitianEigen eig_hermitian(const ComplexMatrix& h) {
  require_hermitian(h, "eig_hermitian", 1e-10);
  const Eigen::Index n = h.rows();
  if (n > kMaxHermitianDim)
    throw SizeError("eig_hermitian: dimension exceeds 64");

  ComplexMatrix a = hermitize(h);
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double norm = a.norm();

  auto off_mass = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_mass() <= Tolerances::jacobi * norm) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const Complex phase = a(p, q) / mag;  // e^{i phi}
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex conj_phase = std::conj(phase);

        // A <- A G with G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * conj_phase * akq;
          a(k, q) = s * akp + c * conj_phase * akq;
        }
        // A <- G^dagger A.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * conj_phase * vkq;
          v(k, q) = s * vkp + c * conj_phase * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return a(i, i).real() < a(j, j).real();
  });
  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& h) {
  if (h.rows() == 0) return 0.0;
  return eig_hermitian(h).values(0);
}

inline bool is_psd(const ComplexMatrix& h, double tol = Tolerances::psd) {
  return min_eigenvalue(h) >= -tol;
}

/// Kronecker product; entry (i*rb + k, j*cb + l) = a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > 4096 || cols > 4096)
    throw SizeError("kron: result exceeds 4096 rows or columns");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace detail {
inline void require_bipartite(const ComplexMatrix& m, int d_a, int d_b,
                              const char* what) {
  if (d_a <= 0 || d_b <= 0 || m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(d_a) * d_b)
    throw InvalidInput(std::string(what) + ": dimension mismatch (matrix is " +
                       std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", dims " +
                       std::to_string(d_a) + "*" + std::to_string(d_b) + ")");
}
}  // namespace detail

/// Partial trace over the subsystem that is not `keep`.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, int d_a, int d_b,
                                   Subsystem keep) {
  detail::require_bipartite(m, d_a, d_b, "partial_trace");
  if (keep == Subsystem::first) {
    ComplexMatrix out = ComplexMatrix::Zero(d_a, d_a);
    for (int i = 0; i < d_a; ++i)
      for (int j = 0; j < d_a; ++j)
        for (int k = 0; k < d_b; ++k) out(i, j) += m(i * d_b + k, j * d_b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_b, d_b);
  for (int k = 0; k < d_b; ++k)
    for (int l = 0; l < d_b; ++l)
      for (int i = 0; i < d_a; ++i) out(k, l) += m(i * d_b + k, i * d_b + l);
  return out;
}

/// Transpose of the `on` tensor factor; an exact involution.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, int d_a, int d_b,
                                       Subsystem on) {
  detail::require_bipartite(m, d_a, d_b, "partial_transpose");
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < d_a; ++i)
    for (int k = 0; k < d_b; ++k)
      for (int j = 0; j < d_a; ++j)
        for (int l = 0; l < d_b; ++l) {
          const Complex v = m(i * d_b + k, j * d_b + l);
          if (on == Subsystem::first)
            out(j * d_b + k, i * d_b + l) = v;
          else
            out(i * d_b + l, j * d_b + k) = v;
        }
  return out;
}

/// Sum of absolute eigenvalues. Callers apply the 1/2 of the trace distance.
inline double trace_norm(const ComplexMatrix& h) {
  return eig_hermitian(h).values.cwiseAbs().sum();
}

/// Orthonormal Hermitian basis under <A,B> = Tr(AB): the normalized
/// identity, then the generalized Gell-Mann matrices divided by sqrt(2)
/// (symmetric and antisymmetric off-diagonal pairs, then diagonals).
inline std::vector<ComplexMatrix> hermitian_basis(int dim) {
  if (dim <= 0 || dim > kMaxHermitianDim)
    throw SizeError("hermitian_basis: dimension must be in [1, 64]");
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim) * dim);
  basis.push_back(ComplexMatrix::Identity(dim, dim) / std::sqrt(double(dim)));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(j, k) = r2;
      sym(k, j) = r2;
      basis.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(j, k) = Complex(0.0, -r2);
      anti(k, j) = Complex(0.0, r2);
      basis.push_back(std::move(anti));
    }
  }
  for (int l = 1; l < dim; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
    const double scale = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -double(l) * scale;
    basis.push_back(std::move(diag));
  }
  return basis;
}

/// Real coordinates Tr(B_k h) of a Hermitian matrix in an orthonormal basis.
inline RealVector hermitian_coordinates(const ComplexMatrix& h,
                                        const std::vector<ComplexMatrix>& basis) {
  RealVector y(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    y(static_cast<Eigen::Index>(k)) =
        basis[k].cwiseProduct(h.transpose()).sum().real();
  return y;
}

inline ComplexMatrix from_hermitian_coordinates(
    const RealVector& y, const std::vector<ComplexMatrix>& basis) {
  if (basis.empty()) return {};
  ComplexMatrix h = ComplexMatrix::Zero(basis[0].rows(), basis[0].cols());
  for (std::size_t k = 0; k < basis.size(); ++k)
    h += y(static_cast<Eigen::Index>(k)) * basis[k];
  return h;
}

/// [[Re h, -Im h], [Im h, Re h]]: PSD iff h is PSD, every eigenvalue doubled.
inline RealMatrix real_embed(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

/// Largest |a(i,j) - b(i,j)|.
inline double max_entry_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return HUGE_VAL;
  return (a - b).cwiseAbs().maxCoeff();
}

/// Projector-free basis of the range of a PSD matrix: eigenvectors whose
/// eigenvalue exceeds `cut`.
inline ComplexMatrix range_basis(const ComplexMatrix& h, double cut) {
  const HermitianEigen e = eig_hermitian(h);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < e.values.size(); ++k)
    if (e.values(k) > cut) keep.push_back(k);
  ComplexMatrix out(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = e.vectors.col(keep[k]);
  return out;
}

}  // namespace qdoeblin
