#pragma once

namespace qdoeblin {

/// Numerical tolerances shared by every module.
struct Tolerances {
  /// Hermiticity: max |h(i,j) - conj(h(j,i))|.
  static constexpr double herm = 1e-12;
  /// Eigendecomposition reconstruction and channel marginal checks.
  static constexpr double eig = 1e-10;
  /// A matrix counts as PSD when its smallest eigenvalue is >= -psd.
  static constexpr double psd = 1e-9;
  /// Trace-preservation violations above this are rejected at construction.
  static constexpr double tp_reject = 1e-8;
  /// Eigenvalues at or below this are dropped when extracting Kraus operators.
  static constexpr double kraus_cut = 1e-10;
  /// Jacobi sweeps stop once off-diagonal Frobenius mass <= jacobi * ||h||_F.
  static constexpr double jacobi = 1e-14;
};

inline constexpr int kMaxHermitianDim = 64;

}  // namespace qdoeblin
