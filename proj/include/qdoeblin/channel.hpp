#pragma once

// Quantum channels as Kraus lists with a cached, normalized Choi matrix
// J(N) = (N (x) id)(Phi+), ordered (output (x) input).

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdoeblin/hermlin.hpp"

namespace qdoeblin {

/// Hermitian operator on (output (x) input). No positivity or marginal
/// condition; holds T-composed Chois, relaxed optimizers and plain states
/// (a state is a Choi-like operator with d_in = 1).
struct HermitianChoiLike {
  ComplexMatrix matrix;
  int d_in = 1;
  int d_out = 1;

  HermitianChoiLike() = default;
  HermitianChoiLike(ComplexMatrix m, int din, int dout)
      : matrix(std::move(m)), d_in(din), d_out(dout) {
    if (matrix.rows() != static_cast<Eigen::Index>(din) * dout)
      throw InvalidInput("HermitianChoiLike: matrix dimension != d_out*d_in");
    require_hermitian(matrix, "HermitianChoiLike", 1e-9);
    matrix = hermitize(matrix);
  }
};

/// Normalized Choi matrix of a CPTP map: trace one, input marginal 1/d_in,
/// PSD within Tolerances::psd.
class ChoiMatrix {
 public:
  ChoiMatrix(ComplexMatrix m, int d_in, int d_out)
      : matrix_(std::move(m)), d_in_(d_in), d_out_(d_out) {
    if (d_in <= 0 || d_out <= 0 ||
        matrix_.rows() != static_cast<Eigen::Index>(d_in) * d_out ||
        matrix_.cols() != matrix_.rows())
      throw InvalidInput("ChoiMatrix: matrix dimension != d_out*d_in");
    if (matrix_.rows() > kMaxHermitianDim)
      throw SizeError("ChoiMatrix: Choi dimension exceeds 64");
    require_hermitian(matrix_, "ChoiMatrix", 1e-9);
    matrix_ = hermitize(matrix_);
    const ComplexMatrix marginal =
        partial_trace(matrix_, d_out, d_in, Subsystem::second);
    const double tp_err = max_entry_distance(
        marginal, ComplexMatrix::Identity(d_in, d_in) / double(d_in));
    if (tp_err > Tolerances::tp_reject)
      throw InvalidChannel("ChoiMatrix: not trace preserving (marginal error " +
                           std::to_string(tp_err) + ")");
    const double lo = min_eigenvalue(matrix_);
    if (lo < -Tolerances::psd)
      throw InvalidChannel("ChoiMatrix: not completely positive (min eigenvalue " +
                           std::to_string(lo) + ")");
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  HermitianChoiLike as_choi_like() const { return {matrix_, d_in_, d_out_}; }

 private:
  ComplexMatrix matrix_;
  int d_in_;
  int d_out_;
};

/// Normalized maximally entangled state on C^d (x) C^d.
inline ComplexMatrix maximally_entangled(int d) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return v * v.adjoint() / double(d);
}

/// Normalized Choi matrix of the transpose map on C^d: SWAP / d.
inline ComplexMatrix transpose_map_choi(int d) {
  ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  return swap / double(d);
}

namespace detail {
inline double tp_violation(const std::vector<ComplexMatrix>& kraus, int d_in) {
  ComplexMatrix sum = ComplexMatrix::Zero(d_in, d_in);
  for (const auto& a : kraus) sum += a.adjoint() * a;
  return max_entry_distance(sum, ComplexMatrix::Identity(d_in, d_in));
}
}  // namespace detail

/// J = (1/d_in) sum_k vec(A_k) vec(A_k)^dagger with vec(A)(i*d_in + a) = A(i,a).
inline ChoiMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus,
                                  int d_in, int d_out) {
  if (kraus.empty()) throw InvalidChannel("choi_from_kraus: empty Kraus list");
  for (const auto& a : kraus)
    if (a.rows() != d_out || a.cols() != d_in)
      throw InvalidInput("choi_from_kraus: Kraus operator is not d_out x d_in");
  const double tp = detail::tp_violation(kraus, d_in);
  if (tp > Tolerances::tp_reject)
    throw InvalidChannel("choi_from_kraus: sum A^dagger A != I (error " +
                         std::to_string(tp) + ")");
  const Eigen::Index n = static_cast<Eigen::Index>(d_in) * d_out;
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (const auto& a : kraus) {
    ComplexVector v(n);
    for (int i = 0; i < d_out; ++i)
      for (int k = 0; k < d_in; ++k) v(i * d_in + k) = a(i, k);
    j += v * v.adjoint();
  }
  return ChoiMatrix(j / double(d_in), d_in, d_out);
}

/// Kraus operators from the eigendecomposition of J; one per eigenvalue
/// above Tolerances::kraus_cut.
inline std::vector<ComplexMatrix> kraus_from_choi(const ChoiMatrix& choi) {
  const int d_in = choi.d_in();
  const int d_out = choi.d_out();
  const HermitianEigen e = eig_hermitian(choi.matrix());
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index k = e.values.size() - 1; k >= 0; --k) {
    const double lambda = e.values(k);
    if (lambda <= Tolerances::kraus_cut) continue;
    const double scale = std::sqrt(lambda * d_in);
    ComplexMatrix a(d_out, d_in);
    for (int i = 0; i < d_out; ++i)
      for (int c = 0; c < d_in; ++c) a(i, c) = scale * e.vectors(i * d_in + c, k);
    kraus.push_back(std::move(a));
  }
  return kraus;
}

struct ChannelFlags {
  bool is_cp = false;
  bool is_tp = false;
  bool is_ppt = false;
};

/// CP: J PSD; TP: input marginal 1/d_in within 1e-10; PPT: J^{T_in} PSD.
inline ChannelFlags validate(const HermitianChoiLike& c) {
  ChannelFlags f;
  f.is_cp = is_psd(c.matrix);
  const ComplexMatrix marginal =
      partial_trace(c.matrix, c.d_out, c.d_in, Subsystem::second);
  f.is_tp = max_entry_distance(marginal, ComplexMatrix::Identity(c.d_in, c.d_in) /
                                             double(c.d_in)) <= Tolerances::eig;
  f.is_ppt = is_psd(partial_transpose(c.matrix, c.d_out, c.d_in, Subsystem::second));
  return f;
}

class QuantumChannel {
 public:
  static QuantumChannel from_kraus(std::vector<ComplexMatrix> kraus, int d_in,
                                   int d_out) {
    ChoiMatrix choi = choi_from_kraus(kraus, d_in, d_out);
    return QuantumChannel(std::move(kraus), std::move(choi));
  }

  static QuantumChannel from_choi(ChoiMatrix choi) {
    auto kraus = kraus_from_choi(choi);
    return QuantumChannel(std::move(kraus), std::move(choi));
  }

  int d_in() const { return choi_.d_in(); }
  int d_out() const { return choi_.d_out(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const ChoiMatrix& choi() const { return choi_; }

 private:
  QuantumChannel(std::vector<ComplexMatrix> kraus, ChoiMatrix choi)
      : kraus_(std::move(kraus)), choi_(std::move(choi)) {}

  std::vector<ComplexMatrix> kraus_;
  ChoiMatrix choi_;
};

inline ComplexMatrix apply(const QuantumChannel& n, const ComplexMatrix& rho) {
  if (rho.rows() != n.d_in() || rho.cols() != n.d_in())
    throw InvalidInput("apply: state dimension does not match channel input");
  ComplexMatrix out = ComplexMatrix::Zero(n.d_out(), n.d_out());
  for (const auto& a : n.kraus()) out += a * rho * a.adjoint();
  return out;
}

namespace detail {
/// Re-derives a minimal Kraus set once products outgrow the Choi rank bound.
inline QuantumChannel canonical(std::vector<ComplexMatrix> kraus, int d_in,
                                int d_out) {
  QuantumChannel ch = QuantumChannel::from_kraus(std::move(kraus), d_in, d_out);
  if (static_cast<int>(ch.kraus().size()) > d_in * d_out)
    return QuantumChannel::from_choi(ch.choi());
  return ch;
}
}  // namespace detail

/// n after m.
inline QuantumChannel compose(const QuantumChannel& n, const QuantumChannel& m) {
  if (m.d_out() != n.d_in())
    throw InvalidInput("compose: output dimension of the inner channel (" +
                       std::to_string(m.d_out()) +
                       ") does not match input of the outer channel (" +
                       std::to_string(n.d_in()) + ")");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(n.kraus().size() * m.kraus().size());
  for (const auto& a : n.kraus())
    for (const auto& b : m.kraus()) kraus.push_back(a * b);
  return detail::canonical(std::move(kraus), m.d_in(), n.d_out());
}

inline QuantumChannel tensor(const QuantumChannel& n, const QuantumChannel& m) {
  const int d_in = n.d_in() * m.d_in();
  const int d_out = n.d_out() * m.d_out();
  if (d_in * d_out > kMaxHermitianDim)
    throw SizeError("tensor: combined Choi dimension exceeds 64");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(n.kraus().size() * m.kraus().size());
  for (const auto& a : n.kraus())
    for (const auto& b : m.kraus()) kraus.push_back(kron(a, b));
  return detail::canonical(std::move(kraus), d_in, d_out);
}

/// Convex combination lambda*n + (1-lambda)*m.
inline QuantumChannel mixture(const QuantumChannel& n, const QuantumChannel& m,
                              double lambda) {
  if (n.d_in() != m.d_in() || n.d_out() != m.d_out())
    throw InvalidInput("mixture: channels have different dimensions");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidParameter("mixture: lambda outside admissible interval [0, 1]");
  return QuantumChannel::from_choi(ChoiMatrix(
      lambda * n.choi().matrix() + (1.0 - lambda) * m.choi().matrix(), n.d_in(),
      n.d_out()));
}

/// Link product on normalized Choi-like operators. `outer` lives on C (x) B,
/// `inner` on B (x) A; the result lives on C (x) A and equals the Choi
/// matrix of outer-after-inner when both are channel Chois:
///   out((k,a),(l,b)) = d_B * sum_{i,j} outer((k,j),(l,i)) inner((j,a),(i,b)).
inline ComplexMatrix link_product(const ComplexMatrix& outer, int d_c, int d_b,
                                  const ComplexMatrix& inner, int d_a) {
  if (outer.rows() != static_cast<Eigen::Index>(d_c) * d_b ||
      inner.rows() != static_cast<Eigen::Index>(d_b) * d_a ||
      outer.cols() != outer.rows() || inner.cols() != inner.rows())
    throw InvalidInput("link_product: shared-system dimensions do not match");
  ComplexMatrix out = ComplexMatrix::Zero(d_c * d_a, d_c * d_a);
  for (int k = 0; k < d_c; ++k)
    for (int l = 0; l < d_c; ++l)
      for (int j = 0; j < d_b; ++j)
        for (int i = 0; i < d_b; ++i) {
          const Complex o = outer(k * d_b + j, l * d_b + i);
          if (o == Complex(0.0)) continue;
          for (int a = 0; a < d_a; ++a)
            for (int b = 0; b < d_a; ++b)
              out(k * d_a + a, l * d_a + b) += o * inner(j * d_a + a, i * d_a + b);
        }
  return out * double(d_b);
}

inline ChoiMatrix link_product(const ChoiMatrix& outer, const ChoiMatrix& inner) {
  if (outer.d_in() != inner.d_out())
    throw InvalidInput("link_product: outer input dimension (" +
                       std::to_string(outer.d_in()) +
                       ") does not match inner output dimension (" +
                       std::to_string(inner.d_out()) + ")");
  return ChoiMatrix(link_product(outer.matrix(), outer.d_out(), outer.d_in(),
                                 inner.matrix(), inner.d_in()),
                    inner.d_in(), outer.d_out());
}

/// Choi-like operator of T o N (transpose applied to the output).
inline HermitianChoiLike transpose_output(const ChoiMatrix& choi) {
  return {partial_transpose(choi.matrix(), choi.d_out(), choi.d_in(), Subsystem::first),
          choi.d_in(), choi.d_out()};
}

// --- channel families -------------------------------------------------------

namespace detail {
inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(9);
  os << x;
  return os.str();
}

inline void require_range(const char* family, const char* name, double value,
                          double lo, double hi) {
  constexpr double slack = 1e-12;
  if (!(value >= lo - slack && value <= hi + slack))
    throw InvalidParameter(std::string(family) + ": " + name + "=" + fmt(value) +
                           " outside admissible interval [" + fmt(lo) + ", " +
                           fmt(hi) + "]");
}

inline void require_dim(const char* family, int d, int lo = 1) {
  if (d < lo || d > 8)
    throw InvalidParameter(std::string(family) + ": dimension " +
                           std::to_string(d) + " outside admissible interval [" +
                           std::to_string(lo) + ", 8]");
}

inline void require_density(const char* family, const ComplexMatrix& sigma) {
  require_hermitian(sigma, family, 1e-10);
  if (std::abs(sigma.trace() - Complex(1.0)) > 1e-10 || !is_psd(sigma))
    throw InvalidParameter(std::string(family) + ": sigma must be a density matrix");
}
}  // namespace detail

inline QuantumChannel identity_channel(int d) {
  detail::require_dim("identity", d);
  return QuantumChannel::from_kraus({ComplexMatrix::Identity(d, d)}, d, d);
}

inline QuantumChannel unitary_channel(const ComplexMatrix& u) {
  if (u.rows() != u.cols() ||
      max_entry_distance(u.adjoint() * u,
                         ComplexMatrix::Identity(u.rows(), u.cols())) > 1e-10)
    throw InvalidParameter("unitary: matrix is not unitary");
  const int d = static_cast<int>(u.rows());
  return QuantumChannel::from_kraus({u}, d, d);
}

/// E_eps(X) = (1-eps) X + eps |e><e|; the erasure flag is the last basis vector.
inline QuantumChannel erasure(double eps, int d) {
  detail::require_range("erasure", "eps", eps, 0.0, 1.0);
  detail::require_dim("erasure", d);
  eps = std::clamp(eps, 0.0, 1.0);
  std::vector<ComplexMatrix> kraus;
  ComplexMatrix keep = ComplexMatrix::Zero(d + 1, d);
  keep.topRows(d).setIdentity();
  kraus.push_back(std::sqrt(1.0 - eps) * keep);
  for (int j = 0; j < d; ++j) {
    ComplexMatrix flag = ComplexMatrix::Zero(d + 1, d);
    flag(d, j) = std::sqrt(eps);
    kraus.push_back(std::move(flag));
  }
  return QuantumChannel::from_kraus(std::move(kraus), d, d + 1);
}

/// D_p = (1-p) id + p 1/d, CP for p in [0, d^2/(d^2-1)].
inline QuantumChannel depolarizing(double p, int d) {
  detail::require_dim("depolarizing", d, 2);
  const double hi = double(d * d) / double(d * d - 1);
  detail::require_range("depolarizing", "p", p, 0.0, hi);
  p = std::clamp(p, 0.0, hi);
  const ComplexMatrix j = (1.0 - p) * maximally_entangled(d) +
                          p * ComplexMatrix::Identity(d * d, d * d) / double(d * d);
  return QuantumChannel::from_choi(ChoiMatrix(j, d, d));
}

/// D^T_q = (1-q) T + q 1/d, CP for q in [d/(d+1), d/(d-1)].
inline QuantumChannel transpose_depolarizing(double q, int d) {
  detail::require_dim("transpose_depolarizing", d, 2);
  const double lo = double(d) / (d + 1);
  const double hi = double(d) / (d - 1);
  detail::require_range("transpose_depolarizing", "q", q, lo, hi);
  q = std::clamp(q, lo, hi);
  const ComplexMatrix j = (1.0 - q) * transpose_map_choi(d) +
                          q * ComplexMatrix::Identity(d * d, d * d) / double(d * d);
  return QuantumChannel::from_choi(ChoiMatrix(j, d, d));
}

inline QuantumChannel werner_holevo(int d) {
  detail::require_dim("werner_holevo", d, 2);
  return transpose_depolarizing(double(d) / (d - 1), d);
}

/// Generalized amplitude damping A_{p,eta}; p = 1 is standard amplitude damping.
inline QuantumChannel gad(double p, double eta) {
  detail::require_range("gad", "p", p, 0.0, 1.0);
  detail::require_range("gad", "eta", eta, 0.0, 1.0);
  p = std::clamp(p, 0.0, 1.0);
  eta = std::clamp(eta, 0.0, 1.0);
  const double sp = std::sqrt(p);
  const double sq = std::sqrt(1.0 - p);
  const double se = std::sqrt(eta);
  const double sd = std::sqrt(1.0 - eta);
  ComplexMatrix a1(2, 2), a2(2, 2), a3(2, 2), a4(2, 2);
  a1 << sp, 0.0, 0.0, sp * se;
  a2 << 0.0, sp * sd, 0.0, 0.0;
  a3 << sq * se, 0.0, 0.0, sq;
  a4 << 0.0, 0.0, sq * sd, 0.0;
  return QuantumChannel::from_kraus({a1, a2, a3, a4}, 2, 2);
}

inline std::vector<ComplexMatrix> pauli_matrices() {
  ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {i2, x, y, z};
}

/// rho -> sum_k w_k P_k rho P_k over (I, X, Y, Z).
inline QuantumChannel pauli_channel(const std::vector<double>& weights) {
  if (weights.size() != 4)
    throw InvalidParameter("pauli_channel: expected 4 weights (I, X, Y, Z)");
  double total = 0.0;
  for (double w : weights) {
    detail::require_range("pauli_channel", "weight", w, 0.0, 1.0);
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidParameter("pauli_channel: weights must sum to 1");
  const auto paulis = pauli_matrices();
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < 4; ++k)
    if (weights[k] > 0.0) kraus.push_back(std::sqrt(weights[k]) * paulis[k]);
  return QuantumChannel::from_kraus(std::move(kraus), 2, 2);
}

/// D^X_p = (1-p) id + p X.X
inline QuantumChannel bitflip(double p) {
  detail::require_range("bitflip", "p", p, 0.0, 1.0);
  p = std::clamp(p, 0.0, 1.0);
  return pauli_channel({1.0 - p, p, 0.0, 0.0});
}

/// D^Z_b = (1-b) id + b Z.Z
inline QuantumChannel dephasing(double b) {
  detail::require_range("dephasing", "b", b, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  return pauli_channel({1.0 - b, 0.0, 0.0, b});
}

/// R_sigma(rho) = sigma Tr(rho) with input dimension d_in.
inline QuantumChannel replacer(const ComplexMatrix& sigma, int d_in) {
  detail::require_density("replacer", sigma);
  detail::require_dim("replacer", d_in);
  const ComplexMatrix j =
      kron(hermitize(sigma), ComplexMatrix::Identity(d_in, d_in) / double(d_in));
  return QuantumChannel::from_choi(ChoiMatrix(j, d_in, static_cast<int>(sigma.rows())));
}

/// D_{p,sigma}(rho) = (1-p) rho + p sigma Tr(rho), p in [0, 1].
inline QuantumChannel generalized_depolarizing(double p, const ComplexMatrix& sigma) {
  detail::require_range("generalized_depolarizing", "p", p, 0.0, 1.0);
  detail::require_density("generalized_depolarizing", sigma);
  p = std::clamp(p, 0.0, 1.0);
  const int d = static_cast<int>(sigma.rows());
  const ComplexMatrix j =
      (1.0 - p) * maximally_entangled(d) +
      p * kron(hermitize(sigma), ComplexMatrix::Identity(d, d) / double(d));
  return QuantumChannel::from_choi(ChoiMatrix(j, d, d));
}

/// Measure-and-prepare embedding of a column-stochastic matrix P(y|x):
/// rho -> sum_{x,y} P(y|x) <x|rho|x> |y><y|.
inline QuantumChannel classical_embed(const RealMatrix& stochastic) {
  const int ny = static_cast<int>(stochastic.rows());
  const int nx = static_cast<int>(stochastic.cols());
  if (nx == 0 || ny == 0) throw InvalidParameter("classical_embed: empty matrix");
  for (int x = 0; x < nx; ++x) {
    if ((stochastic.col(x).array() < 0.0).any() ||
        std::abs(stochastic.col(x).sum() - 1.0) > 1e-12)
      throw InvalidParameter("classical_embed: matrix is not column stochastic");
  }
  std::vector<ComplexMatrix> kraus;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      if (stochastic(y, x) == 0.0) continue;
      ComplexMatrix a = ComplexMatrix::Zero(ny, nx);
      a(y, x) = std::sqrt(stochastic(y, x));
      kraus.push_back(std::move(a));
    }
  return QuantumChannel::from_kraus(std::move(kraus), nx, ny);
}

/// Stinespring sampling: thin Q of a complex Gaussian (d_out*env) x d_in
/// matrix is an isometry; tracing out the environment gives the channel.
inline QuantumChannel random_channel(int d_in, int d_out, int env_dim,
                                     std::uint64_t seed) {
  detail::require_dim("random_channel", d_in);
  detail::require_dim("random_channel", d_out);
  if (env_dim < 1 || d_out * env_dim < d_in)
    throw InvalidParameter("random_channel: need env_dim >= 1 and d_out*env_dim >= d_in");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int rows = d_out * env_dim;
  ComplexMatrix g(rows, d_in);
  for (int c = 0; c < d_in; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  const Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(rows, d_in);
  std::vector<ComplexMatrix> kraus;
  for (int e = 0; e < env_dim; ++e) {
    ComplexMatrix a(d_out, d_in);
    for (int i = 0; i < d_out; ++i) a.row(i) = v.row(i * env_dim + e);
    kraus.push_back(std::move(a));
  }
  return QuantumChannel::from_kraus(std::move(kraus), d_in, d_out);
}

}  // namespace qdoeblin
