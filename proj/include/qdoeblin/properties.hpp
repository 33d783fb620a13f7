#pragma once

// Seeded property suites (invariants of every module), shared by the CLI
// `check` command and the test binaries.

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdoeblin/channel.hpp"
#include "qdoeblin/channel_io.hpp"
#include "qdoeblin/classical.hpp"
#include "qdoeblin/doeblin.hpp"
#include "qdoeblin/hermlin.hpp"
#include "qdoeblin/oracles.hpp"
#include "qdoeblin/sdp.hpp"

namespace qdoeblin {

struct CheckReport {
  std::string suite;
  int passed = 0;
  int failed = 0;
  std::string first_failure;  ///< property name and serialized counterexample

  bool ok() const { return failed == 0; }

  void expect(bool ok, const std::string& property, const std::function<std::string()>& detail) {
    if (ok) {
      ++passed;
      return;
    }
    if (failed++ == 0) first_failure = property + ": " + detail();
  }
  void merge(const CheckReport& other) {
    passed += other.passed;
    failed += other.failed;
    if (first_failure.empty() && !other.first_failure.empty())
      first_failure = other.suite + "/" + other.first_failure;
  }
};

inline const std::vector<std::string>& check_suites() {
  static const std::vector<std::string> s = {"linalg", "channel", "sdp", "doeblin", "classical"};
  return s;
}

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline ComplexMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return hermitize(g);
}

inline ComplexMatrix random_density(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = random_hermitian(d, rng);
  ComplexMatrix r = g * g.adjoint();
  return hermitize(r / r.trace().real());
}

/// Qubit channel with Kraus rank 2..4, deterministic in (seed, index).
inline QuantumChannel ensemble_channel(std::uint64_t seed, std::size_t i, int d = 2) {
  return random_channel(d, d, 2 + static_cast<int>(i % 3), seed * 1000003ULL + i);
}

inline std::string channel_text(const QuantumChannel& n) { return channel_to_json(n).dump(); }

}  // namespace detail

inline CheckReport check_linalg(std::uint64_t seed) {
  CheckReport r{"linalg"};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 1000; ++t) {
    const int d = 2 << (t % 4);  // 2, 4, 8, 16
    const ComplexMatrix h = detail::random_hermitian(d, rng);
    const HermitianEigen e = eig_hermitian(h);
    const ComplexMatrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    const double err = max_entry_distance(rec, h);
    const double orth = max_entry_distance(e.vectors.adjoint() * e.vectors,
                                           ComplexMatrix::Identity(d, d));
    r.expect(err <= 1e-10 * d && orth <= 1e-10, "eig reconstruction",
             [&] { return "dim " + std::to_string(d) + " error " + detail::num(err); });
    bool sorted = true;
    for (int i = 1; i < d; ++i) sorted = sorted && e.values(i - 1) <= e.values(i);
    r.expect(sorted, "eigenvalues ascending", [&] { return "dim " + std::to_string(d); });
  }
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix h = detail::random_hermitian(8, rng);
    const ComplexMatrix pt = partial_transpose(h, 2, 4, Subsystem::second);
    r.expect(partial_transpose(pt, 2, 4, Subsystem::second) == h, "partial transpose involution",
             [] { return std::string("4x2 random Hermitian"); });
    r.expect(max_entry_distance(partial_trace(pt, 2, 4, Subsystem::first),
                                partial_trace(h, 2, 4, Subsystem::first)) <= 1e-12,
             "partial trace after partial transpose", [] { return std::string("2x4"); });
    r.expect(hermiticity_defect(pt) <= Tolerances::herm, "partial transpose Hermitian",
             [] { return std::string("2x4"); });
  }
  for (int t = 0; t < 1000; ++t) {
    ComplexMatrix h = detail::random_hermitian(3, rng);
    // Shift so that both PSD and non-PSD cases occur.
    h += (std::uniform_real_distribution<double>(-1.0, 4.0)(rng)) * ComplexMatrix::Identity(3, 3);
    const double lmin = min_eigenvalue(h);
    if (std::abs(lmin) < 1e-8) continue;
    const bool psd = lmin >= -1e-10;
    const bool embedded_psd =
        Eigen::SelfAdjointEigenSolver<RealMatrix>(real_embed(h), Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff() >= -1e-10;
    r.expect(psd == embedded_psd, "real_embed preserves PSD",
             [&] { return "min eigenvalue " + detail::num(lmin); });
  }
  return r;
}

inline CheckReport check_channel(std::uint64_t seed) {
  CheckReport r{"channel"};
  std::mt19937_64 rng(seed);
  const std::vector<QuantumChannel> families = {
      identity_channel(3), erasure(0.3, 2), depolarizing(0.7, 3), depolarizing(4.0 / 3.0, 2),
      transpose_depolarizing(0.8, 2), werner_holevo(3), gad(0.3, 0.6), bitflip(0.2),
      dephasing(0.4), pauli_channel({0.1, 0.2, 0.3, 0.4}),
      replacer(detail::random_density(2, rng), 3),
      generalized_depolarizing(0.4, detail::random_density(3, rng))};
  for (const auto& n : families) {
    const ComplexMatrix& j = n.choi().matrix();
    const ChannelFlags f = validate(n.choi().as_choi_like());
    r.expect(f.is_cp && f.is_tp && std::abs(j.trace().real() - 1.0) <= 1e-10,
             "family is CPTP", [&] { return detail::channel_text(n); });
  }
  for (std::size_t i = 0; i < 500; ++i) {
    const int d = i % 2 == 0 ? 2 : 3;
    const QuantumChannel a = random_channel(d, d, 1 + static_cast<int>(i % 3), seed + 2 * i);
    const QuantumChannel b = random_channel(d, d, 1 + static_cast<int>((i + 1) % 3), seed + 2 * i + 1);
    const double dev =
        max_entry_distance(link_product(a.choi(), b.choi()).matrix(), compose(a, b).choi().matrix());
    r.expect(dev <= 1e-10, "link product equals composition",
             [&] { return "d=" + std::to_string(d) + " deviation " + detail::num(dev); });
  }
  {
    auto pt_min = [](double p) {
      return min_eigenvalue(
          partial_transpose(depolarizing(p, 2).choi().matrix(), 2, 2, Subsystem::second));
    };
    double lo = 0.0, hi = 1.0;  // NPT at 0, PPT at 1
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (pt_min(mid) >= -Tolerances::psd ? hi : lo) = mid;
    }
    r.expect(std::abs(hi - 2.0 / 3.0) <= 1e-6, "depolarizing PPT threshold at 2/3",
             [&] { return "threshold " + detail::num(hi); });
  }
  {
    const QuantumChannel a = random_channel(3, 2, 3, seed), b = random_channel(3, 2, 3, seed);
    r.expect(a.choi().matrix() == b.choi().matrix(), "random_channel reproducible",
             [&] { return "seed " + std::to_string(seed); });
  }
  return r;
}

inline CheckReport check_sdp(std::uint64_t seed) {
  CheckReport r{"sdp"};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    // Random instance with a strictly feasible dual (y = 0) and a bounded
    // objective (b = A(X0) for some X0 > 0).
    const int n = 3 + t % 4, m = 4 + t % 3;
    SdpProblem p(n);
    SdpBlock& blk = p.add_block(m);
    RealMatrix x0 = RealMatrix::Identity(m, m);
    for (int i = 0; i < n; ++i) {
      RealMatrix a(m, m);
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) a(u, v) = normal(rng);
      blk.a[static_cast<std::size_t>(i)] = 0.5 * (a + a.transpose());
      p.objective(i) = blk.a[static_cast<std::size_t>(i)].cwiseProduct(x0).sum();
    }
    RealMatrix c(m, m);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v) c(u, v) = 0.3 * normal(rng);
    blk.c = 0.5 * (c + c.transpose()) + double(m) * RealMatrix::Identity(m, m);

    const SdpSolution s = solve(p);
    r.expect(s.status == SdpStatus::optimal, "random SDP solves",
             [&] { return "instance " + std::to_string(t) + " status " + to_string(s.status); });
    if (s.status != SdpStatus::optimal) continue;
    const double xmin =
        Eigen::SelfAdjointEigenSolver<RealMatrix>(s.primal[0], Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    const double gap = std::abs(s.primal_objective - s.objective_value);
    r.expect(xmin >= -1e-8 && gap <= 1e-8 * (1.0 + std::abs(s.objective_value)),
             "weak duality certificate",
             [&] { return "instance " + std::to_string(t) + " gap " + detail::num(gap); });
    r.expect(s.min_slack_eigenvalue >= -1e-8, "dual feasibility",
             [&] { return "min slack " + detail::num(s.min_slack_eigenvalue); });

    SdpProblem scaled = p;
    scaled.objective *= 10.0;
    const SdpSolution s10 = solve(scaled);
    r.expect(s10.status == SdpStatus::optimal &&
                 std::abs(s10.objective_value - 10.0 * s.objective_value) <= 1e-7 * (1.0 + std::abs(s10.objective_value)) &&
                 // y is only pinned to ~sqrt(gap) on degenerate faces
                 (s10.y - s.y).cwiseAbs().maxCoeff() <= 1e-4 * (1.0 + s.y.cwiseAbs().maxCoeff()),
             "objective scaling invariance",
             [&] { return "instance " + std::to_string(t) + " value " + detail::num(s10.objective_value); });

    const SdpSolution again = solve(p);
    r.expect(again.y == s.y && again.iterations == s.iterations, "deterministic iterates",
             [&] { return "instance " + std::to_string(t); });
  }
  return r;
}

inline CheckReport check_doeblin(std::uint64_t seed) {
  CheckReport r{"doeblin"};
  auto value = [](const CoefficientResult& c) { return detail::require_ok(c).value; };

  for (std::size_t i = 0; i < 200; ++i) {
    const QuantumChannel n = detail::ensemble_channel(seed, i);
    const double a = value(alpha(n)), ah = value(alpha_hermitian(n));
    const double rev = value(reverse_alpha(n)), revh = value(reverse_alpha_hermitian(n));
    const double eta = eta_tr_qubit(n), eta_exp = eta_tr_expansion_qubit(n, seed + i);
    auto ctx = [&] { return detail::channel_text(n); };
    r.expect(1.0 - rev <= eta_exp + 1e-3, "1-rev <= expansion oracle", ctx);
    r.expect(eta <= 1.0 - a + 1e-3, "eta_Tr oracle <= 1-alpha", ctx);
    r.expect(a <= ah + 1e-6, "alpha <= alphaH", ctx);
    r.expect(ah <= 1.0 - eta + 1e-4, "alphaH <= 1 - eta_Tr oracle", ctx);
    r.expect(a <= value(p1_eb_ppt(n)) + 1e-6, "alpha <= p1", ctx);
    r.expect(revh <= rev + 1e-6 && rev <= 1.0 + 1e-6, "revH <= rev <= 1", ctx);
    r.expect(eta <= 1.0 + 1e-9, "eta_Tr oracle <= 1", ctx);
  }
  for (std::size_t i = 0; i < 100; ++i) {
    const QuantumChannel n = detail::ensemble_channel(seed + 1, 2 * i);
    const QuantumChannel m = detail::ensemble_channel(seed + 1, 2 * i + 1);
    const double an = value(alpha(n)), am = value(alpha(m));
    for (double lambda : {0.25, 0.5, 0.75}) {
      const double mix = value(alpha(mixture(n, m, lambda)));
      r.expect(mix >= lambda * an + (1.0 - lambda) * am - 1e-6, "concavity", [&] {
        return "lambda " + detail::num(lambda) + " N=" + detail::channel_text(n) +
               " M=" + detail::channel_text(m);
      });
    }
    const double comp = value(alpha(compose(n, m)));
    r.expect(1.0 - comp <= (1.0 - an) * (1.0 - am) + 1e-6, "concatenation",
             [&] { return "N=" + detail::channel_text(n) + " M=" + detail::channel_text(m); });
    if (i < 50) {
      const double prod = value(alpha(tensor(n, m)));
      r.expect(prod >= an * am - 1e-6, "super-multiplicativity",
               [&] { return "N=" + detail::channel_text(n) + " M=" + detail::channel_text(m); });
    }
  }
  for (std::size_t i = 0; i < 50; ++i) {
    const QuantumChannel n = random_channel(2, 2, 4, seed * 7919ULL + i);
    const double a = value(alpha(n)), grid = alpha_bloch_grid(n);
    r.expect(std::abs(a - grid) <= 1e-4, "alpha equals max-relative-entropy grid oracle", [&] {
      return "sdp " + detail::num(a) + " grid " + detail::num(grid) + " " + detail::channel_text(n);
    });
  }
  for (int i = 0; i <= 20; ++i)
    for (int k = 0; k <= 20; ++k) {
      const double dev = gad_dephasing_identity(i / 20.0, k / 20.0);
      r.expect(dev <= 1e-10, "dephasing after GAD is generalized depolarizing",
               [&] { return "p " + detail::num(i / 20.0) + " eta " + detail::num(k / 20.0); });
    }
  {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 1000; ++t) {
      const ComplexMatrix rho = detail::random_density(2, rng), sigma = detail::random_density(2, rng);
      const double e1 = hockey_stick(rho, sigma, 1.0), tn = 0.5 * trace_norm(rho - sigma);
      r.expect(std::abs(e1 - tn) <= 1e-10, "E_1 equals trace distance",
               [&] { return detail::num(e1) + " vs " + detail::num(tn); });
    }
    for (int t = 0; t < 5; ++t) {
      const QuantumChannel u = random_channel(2, 2, 1, seed + 31 * t);
      const double eta = eta_tr_qubit(u);
      r.expect(std::abs(eta - 1.0) <= 1e-6, "unitary channels have eta_Tr = 1",
               [&] { return detail::num(eta); });
    }
  }
  return r;
}

inline CheckReport check_classical(std::uint64_t seed) {
  CheckReport r{"classical"};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 100; ++t) {
    const ClassicalChannel c = random_biso(2 + t % 5, rng);
    const double a = classical_doeblin(c), g = classical_gamma(c), rev = classical_reverse_alpha(c);
    r.expect(c.is_biso() && a <= g + 1e-12 && g <= rev + 1e-5, "classical chain", [&] {
      std::ostringstream os;
      os << "alpha " << a << " gamma " << g << " rev " << rev << " P=" << c.matrix().transpose();
      return os.str();
    });
  }
  for (int t = 0; t < 100; ++t) {
    const int dim = t % 2 == 0 ? 2 : 3;
    const RealMatrix p = random_stochastic(dim, dim, rng);
    const double q = detail::require_ok(alpha(classical_embed(p))).value;
    const double cl = classical_doeblin(ClassicalChannel(p));
    r.expect(std::abs(q - cl) <= 1e-5, "quantum alpha of embedded classical channel", [&] {
      std::ostringstream os;
      os << "quantum " << q << " classical " << cl << " P=" << p.transpose();
      return os.str();
    });
  }
  for (double p : {0.05, 0.11, 0.25, 0.4}) {
    const double rev = classical_reverse_alpha(bsc(p));
    r.expect(std::abs(rev - binary_entropy(p)) <= 1e-4, "BSC reverse alpha equals h(p)",
             [&] { return "p " + detail::num(p) + " rev " + detail::num(rev); });
  }
  return r;
}

inline CheckReport run_check_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "linalg") return check_linalg(seed);
  if (suite == "channel") return check_channel(seed);
  if (suite == "sdp") return check_sdp(seed);
  if (suite == "doeblin") return check_doeblin(seed);
  if (suite == "classical") return check_classical(seed);
  throw InvalidInput("unknown suite '" + suite + "' (known: linalg, channel, sdp, doeblin, classical, all)");
}

}  // namespace qdoeblin
