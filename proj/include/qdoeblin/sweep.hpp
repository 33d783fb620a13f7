#pragma once

// Parameter sweeps over channel families and the figure reproductions.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qdoeblin/channel_io.hpp"
#include "qdoeblin/doeblin.hpp"
#include "qdoeblin/oracles.hpp"
#include "qdoeblin/report.hpp"

namespace qdoeblin {

/// start, start + step, ..., with the final point snapped onto `stop`.
inline std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw InvalidInput("sweep: step must be > 0");
  if (!(start <= stop)) throw InvalidInput("sweep: start must be <= stop");
  const double span = (stop - start) / step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = start + double(i) * step;
  if (std::abs(g.back() - stop) <= 1e-9 * step) g.back() = stop;
  return g;
}

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluates f(0..count-1) on `jobs` threads; results keep index order. The
/// first exception (lowest index) is rethrown after all workers stop.
template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned jobs,
                            const std::function<T(std::size_t)>& f) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct SweepSpec {
  std::string family;
  ParamMap fixed;
  std::string parameter;
  double start = 0.0;
  double stop = 1.0;
  double step = 0.1;
  std::vector<CoefficientKind> kinds;
};

struct SweepOptions {
  unsigned jobs = default_jobs();
  SdpSettings settings;
};

/// One row per grid point: parameter value, then value and status per kind.
/// Families reject out-of-range points before any SDP is solved.
inline Table run_sweep(const SweepSpec& spec, const SweepOptions& opt = {}) {
  if (spec.kinds.empty()) throw InvalidInput("sweep: no coefficient kinds requested");
  const auto grid = linear_grid(spec.start, spec.stop, spec.step);
  std::vector<QuantumChannel> channels;
  channels.reserve(grid.size());
  for (double v : grid) {
    ParamMap params = spec.fixed;
    params[spec.parameter] = v;
    channels.push_back(make_channel(spec.family, params));
  }
  Table t;
  t.header.push_back(spec.parameter);
  for (auto k : spec.kinds) {
    t.header.push_back(to_string(k));
    t.header.push_back(std::string(to_string(k)) + "_status");
  }
  t.rows = parallel_map<std::vector<std::string>>(
      grid.size(), opt.jobs, [&](std::size_t i) {
        std::vector<std::string> row{format_number(grid[i])};
        for (auto k : spec.kinds) {
          const CoefficientResult r = compute(k, channels[i], opt.settings);
          row.push_back(format_value(r));
          row.push_back(format_status(r));
        }
        return row;
      });
  return t;
}

/// True when every *_status column of the table reads optimal or
/// not_applicable.
inline bool all_optimal(const Table& t) {
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    const auto& h = t.header[c];
    if (h.size() < 7 || h.compare(h.size() - 7, 7, "_status") != 0) continue;
    for (const auto& r : t.rows)
      if (r[c] != "optimal" && r[c] != "not_applicable") return false;
  }
  return true;
}

struct Figure {
  std::string id;
  Table table;
  LinePlot plot;
};

namespace detail {

inline double require_value(const CoefficientResult& r) { return require_ok(r).value; }

/// Line plot of selected table columns against `x`.
inline LinePlot plot_columns(const Table& t, const std::string& title, const std::string& x,
                             const std::vector<std::pair<std::string, bool>>& columns,
                             const std::string& y_label = "value") {
  LinePlot p{title, x, y_label, {}};
  for (const auto& [name, dashed] : columns) {
    Series s{name, {}, dashed};
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      s.points.emplace_back(t.number(i, x), t.number(i, name));
    p.series.push_back(std::move(s));
  }
  return p;
}

/// Surface table (p, eta, columns...) drawn as one curve over eta per
/// selected p value.
inline LinePlot plot_surface(const Table& t, const std::string& title, const std::string& column,
                             const std::vector<double>& p_values) {
  LinePlot plot{title, "eta", column, {}};
  for (double pv : p_values) {
    Series s{column + " p=" + detail::fixed(pv, 1), {}, false};
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      if (std::abs(t.number(i, "p") - pv) < 1e-9)
        s.points.emplace_back(t.number(i, "eta"), t.number(i, column));
    plot.series.push_back(std::move(s));
  }
  return plot;
}

constexpr double kLineStep = 1.0 / 75.0;  // 76 points on [0, 1]
constexpr double kSurfaceStep = 0.02;     // 51 x 51

/// 76-point grid on [0, 1] plus the midpoint, where the reference values
/// of the bit-flip and amplitude-damping curves are quoted.
inline std::vector<double> unit_line_grid() {
  auto g = linear_grid(0.0, 1.0, kLineStep);
  g.insert(std::upper_bound(g.begin(), g.end(), 0.5), 0.5);
  return g;
}

/// GAD surface with one column per evaluator.
inline Table gad_surface(
    const std::vector<std::string>& names,
    const std::function<std::vector<double>(const QuantumChannel&)>& eval,
    const SweepOptions& opt) {
  const auto axis = linear_grid(0.0, 1.0, kSurfaceStep);
  Table t;
  t.header = {"p", "eta"};
  t.header.insert(t.header.end(), names.begin(), names.end());
  t.rows = parallel_map<std::vector<std::string>>(
      axis.size() * axis.size(), opt.jobs, [&](std::size_t k) {
        const double p = axis[k / axis.size()], eta = axis[k % axis.size()];
        std::vector<std::string> row{format_number(p), format_number(eta)};
        for (double v : eval(gad(p, eta))) row.push_back(format_number(v));
        return row;
      });
  return t;
}

}  // namespace detail

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig1", "fig2", "fig3", "fig4",
                                               "fig5", "fig6", "fig7", "fig8"};
  return ids;
}

inline Figure make_figure(const std::string& id, const SweepOptions& opt = {}) {
  const SdpSettings& st = opt.settings;
  using detail::require_value;
  Figure fig{id, {}, {}};
  const std::vector<double> shown_p = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

  if (id == "fig1") {
    fig.table = detail::gad_surface(
        {"alpha"}, [&](const QuantumChannel& n) { return std::vector{require_value(alpha(n, st))}; },
        opt);
    fig.plot = detail::plot_surface(fig.table, "alpha of GAD A_{p,eta}", "alpha", shown_p);
  } else if (id == "fig2" || id == "fig4") {
    const bool fwd = id == "fig2";
    SweepSpec spec{"depolarizing", {{"d", 2}}, "p", 0.0, 4.0 / 3.0, detail::kLineStep,
                   fwd ? std::vector{CoefficientKind::alpha, CoefficientKind::alpha_T}
                       : std::vector{CoefficientKind::rev_alpha, CoefficientKind::rev_alpha_T}};
    fig.table = run_sweep(spec, opt);
    if (!all_optimal(fig.table)) throw SolverFailure(id + ": solver did not converge everywhere");
    fig.plot = fwd ? detail::plot_columns(fig.table, "Doeblin coefficients of D_p (qubit)", "p",
                                          {{"alpha", false}, {"alphaT", false}})
                   : detail::plot_columns(fig.table, "reverse Doeblin coefficients of D_p (qubit)",
                                          "p", {{"rev", false}, {"revT", false}});
  } else if (id == "fig3") {
    const std::vector<double> etas = {0.5, 0.6, 0.7, 0.8};
    const auto grid = detail::unit_line_grid();
    fig.table.header = {"p"};
    for (double e : etas) {
      fig.table.header.push_back("one_minus_alpha_eta" + detail::fixed(e, 1));
      fig.table.header.push_back("one_minus_alphaH_eta" + detail::fixed(e, 1));
    }
    fig.table.rows = parallel_map<std::vector<std::string>>(grid.size(), opt.jobs, [&](std::size_t i) {
      std::vector<std::string> row{format_number(grid[i])};
      for (double e : etas) {
        const QuantumChannel n = gad(grid[i], e);
        row.push_back(format_number(1.0 - require_value(alpha(n, st))));
        row.push_back(format_number(1.0 - require_value(alpha_hermitian(n, st))));
      }
      return row;
    });
    std::vector<std::pair<std::string, bool>> cols;
    for (double e : etas) {
      cols.emplace_back("one_minus_alpha_eta" + detail::fixed(e, 1), true);
      cols.emplace_back("one_minus_alphaH_eta" + detail::fixed(e, 1), false);
    }
    fig.plot = detail::plot_columns(fig.table, "1-alpha (dashed) vs 1-alphaH (solid), GAD", "p", cols);
  } else if (id == "fig5") {
    fig.table = detail::gad_surface(
        {"rev"},
        [&](const QuantumChannel& n) { return std::vector{require_value(reverse_alpha(n, st))}; },
        opt);
    fig.plot = detail::plot_surface(fig.table, "reverse alpha of GAD A_{p,eta}", "rev", shown_p);
  } else if (id == "fig6") {
    fig.table = detail::gad_surface(
        {"lower_one_minus_rev", "upper_one_minus_alpha"},
        [&](const QuantumChannel& n) {
          return std::vector{1.0 - require_value(reverse_alpha(n, st)),
                             1.0 - require_value(alpha(n, st))};
        },
        opt);
    fig.plot = detail::plot_surface(fig.table, "data processing range bounds, GAD (upper)",
                                    "upper_one_minus_alpha", shown_p);
    const LinePlot lower = detail::plot_surface(fig.table, "", "lower_one_minus_rev", shown_p);
    for (auto s : lower.series) {
      s.dashed = true;
      fig.plot.series.push_back(std::move(s));
    }
    fig.plot.title = "data processing range bounds, GAD (solid upper, dashed lower)";
    fig.plot.y_label = "bound";
  } else if (id == "fig7") {
    const auto grid = detail::unit_line_grid();
    fig.table.header = {"p", "one_minus_rev", "abs_one_minus_2p", "eta_tr"};
    fig.table.rows = parallel_map<std::vector<std::string>>(grid.size(), opt.jobs, [&](std::size_t i) {
      const double p = grid[i];
      const QuantumChannel n = bitflip(p);
      return std::vector<std::string>{format_number(p),
                                      format_number(1.0 - require_value(reverse_alpha(n, st))),
                                      format_number(std::abs(1.0 - 2.0 * p)),
                                      format_number(eta_tr_qubit(n))};
    });
    fig.plot = detail::plot_columns(fig.table, "data processing range of the bit-flip channel", "p",
                                    {{"one_minus_rev", false},
                                     {"abs_one_minus_2p", false},
                                     {"eta_tr", false}});
  } else if (id == "fig8") {
    const auto grid = detail::unit_line_grid();
    fig.table.header = {"eta", "one_minus_alpha", "one_minus_alphaH", "one_minus_revH",
                        "one_minus_rev"};
    fig.table.rows = parallel_map<std::vector<std::string>>(grid.size(), opt.jobs, [&](std::size_t i) {
      const QuantumChannel n = gad(1.0, grid[i]);
      return std::vector<std::string>{
          format_number(grid[i]), format_number(1.0 - require_value(alpha(n, st))),
          format_number(1.0 - require_value(alpha_hermitian(n, st))),
          format_number(1.0 - require_value(reverse_alpha_hermitian(n, st))),
          format_number(1.0 - require_value(reverse_alpha(n, st)))};
    });
    fig.plot = detail::plot_columns(fig.table, "bounds for amplitude damping A_{1,eta}", "eta",
                                    {{"one_minus_alpha", false},
                                     {"one_minus_alphaH", true},
                                     {"one_minus_revH", true},
                                     {"one_minus_rev", false}});
  } else {
    throw InvalidInput("unknown figure '" + id + "' (known: fig1..fig8)");
  }
  return fig;
}

}  // namespace qdoeblin
