// qdoeblin: Doeblin-type coefficients of quantum channels from the command line.
//
//   qdoeblin coeff   --channel depolarizing --d 2 --p 0.5 --kind alpha
//   qdoeblin sweep   --channel depolarizing --sweep p --start 0 --stop 1 --step 0.1 --kind alpha,rev --out a.csv
//   qdoeblin figures --which fig2 --outdir figs
//   qdoeblin check   --suite all
//
// Exit codes: 0 ok, 1 usage, 2 solver failure, 3 I/O, 4 check failure.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

#include "qdoeblin/qdoeblin.hpp"

namespace {

using namespace qdoeblin;

enum Exit { kOk = 0, kUsage = 1, kSolver = 2, kIo = 3, kCheck = 4 };

const char* kParamNames[] = {"d", "p", "q", "eps", "eta", "b", "px", "py", "pz",
                             "rx", "ry", "rz", "d_in", "d_out", "env"};

struct ChannelArgs {
  std::string name;
  std::string file;
  std::map<std::string, std::optional<double>> shortcuts;
  std::vector<std::string> extra;  // key=value

  void attach(CLI::App* app) {
    app->add_option("--channel", name, "builtin channel family");
    app->add_option("--file", file, "channel description file (JSON)");
    for (const char* key : kParamNames)
      app->add_option(std::string("--") + key, shortcuts[key], std::string("channel parameter ") + key);
    app->add_option("--param", extra, "extra channel parameter key=value")->take_all();
  }

  ParamMap params() const {
    ParamMap m;
    for (const auto& [k, v] : shortcuts)
      if (v) m[k] = *v;
    for (const auto& kv : extra) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InvalidInput("--param expects key=value, got '" + kv + "'");
      try {
        m[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw InvalidInput("--param value is not a number: '" + kv + "'");
      }
    }
    return m;
  }

  QuantumChannel channel() const {
    if (name.empty() == file.empty()) throw InvalidInput("give exactly one of --channel or --file");
    return file.empty() ? make_channel(name, params()) : load_channel(file);
  }

  std::string id() const {
    if (!file.empty()) return file;
    std::string s = name;
    for (const auto& [k, v] : params()) s += ";" + k + "=" + format_number(v);
    return s;
  }
};

std::vector<CoefficientKind> parse_kinds(const std::vector<std::string>& raw, bool combine_th) {
  std::vector<CoefficientKind> kinds;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      const auto k = parse_kind(tok);
      if (!k) throw InvalidInput("unknown kind '" + tok + "' (known: alpha, alphaT, alphaH, p1, rev, revT, revH"
                                 + std::string(combine_th ? ", alphaTH" : "") + ")");
      if (*k == CoefficientKind::alpha_TH && !combine_th)
        throw InvalidInput("kind alphaTH requires --combine-th");
      kinds.push_back(*k);
    }
  }
  if (combine_th && std::find(kinds.begin(), kinds.end(), CoefficientKind::alpha_TH) == kinds.end())
    kinds.push_back(CoefficientKind::alpha_TH);
  if (kinds.empty()) throw InvalidInput("no --kind given");
  return kinds;
}

int run(int argc, char** argv) {
  CLI::App app{"Doeblin coefficients of quantum channels via semidefinite programming"};
  app.require_subcommand(1);
  unsigned jobs = default_jobs();
  std::uint64_t seed = 20240601;
  double tol = 1e-8;
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--tol", tol, "solver duality-gap target")->check(CLI::PositiveNumber);

  ChannelArgs coeff_ch;
  std::vector<std::string> coeff_kinds;
  bool coeff_th = false;
  auto* coeff = app.add_subcommand("coeff", "compute coefficients of one channel");
  coeff_ch.attach(coeff);
  coeff->add_option("--kind", coeff_kinds, "alpha, alphaT, alphaH, p1, rev, revT, revH")->required();
  coeff->add_flag("--combine-th", coeff_th, "also compute the combined transpose+hermitian alphaTH");

  ChannelArgs sweep_ch;
  std::vector<std::string> sweep_kinds;
  bool sweep_th = false;
  SweepSpec spec;
  std::string sweep_out, sweep_svg;
  auto* sweep = app.add_subcommand("sweep", "sweep one channel parameter over a grid");
  sweep_ch.attach(sweep);
  sweep->add_option("--sweep", spec.parameter, "parameter to sweep")->required();
  sweep->add_option("--start", spec.start)->required();
  sweep->add_option("--stop", spec.stop)->required();
  sweep->add_option("--step", spec.step)->required();
  sweep->add_option("--kind", sweep_kinds)->required();
  sweep->add_flag("--combine-th", sweep_th);
  sweep->add_option("--out", sweep_out, "CSV output path")->required();
  sweep->add_option("--svg", sweep_svg, "optional SVG plot path");

  std::vector<std::string> which;
  std::string outdir = ".";
  auto* figures = app.add_subcommand("figures", "reproduce figure data as CSV + SVG");
  figures->add_option("--which", which, "fig1..fig8 or all")->required();
  figures->add_option("--outdir", outdir);

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "run the seeded property suites");
  check->add_option("--suite", suite, "linalg, channel, sdp, doeblin, classical or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  SweepOptions opt;
  opt.jobs = jobs;
  opt.settings.gap_tol = tol;

  if (coeff->parsed()) {
    const auto kinds = parse_kinds(coeff_kinds, coeff_th);
    const QuantumChannel n = coeff_ch.channel();
    Table t;
    t.header.push_back("channel");
    std::vector<std::string> row{coeff_ch.id()};
    bool failed = false;
    for (auto k : kinds) {
      const CoefficientResult r = compute(k, n, opt.settings);
      t.header.push_back(to_string(k));
      t.header.push_back(std::string(to_string(k)) + "_status");
      row.push_back(format_value(r));
      row.push_back(format_status(r));
      failed = failed || !r.ok();
    }
    t.rows.push_back(row);
    write_csv(t, std::cout);
    return failed ? kSolver : kOk;
  }

  if (sweep->parsed()) {
    spec.kinds = parse_kinds(sweep_kinds, sweep_th);
    if (!sweep_ch.file.empty()) throw InvalidInput("sweep needs a builtin --channel family");
    spec.family = sweep_ch.name;
    spec.fixed = sweep_ch.params();
    if (spec.family.empty()) throw InvalidInput("sweep needs --channel");
    const Table t = run_sweep(spec, opt);
    write_csv_file(t, sweep_out);
    if (!sweep_svg.empty()) {
      std::vector<std::pair<std::string, bool>> cols;
      for (auto k : spec.kinds) cols.emplace_back(to_string(k), false);
      write_svg_file(detail::plot_columns(t, spec.family + " sweep", spec.parameter, cols), sweep_svg);
    }
    std::cout << "wrote " << t.rows.size() << " rows to " << sweep_out << '\n';
    return all_optimal(t) ? kOk : kSolver;
  }

  if (figures->parsed()) {
    std::vector<std::string> ids;
    for (const auto& w : which) {
      if (w == "all") ids.insert(ids.end(), figure_ids().begin(), figure_ids().end());
      else ids.push_back(w);
    }
    for (const auto& id : ids)
      if (std::find(figure_ids().begin(), figure_ids().end(), id) == figure_ids().end())
        throw InvalidInput("unknown figure '" + id + "' (known: fig1..fig8, all)");
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw IoError("cannot create '" + outdir + "': " + ec.message());
    for (const auto& id : ids) {
      const auto t0 = std::chrono::steady_clock::now();
      const Figure f = make_figure(id, opt);
      const std::string base = (std::filesystem::path(outdir) / id).string();
      write_csv_file(f.table, base + ".csv");
      write_svg_file(f.plot, base + ".svg");
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << id << ": " << f.table.rows.size() << " rows -> " << base << ".csv, .svg ("
                << format_number(std::round(secs * 10) / 10) << " s)\n";
    }
    return kOk;
  }

  if (check->parsed()) {
    std::vector<std::string> suites;
    if (suite == "all") suites = check_suites();
    else suites = {suite};
    std::cout << "seed " << seed << '\n';
    CheckReport total{"all"};
    for (const auto& s : suites) {
      const CheckReport r = run_check_suite(s, seed);
      std::cout << "suite " << s << ": " << r.passed << " passed, " << r.failed << " failed\n";
      total.merge(r);
    }
    if (!total.ok()) {
      std::cout << "first counterexample: " << total.first_failure << '\n';
      return kCheck;
    }
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qdoeblin::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const qdoeblin::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const qdoeblin::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
