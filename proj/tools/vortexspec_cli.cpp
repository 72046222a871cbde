// vortexspec: command-line driver for the studies. Every run writes its
// outputs plus manifest.json into --out. Exit 0 if all gates pass, 1 on a
// gate failure, 2 on a config error.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortexspec/acceptance.hpp"
#include "vortexspec/io.hpp"
#include "vortexspec/semigroup.hpp"
#include "vortexspec/spectral.hpp"
#include "vortexspec/study.hpp"

using namespace vortex;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& field, const std::string& msg) : std::runtime_error(field + ": " + msg) {}
};

struct RunConfig {
  // grid
  int n = 400;
  double r_max = 12.0;
  std::string scheme = "chebyshev";
  bool fixed_grid = false;
  // mode
  int k = 1;
  int k_max = 8;
  std::vector<int> k_list;
  double alpha = 0.0;
  std::vector<double> alphas = default_alpha_grid();
  // tolerances and knobs
  double rtol = 1e-5;
  double robust_tol = 1e-4;
  bool no_robust = false;
  int count = 20;
  std::string delta_policy = "bauer-fike";
  double delta = 0.0;
  int n_regions = 40;
  int n_first = 3;
  int n_random = 200;
  std::vector<std::string> lemmas{"A1_f", "A1_sigma", "A2", "A3"};
  double tau_max = 0.0;
  int n_taus = 60;
  std::vector<int> only;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out = "out";
};

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field, msg);
}

GridScheme parse_scheme(const std::string& s) {
  try {
    return grid_scheme_from_string(s);
  } catch (const std::exception&) {
    throw ConfigError("grid.scheme", "unknown scheme '" + s + "'");
  }
}

GridPolicy policy_of(const RunConfig& c) {
  require(c.n >= 8, "grid.n", "must be >= 8, got " + std::to_string(c.n));
  require(c.r_max >= 4.0, "grid.r_max", "must be >= 4, got " + io::num(c.r_max));
  GridPolicy p;
  p.n = c.n;
  p.r_max = c.r_max;
  p.scheme = parse_scheme(c.scheme);
  p.adaptive = !c.fixed_grid;
  return p;
}

void check_alphas(const std::vector<double>& a) {
  require(!a.empty(), "alphas", "empty");
  for (size_t i = 0; i < a.size(); ++i) {
    require(std::isfinite(a[i]) && a[i] >= 0, "alphas[" + std::to_string(i) + "]", "must be finite and >= 0");
    if (i) require(a[i] > a[i - 1], "alphas[" + std::to_string(i) + "]", "must be strictly increasing");
  }
}

std::vector<int> k_list_or(const RunConfig& c, std::vector<int> dflt) {
  auto ks = c.k_list.empty() ? dflt : c.k_list;
  for (size_t i = 0; i < ks.size(); ++i)
    require(ks[i] >= 1, "k_list[" + std::to_string(i) + "]", "must be >= 1");
  return ks;
}

ordered_json config_echo(const std::string& cmd, const RunConfig& c) {
  ordered_json j;
  j["command"] = cmd;
  j["grid"] = {{"n", c.n}, {"r_max", c.r_max}, {"scheme", c.scheme}, {"adaptive", !c.fixed_grid}};
  j["k"] = c.k;
  j["k_max"] = c.k_max;
  j["k_list"] = c.k_list;
  j["alpha"] = c.alpha;
  j["alphas"] = c.alphas;
  j["rtol"] = c.rtol;
  j["robust_tol"] = c.robust_tol;
  j["check_robust"] = !c.no_robust;
  j["count"] = c.count;
  j["delta_policy"] = c.delta_policy;
  j["delta"] = c.delta;
  j["n_regions"] = c.n_regions;
  j["n_first"] = c.n_first;
  j["n_random"] = c.n_random;
  j["lemmas"] = c.lemmas;
  j["tau_max"] = c.tau_max;
  j["n_taus"] = c.n_taus;
  j["only"] = c.only;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["out"] = c.out;
  return j;
}

struct Run {
  fs::path out;
  io::RunManifest m;

  void gate(const std::string& name, bool ok, const std::string& detail = "") {
    m.gates.push_back({name, ok, detail});
    std::printf("%s %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : " | ", detail.c_str());
  }
  void file(const std::string& name) { m.files.push_back(name); }
};

// ---- commands ----

void cmd_spectrum(const RunConfig& c, Run& run) {
  require(c.k >= 1, "k", "must be >= 1, got " + std::to_string(c.k));
  require(std::isfinite(c.alpha) && c.alpha >= 0, "alpha", "must be finite and >= 0");
  require(c.rtol > 0, "rtol", "must be > 0");
  require(c.count >= 1, "count", "must be >= 1");
  const GridPolicy p = policy_of(c);
  const GridMeta gm = p.for_beta(ModeParams{c.k, c.alpha}.beta());
  RobustSpectrum s = robust_spectrum(c.k, c.alpha, gm, c.rtol);
  const Index m = std::min<Index>(c.count, s.eigenvalues.size());
  s.eigenvalues.conservativeResize(m);
  s.residuals.conservativeResize(m);
  s.robust.resize(m);
  io::write_spectrum_csv(run.out / "spectrum.csv", c.k, c.alpha, s);
  run.file("spectrum.csv");
  run.gate("leading eigenvalue grid-robust", s.robust[0],
           "lambda_1 = " + io::num(s.eigenvalues[0].real()) + (s.eigenvalues[0].imag() < 0 ? " - " : " + ") +
               io::num(std::abs(s.eigenvalues[0].imag())) + "i on n=" + std::to_string(gm.n) +
               ", R=" + io::num(gm.r_max));
  run.gate("residuals", s.residuals.maxCoeff() < 1e-6, "max " + io::num(s.residuals.maxCoeff()));
}

void cmd_sweep(const RunConfig& c, Run& run) {
  check_alphas(c.alphas);
  require(c.k_max >= 2, "k_max", "must be >= 2");
  SweepConfig s;
  s.alphas = c.alphas;
  s.k_max = c.k_max;
  s.policy = policy_of(c);
  s.check_robust = !c.no_robust;
  s.robust_tol = c.robust_tol;
  s.workers = c.workers;
  SweepResult r;
  try {
    r = run_sweep(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("alphas", e.what());
  }
  io::write_sweep_csv(run.out / "sweep.csv", r);
  io::write_sweep_modes_csv(run.out / "sweep_modes.csv", r);
  io::write_json(run.out / "sweep_fit.json", io::sweep_fit_json(r));
  run.file("sweep.csv");
  run.file("sweep_modes.csv");
  run.file("sweep_fit.json");
  run.gate("sigma exponent in [0.45, 0.55]", r.sigma_exponent >= 0.45 && r.sigma_exponent <= 0.55,
           io::num(r.sigma_exponent));
  run.gate("psi exponent in [0.28, 0.38]", r.psi_exponent >= 0.28 && r.psi_exponent <= 0.38,
           io::num(r.psi_exponent));
  run.gate("Sigma >= Psi >= 1", r.ordering_holds(1e-6));
  run.gate("monotone mode bound", r.monotone_violations == 0,
           std::to_string(r.monotone_violations) + " violations");
  for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
}

void cmd_gap_decay(const RunConfig& c, Run& run) {
  check_alphas(c.alphas);
  const auto ks = k_list_or(c, {1, 2});
  const GridPolicy p = policy_of(c);
  ordered_json fits = ordered_json::array();
  for (int k : ks) {
    const auto g = resolvent_gap_decay(c.alphas, k, p, c.workers);
    const std::string name = "gap_decay_k" + std::to_string(k) + ".csv";
    io::write_gap_decay_csv(run.out / name, g);
    run.file(name);
    fits.push_back(ordered_json::parse(io::gap_fit_json(g)));
    run.gate("gap decay k=" + std::to_string(k), g.passed,
             "exponent " + io::num(g.exponent) + ", C " + io::num(g.C));
  }
  io::write_json(run.out / "gap_fit.json", fits.dump(1));
  run.file("gap_fit.json");
}

void cmd_coercivity(const RunConfig& c, Run& run) {
  check_alphas(c.alphas);
  require(c.n_random >= 1, "n_random", "must be >= 1");
  const auto ks = k_list_or(c, {1, 2, 4, 8});
  const auto rep = coercivity_table(c.alphas, ks, policy_of(c), c.seed, c.n_random, c.workers);
  io::write_coercivity_csv(run.out / "coercivity.csv", rep.rows);
  io::write_coercivity_csv(run.out / "coercivity_grouped.csv", rep.grouped);
  run.file("coercivity.csv");
  run.file("coercivity_grouped.csv");
  run.gate("bounded", rep.bounded);
  run.gate("||r^2 Z1hat^-1|| <= 1", rep.r2_Z1inv_max <= 1.0 + 1e-6, io::num(rep.r2_Z1inv_max));
  run.gate("alpha-stable within 10%", rep.stable, "max spread " + io::num(rep.max_spread));
}

void cmd_appendix_scan(const RunConfig& c, Run& run) {
  require(!c.lemmas.empty(), "lemmas", "empty");
  ScanResolution res;
  res.seed = c.seed;
  std::vector<InequalityScanReport> reps;
  for (size_t i = 0; i < c.lemmas.size(); ++i) {
    LemmaId id;
    try {
      id = lemma_id_from_string(c.lemmas[i]);
    } catch (const std::exception&) {
      throw ConfigError("lemmas[" + std::to_string(i) + "]", "unknown id '" + c.lemmas[i] + "'");
    }
    if (id != LemmaId::A1_f && id != LemmaId::A1_sigma && id != LemmaId::A2 && id != LemmaId::A3)
      throw ConfigError("lemmas[" + std::to_string(i) + "]",
                        "'" + c.lemmas[i] + "' is covered by the coercivity command");
    reps.push_back(appendix_scan(id, res));
    const auto& r = reps.back();
    run.gate("scan " + c.lemmas[i], r.passed(),
             std::to_string(r.violations) + " violations / " + std::to_string(r.n_points) + ", constant " +
                 io::num(r.fitted_constant));
  }
  io::write_json(run.out / "scans.json", io::scan_json(reps));
  run.file("scans.json");
}

void cmd_figure_data(const RunConfig& c, Run& run) {
  require(c.k >= 1, "k", "must be >= 1");
  require(std::isfinite(c.alpha) && c.alpha > 0, "alpha", "must be finite and > 0");
  require(c.n_regions >= 1, "n_regions", "must be >= 1");
  require(c.n_first >= 1 && c.n_first <= c.n_regions, "n_first", "must be in [1, n_regions]");
  DeltaChoice d;
  try {
    d.policy = delta_policy_from_string(c.delta_policy);
  } catch (const std::exception&) {
    throw ConfigError("delta_policy", "unknown policy '" + c.delta_policy + "'");
  }
  if (d.policy == DeltaPolicy::Fixed) require(c.delta > 0, "delta", "must be > 0 with delta_policy fixed");
  d.value = c.delta;
  const auto fd = figure_dataset(c.k, c.alpha, d, policy_of(c), c.n_regions, c.n_first);
  io::write_json(run.out / "regions.json", io::regions_json(fd));
  io::write_json(run.out / "figure_meta.json", io::figure_meta_json(fd));
  io::write_spectrum_csv(run.out / "spectrum.csv", c.k, c.alpha, fd.spectrum);
  run.file("regions.json");
  run.file("figure_meta.json");
  run.file("spectrum.csv");
  run.gate("robust eigenvalues contained", fd.all_contained,
           std::to_string(fd.eigenvalues.size()) + " robust, delta " + io::num(fd.delta));
  run.gate("first regions hit", fd.first_regions_hit);
}

void cmd_semigroup(const RunConfig& c, Run& run) {
  require(c.k >= 1, "k", "must be >= 1");
  require(std::isfinite(c.alpha) && c.alpha >= 0, "alpha", "must be finite and >= 0");
  require(c.n_taus >= 4, "n_taus", "must be >= 4");
  require(c.tau_max >= 0, "tau_max", "must be >= 0 (0 selects it from the spectrum)");
  const GridPtr g = build_grid(policy_of(c).for_beta(ModeParams{c.k, c.alpha}.beta()));
  const auto A = mode_operator(g, c.k, c.alpha);
  const auto e = eig(A);
  const double gap = e.eigenvalues[0].real() - e.eigenvalues[1].real();
  const double tmax = c.tau_max > 0 ? c.tau_max : std::max(12.0 / std::abs(e.abscissa), 20.0 / gap);
  std::vector<double> taus;
  for (int i = 1; i <= c.n_taus; ++i) taus.push_back(tmax * i / c.n_taus);
  const VectorXd& r = g->nodes();
  const VectorXcd w0 =
      (r.array().pow(1.5) * (-r.array().square() / 8).exp() * (1.0 + 0.3 * r.array())).matrix().cast<cplx>();
  const auto tr = propagate(A, w0, taus);
  const auto fit = decay_rate(tr, {tmax / 2, tmax});
  io::write_trajectory_csv(run.out / "trajectory.csv", tr);
  ordered_json j;
  j["method"] = tr.method;
  j["abscissa"] = e.abscissa;
  j["rate"] = fit.rate;
  j["window"] = {fit.window.first, fit.window.second};
  j["r_squared"] = fit.r_squared;
  j["hump"] = fit.hump;
  j["truncated"] = fit.truncated;
  io::write_json(run.out / "decay.json", j.dump(1));
  run.file("trajectory.csv");
  run.file("decay.json");
  const double err = std::abs(fit.rate / e.abscissa - 1.0);
  run.gate("decay rate within 2% of abscissa", err < 0.02 && fit.accepted,
           "rate " + io::num(fit.rate) + ", abscissa " + io::num(e.abscissa));
}

void cmd_selftest(const RunConfig& c, Run& run) {
  for (size_t i = 0; i < c.only.size(); ++i)
    require(c.only[i] >= 1 && c.only[i] <= 11, "only[" + std::to_string(i) + "]", "criteria are numbered 1..11");
  AcceptanceOptions opt;
  opt.only = c.only;
  opt.workers = c.workers;
  ordered_json arr = ordered_json::array();
  run_acceptance(opt, [&](const CriterionResult& r) {
    std::printf("%s\n", format_line(r).c_str());
    std::fflush(stdout);
    run.m.gates.push_back({"criterion " + std::to_string(r.id), r.passed, r.detail});
    arr.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  });
  io::write_json(run.out / "selftest.json", arr.dump(1));
  run.file("selftest.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the mode-restricted linearized Oseen vortex operators"};
  app.set_config("--config", "", "key = value config file (TOML/INI)");
  app.set_version_flag("--version", io::kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  app.add_option("--out", c.out, "output directory")->capture_default_str();
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--workers", c.workers, "worker threads (0: hardware)")->capture_default_str();
  app.add_option("--n", c.n, "grid points (minimum under the adaptive policy)")->capture_default_str();
  app.add_option("--r-max", c.r_max, "truncation radius (minimum under the adaptive policy)")->capture_default_str();
  app.add_option("--scheme", c.scheme, "chebyshev or uniform")->capture_default_str();
  app.add_flag("--fixed-grid", c.fixed_grid, "do not grow the grid with beta");

  const std::map<std::string, std::string> help{
      {"spectrum", "eigenvalues of one mode operator with residuals and grid robustness"},
      {"sweep", "Sigma and Psi over alpha and modes, with power-law fits"},
      {"gap-decay", "resolvent gap d(alpha) of the model inverses"},
      {"coercivity", "operator norms behind the coercivity bounds"},
      {"appendix-scan", "ratio scans of the appendix inequalities"},
      {"figure-data", "localization regions and robust eigenvalues for plotting"},
      {"semigroup", "norm trajectory and decay rate of exp(tau A)"},
      {"selftest", "acceptance suite, one line per criterion"}};
  std::map<std::string, CLI::App*> sub;
  for (const auto& [name, text] : help) sub[name] = app.add_subcommand(name, text);

  for (auto* s : {sub["spectrum"], sub["figure-data"], sub["semigroup"]}) {
    s->add_option("--k", c.k, "mode")->capture_default_str();
    s->add_option("--alpha", c.alpha, "circulation Reynolds number")->capture_default_str();
  }
  sub["spectrum"]->add_option("--rtol", c.rtol, "grid-robustness tolerance")->capture_default_str();
  sub["spectrum"]->add_option("--count", c.count, "eigenvalues written")->capture_default_str();
  for (auto* s : {sub["sweep"], sub["gap-decay"], sub["coercivity"]})
    s->add_option("--alphas", c.alphas, "alpha grid")->delimiter(',');
  sub["sweep"]->add_option("--k-max", c.k_max)->capture_default_str();
  sub["sweep"]->add_option("--robust-tol", c.robust_tol)->capture_default_str();
  sub["sweep"]->add_flag("--no-robust", c.no_robust, "skip the refined-grid check");
  for (auto* s : {sub["gap-decay"], sub["coercivity"]})
    s->add_option("--k-list", c.k_list, "modes")->delimiter(',');
  sub["coercivity"]->add_option("--n-random", c.n_random)->capture_default_str();
  sub["appendix-scan"]->add_option("--lemmas", c.lemmas, "A1_f, A1_sigma, A2, A3")->delimiter(',');
  sub["figure-data"]->add_option("--delta-policy", c.delta_policy, "bauer-fike, lemma, separation, fixed")
      ->capture_default_str();
  sub["figure-data"]->add_option("--delta", c.delta, "delta for the fixed policy");
  sub["figure-data"]->add_option("--n-regions", c.n_regions)->capture_default_str();
  sub["figure-data"]->add_option("--n-first", c.n_first)->capture_default_str();
  sub["semigroup"]->add_option("--tau-max", c.tau_max, "0: chosen from the spectrum")->capture_default_str();
  sub["semigroup"]->add_option("--n-taus", c.n_taus)->capture_default_str();
  sub["selftest"]->add_option("--only", c.only, "criterion ids")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string cmd;
  for (const auto& [name, s] : sub)
    if (s->parsed()) cmd = name;

  Run run;
  run.out = c.out;
  run.m.command = cmd;
  run.m.config_json = config_echo(cmd, c).dump();
  run.m.started = io::utc_now();
  try {
    require(c.workers >= 0, "workers", "must be >= 0");
    require(!c.out.empty(), "out", "empty path");
    fs::create_directories(run.out);
    if (cmd == "spectrum") cmd_spectrum(c, run);
    else if (cmd == "sweep") cmd_sweep(c, run);
    else if (cmd == "gap-decay") cmd_gap_decay(c, run);
    else if (cmd == "coercivity") cmd_coercivity(c, run);
    else if (cmd == "appendix-scan") cmd_appendix_scan(c, run);
    else if (cmd == "figure-data") cmd_figure_data(c, run);
    else if (cmd == "semigroup") cmd_semigroup(c, run);
    else if (cmd == "selftest") cmd_selftest(c, run);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error in %s: %s\n", cmd.c_str(), e.what());
    return 1;
  }
  run.m.finished = io::utc_now();
  io::write_manifest(run.out, run.m);
  return run.m.all_passed() ? 0 : 1;
}
