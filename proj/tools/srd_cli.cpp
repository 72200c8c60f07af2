// Command-line front end: one verb per experiment, CSV plus manifest.json per output directory.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "srd/config.hpp"
#include "srd/errors.hpp"
#include "srd/harness.hpp"

using namespace srd;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seedGiven = false;
  std::string out;
  int threads = 0;
  std::string sweep;
  std::string metric;
};

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : RunConfig::load(c.config);
  if (c.seedGiven) cfg.seed = c.seed;
  if (!c.out.empty()) cfg.outputDir = c.out;
  if (c.threads > 0) cfg.threads = c.threads;
  if (!c.sweep.empty()) applySweepFlag(cfg, c.sweep);
  if (!c.metric.empty()) cfg.sweep.metric = c.metric;
  cfg.validate();
  std::filesystem::create_directories(cfg.outputDir);
  return cfg;
}

std::vector<double> gammaValues(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.sweep.axis == "gamma" ? cfg.sweep.values : fallback;
}

int eigSweep(const RunConfig& cfg) {
  DomainGrid grid(cfg.length, cfg.elements, cfg.subgrid);
  std::vector<EigenSystem> systems;
  for (double g : gammaValues(cfg, {0.0, 0.1, 0.5, 1.0})) {
    CoupledOperator op(grid, g);
    systems.push_back(eigGamma(op, std::min(op.reducedSize(), 5 * grid.elements())));
    std::cout << "gamma " << g << ": lowest " << systems.back().values.front() << ", "
              << systems.back().clusters.size() << " clusters\n";
  }
  writeEigenCsv(cfg.outputDir + "/eigenvalues.csv", systems);
  writeManifest(cfg.outputDir, cfg, "eig-sweep");
  return 0;
}

int expansionCheck(const RunConfig& cfg) {
  DomainGrid grid(cfg.length, cfg.elements, cfg.subgrid);
  std::ofstream out(cfg.outputDir + "/expansion.csv");
  out << "gamma,lambda0,remainder_norm\n" << std::setprecision(17);
  std::vector<double> gs, rs, ls;
  for (double g : gammaValues(cfg, {0.2, 0.1, 0.05, 0.025})) {
    CoupledOperator op(grid, g);
    EigenSystem eig = eigGamma(op, grid.elements());
    GroundModeExpansion e = expandGroundMode(eig, grid);
    const double l0 = eig.values[groundModeIndex(eig)];
    out << g << ',' << l0 << ',' << e.remainderNorm << '\n';
    gs.push_back(g);
    rs.push_back(e.remainderNorm);
    ls.push_back(l0);
  }
  OrderFit fr = fitLogLog(gs, rs), fl = fitLogLog(gs, ls);
  std::cout << "remainder order " << fr.order << ", lambda0 order " << fl.order << '\n';
  writeManifest(cfg.outputDir, cfg, "expansion-check", {{"remainderOrder", fr.order}, {"lambda0Order", fl.order}});
  return 0;
}

int coeffs(const RunConfig& cfg) {
  SimulationSetup s = SimulationSetup::build(cfg);
  writeCoefficientCsv(cfg.outputDir + "/coefficients.csv", s.coeffs, s.stats);
  std::ofstream out(cfg.outputDir + "/fast_modes.csv");
  out << "j,mode,lambda,qh,variance\n" << std::setprecision(17);
  for (int j = 0; j < s.grid.elements(); ++j)
    for (int i = 0; i < s.stats.modes; ++i)
      out << j + 1 << ',' << i + 1 << ',' << s.stats.lambdaAt(j, i) << ',' << s.stats.qhAt(j, i) << ','
          << s.stats.varianceAt(j, i) << '\n';
  writeManifest(cfg.outputDir, cfg, "coeffs");
  return 0;
}

int simulate(const RunConfig& cfg) {
  EnsembleRun run = runEnsemble(cfg, cfg.outputDir + "/members.jsonl");
  run.stats.writeCsv(cfg.outputDir + "/ensemble.csv");
  if (run.resumed > 0) std::cout << "resumed " << run.resumed << " members from the checkpoint\n";
  writeManifest(cfg.outputDir, cfg, "simulate", {{"members", run.samples.size()}});
  return 0;
}

int compare(const RunConfig& cfg) {
  ComparisonReport rep = compareModels(cfg);
  rep.writeCsv(cfg.outputDir + "/compare.csv");
  std::ofstream(cfg.outputDir + "/report.json") << rep.toJson().dump(2) << '\n';
  std::cout << rep.verdict << '\n';
  writeManifest(cfg.outputDir, cfg, "compare");
  return 0;
}

int converge(const RunConfig& cfg) {
  if (cfg.sweep.axis.empty()) throw ConfigError({"converge needs a sweep (config or --sweep AXIS=v1,v2,...)"});
  ConvergenceTable t = convergenceStudy(cfg);
  t.writeCsv(cfg.outputDir + "/convergence.csv");
  std::cout << t.metric << " along " << t.axis << ": order " << t.fit.order << " (r^2 " << t.fit.rSquared << ")\n";
  writeManifest(cfg.outputDir, cfg, "converge", {{"order", t.fit.order}, {"fitAgainst", t.fitAgainst}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic reaction-diffusion discretization toolkit"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config, "run configuration (JSON)")->check(CLI::ExistingFile);
  auto* seed = app.add_option("--seed", c.seed, "master seed");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--sweep", c.sweep, "sweep AXIS=v1,v2,...");
  app.set_version_flag("--version", kVersion);

  struct Verb {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Verb verbs[] = {
      {"eig-sweep", "eigenvalues of the coupled operator across gamma", eigSweep},
      {"expansion-check", "ground-mode expansion remainder across gamma", expansionCheck},
      {"coeffs", "averaged coefficients and fast-mode statistics", coeffs},
      {"simulate", "Monte-Carlo ensemble (resumable)", simulate},
      {"compare", "weak errors of the grid models against the reference SPDE", compare},
      {"converge", "convergence study along the sweep axis", converge},
  };
  int (*chosen)(const RunConfig&) = nullptr;
  for (const Verb& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    sub->fallthrough();
    if (std::string(v.name) == "converge") sub->add_option("--metric", c.metric, "error metric");
    sub->callback([&chosen, run = v.run] { chosen = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.seedGiven = seed->count() > 0;
  try {
    return chosen(resolve(c));
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
