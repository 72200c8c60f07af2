#include "srd/harness.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "srd/errors.hpp"
#include "srd/numerics.hpp"

namespace srd {

const char* const kVersion = "0.3.0";

namespace {

bool listed(const RunConfig& cfg, const std::string& name) {
  return std::find(cfg.models.begin(), cfg.models.end(), name) != cfg.models.end();
}

bool isGridModel(const std::string& name) { return name != "reference" && name != "coupled"; }

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

}  // namespace

SimulationSetup SimulationSetup::build(const RunConfig& cfg) {
  cfg.validate();
  DomainGrid grid(cfg.length, cfg.elements, cfg.subgrid);
  const double h = grid.spacing();
  const double cutoff = defaultFastCutoff(grid);
  const int kMax = static_cast<int>(std::floor(std::sqrt(cutoff) * h / std::numbers::pi + 1e-9));
  QWienerSpec spec = cfg.noiseSpec();
  EigenSystem eig0 = eigGamma0(grid, kMax);
  ElementModeSet modes0 = elementModes(eig0, kMax);
  ProjectionOptions popt{cfg.halveGroundVariance};
  ElementNoiseProjection proj0 = projectToElementModes(spec, modes0, grid, popt);
  FastModeStats stats = ouStationaryStats(proj0, eig0, cfg.sigma, cfg.reading, cutoff);
  AveragedCoeffs coeffs = averagedCoefficients(stats, eig0, cfg.alpha, cfg.gamma);
  SimulationSetup s{cfg,   grid,   spec, cfg.spde(), kMax, cfg.elements * cfg.referenceRefinement,
                    eig0,  modes0, proj0, stats,     coeffs, {},   {}, {}, {}, {}, std::nullopt};
  const bool reduced = listed(cfg, "gammaReduced");
  if (reduced || listed(cfg, "coupled")) {
    s.op = std::make_shared<CoupledOperator>(grid, cfg.gamma);
    s.eig = std::make_shared<EigenSystem>(eigGamma(*s.op, grid.elements()));
    s.modesGamma = std::make_shared<ElementModeSet>(elementModes(*s.eig, *s.op, 0));
  }
  if (reduced) {
    s.projGamma = std::make_shared<ElementNoiseProjection>(projectToElementModes(spec, *s.modesGamma, grid, popt));
    s.expansion = std::make_shared<GroundModeExpansion>(expandGroundMode(*s.eig, grid));
    if (!cfg.truncate) s.limit = martingaleLimitDriver(stats, modes0, *s.expansion, cfg.limitScaling);
  }
  return s;
}

bool SimulationSetup::wants(const std::string& model) const {
  if (model == "reference") return listed(cfg, "reference") || listed(cfg, "coupled");
  return listed(cfg, model);
}

std::vector<std::string> SimulationSetup::observables() const {
  std::vector<std::string> names;
  const int m = grid.elements();
  auto values = [&](const std::string& model) {
    for (int j = 0; j < m; ++j) names.push_back(model + ".U" + std::to_string(j + 1));
  };
  for (const auto& model : cfg.models)
    if (isGridModel(model)) values(model);
  if (wants("coupled")) {
    values("coupled");
    names.push_back("coupled.gap");
    names.push_back("coupled.slowEnergy");
    names.push_back("coupled.fastEnergy");
  }
  if (wants("reference")) values("reference");
  return names;
}

std::uint64_t memberSeed(std::uint64_t master, int member) {
  return deriveSeed(master, static_cast<std::uint64_t>(member));
}

MemberRunner::MemberRunner(const SimulationSetup& setup) : setup_(&setup) {
  const RunConfig& cfg = setup.cfg;
  if (setup.wants("reference"))
    reference_ = std::make_unique<FullSpdeSolver>(cfg.length, setup.referencePoints, setup.spde, setup.spec);
  if (setup.wants("coupled")) {
    coupled_ = std::make_unique<CoupledElementSolver>(*setup.op, setup.spde, setup.spec);
    const DomainGrid& g = setup.grid;
    const double dx = cfg.length / setup.referencePoints;
    refToElement_.resize(static_cast<std::size_t>(g.fieldSize()));
    for (int j = 0; j < g.elements(); ++j)
      for (Half hf : {Half::Left, Half::Right})
        for (int i = 0; i < g.halfNodes(); ++i) {
          double x = std::fmod(g.nodePosition(j, hf, i), cfg.length);
          if (x < 0.0) x += cfg.length;
          refToElement_[g.nodeIndex(j, hf, i)] = x / dx;
        }
  }
}

MemberResult MemberRunner::run(int member) const {
  return runSeed(member, memberSeed(setup_->cfg.seed, member));
}

MemberResult MemberRunner::runSeed(int member, std::uint64_t seed) const {
  const SimulationSetup& s = *setup_;
  const RunConfig& cfg = s.cfg;
  const DomainGrid& g = s.grid;
  const int m = g.elements();
  const int steps = s.spde.steps();
  const double length = cfg.length;
  auto u0 = [&](double x) { return cfg.initial(x, length); };

  NoisePath path = sampleGlobalPath(s.spec, uniformTimes(cfg.horizon, steps), seed);

  std::vector<std::string> gridModels;
  for (const auto& name : cfg.models)
    if (isGridModel(name)) gridModels.push_back(name);
  std::vector<GridState> states(gridModels.size());
  for (auto& st : states)
    for (int j = 0; j < m; ++j) st.U.push_back(u0(g.center(j)));

  std::optional<NoiseBinder> binder0, binderGamma;
  bool needGamma = false, need0 = false;
  for (const auto& name : gridModels) {
    if (name == "gammaReduced") needGamma = true;
    else need0 = true;
  }
  if (need0) binder0.emplace(s.proj0, s.coeffs.Qj, path);
  if (needGamma) binderGamma.emplace(*s.projGamma, s.coeffs.Qj, path, s.limit);

  std::vector<double> ref;
  if (reference_) ref = reference_->sample(u0);
  Eigen::VectorXd x;
  if (coupled_) x = coupled_->initial(ElementField::sample(g, [&](int, double pos, double) { return u0(pos); }));

  MemberResult out;
  out.member = member;
  out.seed = seed;
  const int stride = cfg.snapshotStride;
  auto snapshot = [&](double t) {
    for (std::size_t i = 0; i < gridModels.size(); ++i) out.trajectories[gridModels[i]].append(t, states[i].U);
    if (coupled_) {
      ElementField f = coupled_->field(x);
      std::vector<double> c;
      for (int j = 0; j < m; ++j) c.push_back(f.centerValue(j));
      out.trajectories["coupled"].append(t, c);
    }
    if (reference_) {
      std::vector<double> c;
      for (int j = 0; j < m; ++j) c.push_back(ref[static_cast<std::size_t>(((j + 1) * cfg.referenceRefinement) % s.referencePoints)]);
      out.trajectories["reference"].append(t, c);
    }
  };
  if (stride > 0) snapshot(0.0);

  std::vector<ModelKind> kinds;
  for (const auto& name : gridModels) kinds.push_back(modelKindFromString(name));
  StepDrivers d0, dg;
  HolisticOptions hopt{cfg.deviationAlpha};
  GammaReducedOptions gopt{cfg.gamma, cfg.truncate, cfg.deviationAlpha};
  try {
    for (int n = 0; n < steps; ++n) {
      if (binder0) binder0->drivers(n, d0);
      if (binderGamma) binderGamma->drivers(n, dg);
      for (std::size_t i = 0; i < kinds.size(); ++i) {
        switch (kinds[i]) {
          case ModelKind::ConventionalFD: stepConventionalFD(states[i], s.spde, g.spacing(), d0); break;
          case ModelKind::Holistic: stepHolistic(states[i], s.spde, s.coeffs, d0, hopt); break;
          case ModelKind::HolisticIntroVariant: stepHolisticIntro(states[i], s.spde, s.coeffs, d0, hopt); break;
          case ModelKind::GammaReduced: stepGammaReduced(states[i], s.spde, s.coeffs, dg, gopt); break;
        }
      }
      if (reference_) reference_->step(ref, path, n);
      if (coupled_) coupled_->step(x, path, n);
      if (stride > 0 && (n + 1) % stride == 0) snapshot(path.times[n + 1]);
    }
  } catch (const NumericalAbort& e) {
    throw NumericalAbort(std::string(e.what()) + " (member " + std::to_string(member) + ", seed " +
                         std::to_string(seed) + ")");
  }

  for (const auto& st : states) out.values.insert(out.values.end(), st.U.begin(), st.U.end());
  if (coupled_) {
    ElementField f = coupled_->field(x);
    for (int j = 0; j < m; ++j) out.values.push_back(f.centerValue(j));
    ElementField diff = f;
    const int n = s.referencePoints;
    for (std::size_t i = 0; i < diff.values().size(); ++i) {
      const double p = refToElement_[i];
      const int lo = static_cast<int>(std::floor(p));
      const double w = p - lo;
      diff.values()[i] -= (1.0 - w) * ref[static_cast<std::size_t>(lo % n)] + w * ref[static_cast<std::size_t>((lo + 1) % n)];
    }
    out.values.push_back(innerProduct(diff, diff, g));
    SlowFastSplit split = slowFastDecompose(f, *s.modesGamma);
    out.values.push_back(innerProduct(split.slow, split.slow, g));
    out.values.push_back(innerProduct(split.fast, split.fast, g));
  }
  if (reference_)
    for (int j = 0; j < m; ++j)
      out.values.push_back(ref[static_cast<std::size_t>(((j + 1) * cfg.referenceRefinement) % s.referencePoints)]);
  for (auto& [name, traj] : out.trajectories) {
    traj.seed = seed;
    traj.provenance = name + " member " + std::to_string(member);
  }
  return out;
}

std::vector<double> EnsembleRun::column(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("no observable named " + name);
  const std::size_t c = static_cast<std::size_t>(it - names.begin());
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& row : samples) out.push_back(row[c]);
  return out;
}

EnsembleRun runEnsemble(const RunConfig& cfg, const std::string& checkpoint) {
  return runEnsemble(SimulationSetup::build(cfg), checkpoint);
}

EnsembleRun runEnsemble(const SimulationSetup& setup, const std::string& checkpoint) {
  const RunConfig& cfg = setup.cfg;
  EnsembleRun run;
  run.names = setup.observables();
  const int R = cfg.members;
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(R));
  std::vector<char> done(static_cast<std::size_t>(R), 0);
  const std::string tag = hex(cfg.hash());

  std::ofstream log;
  if (!checkpoint.empty()) {
    bool fresh = true;
    std::ifstream in(checkpoint);
    std::string line;
    if (in && std::getline(in, line)) {
      nlohmann::json head = nlohmann::json::parse(line, nullptr, false);
      if (head.is_discarded() || head.value("config", "") != tag)
        throw ConfigError({"checkpoint " + checkpoint + " was written for a different configuration"});
      fresh = false;
      while (std::getline(in, line)) {
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded()) continue;  // torn write from an interrupted run
        const int i = rec.value("member", -1);
        if (i < 0 || i >= R || !rec.contains("values")) continue;
        auto values = rec["values"].get<std::vector<double>>();
        if (values.size() != run.names.size()) continue;
        rows[i] = std::move(values);
        if (!done[i]) ++run.resumed;
        done[i] = 1;
      }
    }
    in.close();
    log.open(checkpoint, std::ios::app);
    if (!log) throw std::runtime_error("cannot open checkpoint " + checkpoint);
    if (fresh) log << nlohmann::json{{"config", tag}, {"names", run.names}}.dump() << '\n' << std::flush;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex lock;
  auto worker = [&] {
    try {
      MemberRunner runner(setup);
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= R || failed) return;
        if (done[i]) continue;
        MemberResult r = runner.run(i);
        std::lock_guard<std::mutex> g(lock);
        if (log.is_open()) log << nlohmann::json{{"member", i}, {"seed", r.seed}, {"values", r.values}}.dump() << '\n' << std::flush;
        if (cfg.snapshotStride > 0) {
          std::filesystem::create_directories(cfg.outputDir);
          for (const auto& [name, traj] : r.trajectories)
            traj.writeCsv(cfg.outputDir + "/trajectory_" + name + "_" + std::to_string(i) + ".csv");
        }
        rows[i] = std::move(r.values);
      }
    } catch (...) {
      std::lock_guard<std::mutex> g(lock);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };
  const int threads = std::max(1, std::min(cfg.threads, R));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  run.samples = std::move(rows);
  run.stats = EnsembleStats::fromSamples(run.names, run.samples);
  return run;
}

void ConvergenceTable::writeCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << axis << ',' << metric << ",standard_error\n" << std::setprecision(17);
  for (const auto& r : rows) out << r.value << ',' << r.error << ',' << r.standardError << '\n';
  out << "# fitted order " << fit.order << " against " << fitAgainst << ", r^2 " << fit.rSquared << '\n';
}

namespace {

// RMS over grid points of paired differences, with a first-order standard error.
Estimate rms(const std::vector<Estimate>& d) {
  double s = 0.0, v = 0.0;
  for (const auto& e : d) s += e.value * e.value;
  const double r = std::sqrt(s / static_cast<double>(d.size()));
  for (const auto& e : d) v += e.value * e.value * e.standardError * e.standardError;
  const double se = r > 0.0 ? std::sqrt(v) / (static_cast<double>(d.size()) * r) : 0.0;
  return {r, se};
}

std::string firstGridModel(const RunConfig& cfg) {
  for (const auto& m : cfg.models)
    if (isGridModel(m) || m == "coupled") return m;
  throw ConfigError({"weak metrics need a model besides the reference"});
}

// Unpaired weak errors between a model ensemble and an independent reference ensemble.
std::pair<Estimate, Estimate> weakErrors(const EnsembleRun& model, const std::string& name,
                                         const EnsembleRun& ref, int m) {
  std::vector<Estimate> mean, var;
  for (int j = 0; j < m; ++j) {
    const std::string col = ".U" + std::to_string(j + 1);
    auto a = model.column(name + col), b = ref.column("reference" + col);
    Estimate ea = meanEstimate(a), eb = meanEstimate(b);
    mean.push_back({ea.value - eb.value, std::hypot(ea.standardError, eb.standardError)});
    RunningStats sa, sb;
    for (double v : a) sa.add(v);
    for (double v : b) sb.add(v);
    // standard error of a sample variance, Gaussian approximation
    auto seVar = [](const RunningStats& s) { return s.variance() * std::sqrt(2.0 / (s.count() - 1)); };
    var.push_back({sa.variance() - sb.variance(), std::hypot(seVar(sa), seVar(sb))});
  }
  return {rms(mean), rms(var)};
}

}  // namespace

ConvergenceTable convergenceStudy(const RunConfig& base) {
  base.validate();
  const SweepSpec& sw = base.sweep;
  if (sw.values.size() < 3) throw ConfigError({"a convergence study needs at least 3 sweep values"});
  ConvergenceTable table{sw.axis, sw.metric, {}, {}, sw.axis};
  const std::string& metric = sw.metric;
  auto reject = [&] { throw ConfigError({"metric '" + metric + "' is not available along axis " + sw.axis}); };

  if (sw.axis == "gamma") {
    if (metric == "lambda0" || metric == "remainder") {
      DomainGrid grid(base.length, base.elements, base.subgrid);
      for (double g : sw.values) {
        CoupledOperator op(grid, g);
        EigenSystem eig = eigGamma(op, grid.elements());
        double e = metric == "lambda0" ? eig.values[groundModeIndex(eig)] : expandGroundMode(eig, grid).remainderNorm;
        table.rows.push_back({g, e, 0.0});
      }
    } else if (metric == "couplingGap") {
      for (double g : sw.values) {
        RunConfig c = base;
        c.gamma = g;
        c.models = {"coupled"};
        c.sweep = {};
        EnsembleRun run = runEnsemble(c);
        Estimate e = meanEstimate(run.column("coupled.gap"));
        table.rows.push_back({g, e.value, e.standardError});
      }
      table.fitAgainst = "1-gamma";
    } else {
      reject();
    }
  } else if (sw.axis == "h") {
    const int basePoints = base.elements * base.referenceRefinement;
    for (double h : sw.values) {
      RunConfig c = base;
      c.sweep = {};
      const double mreal = base.length / h;
      c.elements = static_cast<int>(std::lround(mreal));
      if (std::abs(mreal - c.elements) > 1e-9 * mreal)
        throw ConfigError({"h = " + std::to_string(h) + " does not divide the domain length"});
      if (metric == "hatAlpha" || metric == "Qj") {
        c.models = {"conventionalFD"};
        c.dt = 1e-4 * h * h;
        c.horizon = 1e4 * c.dt;
        SimulationSetup s = SimulationSetup::build(c);
        double e = 0.0;
        for (int j = 0; j < c.elements; ++j)
          e = std::max(e, metric == "hatAlpha" ? std::abs(s.coeffs.hatAlpha[j] - c.alpha) : s.coeffs.Qj[j]);
        table.rows.push_back({h, e, 0.0});
      } else if (metric == "weakMean" || metric == "weakVariance") {
        if (basePoints % c.elements != 0)
          throw ConfigError({"the reference grid (" + std::to_string(basePoints) +
                             " points) must contain every grid point of h = " + std::to_string(h)});
        c.referenceRefinement = basePoints / c.elements;
        const std::string model = firstGridModel(base);
        c.models = {model, "reference"};
        ComparisonReport rep = compareModels(runEnsemble(c), c);
        const bool isMean = metric == "weakMean";
        table.rows.push_back({h, isMean ? rep.meanError.at(model) : rep.varianceError.at(model),
                              (isMean ? rep.meanErrorHalfWidth.at(model) : rep.varianceErrorHalfWidth.at(model)) / 1.96});
      } else {
        reject();
      }
    }
  } else if (sw.axis == "dt") {
    if (metric != "weakMean" && metric != "weakVariance") reject();
    const std::string model = firstGridModel(base);
    RunConfig rc = base;
    rc.sweep = {};
    rc.models = {"reference"};
    rc.dt = *std::min_element(sw.values.begin(), sw.values.end()) / 2.0;
    rc.seed = deriveSeed(base.seed, 0xEF);
    rc.validate();
    EnsembleRun ref = runEnsemble(rc);
    for (double dt : sw.values) {
      RunConfig c = base;
      c.sweep = {};
      c.dt = dt;
      c.models = {model};
      c.validate();
      auto [mean, var] = weakErrors(runEnsemble(c), model, ref, c.elements);
      const Estimate& e = metric == "weakMean" ? mean : var;
      table.rows.push_back({dt, e.value, e.standardError});
    }
  } else {
    reject();
  }

  std::vector<double> xs, ys;
  for (const auto& r : table.rows) {
    const double x = table.fitAgainst == "1-gamma" ? 1.0 - r.value : r.value;
    if (x > 0.0 && r.error > 0.0) {
      xs.push_back(x);
      ys.push_back(r.error);
    }
  }
  if (xs.size() >= 2) table.fit = fitLogLog(xs, ys);
  else table.fit.order = std::nan("");
  return table;
}

void ComparisonReport::writeCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "model,j,mean_diff,mean_se,variance_diff,variance_se";
  const std::vector<double> probs = points.empty() ? std::vector<double>{} : points.front().probabilities;
  for (double p : probs) out << ",q" << p << "_diff,q" << p << "_se";
  out << '\n' << std::setprecision(17);
  for (const auto& pt : points) {
    out << pt.model << ',' << pt.j + 1 << ',' << pt.mean.value << ',' << pt.mean.standardError << ','
        << pt.variance.value << ',' << pt.variance.standardError;
    for (const auto& q : pt.quantiles) out << ',' << q.value << ',' << q.standardError;
    out << '\n';
  }
}

nlohmann::json ComparisonReport::toJson() const {
  nlohmann::json j;
  for (const auto& [model, e] : meanError)
    j["models"][model] = {{"meanError", e},
                          {"meanErrorHalfWidth", meanErrorHalfWidth.at(model)},
                          {"varianceError", varianceError.at(model)},
                          {"varianceErrorHalfWidth", varianceErrorHalfWidth.at(model)}};
  j["verdict"] = verdict;
  return j;
}

ComparisonReport compareModels(const RunConfig& cfg) {
  RunConfig c = cfg;
  if (!listed(c, "reference")) c.models.push_back("reference");
  return compareModels(runEnsemble(c), c);
}

ComparisonReport compareModels(const EnsembleRun& run, const RunConfig& cfg) {
  if (run.samples.size() < 2) throw ConfigError({"model comparison needs at least 2 members"});
  ComparisonReport rep;
  const std::vector<double> probs{0.1, 0.5, 0.9};
  std::vector<std::string> models;
  for (const auto& m : cfg.models)
    if (m != "reference") models.push_back(m);
  for (const auto& model : models) {
    std::vector<Estimate> mean, var;
    for (int j = 0; j < cfg.elements; ++j) {
      const std::string col = ".U" + std::to_string(j + 1);
      auto a = run.column(model + col), b = run.column("reference" + col);
      PointComparison pc{model, j, pairedMeanDifference(a, b), pairedVarianceDifference(a, b), probs, {}};
      for (std::size_t k = 0; k < probs.size(); ++k)
        pc.quantiles.push_back(pairedQuantileDifference(a, b, probs[k], 200,
                                                        deriveSeed(cfg.seed, fnv1a(model + col) + k)));
      mean.push_back(pc.mean);
      var.push_back(pc.variance);
      rep.points.push_back(std::move(pc));
    }
    Estimate em = rms(mean), ev = rms(var);
    rep.meanError[model] = em.value;
    rep.meanErrorHalfWidth[model] = 1.96 * em.standardError;
    rep.varianceError[model] = ev.value;
    rep.varianceErrorHalfWidth[model] = 1.96 * ev.standardError;
  }
  if (rep.meanError.count("holistic") && rep.meanError.count("conventionalFD")) {
    auto judge = [&](const std::map<std::string, double>& err, const std::map<std::string, double>& hw) {
      const double a = err.at("holistic"), b = err.at("conventionalFD");
      const double ha = hw.at("holistic"), hb = hw.at("conventionalFD");
      if (a + ha < b - hb) return std::string("holistic smaller");
      if (b + hb < a - ha) return std::string("conventional FD smaller");
      return std::string(a <= b ? "holistic <= conventional FD within CI" : "conventional FD <= holistic within CI");
    };
    rep.verdict = "mean: " + judge(rep.meanError, rep.meanErrorHalfWidth) +
                  "; variance: " + judge(rep.varianceError, rep.varianceErrorHalfWidth);
  } else {
    rep.verdict = "no holistic / conventional FD pair configured";
  }
  return rep;
}

nlohmann::json runManifest(const RunConfig& cfg, const std::string& command) {
  return {{"command", command},
          {"configHash", hex(cfg.hash())},
          {"seed", cfg.seed},
          {"version", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__},
          {"config", cfg.toJson()}};
}

void writeManifest(const std::string& dir, const RunConfig& cfg, const std::string& command,
                   const nlohmann::json& extra) {
  std::filesystem::create_directories(dir);
  nlohmann::json m = runManifest(cfg, command);
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << m.dump(2) << '\n';
}

}  // namespace srd
