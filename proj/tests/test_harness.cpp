#include <catch_amalgamated.hpp>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "srd/errors.hpp"
#include "srd/harness.hpp"

using namespace srd;
using Catch::Matchers::WithinAbs;

namespace {

RunConfig small() {
  RunConfig c;
  c.elements = 8;
  c.subgrid = 16;
  c.truncation = 16;
  c.dt = 2e-3;
  c.horizon = 0.1;
  c.referenceRefinement = 4;
  c.models = {"conventionalFD", "holistic", "reference"};
  c.members = 6;
  c.seed = 99;
  return c;
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::string tempFile(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p.string();
}

}  // namespace

TEST_CASE("a single member is the directly stepped model") {
  RunConfig c = small();
  c.members = 1;
  c.models = {"holistic"};
  SimulationSetup s = SimulationSetup::build(c);
  EnsembleRun run = runEnsemble(s);
  REQUIRE(run.samples.size() == 1);

  NoisePath path = sampleGlobalPath(s.spec, uniformTimes(c.horizon, s.spde.steps()), memberSeed(c.seed, 0));
  NoiseBinder binder(s.proj0, s.coeffs.Qj, path);
  GridState st;
  for (int j = 0; j < c.elements; ++j) st.U.push_back(c.initial(s.grid.center(j), c.length));
  for (int n = 0; n < s.spde.steps(); ++n) stepHolistic(st, s.spde, s.coeffs, binder.drivers(n));
  CHECK(identical(run.samples[0], st.U));
}

TEST_CASE("members replay bitwise and aggregation ignores the thread count") {
  RunConfig c = small();
  SimulationSetup s = SimulationSetup::build(c);
  EnsembleRun one = runEnsemble(s);
  RunConfig c2 = c;
  c2.threads = 3;
  EnsembleRun three = runEnsemble(c2);
  for (int i = 0; i < c.members; ++i) CHECK(identical(one.samples[i], three.samples[i]));
  CHECK(identical(one.stats.mean, three.stats.mean));
  MemberRunner runner(s);
  CHECK(identical(runner.run(4).values, one.samples[4]));
}

TEST_CASE("interrupted runs resume from the checkpoint") {
  RunConfig c = small();
  const std::string ck = tempFile("srd_resume.jsonl");
  EnsembleRun full = runEnsemble(c, ck);
  CHECK(full.resumed == 0);
  // keep the header and three members, then tear the last line as a crash would
  std::ifstream in(ck);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  in.close();
  REQUIRE(lines.size() == 7);
  {
    std::ofstream out(ck, std::ios::trunc);
    for (int i = 0; i < 4; ++i) out << lines[i] << '\n';
    out << lines[4].substr(0, lines[4].size() / 2);
  }
  EnsembleRun resumed = runEnsemble(c, ck);
  CHECK(resumed.resumed == 3);
  for (int i = 0; i < c.members; ++i) CHECK(identical(resumed.samples[i], full.samples[i]));
  RunConfig other = c;
  other.seed = 100;
  CHECK_THROWS_AS(runEnsemble(other, ck), ConfigError);
  std::filesystem::remove(ck);
}

TEST_CASE("standard errors shrink by about root two when R doubles") {
  RunConfig c = small();
  c.models = {"conventionalFD"};
  c.members = 200;
  EnsembleRun a = runEnsemble(c);
  c.members = 400;
  EnsembleRun b = runEnsemble(c);
  double ratio = 0.0;
  for (std::size_t i = 0; i < a.names.size(); ++i) ratio += a.stats.standardError[i] / b.stats.standardError[i];
  ratio /= a.names.size();
  CHECK(std::abs(ratio - std::sqrt(2.0)) < 0.15);
}

TEST_CASE("coupled observables are recorded alongside the reference") {
  RunConfig c = small();
  c.gamma = 0.9;
  c.models = {"coupled"};
  c.members = 2;
  EnsembleRun run = runEnsemble(c);
  CHECK(run.stats.find("coupled.gap") >= 0);
  CHECK(run.stats.find("reference.U3") >= 0);
  for (double v : run.column("coupled.gap")) CHECK(v > 0.0);
}

TEST_CASE("with sigma = 0 the comparison shows no difference between the grid models") {
  RunConfig c = small();
  c.sigma = 0.0;
  c.members = 4;
  ComparisonReport r = compareModels(c);
  CHECK(r.meanError.at("holistic") == r.meanError.at("conventionalFD"));
  CHECK(r.varianceError.at("holistic") == r.varianceError.at("conventionalFD"));
  CHECK(!r.verdict.empty());
}

TEST_CASE("solver aborts name the member and seed") {
  RunConfig c = small();
  c.models = {"conventionalFD"};
  c.initial.amplitude = 1e5;
  c.members = 1;
  try {
    runEnsemble(c);
    FAIL("expected NumericalAbort");
  } catch (const NumericalAbort& e) {
    const std::string msg = e.what();
    CHECK(msg.find("member 0") != std::string::npos);
    CHECK(msg.find(std::to_string(memberSeed(c.seed, 0))) != std::string::npos);
  }
}

TEST_CASE("convergence studies need three points and fit log-log slopes") {
  RunConfig c = small();
  c.sweep = {"gamma", "lambda0", {0.02, 0.04}};
  CHECK_THROWS_AS(convergenceStudy(c), ConfigError);
  c.sweep.values = {0.01, 0.02, 0.04};
  ConvergenceTable t = convergenceStudy(c);
  CHECK(t.rows.size() == 3);
  CHECK(std::abs(t.fit.order - 2.0) < 0.1);
  c.sweep.metric = "weakMean";
  CHECK_THROWS_AS(convergenceStudy(c), ConfigError);
}

TEST_CASE("manifest records hash, seed and version") {
  RunConfig c = small();
  const auto dir = std::filesystem::temp_directory_path() / "srd_manifest_test";
  writeManifest(dir.string(), c, "simulate", {{"members", 6}});
  std::ifstream in(dir / "manifest.json");
  nlohmann::json m = nlohmann::json::parse(in);
  CHECK(m["seed"] == 99);
  CHECK(m["version"] == kVersion);
  CHECK(m["configHash"].get<std::string>().size() == 16);
  CHECK(m["members"] == 6);
  CHECK(RunConfig::fromJson(m["config"]).hash() == c.hash());
  std::filesystem::remove_all(dir);
}
