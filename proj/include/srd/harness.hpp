#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "srd/averaging.hpp"
#include "srd/config.hpp"
#include "srd/dynamics.hpp"
#include "srd/models.hpp"
#include "srd/noise.hpp"
#include "srd/spectral.hpp"
#include "srd/stats.hpp"

namespace srd {

/// Everything derived from a config that members share read-only.
struct SimulationSetup {
  RunConfig cfg;
  DomainGrid grid;
  QWienerSpec spec;
  SpdeConfig spde;
  int kMax = 0;
  int referencePoints = 0;
  EigenSystem eig0;
  ElementModeSet modes0;
  ElementNoiseProjection proj0;
  FastModeStats stats;
  AveragedCoeffs coeffs;
  // present when a gamma-dependent model or the coupled solver is requested
  std::shared_ptr<CoupledOperator> op;
  std::shared_ptr<EigenSystem> eig;  // slow band at gamma
  std::shared_ptr<ElementModeSet> modesGamma;
  std::shared_ptr<ElementNoiseProjection> projGamma;
  std::shared_ptr<GroundModeExpansion> expansion;
  std::optional<MartingaleDriver> limit;

  static SimulationSetup build(const RunConfig& cfg);
  bool wants(const std::string& model) const;
  /// Observable names in the order simulateMember fills them.
  std::vector<std::string> observables() const;
};

struct MemberResult {
  int member = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;  // aligned with SimulationSetup::observables()
  std::map<std::string, ModelTrajectory> trajectories;
};

/// Per-thread solver state; building it once per worker avoids refactorizing per member.
class MemberRunner {
public:
  explicit MemberRunner(const SimulationSetup& setup);
  MemberResult run(int member) const;
  /// Same, on an explicit seed (for replay and for tests).
  MemberResult runSeed(int member, std::uint64_t seed) const;

private:
  const SimulationSetup* setup_;
  std::unique_ptr<FullSpdeSolver> reference_;
  std::unique_ptr<CoupledElementSolver> coupled_;
  std::vector<double> refToElement_;  // fine-grid positions of element nodes, in units of dx
};

std::uint64_t memberSeed(std::uint64_t master, int member);

struct EnsembleRun {
  std::vector<std::string> names;
  std::vector<std::vector<double>> samples;  // [member][observable]
  EnsembleStats stats;
  int resumed = 0;  // members read back from the checkpoint

  std::vector<double> column(const std::string& name) const;
};

/// Runs cfg.members members on cfg.threads workers. When `checkpoint` is non-empty, finished
/// members are appended to it as they complete and members already present are not rerun.
EnsembleRun runEnsemble(const RunConfig& cfg, const std::string& checkpoint = "");
EnsembleRun runEnsemble(const SimulationSetup& setup, const std::string& checkpoint = "");

struct ConvergenceRow {
  double value = 0.0;
  double error = 0.0;
  double standardError = 0.0;
};

struct ConvergenceTable {
  std::string axis;
  std::string metric;
  std::vector<ConvergenceRow> rows;
  OrderFit fit;
  std::string fitAgainst;  // the abscissa used for the fit

  void writeCsv(const std::string& path) const;
};

/// Error metric along cfg.sweep. Metrics:
///   gamma: lambda0, remainder, couplingGap
///   h:     hatAlpha, Qj, weakMean, weakVariance
///   dt:    weakMean, weakVariance
/// Weak metrics compare the first configured model with the reference SPDE at the horizon,
/// as a root-mean-square over grid points. Along dt the reference runs once, at half the
/// smallest step, on independent noise.
ConvergenceTable convergenceStudy(const RunConfig& cfg);

struct PointComparison {
  std::string model;
  int j = 0;
  Estimate mean;
  Estimate variance;
  std::vector<double> probabilities;
  std::vector<Estimate> quantiles;
};

struct ComparisonReport {
  std::vector<PointComparison> points;
  /// model -> root-mean-square over grid points of the mean and variance differences
  std::map<std::string, double> meanError;
  std::map<std::string, double> varianceError;
  std::map<std::string, double> meanErrorHalfWidth;
  std::map<std::string, double> varianceErrorHalfWidth;
  std::string verdict;

  void writeCsv(const std::string& path) const;
  nlohmann::json toJson() const;
};

/// Weak errors of every configured model against the reference SPDE on shared noise.
ComparisonReport compareModels(const RunConfig& cfg);
ComparisonReport compareModels(const EnsembleRun& run, const RunConfig& cfg);

/// Run manifest written next to every output.
nlohmann::json runManifest(const RunConfig& cfg, const std::string& command);
void writeManifest(const std::string& dir, const RunConfig& cfg, const std::string& command,
                   const nlohmann::json& extra = nlohmann::json::object());

extern const char* const kVersion;

}  // namespace srd
