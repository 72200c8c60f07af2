#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "srd/averaging.hpp"
#include "srd/dynamics.hpp"
#include "srd/errors.hpp"
#include "srd/models.hpp"

namespace srd {

struct InitialCondition {
  double amplitude = 0.5;
  int wavenumber = 1;  // u0(x) = offset + amplitude sin(2 pi wavenumber x / L)
  double offset = 0.0;

  double operator()(double x, double length) const;
};

struct SweepSpec {
  std::string axis;    // gamma, h or dt; empty when no sweep
  std::string metric;  // what convergenceStudy measures along the axis
  std::vector<double> values;
};

/// Everything one command needs. Parsing validates all fields and cross-field rules
/// before anything runs.
struct RunConfig {
  // grid
  double length = 6.283185307179586;
  int elements = 8;
  int subgrid = 64;
  // noise
  int truncation = 32;
  double decay = 3.0;
  std::vector<double> q;  // explicit coefficients override the power law when non-empty
  bool halveGroundVariance = false;
  // dynamics
  double alpha = 1.0;
  double sigma = 0.5;
  double gamma = 1.0;
  double dt = 0.0;  // 0: largest step <= 1e-4 h^2 that divides the horizon
  double horizon = 1.0;
  Scheme scheme = Scheme::SemiImplicitEM;
  InitialCondition initial;
  int referenceRefinement = 8;
  // models
  std::vector<std::string> models = {"conventionalFD", "holistic"};
  bool truncate = false;
  bool deviationAlpha = false;
  MomentReading reading = MomentReading::Projection;
  LimitScaling limitScaling = LimitScaling::Literal;
  // ensemble
  int members = 256;
  std::uint64_t seed = 1;
  int threads = 1;
  int snapshotStride = 0;  // 0: final state only
  SweepSpec sweep;
  std::string outputDir = "out";

  double spacing() const { return length / elements; }
  double effectiveDt() const;
  SpdeConfig spde() const;
  QWienerSpec noiseSpec() const;

  /// Itemized problems; empty when valid.
  std::vector<std::string> problems() const;
  void validate() const;

  nlohmann::json toJson() const;
  static RunConfig fromJson(const nlohmann::json& j);
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;
  std::uint64_t hash() const;
};

/// Applies "--sweep AXIS=v1,v2,..." to a config; throws ConfigError on bad syntax.
void applySweepFlag(RunConfig& cfg, const std::string& flag);

}  // namespace srd
