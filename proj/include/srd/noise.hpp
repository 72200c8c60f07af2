#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "srd/grid.hpp"
#include "srd/spectral.hpp"

namespace srd {

/// Q-Wiener process on [0, L] in the periodic Fourier basis
///   e_0 = sqrt(1/L), e_{2m} = sqrt(2/L) cos(2 m pi x / L), e_{2m-1} = sqrt(2/L) sin(2 m pi x / L).
struct QWienerSpec {
  double length = 1.0;
  std::vector<double> q;  // q_0 .. q_K

  /// q_k = (1 + k)^(-r), k = 0..K. Rejects r < 2 (trace condition).
  static QWienerSpec powerLaw(double length, int K, double r);
  /// Explicit coefficients; treated as finite support.
  static QWienerSpec explicitCoefficients(double length, std::vector<double> q);

  int truncation() const { return static_cast<int>(q.size()) - 1; }
  int modes() const { return static_cast<int>(q.size()); }
  double basis(int k, double x) const;
  /// sum_k k q_k, finite by construction at truncation.
  double weightedTrace() const;
  void validate() const;
};

/// Uniform time grid t_n = n T / N.
std::vector<double> uniformTimes(double horizon, int steps);

/// Brownian increments of beta_k over each time step: rows are modes, columns are steps.
struct NoisePath {
  QWienerSpec spec;
  std::vector<double> times;
  Eigen::MatrixXd increments;
  std::uint64_t seed = 0;

  int steps() const { return static_cast<int>(increments.cols()); }
  double dt(int step) const { return times.at(step + 1) - times.at(step); }
  /// beta_k(t_n) by cumulative summation.
  double beta(int k, int n) const;
  /// W(x, t_{n+1}) - W(x, t_n).
  double fieldIncrement(int step, double x) const;
};

NoisePath sampleGlobalPath(const QWienerSpec& spec, const std::vector<double>& times,
                           std::uint64_t seed);

/// Sums `factor` consecutive increments; exact pointwise coarsening of the same path.
NoisePath coarsen(const NoisePath& fine, int factor);

/// `count` independent standard Brownian motions on `times`, from a stream derived from
/// (seed, stream). Used for the auxiliary drivers beta-check and beta-hat.
Eigen::MatrixXd sampleAuxiliaryIncrements(int count, const std::vector<double>& times,
                                          std::uint64_t seed, std::uint64_t stream);

/// Raw binary export: int32 rows, int32 cols, then column-major doubles; times first.
void writePathBinary(const std::string& path, const NoisePath& noise);
NoisePath readPathBinary(const std::string& path, const QWienerSpec& spec);

struct ProjectionOptions {
  /// Normalization printed in the consistency section, where the ground driver appears as
  /// sqrt(2 q^h_{j,0}); enabling it halves q^h_{j,0}.
  bool halveGroundVariance = false;
};

/// weights[(j, l, k)] = <e_k, e_{j,l}> / ||e_{j,l}|| on element j; qh = sum_k q_k w^2.
struct ElementNoiseProjection {
  ElementModeSet modes;
  QWienerSpec spec;
  ProjectionOptions options;
  std::vector<double> weights;
  std::vector<double> qh;

  int elements() const { return modes.grid.elements(); }
  int modeCount() const { return modes.count; }
  double weight(int j, int l, int k) const {
    return weights[(static_cast<std::size_t>(j) * modes.count + l) * spec.modes() + k];
  }
  double qhAt(int j, int l) const { return qh[static_cast<std::size_t>(j) * modes.count + l]; }
  /// sum_l lambda_{j,l} q^h_{j,l}
  double traceBound(int j) const;
};

ElementNoiseProjection projectToElementModes(const QWienerSpec& spec, const ElementModeSet& modes,
                                             const DomainGrid& grid, ProjectionOptions opt = {});
ElementNoiseProjection projectToElementModes(const NoisePath& path, const ElementModeSet& modes,
                                             const DomainGrid& grid, ProjectionOptions opt = {});

/// Unit-rate element-mode Brownian increments Delta beta_{j,l} for one step, [j * count + l].
std::vector<double> elementModeDrivers(const ElementNoiseProjection& proj, const NoisePath& path,
                                       int step);
/// Delta W^gamma_{j,l} = gamma sqrt(q^h_{j,l}) Delta beta_{j,l}, [j * count + l].
std::vector<double> elementNoiseIncrement(const ElementNoiseProjection& proj, const NoisePath& path,
                                          int step, double gamma);

/// Precomputed basis values e_k(x_i) at a set of points for fast field synthesis.
class BasisTable {
public:
  BasisTable(const QWienerSpec& spec, const std::vector<double>& points);
  /// out_i = sum_k sqrt(q_k) dbeta_k e_k(x_i)
  void synthesize(const NoisePath& path, int step, std::vector<double>& out) const;
  int points() const { return static_cast<int>(table_.cols()); }

private:
  Eigen::MatrixXd table_;  // modes x points, already scaled by sqrt(q_k)
};

}  // namespace srd
