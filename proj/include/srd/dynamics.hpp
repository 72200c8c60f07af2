#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "srd/grid.hpp"
#include "srd/noise.hpp"
#include "srd/numerics.hpp"
#include "srd/spectral.hpp"

namespace srd {

enum class Scheme { SemiImplicitEM, ExplicitEM };

/// f(u) = -u^3 drives everything below.
struct SpdeConfig {
  double alpha = 1.0;
  double sigma = 0.5;
  double gamma = 1.0;
  double dt = 1e-4;
  double horizon = 1.0;
  Scheme scheme = Scheme::SemiImplicitEM;

  int steps() const;
  void validate() const;
};

struct ModelTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::uint64_t seed = 0;
  std::string provenance;

  void append(double t, std::vector<double> state);
  /// header: t, then one column per state entry named with `prefix` and a 1-based index.
  void writeCsv(const std::string& path, const std::string& prefix = "U") const;
};

/// Periodic reference solver on a uniform fine grid x_i = i L / N.
class FullSpdeSolver {
public:
  FullSpdeSolver(double length, int points, const SpdeConfig& cfg, const QWienerSpec& spec);

  int points() const { return points_; }
  double spacing() const { return dx_; }
  const std::vector<double>& nodes() const { return nodes_; }
  std::vector<double> sample(const std::function<double(double)>& f) const;

  /// One step of u <- u + dt (u_xx + alpha (u - u^3)) + sigma dW, u_xx implicit when
  /// the scheme is semi-implicit.
  void step(std::vector<double>& u, const NoisePath& noise, int step) const;

private:
  double length_;
  int points_;
  double dx_;
  SpdeConfig cfg_;
  std::vector<double> nodes_;
  BasisTable basis_;
  std::unique_ptr<CyclicTridiagonal> implicit_;
  mutable std::vector<double> work_;
};

/// Convenience wrapper; builds the solver on every call.
std::vector<double> stepFullSpde(const std::vector<double>& state, double length,
                                 const SpdeConfig& cfg, const NoisePath& noise, int step);

/// The gamma-coupled element system
///   du_j = (L_gamma u_j + alpha gamma^2 u_j + alpha f(u_j)) dt + sigma dW^gamma_j,
/// stepped in the reduced coordinates of H_gamma so the coupling conditions hold exactly.
/// The element noise uses every mode of L_gamma, which makes it the mass projection of
/// gamma W onto H_gamma.
class CoupledElementSolver {
public:
  CoupledElementSolver(const CoupledOperator& op, const SpdeConfig& cfg, const QWienerSpec& spec);

  const CoupledOperator& op() const { return *op_; }
  Eigen::VectorXd initial(const ElementField& u0) const { return op_->projectCoordinates(u0); }
  ElementField field(const Eigen::VectorXd& x) const { return op_->prolong(x); }
  void step(Eigen::VectorXd& x, const NoisePath& noise, int step) const;
  /// Upper estimate of the largest eigenvalue of -L_gamma (power iteration).
  double stiffnessBound() const { return lambdaMax_; }

private:
  std::shared_ptr<const CoupledOperator> op_;
  SpdeConfig cfg_;
  BasisTable basis_;
  double lambdaMax_ = 0.0;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> solver_;
  mutable std::vector<double> noise_;
};

Eigen::VectorXd stepCoupledElements(const Eigen::VectorXd& state, const SpdeConfig& cfg,
                                    const CoupledOperator& op, const NoisePath& noise, int step);

/// Per-element slow amplitudes a_j = <u_j, e_{j,0}> / ||e_{j,0}||^2 and the remainder.
struct SlowFastSplit {
  std::vector<double> amplitude;
  ElementField slow;
  ElementField fast;
};
SlowFastSplit slowFastDecompose(const ElementField& state, const ElementModeSet& modes);
SlowFastSplit slowFastDecompose(const ElementField& state, const EigenSystem& eig,
                                const CoupledOperator& op);

/// Throws NumericalAbort naming `what` if any entry is not finite.
void requireFinite(const double* data, std::size_t n, const std::string& what);

}  // namespace srd
