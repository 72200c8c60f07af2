#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <string>
#include <vector>

#include "srd/grid.hpp"

namespace srd {

/// Mass matrix used for the operator's inner product. Mixed is the average of the
/// lumped (trapezoid) and consistent P1 masses, which makes the discrete spectrum
/// fourth-order accurate; Trapezoid is the plain quadrature.
enum class MassKind { Mixed, Trapezoid };

/// -L_gamma discretized with P1 elements on the subspace H_gamma of element fields
/// that satisfy the value coupling u_j(X_{j+-1}) = gamma' u_j(X_j) + gamma u_{j+-1}(X_{j+-1})
/// and value continuity at X_j. The flux coupling is the natural boundary condition of
/// the energy sum_j ||u_j'||^2, so K and M below are symmetric by construction.
///
/// Reduced coordinates per element: centre value, then the subgrid-1 interior nodes of the
/// left half, then those of the right half.
class CoupledOperator {
public:
  CoupledOperator(const DomainGrid& grid, double gamma, MassKind mass = MassKind::Mixed);

  const DomainGrid& grid() const { return grid_; }
  double gamma() const { return gamma_; }
  double gammaPrime() const { return 1.0 - gamma_; }
  MassKind massKind() const { return massKind_; }
  int reducedSize() const { return static_cast<int>(stiffness_.rows()); }

  /// Reduced-coordinate index of the centre of element j and of interior node i of a half.
  int centerDof(int j) const;
  int interiorDof(int j, Half h, int i) const;

  const Eigen::SparseMatrix<double>& prolongation() const { return prolong_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const Eigen::SparseMatrix<double>& mass() const { return mass_; }
  const Eigen::SparseMatrix<double>& fullMass() const { return fullMass_; }

  ElementField prolong(const Eigen::VectorXd& x) const;
  /// Reads reduced coordinates off a field assumed to lie in H_gamma.
  Eigen::VectorXd restrict(const ElementField& u) const;
  /// Mass-orthogonal projection of an arbitrary element field onto H_gamma.
  Eigen::VectorXd projectCoordinates(const ElementField& u) const;
  ElementField project(const ElementField& u) const;

  /// L_gamma u for u in H_gamma, returned as a field in H_gamma.
  ElementField apply(const ElementField& u) const;
  /// Operator inner product <u, v> (mass of the chosen kind on full nodes).
  double inner(const ElementField& u, const ElementField& v) const;
  Eigen::VectorXd massTimes(const ElementField& u) const;

  /// Largest violation of the value coupling conditions for a field (0 for fields in H_gamma).
  double couplingResidual(const ElementField& u) const;

  Eigen::VectorXd solveMass(const Eigen::VectorXd& rhs) const;

private:
  DomainGrid grid_;
  double gamma_;
  MassKind massKind_;
  Eigen::SparseMatrix<double> prolong_;
  Eigen::SparseMatrix<double> fullStiffness_;
  Eigen::SparseMatrix<double> fullMass_;
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::SparseMatrix<double> mass_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> massSolver_;
};

CoupledOperator assembleOperator(const DomainGrid& grid, double gamma,
                                 MassKind mass = MassKind::Mixed);

struct EigenCluster {
  int first = 0;
  int size = 0;
  double value = 0.0;
};

/// Groups ascending eigenvalues whose relative gap is below relTol (absolute floor absTol).
std::vector<EigenCluster> groupClusters(const std::vector<double>& values, double relTol = 1e-6,
                                        double absTol = 0.0);

/// Eigenpairs of -L_gamma. Eigenfields are stored as columns of full-node values.
struct EigenSystem {
  DomainGrid grid;
  double gamma = 0.0;
  bool analytic = false;
  std::vector<double> values;
  Eigen::MatrixXd fields;  // fieldSize x count
  std::vector<double> residuals;
  std::vector<EigenCluster> clusters;
  /// For analytic systems: element and level of each pair.
  std::vector<int> element;
  std::vector<int> level;

  int count() const { return static_cast<int>(values.size()); }
  ElementField field(int i) const;
};

/// Multiplicity of level k of the insulated element spectrum k^2 pi^2 / h^2.
int levelMultiplicity(int k);
/// Number of modes per element for levels 0..kMax.
int modesThroughLevel(int kMax);

/// Insulated element mode (level k, index within level), as a function of s = x - X_j.
double analyticElementMode(double h, int k, int index, double s);

/// Analytic eigen-system of -L_0 for levels 0..kMax on every element.
EigenSystem eigGamma0(const DomainGrid& grid, int kMax);

/// Numeric eigen-system: the lowest `count` pairs (all when count <= 0).
EigenSystem eigGamma(const CoupledOperator& op, int count = -1);

/// Per-element mode set used by the noise projection and the averaging step.
/// fields[l] carries mode l on every element; lambda/center are indexed [j * count + l].
struct ElementModeSet {
  DomainGrid grid;
  double gamma = 0.0;
  int count = 0;
  std::vector<int> level;
  std::vector<double> lambda;
  std::vector<double> center;
  std::vector<ElementField> fields;

  double lambdaAt(int j, int l) const { return lambda[j * count + l]; }
  double centerAt(int j, int l) const { return center[j * count + l]; }
};

/// Insulated modes for levels 0..kMax, sampled on the grid.
ElementModeSet elementModes(const EigenSystem& eig0, int kMax);
/// Modes at coupling gamma: each analytic mode, zero-extended off its element, is projected
/// onto the numeric eigenspace of its own level, restricted to the element and normalized.
/// `eig` must hold at least M * modesThroughLevel(kMax) pairs.
ElementModeSet elementModes(const EigenSystem& eig, const CoupledOperator& op, int kMax);

/// Index of the ground mode: the lowest simple, non-uniform eigenpair in the slow band
/// (the first M pairs). Throws std::runtime_error if every slow cluster is degenerate.
int groundModeIndex(const EigenSystem& eig);
/// Ground mode field with the sign convention applied.
ElementField groundMode(const EigenSystem& eig);

struct GroundModeExpansion {
  double gamma = 0.0;
  std::vector<double> center;  // e_{j,0}(X_j)
  std::vector<double> curvature;  // A_j
  ElementField f1;
  ElementField f2;
  ElementField remainder;
  double remainderNorm = 0.0;
};

/// Builds the piecewise-linear and piecewise-quadratic corrections from centre values.
GroundModeExpansion expansionFromCenters(const DomainGrid& grid, const std::vector<double>& center,
                                         double gamma);
GroundModeExpansion expandGroundMode(const EigenSystem& eig, const DomainGrid& grid);

/// Cosines of the principal angles between span(A) and span(B), both given as column
/// sets of full-node values and orthonormal in the operator mass of `op`.
std::vector<double> principalCosines(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                     const CoupledOperator& op);

/// gamma,k,lambda,multiplicity,residual
void writeEigenCsv(const std::string& path, const std::vector<EigenSystem>& systems);

}  // namespace srd
