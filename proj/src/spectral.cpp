#include "srd/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace srd {

using Triplets = std::vector<Eigen::Triplet<double>>;

CoupledOperator::CoupledOperator(const DomainGrid& grid, double gamma, MassKind mass)
    : grid_(grid), gamma_(gamma), massKind_(mass) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("coupling gamma must lie in [0, 1], got " + std::to_string(gamma));

  const int m = grid.elements();
  const int n = grid.subgrid();
  const int full = grid.fieldSize();
  const int reduced = m * (2 * n - 1);
  const double dx = grid.subStep();
  const double gp = 1.0 - gamma;

  Triplets p;
  p.reserve(static_cast<std::size_t>(full) + 4 * m);
  for (int j = 0; j < m; ++j) {
    const int c = centerDof(j);
    // left end sits on X_{j-1}, right end on X_{j+1}
    p.emplace_back(grid.nodeIndex(j, Half::Left, 0), c, gp);
    if (gamma != 0.0) p.emplace_back(grid.nodeIndex(j, Half::Left, 0), centerDof(j - 1), gamma);
    p.emplace_back(grid.nodeIndex(j, Half::Right, n), c, gp);
    if (gamma != 0.0) p.emplace_back(grid.nodeIndex(j, Half::Right, n), centerDof(j + 1), gamma);
    p.emplace_back(grid.nodeIndex(j, Half::Left, n), c, 1.0);
    p.emplace_back(grid.nodeIndex(j, Half::Right, 0), c, 1.0);
    for (Half h : {Half::Left, Half::Right})
      for (int i = 1; i < n; ++i) p.emplace_back(grid.nodeIndex(j, h, i), interiorDof(j, h, i), 1.0);
  }
  prolong_.resize(full, reduced);
  prolong_.setFromTriplets(p.begin(), p.end());

  double diag = 0.0, off = 0.0;
  if (mass == MassKind::Mixed) {
    diag = 5.0 * dx / 12.0;
    off = dx / 12.0;
  } else {
    diag = 0.5 * dx;
  }
  Triplets k, mm;
  for (int j = 0; j < m; ++j)
    for (Half h : {Half::Left, Half::Right})
      for (int i = 0; i < n; ++i) {
        int a = grid.nodeIndex(j, h, i), b = a + 1;
        k.emplace_back(a, a, 1.0 / dx);
        k.emplace_back(b, b, 1.0 / dx);
        k.emplace_back(a, b, -1.0 / dx);
        k.emplace_back(b, a, -1.0 / dx);
        mm.emplace_back(a, a, diag);
        mm.emplace_back(b, b, diag);
        if (off != 0.0) {
          mm.emplace_back(a, b, off);
          mm.emplace_back(b, a, off);
        }
      }
  fullStiffness_.resize(full, full);
  fullStiffness_.setFromTriplets(k.begin(), k.end());
  fullMass_.resize(full, full);
  fullMass_.setFromTriplets(mm.begin(), mm.end());

  Eigen::SparseMatrix<double> pt = prolong_.transpose();
  stiffness_ = pt * fullStiffness_ * prolong_;
  mass_ = pt * fullMass_ * prolong_;
  stiffness_.prune(0.0);
  mass_.prune(0.0);

  massSolver_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(mass_);
  if (massSolver_->info() != Eigen::Success)
    throw std::runtime_error("operator mass matrix is not positive definite");
}

CoupledOperator assembleOperator(const DomainGrid& grid, double gamma, MassKind mass) {
  return CoupledOperator(grid, gamma, mass);
}

int CoupledOperator::centerDof(int j) const {
  return grid_.wrap(j) * (2 * grid_.subgrid() - 1);
}

int CoupledOperator::interiorDof(int j, Half h, int i) const {
  const int n = grid_.subgrid();
  return centerDof(j) + (h == Half::Left ? 0 : n - 1) + i;
}

ElementField CoupledOperator::prolong(const Eigen::VectorXd& x) const {
  if (x.size() != reducedSize()) throw std::invalid_argument("reduced vector size mismatch");
  Eigen::VectorXd full = prolong_ * x;
  return ElementField(grid_, std::vector<double>(full.data(), full.data() + full.size()));
}

Eigen::VectorXd CoupledOperator::restrict(const ElementField& u) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("field sampled on a different grid");
  Eigen::VectorXd x(reducedSize());
  const int n = grid_.subgrid();
  for (int j = 0; j < grid_.elements(); ++j) {
    x[centerDof(j)] = u.centerValue(j);
    for (Half h : {Half::Left, Half::Right})
      for (int i = 1; i < n; ++i) x[interiorDof(j, h, i)] = u.at(j, h, i);
  }
  return x;
}

Eigen::VectorXd CoupledOperator::massTimes(const ElementField& u) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("field sampled on a different grid");
  Eigen::Map<const Eigen::VectorXd> v(u.values().data(), static_cast<Eigen::Index>(u.values().size()));
  return fullMass_ * v;
}

Eigen::VectorXd CoupledOperator::solveMass(const Eigen::VectorXd& rhs) const {
  return massSolver_->solve(rhs);
}

Eigen::VectorXd CoupledOperator::projectCoordinates(const ElementField& u) const {
  Eigen::VectorXd rhs = prolong_.transpose() * massTimes(u);
  return solveMass(rhs);
}

ElementField CoupledOperator::project(const ElementField& u) const {
  return prolong(projectCoordinates(u));
}

ElementField CoupledOperator::apply(const ElementField& u) const {
  Eigen::VectorXd x = restrict(u);
  Eigen::VectorXd y = solveMass(-(stiffness_ * x));
  return prolong(y);
}

double CoupledOperator::inner(const ElementField& u, const ElementField& v) const {
  Eigen::Map<const Eigen::VectorXd> a(u.values().data(), static_cast<Eigen::Index>(u.values().size()));
  return a.dot(massTimes(v));
}

double CoupledOperator::couplingResidual(const ElementField& u) const {
  const int n = grid_.subgrid();
  const double gp = 1.0 - gamma_;
  double worst = u.continuityDefect();
  for (int j = 0; j < grid_.elements(); ++j) {
    double c = u.centerValue(j);
    double left = u.at(j, Half::Left, 0) - (gp * c + gamma_ * u.centerValue(grid_.wrap(j - 1)));
    double right = u.at(j, Half::Right, n) - (gp * c + gamma_ * u.centerValue(grid_.wrap(j + 1)));
    worst = std::max({worst, std::abs(left), std::abs(right)});
  }
  return worst;
}

std::vector<EigenCluster> groupClusters(const std::vector<double>& values, double relTol,
                                        double absTol) {
  std::vector<EigenCluster> out;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (!out.empty()) {
      EigenCluster& last = out.back();
      double prev = values[i - 1];
      double gap = std::abs(values[i] - prev);
      double scale = std::max(std::abs(values[i]), std::abs(prev));
      if (gap <= relTol * scale || gap <= absTol) {
        last.value = (last.value * last.size + values[i]) / (last.size + 1);
        ++last.size;
        continue;
      }
    }
    out.push_back({i, 1, values[i]});
  }
  return out;
}

ElementField EigenSystem::field(int i) const {
  if (i < 0 || i >= fields.cols()) throw std::out_of_range("eigenfield index out of range");
  const double* p = fields.col(i).data();
  return ElementField(grid, std::vector<double>(p, p + fields.rows()));
}

int levelMultiplicity(int k) {
  if (k < 0) throw std::invalid_argument("negative level");
  if (k == 0) return 1;
  return (k % 2 == 0) ? 3 : 1;
}

int modesThroughLevel(int kMax) {
  int total = 0;
  for (int k = 0; k <= kMax; ++k) total += levelMultiplicity(k);
  return total;
}

double analyticElementMode(double h, int k, int index, double s) {
  if (k == 0) return 1.0 / std::sqrt(2.0 * h);
  const double w = k * std::numbers::pi / h;
  const double norm = 1.0 / std::sqrt(h);
  if (k % 2 == 1) return norm * std::sin(w * s);
  switch (index) {
    case 0: return norm * std::cos(w * s);
    case 1: return norm * std::sin(w * s);
    case 2: return norm * std::sin(w * std::abs(s));
    default: throw std::invalid_argument("mode index out of range for level");
  }
}

namespace {

double modeResidual(const CoupledOperator& op, const ElementField& u, double lambda) {
  ElementField r = op.apply(u);
  r += lambda * u;
  return std::sqrt(std::max(0.0, op.inner(r, r)));
}

void fillClusters(EigenSystem& sys) {
  double top = 0.0;
  for (double v : sys.values) top = std::max(top, std::abs(v));
  sys.clusters = groupClusters(sys.values, 1e-6, 100.0 * std::numeric_limits<double>::epsilon() * top);
}

}  // namespace

EigenSystem eigGamma0(const DomainGrid& grid, int kMax) {
  if (kMax < 1) throw std::invalid_argument("kMax must be at least 1");
  const int m = grid.elements();
  const double h = grid.spacing();
  const int perElement = modesThroughLevel(kMax);
  EigenSystem sys{grid, 0.0, true, {}, Eigen::MatrixXd::Zero(grid.fieldSize(), m * perElement),
                  {}, {}, {}, {}};
  CoupledOperator op(grid, 0.0);
  int col = 0;
  for (int k = 0; k <= kMax; ++k) {
    const double lambda = k * k * std::numbers::pi * std::numbers::pi / (h * h);
    for (int idx = 0; idx < levelMultiplicity(k); ++idx)
      for (int j = 0; j < m; ++j) {
        ElementField u(grid);
        for (Half hf : {Half::Left, Half::Right})
          for (int i = 0; i < grid.halfNodes(); ++i)
            u.at(j, hf, i) = analyticElementMode(h, k, idx, grid.localCoordinate(hf, i));
        sys.fields.col(col) = Eigen::Map<const Eigen::VectorXd>(u.values().data(), grid.fieldSize());
        sys.values.push_back(lambda);
        sys.residuals.push_back(modeResidual(op, u, lambda));
        sys.element.push_back(j);
        sys.level.push_back(k);
        ++col;
      }
  }
  fillClusters(sys);
  return sys;
}

EigenSystem eigGamma(const CoupledOperator& op, int count) {
  const int n = op.reducedSize();
  if (count <= 0 || count > n) count = n;
  Eigen::MatrixXd k(op.stiffness());
  Eigen::MatrixXd m(op.mass());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, m);
  if (solver.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mcheck(m, Eigen::EigenvaluesOnly);
    double lo = mcheck.eigenvalues().minCoeff(), hi = mcheck.eigenvalues().maxCoeff();
    throw std::runtime_error("generalized eigensolver failed; mass condition number " +
                             std::to_string(hi / lo));
  }
  EigenSystem sys{op.grid(), op.gamma(), false, {}, {}, {}, {}, {}, {}};
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  Eigen::MatrixXd reduced = vecs.leftCols(count);
  sys.fields = op.prolongation() * reduced;
  for (int i = 0; i < count; ++i) {
    double lambda = solver.eigenvalues()[i];
    sys.values.push_back(lambda);
    Eigen::VectorXd r = op.stiffness() * reduced.col(i) - lambda * (op.mass() * reduced.col(i));
    sys.residuals.push_back(std::sqrt(std::max(0.0, r.dot(op.solveMass(r)))));
  }
  // clusters are judged against the full spectrum so that the absolute floor is meaningful
  double top = solver.eigenvalues().cwiseAbs().maxCoeff();
  sys.clusters = groupClusters(sys.values, 1e-6, 100.0 * std::numeric_limits<double>::epsilon() * top);
  return sys;
}

ElementModeSet elementModes(const EigenSystem& eig0, int kMax) {
  if (!eig0.analytic) throw std::invalid_argument("insulated modes need the analytic system");
  const DomainGrid& g = eig0.grid;
  const double h = g.spacing();
  ElementModeSet set{g, 0.0, modesThroughLevel(kMax), {}, {}, {}, {}};
  for (int k = 0; k <= kMax; ++k)
    for (int idx = 0; idx < levelMultiplicity(k); ++idx) {
      set.level.push_back(k);
      set.fields.push_back(ElementField::sample(
          g, [&](int, double, double s) { return analyticElementMode(h, k, idx, s); }));
    }
  set.lambda.resize(static_cast<std::size_t>(g.elements() * set.count));
  set.center.resize(set.lambda.size());
  for (int j = 0; j < g.elements(); ++j)
    for (int l = 0; l < set.count; ++l) {
      int k = set.level[l];
      set.lambda[j * set.count + l] = k * k * std::numbers::pi * std::numbers::pi / (h * h);
      set.center[j * set.count + l] = set.fields[l].centerValue(j);
    }
  return set;
}

ElementModeSet elementModes(const EigenSystem& eig, const CoupledOperator& op, int kMax) {
  const DomainGrid& g = eig.grid;
  if (!(op.grid() == g)) throw std::invalid_argument("eigen-system and operator grids differ");
  const int m = g.elements();
  const int perElement = modesThroughLevel(kMax);
  if (eig.count() < m * perElement)
    throw std::invalid_argument("eigen-system holds too few pairs for the requested levels");
  if (eig.analytic) return elementModes(eig, kMax);

  const double h = g.spacing();
  ElementModeSet set{g, eig.gamma, perElement, {}, {}, {}, {}};
  set.lambda.resize(static_cast<std::size_t>(m * perElement));
  set.center.resize(set.lambda.size());
  int bandStart = 0;
  for (int k = 0; k <= kMax; ++k) {
    const int bandSize = m * levelMultiplicity(k);
    const Eigen::MatrixXd band = eig.fields.middleCols(bandStart, bandSize);
    for (int idx = 0; idx < levelMultiplicity(k); ++idx) {
      const int l = static_cast<int>(set.level.size());
      set.level.push_back(k);
      ElementField out(g);
      for (int j = 0; j < m; ++j) {
        ElementField phi(g);
        for (Half hf : {Half::Left, Half::Right})
          for (int i = 0; i < g.halfNodes(); ++i)
            phi.at(j, hf, i) = analyticElementMode(h, k, idx, g.localCoordinate(hf, i));
        Eigen::VectorXd coeff = band.transpose() * op.massTimes(phi);
        Eigen::VectorXd proj = band * coeff;
        double num = 0.0, den = coeff.squaredNorm();
        for (int b = 0; b < bandSize; ++b) num += coeff[b] * coeff[b] * eig.values[bandStart + b];
        auto dst = out.element(j);
        const int base = g.nodeIndex(j, Half::Left, 0);
        for (int i = 0; i < g.elementNodes(); ++i) dst[i] = proj[base + i];
        double norm = std::sqrt(elementInnerProduct(out, out, j));
        if (!(norm > 0.0)) throw std::runtime_error("element mode vanished under projection");
        for (double& v : dst) v /= norm;
        set.lambda[j * perElement + l] = den > 0.0 ? num / den : 0.0;
        set.center[j * perElement + l] = out.centerValue(j);
      }
      set.fields.push_back(std::move(out));
    }
    bandStart += bandSize;
  }
  return set;
}

int groundModeIndex(const EigenSystem& eig) {
  const int m = eig.grid.elements();
  if (static_cast<int>(eig.values.size()) < m) throw std::invalid_argument("eigensystem lacks the slow band");
  double top = 0.0;
  for (double v : eig.values) top = std::max(top, std::abs(v));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, top);
  // Shifting by one element commutes with the operator, so every slow eigenspace has a fixed
  // lag-one correlation of centre values: +1 for the uniform field, -1 for the simple
  // alternating field, cos(2 pi k / M) for the pairs. Unlike cluster widths this survives
  // gamma^2 gaps that approach roundoff.
  int best = -1;
  double bestRho = 1.0;
  for (int i = 0; i < m; ++i) {
    if (!(eig.values[i] > floor)) continue;
    const ElementField f = eig.field(i);
    double lag = 0.0, norm = 0.0;
    for (int j = 0; j < m; ++j) {
      lag += f.centerValue(j) * f.centerValue(eig.grid.wrap(j + 1));
      norm += f.centerValue(j) * f.centerValue(j);
    }
    const double rho = norm > 0.0 ? lag / norm : 1.0;
    if (rho < bestRho) {
      bestRho = rho;
      best = i;
    }
  }
  if (best < 0 || bestRho > -1.0 + 1e-3)
    throw std::runtime_error(
        "no simple non-uniform eigenpair in the slow band; the ground cluster is degenerate "
        "(odd element counts have only paired slow modes)");
  return best;
}

ElementField groundMode(const EigenSystem& eig) {
  ElementField u = eig.field(groundModeIndex(eig));
  const DomainGrid& g = eig.grid;
  std::vector<double> means;
  double biggest = 0.0;
  for (int j = 0; j < g.elements(); ++j) {
    double sum = 0.0;
    for (double v : u.element(j)) sum += v;
    means.push_back(sum / g.elementNodes());
    biggest = std::max(biggest, std::abs(means.back()));
  }
  for (double mean : means)
    if (std::abs(mean) > 1e-8 * biggest) {
      if (mean < 0.0) u *= -1.0;
      break;
    }
  return u;
}

GroundModeExpansion expansionFromCenters(const DomainGrid& g, const std::vector<double>& center,
                                         double gamma) {
  const int m = g.elements();
  if (static_cast<int>(center.size()) != m) throw std::invalid_argument("one centre value per element");
  const double h = g.spacing();
  GroundModeExpansion e{gamma, center, std::vector<double>(m), ElementField(g), ElementField(g),
                        ElementField(g), 0.0};
  for (int j = 0; j < m; ++j) {
    const double cl = center[g.wrap(j - 1)], c = center[j], cr = center[g.wrap(j + 1)];
    const double a = (cl - 2.0 * c + cr) / (2.0 * h * h);
    e.curvature[j] = a;
    for (int i = 0; i < g.halfNodes(); ++i) {
      double s = g.localCoordinate(Half::Left, i);
      e.f1.at(j, Half::Left, i) = (c - cl) / h * s;
      e.f2.at(j, Half::Left, i) = a * s * (s + h);
      s = g.localCoordinate(Half::Right, i);
      e.f1.at(j, Half::Right, i) = (cr - c) / h * s;
      e.f2.at(j, Half::Right, i) = a * s * (s - h);
    }
  }
  return e;
}

GroundModeExpansion expandGroundMode(const EigenSystem& eig, const DomainGrid& g) {
  if (!(eig.grid == g)) throw std::invalid_argument("eigen-system sampled on a different grid");
  ElementField u = groundMode(eig);
  std::vector<double> center(static_cast<std::size_t>(g.elements()));
  for (int j = 0; j < g.elements(); ++j) center[j] = u.centerValue(j);
  GroundModeExpansion e = expansionFromCenters(g, center, eig.gamma);
  ElementField rem = u;
  for (int j = 0; j < g.elements(); ++j)
    for (Half hf : {Half::Left, Half::Right})
      for (int i = 0; i < g.halfNodes(); ++i)
        rem.at(j, hf, i) -= center[j] + eig.gamma * e.f1.at(j, hf, i) +
                            eig.gamma * eig.gamma * e.f2.at(j, hf, i);
  e.remainderNorm = std::sqrt(innerProduct(rem, rem, g));
  e.remainder = std::move(rem);
  return e;
}

namespace {

// Columns of a, made orthonormal in the full-node mass metric.
Eigen::MatrixXd massOrthonormal(const Eigen::MatrixXd& a, const Eigen::SparseMatrix<double>& mass) {
  Eigen::MatrixXd gram = a.transpose() * (mass * a);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw std::runtime_error("subspace basis is rank deficient");
  Eigen::MatrixXd lInvT = llt.matrixL().solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  return a * lInvT.transpose();
}

}  // namespace

std::vector<double> principalCosines(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                     const CoupledOperator& op) {
  if (a.rows() != b.rows() || a.rows() != op.grid().fieldSize())
    throw std::invalid_argument("subspace bases must be full-node columns on the operator grid");
  Eigen::MatrixXd qa = massOrthonormal(a, op.fullMass());
  Eigen::MatrixXd qb = massOrthonormal(b, op.fullMass());
  Eigen::MatrixXd cross = qa.transpose() * (op.fullMass() * qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
  for (double& c : out) c = std::min(1.0, c);
  return out;
}

void writeEigenCsv(const std::string& path, const std::vector<EigenSystem>& systems) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "gamma,k,lambda,multiplicity,residual\n" << std::setprecision(17);
  for (const EigenSystem& s : systems)
    for (const EigenCluster& c : s.clusters)
      for (int i = c.first; i < c.first + c.size; ++i)
        out << s.gamma << ',' << i << ',' << s.values[i] << ',' << c.size << ',' << s.residuals[i]
            << '\n';
}

}  // namespace srd
