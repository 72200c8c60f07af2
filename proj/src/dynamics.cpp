#include "srd/dynamics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "srd/errors.hpp"

namespace srd {

int SpdeConfig::steps() const {
  return static_cast<int>(std::llround(horizon / dt));
}

void SpdeConfig::validate() const {
  std::vector<std::string> bad;
  if (!(dt > 0.0)) bad.push_back("dt must be positive");
  if (!(horizon > 0.0)) bad.push_back("horizon must be positive");
  if (!(sigma >= 0.0)) bad.push_back("sigma must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) bad.push_back("gamma must lie in [0, 1]");
  if (!std::isfinite(alpha)) bad.push_back("alpha must be finite");
  if (dt > 0.0 && horizon > 0.0 && std::abs(steps() * dt - horizon) > 1e-9 * horizon)
    bad.push_back("horizon must be an integer multiple of dt");
  if (!bad.empty()) throw ConfigError(bad);
}

void ModelTrajectory::append(double t, std::vector<double> state) {
  if (!times.empty() && !(t > times.back())) throw std::invalid_argument("trajectory times must increase");
  times.push_back(t);
  states.push_back(std::move(state));
}

void ModelTrajectory::writeCsv(const std::string& path, const std::string& prefix) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "t";
  const std::size_t width = states.empty() ? 0 : states.front().size();
  for (std::size_t i = 0; i < width; ++i) out << ',' << prefix << i + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t n = 0; n < times.size(); ++n) {
    out << times[n];
    for (double v : states[n]) out << ',' << v;
    out << '\n';
  }
}

void requireFinite(const double* data, std::size_t n, const std::string& what) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(data[i]))
      throw NumericalAbort(what + ": non-finite value at index " + std::to_string(i));
}

namespace {

std::vector<double> uniformNodes(double length, int points) {
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) x[i] = length * i / points;
  return x;
}

void checkStep(const SpdeConfig& cfg, const NoisePath& noise, int step) {
  if (step < 0 || step >= noise.steps()) throw std::out_of_range("noise step out of range");
  if (std::abs(noise.dt(step) - cfg.dt) > 1e-9 * cfg.dt)
    throw std::invalid_argument("noise path step differs from the configured dt");
}

}  // namespace

FullSpdeSolver::FullSpdeSolver(double length, int points, const SpdeConfig& cfg,
                               const QWienerSpec& spec)
    : length_(length),
      points_(points),
      dx_(length / points),
      cfg_(cfg),
      nodes_(uniformNodes(length, points)),
      basis_(spec, nodes_) {
  cfg.validate();
  if (points < 8) throw std::invalid_argument("reference grid needs at least 8 points");
  const double r = cfg.dt / (dx_ * dx_);
  if (cfg.scheme == Scheme::SemiImplicitEM) {
    implicit_ = std::make_unique<CyclicTridiagonal>(points, -r, 1.0 + 2.0 * r, -r);
  } else if (r * 4.0 > 2.0) {
    throw std::invalid_argument("explicit scheme unstable: dt * 4 / dx^2 = " + std::to_string(4.0 * r) +
                                " exceeds 2");
  }
}

std::vector<double> FullSpdeSolver::sample(const std::function<double(double)>& f) const {
  std::vector<double> u(nodes_.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(nodes_[i]);
  return u;
}

void FullSpdeSolver::step(std::vector<double>& u, const NoisePath& noise, int step) const {
  checkStep(cfg_, noise, step);
  if (static_cast<int>(u.size()) != points_) throw std::invalid_argument("state size mismatch");
  basis_.synthesize(noise, step, work_);
  const double dt = cfg_.dt, a = cfg_.alpha, s = cfg_.sigma;
  if (cfg_.scheme == Scheme::SemiImplicitEM) {
    for (int i = 0; i < points_; ++i) {
      double v = u[i];
      work_[i] = v + dt * a * (v - v * v * v) + s * work_[i];
    }
    implicit_->solve(work_);
    u.swap(work_);
  } else {
    const double r = dt / (dx_ * dx_);
    std::vector<double> next(u.size());
    for (int i = 0; i < points_; ++i) {
      double v = u[i];
      double lap = u[(i + points_ - 1) % points_] - 2.0 * v + u[(i + 1) % points_];
      next[i] = v + r * lap + dt * a * (v - v * v * v) + s * work_[i];
    }
    u.swap(next);
  }
  requireFinite(u.data(), u.size(), "reference SPDE step " + std::to_string(step));
}

std::vector<double> stepFullSpde(const std::vector<double>& state, double length,
                                 const SpdeConfig& cfg, const NoisePath& noise, int step) {
  FullSpdeSolver solver(length, static_cast<int>(state.size()), cfg, noise.spec);
  std::vector<double> u = state;
  solver.step(u, noise, step);
  return u;
}

namespace {

std::vector<double> elementNodePositions(const DomainGrid& g) {
  std::vector<double> x(static_cast<std::size_t>(g.fieldSize()));
  for (int j = 0; j < g.elements(); ++j)
    for (Half h : {Half::Left, Half::Right})
      for (int i = 0; i < g.halfNodes(); ++i) x[g.nodeIndex(j, h, i)] = g.nodePosition(j, h, i);
  return x;
}

double largestEigenvalue(const CoupledOperator& op) {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(op.reducedSize());
  for (int i = 0; i < x.size(); ++i) x[i] += (i % 2 == 0 ? 0.5 : -0.5) + 1e-3 * (i % 7);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd y = op.solveMass(op.stiffness() * x);
    double next = x.dot(op.stiffness() * x) / x.dot(op.mass() * x);
    x = y / y.norm();
    if (std::abs(next - lambda) <= 1e-6 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace

CoupledElementSolver::CoupledElementSolver(const CoupledOperator& op, const SpdeConfig& cfg,
                                           const QWienerSpec& spec)
    : op_(std::make_shared<CoupledOperator>(op)),
      cfg_(cfg),
      basis_(spec, elementNodePositions(op.grid())) {
  cfg.validate();
  if (std::abs(cfg.gamma - op.gamma()) > 1e-15)
    throw std::invalid_argument("configured gamma differs from the operator's gamma");
  lambdaMax_ = largestEigenvalue(op);
  if (cfg.scheme == Scheme::SemiImplicitEM) {
    Eigen::SparseMatrix<double> a = op.mass() + cfg.dt * op.stiffness();
    solver_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(a);
    if (solver_->info() != Eigen::Success) throw std::runtime_error("implicit element system is singular");
  } else if (cfg.dt * lambdaMax_ > 2.0) {
    throw std::invalid_argument("explicit scheme unstable: dt * lambda_max = " +
                                std::to_string(cfg.dt * lambdaMax_) + " exceeds 2");
  }
}

void CoupledElementSolver::step(Eigen::VectorXd& x, const NoisePath& noise, int step) const {
  checkStep(cfg_, noise, step);
  const CoupledOperator& op = *op_;
  if (x.size() != op.reducedSize()) throw std::invalid_argument("state size mismatch");
  basis_.synthesize(noise, step, noise_);
  Eigen::VectorXd u = op.prolongation() * x;
  const double dt = cfg_.dt, a = cfg_.alpha, g = cfg_.gamma, s = cfg_.sigma;
  Eigen::VectorXd forcing(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double v = u[i];
    forcing[i] = dt * (a * g * g * v - a * v * v * v) + s * g * noise_[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd rhs = op.prolongation().transpose() * (op.fullMass() * forcing);
  if (cfg_.scheme == Scheme::SemiImplicitEM) {
    rhs += op.mass() * x;
    x = solver_->solve(rhs);
  } else {
    rhs -= dt * (op.stiffness() * x);
    x += op.solveMass(rhs);
  }
  requireFinite(x.data(), static_cast<std::size_t>(x.size()),
                "coupled element step " + std::to_string(step));
}

Eigen::VectorXd stepCoupledElements(const Eigen::VectorXd& state, const SpdeConfig& cfg,
                                    const CoupledOperator& op, const NoisePath& noise, int step) {
  CoupledElementSolver solver(op, cfg, noise.spec);
  Eigen::VectorXd x = state;
  solver.step(x, noise, step);
  return x;
}

SlowFastSplit slowFastDecompose(const ElementField& state, const ElementModeSet& modes) {
  const DomainGrid& g = state.grid();
  if (!(modes.grid == g)) throw std::invalid_argument("modes sampled on a different grid");
  const ElementField& e = modes.fields.at(0);
  SlowFastSplit out{std::vector<double>(static_cast<std::size_t>(g.elements())), ElementField(g), state};
  for (int j = 0; j < g.elements(); ++j) {
    const double a = elementInnerProduct(state, e, j) / elementInnerProduct(e, e, j);
    out.amplitude[j] = a;
    auto src = e.element(j);
    auto slow = out.slow.element(j);
    auto fast = out.fast.element(j);
    for (std::size_t i = 0; i < src.size(); ++i) {
      slow[i] = a * src[i];
      fast[i] -= slow[i];
    }
  }
  return out;
}

SlowFastSplit slowFastDecompose(const ElementField& state, const EigenSystem& eig,
                                const CoupledOperator& op) {
  return slowFastDecompose(state, elementModes(eig, op, 0));
}

}  // namespace srd
