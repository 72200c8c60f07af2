#include "srd/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "srd/errors.hpp"

namespace srd {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

std::string toString(ModelKind kind) {
  switch (kind) {
    case ModelKind::ConventionalFD: return "conventionalFD";
    case ModelKind::GammaReduced: return "gammaReduced";
    case ModelKind::Holistic: return "holistic";
    case ModelKind::HolisticIntroVariant: return "holisticIntroVariant";
  }
  return "unknown";
}

ModelKind modelKindFromString(const std::string& name) {
  for (ModelKind k : {ModelKind::ConventionalFD, ModelKind::GammaReduced, ModelKind::Holistic,
                      ModelKind::HolisticIntroVariant})
    if (toString(k) == name) return k;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

double GridState::at(int j) const {
  const int m = size();
  int r = j % m;
  return U[r < 0 ? r + m : r];
}

NoiseBinder::NoiseBinder(const ElementNoiseProjection& proj, const std::vector<double>& Qj,
                         const NoisePath& path, std::optional<MartingaleDriver> limit)
    : path_(&path), elements_(proj.elements()), limit_(std::move(limit)) {
  const int m = elements_, nk = proj.spec.modes();
  if (path.spec.modes() != nk) throw std::invalid_argument("noise path and projection truncations differ");
  if (static_cast<int>(Qj.size()) != m) throw std::invalid_argument("one Q_j per element expected");
  const DomainGrid& g = proj.modes.grid;
  const double scale = proj.options.halveGroundVariance ? std::sqrt(0.5) : 1.0;
  pointTable_.resize(static_cast<std::size_t>(nk) * m);
  groundTable_.resize(pointTable_.size());
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j < m; ++j) {
      const double sq = std::sqrt(proj.spec.q[k]);
      pointTable_[static_cast<std::size_t>(k) * m + j] = sq * proj.spec.basis(k, g.center(j));
      groundTable_[static_cast<std::size_t>(k) * m + j] = scale * sq * proj.weight(j, 0, k);
    }
  for (int j = 0; j < m; ++j) {
    if (Qj[j] < 0.0) throw std::invalid_argument("Q_j must be non-negative");
    sqrtQ_.push_back(std::sqrt(Qj[j]));
    center_.push_back(proj.modes.centerAt(j, 0));
  }
  deviationInc_ = sampleAuxiliaryIncrements(m, path.times, path.seed, kDeviationStream);
  if (limit_) {
    if (limit_->elements != m) throw std::invalid_argument("martingale driver element count differs");
    limitInc_ = sampleAuxiliaryIncrements(m * limit_->modes, path.times, path.seed, kLimitStream);
  }
}

void NoiseBinder::drivers(int step, StepDrivers& out) const {
  if (step < 0 || step >= path_->steps()) throw std::out_of_range("noise step out of range");
  const int m = elements_;
  const int nk = static_cast<int>(path_->increments.rows());
  out.point.assign(m, 0.0);
  out.ground.assign(m, 0.0);
  for (int k = 0; k < nk; ++k) {
    const double db = path_->increments(k, step);
    const double* pt = &pointTable_[static_cast<std::size_t>(k) * m];
    const double* gt = &groundTable_[static_cast<std::size_t>(k) * m];
    for (int j = 0; j < m; ++j) {
      out.point[j] += pt[j] * db;
      out.ground[j] += gt[j] * db;
    }
  }
  out.deviation.resize(m);
  for (int j = 0; j < m; ++j) out.deviation[j] = sqrtQ_[j] * deviationInc_(j, step);
  if (limit_) out.limit = limit_->combine(limitInc_, step);
  else out.limit.assign(m, 0.0);
  out.center = center_;
}

StepDrivers NoiseBinder::drivers(int step) const {
  StepDrivers d;
  drivers(step, d);
  return d;
}

namespace {

void checkSizes(const GridState& s, const StepDrivers& d) {
  const std::size_t m = s.U.size();
  if (m < 3) throw std::invalid_argument("grid state needs at least 3 values");
  if (d.center.size() != m || d.ground.size() != m || d.deviation.size() != m || d.point.size() != m ||
      d.limit.size() != m)
    throw std::invalid_argument("driver families must have one entry per grid value");
}

void finish(GridState& s, std::vector<double>& next, double dt, const char* model) {
  requireFinite(next.data(), next.size(), std::string(model) + " step at t = " + std::to_string(s.t));
  s.U.swap(next);
  s.t += dt;
}

}  // namespace

void stepConventionalFD(GridState& s, const SpdeConfig& cfg, double h, const StepDrivers& d) {
  const int m = s.size();
  if (static_cast<int>(d.point.size()) != m) throw std::invalid_argument("one point noise per grid value");
  const double dt = cfg.dt, a = cfg.alpha, sig = cfg.sigma;
  std::vector<double> next(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double u = s.U[j], ul = s.at(j - 1), ur = s.at(j + 1);
    const double lap = (ul - 2.0 * u + ur) / (h * h);
    // same association as the holistic drift, so sigma = 0 makes the two steps identical
    const double drift = lap + a * u - a * u * u * u;
    next[j] = u + dt * drift + sig * d.point[j];
  }
  finish(s, next, dt, "conventional FD");
}

void stepHolistic(GridState& s, const SpdeConfig& cfg, const AveragedCoeffs& coeffs,
                  const StepDrivers& d, HolisticOptions opt) {
  checkSizes(s, d);
  const int m = s.size();
  const double dt = cfg.dt, a = cfg.alpha, sig = cfg.sigma, h = coeffs.h;
  const double devf = opt.deviationAlpha ? a : 1.0;
  std::vector<double> next(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const int jl = (j + m - 1) % m, jr = (j + 1) % m;
    const double u = s.U[j], ul = s.U[jl], ur = s.U[jr];
    const double lap = (ul - 2.0 * u + ur) / (h * h);
    const double drift = lap + coeffs.hatAlpha[j] * u - a * u * u * u;
    const double b0 = d.ground[j] * d.center[j];
    const double b1 = d.ground[j] * d.center[jl];
    const double bm1 = d.ground[j] * d.center[jr];
    const double c0 = d.deviation[j] * d.center[j];
    next[j] = u + dt * drift + sig * b0 + 3.0 * kSqrt2 * devf * u * c0 +
              sig / 4.0 * (b1 - 2.0 * b0 + bm1);
  }
  finish(s, next, dt, "holistic");
}

void stepHolisticIntro(GridState& s, const SpdeConfig& cfg, const AveragedCoeffs& coeffs,
                       const StepDrivers& d, HolisticOptions opt) {
  checkSizes(s, d);
  const int m = s.size();
  const double dt = cfg.dt, a = cfg.alpha, sig = cfg.sigma, h = coeffs.h;
  const double devf = opt.deviationAlpha ? a : 1.0;
  std::vector<double> next(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const int jl = (j + m - 1) % m, jr = (j + 1) % m;
    const double u = s.U[j], ul = s.U[jl], ur = s.U[jr];
    const double lap = (ul - 2.0 * u + ur) / (h * h);
    const double drift = lap + coeffs.hatAlpha[j] * u - a * u * u * u;
    const double w = d.point[j];
    const double wCheck = d.deviation[j] * d.center[j];
    next[j] = u + dt * drift + sig * w + 3.0 * kSqrt2 * devf * u * wCheck +
              sig / 4.0 * (d.point[jr] - 2.0 * w + d.point[jl]);
  }
  finish(s, next, dt, "holistic (introduction form)");
}

GammaReducedTerms gammaReducedTerms(const GridState& s, const SpdeConfig& cfg,
                                    const AveragedCoeffs& coeffs, const StepDrivers& d,
                                    GammaReducedOptions opt) {
  checkSizes(s, d);
  const int m = s.size();
  const double g = opt.gamma, g2 = g * g, g3 = g2 * g;
  const double dt = cfg.dt, a = cfg.alpha, sig = cfg.sigma, h = coeffs.h;
  const double devf = opt.deviationAlpha ? a : 1.0;
  GammaReducedTerms out;
  auto add = [&](const char* name, int order) -> std::vector<double>& {
    out.terms.push_back({name, order, std::vector<double>(static_cast<std::size_t>(m))});
    return out.terms.back().value;
  };
  auto& diffusion = add("diffusion", 2);
  auto& linear = add("linear", 2);
  auto& cubic = add("cubic", 0);
  auto& ground = add("ground noise", 1);
  auto& limit = add("limit noise", 2);
  auto& deviation = add("deviation noise", 2);
  auto& groundSt = add("ground stencil", 2);
  auto& limitSt = add("limit stencil", 3);
  auto& devSt = add("deviation stencil", 3);
  for (int j = 0; j < m; ++j) {
    const int jl = (j + m - 1) % m, jr = (j + 1) % m;
    const double u = s.U[j];
    const double lap = (s.U[jl] - 2.0 * u + s.U[jr]) / (h * h);
    diffusion[j] = dt * g2 * lap;
    linear[j] = dt * g2 * coeffs.hatAlpha[j] * u;
    cubic[j] = -dt * a * u * u * u;
    ground[j] = sig * g * d.ground[j] * d.center[j];
    limit[j] = sig * g2 * d.limit[j] * d.center[j];
    deviation[j] = 3.0 * kSqrt2 * g2 * devf * u * d.deviation[j] * d.center[j];
    groundSt[j] = sig * g2 / 4.0 * d.ground[j] * (d.center[jl] - 2.0 * d.center[j] + d.center[jr]);
    limitSt[j] = sig * g3 / 4.0 * d.limit[j] * (d.center[jl] - 2.0 * d.center[j] + d.center[jr]);
    devSt[j] = 3.0 * kSqrt2 / 4.0 * g3 * u * d.deviation[j] *
               (d.center[jl] - 2.0 * d.center[j] + d.center[jr]);
  }
  if (opt.truncate) {
    std::erase_if(out.terms, [](const GammaReducedTerms::Term& t) {
      return t.name == "limit noise" || t.order >= 3;
    });
  }
  return out;
}

void stepGammaReduced(GridState& s, const SpdeConfig& cfg, const AveragedCoeffs& coeffs,
                      const StepDrivers& d, GammaReducedOptions opt) {
  checkSizes(s, d);
  if (!(opt.gamma > 0.0 && opt.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  const int m = s.size();
  const double g = opt.gamma, g2 = g * g, g3 = g2 * g;
  const double dt = cfg.dt, a = cfg.alpha, sig = cfg.sigma, h = coeffs.h;
  const double devf = opt.deviationAlpha ? a : 1.0;
  std::vector<double> next(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const int jl = (j + m - 1) % m, jr = (j + 1) % m;
    const double u = s.U[j], ul = s.U[jl], ur = s.U[jr];
    const double lap = (ul - 2.0 * u + ur) / (h * h);
    // every gamma power enters as a multiplier, so gamma = 1 reproduces the holistic step
    const double drift = g2 * lap + g2 * coeffs.hatAlpha[j] * u - a * u * u * u;
    const double b0 = d.ground[j] * d.center[j];
    const double b1 = d.ground[j] * d.center[jl];
    const double bm1 = d.ground[j] * d.center[jr];
    const double c0 = d.deviation[j] * d.center[j];
    double v = u + dt * drift + sig * g * b0;
    if (!opt.truncate) v += sig * g2 * (d.limit[j] * d.center[j]);
    v += 3.0 * kSqrt2 * g2 * devf * u * c0;
    v += sig * g2 / 4.0 * (b1 - 2.0 * b0 + bm1);
    if (!opt.truncate) {
      const double hat0 = d.limit[j] * d.center[j];
      v += sig * g3 / 4.0 * (d.limit[j] * d.center[jl] - 2.0 * hat0 + d.limit[j] * d.center[jr]);
      const double c1 = d.deviation[j] * d.center[jl];
      const double cm1 = d.deviation[j] * d.center[jr];
      v += 3.0 * kSqrt2 / 4.0 * g3 * u * (c1 - 2.0 * c0 + cm1);
    }
    next[j] = v;
  }
  finish(s, next, dt, "gamma-reduced");
}

ReducedSlowModel::ReducedSlowModel(const EigenSystem& eig, const CoupledOperator& op,
                                   const FastModeStats& stats, const AveragedCoeffs& coeffs,
                                   const SpdeConfig& cfg, const QWienerSpec& spec)
    : op_(&op), cfg_(cfg), basis_(spec, [&] {
        const DomainGrid& g = op.grid();
        std::vector<double> x(static_cast<std::size_t>(g.fieldSize()));
        for (int j = 0; j < g.elements(); ++j)
          for (Half hf : {Half::Left, Half::Right})
            for (int i = 0; i < g.halfNodes(); ++i) x[g.nodeIndex(j, hf, i)] = g.nodePosition(j, hf, i);
        return x;
      }()) {
  const DomainGrid& g = op.grid();
  const int m = g.elements();
  if (eig.analytic || !(eig.grid == g)) throw std::invalid_argument("reduced model needs the numeric eigen-system on the operator grid");
  if (std::abs(eig.gamma - cfg.gamma) > 1e-15 || std::abs(op.gamma() - cfg.gamma) > 1e-15)
    throw std::invalid_argument("eigen-system, operator and config disagree on gamma");
  if (eig.count() < m) throw std::invalid_argument("eigen-system must hold the slow band");
  if (!(stats.grid == g)) throw std::invalid_argument("fast statistics on a different grid");
  for (int j = 0; j < m; ++j) secondMoment_.push_back(stats.secondMoment(j));
  Qj_ = coeffs.Qj;
  mu_.resize(m);
  for (int i = 0; i < m; ++i) mu_[i] = eig.values[i];
  V_ = eig.fields.leftCols(m);
  MV_ = op.fullMass() * V_;
  C_.resize(m, m);
  for (int i = 0; i < m; ++i) {
    ElementField f = eig.field(i);
    for (int j = 0; j < m; ++j) C_(j, i) = f.centerValue(j);
  }
  Clu_.compute(C_);
}

Eigen::VectorXd ReducedSlowModel::amplitudesFromGrid(const std::vector<double>& U) const {
  if (static_cast<int>(U.size()) != size()) throw std::invalid_argument("one grid value per element");
  return Clu_.solve(Eigen::Map<const Eigen::VectorXd>(U.data(), size()));
}

std::vector<double> ReducedSlowModel::gridValues(const Eigen::VectorXd& a) const {
  Eigen::VectorXd u = C_ * a;
  return {u.data(), u.data() + u.size()};
}

void ReducedSlowModel::step(Eigen::VectorXd& a, const NoisePath* noise, int step,
                            const std::vector<double>* deviation) const {
  const DomainGrid& g = op_->grid();
  const int per = g.elementNodes();
  const double dt = cfg_.dt, al = cfg_.alpha, gm = cfg_.gamma, sig = cfg_.sigma;
  Eigen::VectorXd u0 = V_ * a;
  Eigen::VectorXd f(u0.size());
  for (Eigen::Index i = 0; i < u0.size(); ++i) {
    const double v = u0[i];
    f[i] = -(v * v * v + 3.0 * v * secondMoment_[static_cast<std::size_t>(i / per)]);
  }
  Eigen::VectorXd drift = -mu_.cwiseProduct(a) + al * gm * gm * a + al * (MV_.transpose() * f);
  Eigen::VectorXd next = a + dt * drift;
  if (noise) {
    std::vector<double> w;
    basis_.synthesize(*noise, step, w);
    next += sig * gm * (MV_.transpose() * Eigen::Map<const Eigen::VectorXd>(w.data(), u0.size()));
  }
  if (deviation) {
    if (static_cast<int>(deviation->size()) != g.elements())
      throw std::invalid_argument("one deviation increment per element");
    Eigen::VectorXd dev(u0.size());
    for (Eigen::Index i = 0; i < u0.size(); ++i) {
      const std::size_t j = static_cast<std::size_t>(i / per);
      dev[i] = al * gm * gm * 3.0 * std::sqrt(2.0 * Qj_[j]) * u0[i] * (*deviation)[j];
    }
    next += MV_.transpose() * dev;
  }
  requireFinite(next.data(), static_cast<std::size_t>(next.size()), "reduced slow step");
  a = next;
}

}  // namespace srd
