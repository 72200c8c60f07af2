#include "srd/averaging.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace srd {

double defaultFastCutoff(const DomainGrid& grid) {
  return 400.0 / (grid.spacing() * grid.spacing());
}

FastModeStats ouStationaryStats(const ElementNoiseProjection& proj, const EigenSystem& eig0,
                                double sigma, MomentReading reading, double cutoff) {
  const DomainGrid& g = proj.modes.grid;
  if (!eig0.analytic || eig0.gamma != 0.0 || proj.modes.gamma != 0.0)
    throw std::invalid_argument("fast-mode statistics are built on the insulated (gamma = 0) modes");
  if (!(eig0.grid == g)) throw std::invalid_argument("eigen-system and projection grids differ");
  if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
  if (cutoff <= 0.0) cutoff = defaultFastCutoff(g);

  const double h = g.spacing();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const int maxLevel = static_cast<int>(std::floor(std::sqrt(cutoff) * h / std::numbers::pi + 1e-12));
  int projLevel = 0;
  for (int k : proj.modes.level) projLevel = std::max(projLevel, k);
  if (projLevel < maxLevel)
    throw std::invalid_argument("projection holds levels up to " + std::to_string(projLevel) +
                                " but the fast cutoff needs " + std::to_string(maxLevel));

  FastModeStats s{g, sigma, 0, reading, {}, {}, {}, {}, ElementField(g), {}, {}, 0.0, cutoff};
  for (int l = 0; l < proj.modeCount(); ++l) {
    int k = proj.modes.level[l];
    if (k >= 1 && k <= maxLevel) s.modeIndex.push_back(l);
  }
  s.modes = static_cast<int>(s.modeIndex.size());
  if (s.modes == 0) throw std::invalid_argument("fast cutoff leaves no fast modes");

  const int m = g.elements();
  s.lambda.resize(static_cast<std::size_t>(m) * s.modes);
  s.qh.resize(s.lambda.size());
  s.variance.resize(s.lambda.size());
  s.projectedSecondMoment.assign(m, 0.0);
  s.pointwiseSecondMoment.assign(m, 0.0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < s.modes; ++i) {
      const int l = s.modeIndex[i];
      const double lam = proj.modes.lambdaAt(j, l);
      if (!(lam > 0.0)) throw std::invalid_argument("fast mode with non-positive eigenvalue");
      const double q = proj.qhAt(j, l);
      const double v = sigma * sigma * q / (2.0 * lam);
      const std::size_t at = static_cast<std::size_t>(j) * s.modes + i;
      s.lambda[at] = lam;
      s.qh[at] = q;
      s.variance[at] = v;
      // modes are normalized, so <e_k^2, e_0> e_0(X_j) = 1 / (2h)
      s.projectedSecondMoment[j] += v / (2.0 * h);
      const double c = proj.modes.centerAt(j, l);
      s.pointwiseSecondMoment[j] += v * c * c;
      const ElementField& e = proj.modes.fields[l];
      for (Half hf : {Half::Left, Half::Right})
        for (int n = 0; n < g.halfNodes(); ++n) {
          double val = e.at(j, hf, n);
          s.fieldSecondMoment.at(j, hf, n) += v * val * val;
        }
    }
  }
  // Neglected modes: sum of their q^h over an element is at most sum_k q_k ||e_k||^2_{I_j}
  // <= 2h (2/L) tr Q (Bessel), and each has lambda >= the next level.
  const int next = maxLevel + 1;
  const double lambdaNext = next * next * pi2 / (h * h);
  double trace = 0.0;
  for (double q : proj.spec.q) trace += q;
  s.truncationBound = sigma * sigma * (2.0 * h * 2.0 / g.length() * trace) / (2.0 * lambdaNext) / (2.0 * h);
  return s;
}

std::vector<double> averagedDrift(const std::vector<double>& ubar, const FastModeStats& stats) {
  if (static_cast<int>(ubar.size()) != stats.grid.elements())
    throw std::invalid_argument("one amplitude per element expected");
  std::vector<double> out(ubar.size());
  for (std::size_t j = 0; j < ubar.size(); ++j) {
    double u = ubar[j];
    out[j] = -(u * u * u + 3.0 * u * stats.secondMoment(static_cast<int>(j)));
  }
  return out;
}

std::vector<double> computeHatAlpha(const FastModeStats& stats, double alpha) {
  std::vector<double> out(static_cast<std::size_t>(stats.grid.elements()));
  for (int j = 0; j < stats.grid.elements(); ++j) out[j] = alpha - 3.0 * alpha * stats.secondMoment(j);
  return out;
}

std::vector<double> computeHatAlpha(const ElementNoiseProjection& proj, const EigenSystem& eig0,
                                    double alpha, double sigma, const DomainGrid& grid) {
  if (!(proj.modes.grid == grid)) throw std::invalid_argument("projection sampled on a different grid");
  return computeHatAlpha(ouStationaryStats(proj, eig0, sigma), alpha);
}

std::vector<double> computeQj(const FastModeStats& stats, const EigenSystem& eig0,
                              const DomainGrid& grid) {
  if (!(stats.grid == grid) || !(eig0.grid == grid))
    throw std::invalid_argument("statistics, eigen-system and grid disagree");
  int maxLevel = 1;
  for (int l = 0; l < eig0.count(); ++l) maxLevel = std::max(maxLevel, eig0.level[l]);
  ElementModeSet modes = elementModes(eig0, maxLevel);
  const int m = grid.elements();
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < stats.modes; ++i) {
      const int l = stats.modeIndex[i];
      if (l >= modes.count) throw std::invalid_argument("eigen-system lacks a fast mode level");
      ElementField sq = modes.fields[l];
      for (double& v : sq.element(j)) v *= v;
      const double c = elementInnerProduct(sq, modes.fields[0], j);
      const double v = stats.varianceAt(j, i);
      out[j] += c * c * v * v / stats.lambdaAt(j, i);
    }
  }
  return out;
}

AveragedCoeffs averagedCoefficients(const FastModeStats& stats, const EigenSystem& eig0,
                                    double alpha, double gamma) {
  return AveragedCoeffs{computeHatAlpha(stats, alpha), computeQj(stats, eig0, stats.grid),
                        stats.sigma, alpha, stats.grid.spacing(), gamma};
}

double limitCoefficient(double qh, double lambda, LimitScaling scaling) {
  return scaling == LimitScaling::Literal ? std::sqrt(qh / lambda) : std::sqrt(qh) / lambda;
}

double MartingaleDriver::varianceRate(int j) const {
  double s = 0.0;
  for (int i = 0; i < modes; ++i) {
    double c = coupling[static_cast<std::size_t>(j) * modes + i];
    s += c * c;
  }
  return s;
}

std::vector<double> MartingaleDriver::combine(const Eigen::MatrixXd& hatIncrements, int step) const {
  if (hatIncrements.rows() != static_cast<Eigen::Index>(elements) * modes)
    throw std::invalid_argument("expected one auxiliary driver per element and fast mode");
  std::vector<double> out(static_cast<std::size_t>(elements), 0.0);
  for (int j = 0; j < elements; ++j)
    for (int i = 0; i < modes; ++i) {
      const std::size_t at = static_cast<std::size_t>(j) * modes + i;
      out[j] += coupling[at] * hatIncrements(static_cast<Eigen::Index>(at), step);
    }
  return out;
}

MartingaleDriver martingaleLimitDriver(const FastModeStats& stats, const ElementModeSet& modes,
                                       const GroundModeExpansion& expansion, LimitScaling scaling) {
  const DomainGrid& g = stats.grid;
  if (!(modes.grid == g) || !(expansion.f1.grid() == g))
    throw std::invalid_argument("modes, expansion and statistics use different grids");
  MartingaleDriver d{scaling, g.elements(), stats.modes, {}};
  d.coupling.resize(static_cast<std::size_t>(g.elements()) * stats.modes);
  for (int j = 0; j < g.elements(); ++j)
    for (int i = 0; i < stats.modes; ++i) {
      const int l = stats.modeIndex[i];
      const double proj = elementInnerProduct(modes.fields[l], expansion.f1, j);
      d.coupling[static_cast<std::size_t>(j) * stats.modes + i] =
          limitCoefficient(stats.qhAt(j, i), stats.lambdaAt(j, i), scaling) * proj;
    }
  return d;
}

double integratedOuVariance(double sigma, double qh, double lambda, double gamma, double t) {
  const double r = lambda / (gamma * gamma);
  return sigma * sigma * qh / (lambda * lambda) * (t - (1.0 - std::exp(-r * t)) / r);
}

void writeCoefficientCsv(const std::string& path, const AveragedCoeffs& coeffs,
                         const FastModeStats& stats) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "j,hatAlpha,Qj,truncation_bound\n" << std::setprecision(17);
  for (std::size_t j = 0; j < coeffs.hatAlpha.size(); ++j)
    out << j + 1 << ',' << coeffs.hatAlpha[j] << ',' << coeffs.Qj[j] << ','
        << 3.0 * std::abs(coeffs.alpha) * stats.truncationBound << '\n';
}

}  // namespace srd
