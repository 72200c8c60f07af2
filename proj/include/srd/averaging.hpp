#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "srd/grid.hpp"
#include "srd/noise.hpp"
#include "srd/spectral.hpp"

namespace srd {

/// Which second moment of the fast field enters the averaged drift and alpha-hat.
enum class MomentReading {
  Projection,  // <E eta^2, e_{j,0}> e_{j,0}(X_j) = (1/2h) sum_k v_k
  Pointwise,   // E eta^2(X_j) = sum_k v_k e_k(X_j)^2
};

/// Stationary OU statistics of the fast element modes (levels >= 1 of the insulated system).
struct FastModeStats {
  DomainGrid grid;
  double sigma = 0.0;
  int modes = 0;  // fast modes per element
  MomentReading reading = MomentReading::Projection;
  std::vector<int> modeIndex;  // index of each fast mode in the projection's mode set
  std::vector<double> lambda;  // [j * modes + i]
  std::vector<double> qh;
  std::vector<double> variance;  // sigma^2 q^h / (2 lambda)
  ElementField fieldSecondMoment;
  std::vector<double> projectedSecondMoment;  // per element
  std::vector<double> pointwiseSecondMoment;  // per element
  double truncationBound = 0.0;  // bound on neglected projected second moment
  double cutoff = 0.0;

  double varianceAt(int j, int i) const { return variance[static_cast<std::size_t>(j) * modes + i]; }
  double lambdaAt(int j, int i) const { return lambda[static_cast<std::size_t>(j) * modes + i]; }
  double qhAt(int j, int i) const { return qh[static_cast<std::size_t>(j) * modes + i]; }
  /// Second moment entering the averaged drift, per the selected reading.
  double secondMoment(int j) const {
    return reading == MomentReading::Projection ? projectedSecondMoment[j] : pointwiseSecondMoment[j];
  }
};

/// Default cutoff: keep fast modes with lambda <= 400 / h^2.
double defaultFastCutoff(const DomainGrid& grid);

/// Fast statistics from a projection built on the insulated modes. Modes above `cutoff`
/// (default 400 / h^2) are dropped; the neglected tail is bounded analytically.
FastModeStats ouStationaryStats(const ElementNoiseProjection& proj, const EigenSystem& eig0,
                                double sigma, MomentReading reading = MomentReading::Projection,
                                double cutoff = -1.0);

/// -(U^3 + 3 U E eta^2) per element.
std::vector<double> averagedDrift(const std::vector<double>& ubar, const FastModeStats& stats);

struct AveragedCoeffs {
  std::vector<double> hatAlpha;
  std::vector<double> Qj;
  double sigma = 0.0;
  double alpha = 0.0;
  double h = 0.0;
  double gamma = 0.0;
};

std::vector<double> computeHatAlpha(const FastModeStats& stats, double alpha);
/// Convenience overload that builds the statistics itself.
std::vector<double> computeHatAlpha(const ElementNoiseProjection& proj, const EigenSystem& eig0,
                                    double alpha, double sigma, const DomainGrid& grid);

/// Q_j = sum_k c_k v_k^2 / lambda_k with c_k = <e_k^2, e_0>^2 (Isserlis, independent modes).
std::vector<double> computeQj(const FastModeStats& stats, const EigenSystem& eig0,
                              const DomainGrid& grid);

AveragedCoeffs averagedCoefficients(const FastModeStats& stats, const EigenSystem& eig0,
                                    double alpha, double gamma);

/// Scaling of the martingale-limit coefficient of fast mode k.
enum class LimitScaling {
  Literal,  // sqrt(q / lambda), as printed
  OuExact,  // sqrt(q) / lambda, from the integrated OU covariance
};

double limitCoefficient(double qh, double lambda, LimitScaling scaling);

/// Per-element combined driver beta-hat_{j,0} = sum_k c_k <e_{j,k}, F1_j> beta-hat_{j,k}.
struct MartingaleDriver {
  LimitScaling scaling = LimitScaling::Literal;
  int elements = 0;
  int modes = 0;
  std::vector<double> coupling;  // c_k <e_{j,k}, F1_j>, [j * modes + i]

  double varianceRate(int j) const;
  /// Combines per-mode increments (rows j * modes + i) into per-element increments.
  std::vector<double> combine(const Eigen::MatrixXd& hatIncrements, int step) const;
};

MartingaleDriver martingaleLimitDriver(const FastModeStats& stats, const ElementModeSet& modes,
                                       const GroundModeExpansion& expansion,
                                       LimitScaling scaling = LimitScaling::Literal);

/// Exact variance of (1/gamma) int_0^t eta ds for the OU process
/// d eta = -(lambda / gamma^2) eta dt + (sigma sqrt(q) / gamma) dB started at stationarity.
double integratedOuVariance(double sigma, double qh, double lambda, double gamma, double t);

/// j,hatAlpha,Qj,truncation_bound
void writeCoefficientCsv(const std::string& path, const AveragedCoeffs& coeffs,
                         const FastModeStats& stats);

}  // namespace srd
