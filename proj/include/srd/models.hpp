#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srd/averaging.hpp"
#include "srd/dynamics.hpp"
#include "srd/noise.hpp"
#include "srd/spectral.hpp"

namespace srd {

enum class ModelKind { ConventionalFD, GammaReduced, Holistic, HolisticIntroVariant };

std::string toString(ModelKind kind);
ModelKind modelKindFromString(const std::string& name);

struct GridState {
  std::vector<double> U;
  double t = 0.0;

  int size() const { return static_cast<int>(U.size()); }
  double at(int j) const;
};

/// Per-step noise inputs. Each family holds the element's own driver; the neighbour
/// combinations B_{j,i} are own driver times the centre value e_{j-i,0}(X_{j-i}).
struct StepDrivers {
  std::vector<double> point;      // W(X_j) increment
  std::vector<double> ground;     // sqrt(q^h_{j,0}) d beta_{j,0}
  std::vector<double> deviation;  // sqrt(Q_j) d beta-check_j
  std::vector<double> limit;      // d beta-hat_{j,0}
  std::vector<double> center;     // e_{j,0}(X_j)
};

/// Binds the shared global path and the auxiliary streams to per-step model drivers.
class NoiseBinder {
public:
  NoiseBinder(const ElementNoiseProjection& proj, const std::vector<double>& Qj,
              const NoisePath& path, std::optional<MartingaleDriver> limit = std::nullopt);

  StepDrivers drivers(int step) const;
  void drivers(int step, StepDrivers& out) const;
  int steps() const { return path_->steps(); }
  const NoisePath& path() const { return *path_; }
  const std::vector<double>& center() const { return center_; }

  /// Stream identifiers for the auxiliary Brownian motions.
  static constexpr std::uint64_t kDeviationStream = 0xD1;
  static constexpr std::uint64_t kLimitStream = 0xD2;

private:
  const NoisePath* path_;
  int elements_;
  std::vector<double> pointTable_;   // [k * M + j] = sqrt(q_k) e_k(X_j)
  std::vector<double> groundTable_;  // [k * M + j] = sqrt(q_k) w_{j,0,k} scaled to the ground variance
  std::vector<double> sqrtQ_;
  std::vector<double> center_;
  Eigen::MatrixXd deviationInc_;
  Eigen::MatrixXd limitInc_;
  std::optional<MartingaleDriver> limit_;
};

/// U_j <- U_j + dt [(U_{j+1} - 2U_j + U_{j-1}) / h^2 + alpha (U_j - U_j^3)] + sigma dW_j
void stepConventionalFD(GridState& s, const SpdeConfig& cfg, double h, const StepDrivers& d);

struct HolisticOptions {
  /// Multiply the 3 sqrt(2) U dB-check term by alpha (as in the gamma-expanded model).
  bool deviationAlpha = false;
};

void stepHolistic(GridState& s, const SpdeConfig& cfg, const AveragedCoeffs& coeffs,
                  const StepDrivers& d, HolisticOptions opt = {});
/// Same closure with point noises W(X_j) in place of the projected drivers.
void stepHolisticIntro(GridState& s, const SpdeConfig& cfg, const AveragedCoeffs& coeffs,
                       const StepDrivers& d, HolisticOptions opt = {});

struct GammaReducedOptions {
  double gamma = 1.0;
  /// Drop sigma gamma^2 dB-hat and both gamma^3 stencils.
  bool truncate = false;
  bool deviationAlpha = false;
};

/// Each term of one step of the gamma-expanded model, before summation; `order` is the
/// power of gamma that multiplies the term for fixed drivers and state.
struct GammaReducedTerms {
  struct Term {
    std::string name;
    int order;
    std::vector<double> value;
  };
  std::vector<Term> terms;
};

GammaReducedTerms gammaReducedTerms(const GridState& s, const SpdeConfig& cfg,
                                    const AveragedCoeffs& coeffs, const StepDrivers& d,
                                    GammaReducedOptions opt);
// Slow amplitudes stay O(gamma) only if sigma is O(gamma) as well; nothing here checks that.
void stepGammaReduced(GridState& s, const SpdeConfig& cfg, const AveragedCoeffs& coeffs,
                      const StepDrivers& d, GammaReducedOptions opt);

/// The averaged slow equation in the coordinates of the slow eigenbasis v_0..v_{M-1}:
///   da = (-mu a + alpha gamma^2 a + alpha <Fbar(U_0), v>) dt + sigma gamma <dW, v>
///        + alpha gamma^2 <sum_j 3 sqrt(2 Q_j) U_0|_{I_j} d beta-check_j, v>.
/// Grid values are read off as centre values, U = C a.
class ReducedSlowModel {
public:
  ReducedSlowModel(const EigenSystem& eig, const CoupledOperator& op, const FastModeStats& stats,
                   const AveragedCoeffs& coeffs, const SpdeConfig& cfg, const QWienerSpec& spec);

  int size() const { return static_cast<int>(mu_.size()); }
  Eigen::VectorXd amplitudesFromGrid(const std::vector<double>& U) const;
  std::vector<double> gridValues(const Eigen::VectorXd& a) const;
  /// `noise` may be null for a drift-only step; `deviation` holds one d beta-check per element.
  void step(Eigen::VectorXd& a, const NoisePath* noise, int step, const std::vector<double>* deviation) const;
  const Eigen::MatrixXd& centerMap() const { return C_; }

private:
  const CoupledOperator* op_;
  SpdeConfig cfg_;
  std::vector<double> secondMoment_;
  std::vector<double> Qj_;
  Eigen::VectorXd mu_;
  Eigen::MatrixXd V_;   // full-node slow basis
  Eigen::MatrixXd MV_;  // full mass times V
  Eigen::MatrixXd C_;
  Eigen::PartialPivLU<Eigen::MatrixXd> Clu_;
  BasisTable basis_;
};

}  // namespace srd
