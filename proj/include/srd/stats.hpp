#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace srd {

/// Welford accumulator; merge() combines partial results (Chan et al.).
class RunningStats {
public:
  void add(double x);
  void merge(const RunningStats& other);
  long count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; needs at least two samples.
  double variance() const;
  double standardError() const;

private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EnsembleStats {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> standardError;
  long count = 0;

  /// Rows are members, columns observables; reduced in member order.
  static EnsembleStats fromSamples(const std::vector<std::string>& names,
                                   const std::vector<std::vector<double>>& samples);
  int find(const std::string& name) const;
  void writeCsv(const std::string& path) const;
};

/// Estimate with standard error and a symmetric confidence half-width.
struct Estimate {
  double value = 0.0;
  double standardError = 0.0;
};

Estimate meanEstimate(const std::vector<double>& x);
/// mean(a) - mean(b) from paired samples.
Estimate pairedMeanDifference(const std::vector<double>& a, const std::vector<double>& b);
/// var(a) - var(b) from paired samples, standard error by the delta method.
Estimate pairedVarianceDifference(const std::vector<double>& a, const std::vector<double>& b);
/// Empirical quantile (linear interpolation between order statistics).
double quantile(std::vector<double> x, double p);
/// quantile(a) - quantile(b) from paired samples, standard error by a seeded bootstrap.
Estimate pairedQuantileDifference(const std::vector<double>& a, const std::vector<double>& b,
                                  double p, int resamples, std::uint64_t seed);

}  // namespace srd
