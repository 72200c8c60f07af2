#include "srd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <stdexcept>

#include "srd/numerics.hpp"

namespace srd {

void RunningStats::add(double x) {
  ++n_;
  double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double n = static_cast<double>(n_ + o.n_);
  const double d = o.mean_ - mean_;
  mean_ += d * static_cast<double>(o.n_) / n;
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
  n_ += o.n_;
}

double RunningStats::variance() const {
  if (n_ < 2) throw std::logic_error("variance needs at least two samples");
  return m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::standardError() const {
  return std::sqrt(variance() / static_cast<double>(n_));
}

EnsembleStats EnsembleStats::fromSamples(const std::vector<std::string>& names,
                                         const std::vector<std::vector<double>>& samples) {
  if (samples.empty()) throw std::invalid_argument("ensemble statistics need at least one member");
  std::vector<RunningStats> acc(names.size());
  for (const auto& row : samples) {
    if (row.size() != names.size()) throw std::invalid_argument("sample row width differs from names");
    for (std::size_t i = 0; i < row.size(); ++i) acc[i].add(row[i]);
  }
  EnsembleStats s;
  s.names = names;
  s.count = static_cast<long>(samples.size());
  for (const auto& a : acc) {
    s.mean.push_back(a.mean());
    // a single member has no variance; reported as NaN rather than invented
    s.variance.push_back(a.count() > 1 ? a.variance() : std::nan(""));
    s.standardError.push_back(a.count() > 1 ? a.standardError() : std::nan(""));
  }
  return s;
}

int EnsembleStats::find(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

void EnsembleStats::writeCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "observable,mean,variance,standard_error,count\n" << std::setprecision(17);
  for (std::size_t i = 0; i < names.size(); ++i)
    out << names[i] << ',' << mean[i] << ',' << variance[i] << ',' << standardError[i] << ',' << count << '\n';
}

Estimate meanEstimate(const std::vector<double>& x) {
  RunningStats s;
  for (double v : x) s.add(v);
  return {s.mean(), s.standardError()};
}

Estimate pairedMeanDifference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return meanEstimate(d);
}

Estimate pairedVarianceDifference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 3) throw std::invalid_argument("need at least 3 paired samples");
  const double n = static_cast<double>(a.size());
  const Estimate ma = meanEstimate(a), mb = meanEstimate(b);
  // influence functions of the two variances; their difference has variance var(psi)/n
  std::vector<double> psi(a.size());
  double va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    va += (a[i] - ma.value) * (a[i] - ma.value);
    vb += (b[i] - mb.value) * (b[i] - mb.value);
  }
  va /= n - 1.0;
  vb /= n - 1.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    psi[i] = (a[i] - ma.value) * (a[i] - ma.value) - (b[i] - mb.value) * (b[i] - mb.value);
  const Estimate p = meanEstimate(psi);
  return {va - vb, p.standardError};
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  std::sort(x.begin(), x.end());
  const double pos = p * static_cast<double>(x.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * x[lo] + w * x[hi];
}

Estimate pairedQuantileDifference(const std::vector<double>& a, const std::vector<double>& b,
                                  double p, int resamples, std::uint64_t seed) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("need paired samples");
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least 2 resamples");
  const double point = quantile(a, p) - quantile(b, p);
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
  RunningStats boot;
  std::vector<double> ra(a.size()), rb(b.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::size_t k = pick(rng);
      ra[i] = a[k];
      rb[i] = b[k];
    }
    boot.add(quantile(ra, p) - quantile(rb, p));
  }
  return {point, std::sqrt(boot.variance())};
}

}  // namespace srd
