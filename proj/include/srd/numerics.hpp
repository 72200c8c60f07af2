#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace srd {

/// Solves the periodic tridiagonal system
///   sub*x[i-1] + diag*x[i] + super*x[i+1] = rhs[i],  indices mod n,
/// with constant coefficients (Sherman-Morrison on the Thomas algorithm).
class CyclicTridiagonal {
public:
  CyclicTridiagonal(int n, double sub, double diag, double super);
  void solve(std::vector<double>& rhs) const;
  int size() const { return n_; }

private:
  void thomas(std::vector<double>& d) const;

  int n_;
  double a_, b_, c_;
  double gammaShift_;
  std::vector<double> cPrime_;
  std::vector<double> denom_;
  std::vector<double> z_;
  double zFactor_ = 0.0;
};

/// Least-squares slope of log(y) against log(x); all entries must be positive.
struct OrderFit {
  double order = 0.0;
  double intercept = 0.0;
  double rSquared = 0.0;
};
OrderFit fitLogLog(const std::vector<double>& x, const std::vector<double>& y);

/// splitmix64 mixing step; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t stream);

/// FNV-1a over a byte string, for config hashes.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace srd
