#include "srd/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace srd {

CyclicTridiagonal::CyclicTridiagonal(int n, double sub, double diag, double super)
    : n_(n), a_(sub), b_(diag), c_(super) {
  if (n < 3) throw std::invalid_argument("cyclic tridiagonal system needs n >= 3");
  // A = T + u v^T with u = (g, 0, .., 0, c), v = (1, 0, .., 0, a/g)
  gammaShift_ = -b_;
  cPrime_.resize(n_);
  denom_.resize(n_);
  double bFirst = b_ - gammaShift_;
  double bLast = b_ - a_ * c_ / gammaShift_;
  for (int i = 0; i < n_; ++i) {
    double bi = (i == 0) ? bFirst : (i == n_ - 1 ? bLast : b_);
    double m = (i == 0) ? bi : bi - a_ * cPrime_[i - 1];
    if (m == 0.0) throw std::runtime_error("cyclic tridiagonal factorization broke down");
    denom_[i] = m;
    cPrime_[i] = c_ / m;
  }
  z_.assign(n_, 0.0);
  z_[0] = gammaShift_;
  z_[n_ - 1] = c_;
  thomas(z_);
  zFactor_ = 1.0 + z_[0] + a_ * z_[n_ - 1] / gammaShift_;
}

void CyclicTridiagonal::thomas(std::vector<double>& d) const {
  d[0] /= denom_[0];
  for (int i = 1; i < n_; ++i) d[i] = (d[i] - a_ * d[i - 1]) / denom_[i];
  for (int i = n_ - 2; i >= 0; --i) d[i] -= cPrime_[i] * d[i + 1];
}

void CyclicTridiagonal::solve(std::vector<double>& rhs) const {
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("rhs size mismatch");
  thomas(rhs);
  double f = (rhs[0] + a_ * rhs[n_ - 1] / gammaShift_) / zFactor_;
  for (int i = 0; i < n_; ++i) rhs[i] -= f * z_[i];
}

OrderFit fitLogLog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("order fit: x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("order fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("order fit needs strictly positive data");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double cxy = sxy - sx * sy / n;
  if (vx <= 0.0) throw std::invalid_argument("order fit needs distinct abscissae");
  OrderFit fit;
  fit.order = cxy / vx;
  fit.intercept = (sy - fit.order * sx) / n;
  fit.rSquared = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace srd
