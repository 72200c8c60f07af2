#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {
constexpr double pi = std::numbers::pi;
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13);
}

double fourier(double L, int k, double x) {
  if (k == 0) return 1.0 / std::sqrt(L);
  const int m = (k + 1) / 2;
  const double c = std::sqrt(2.0 / L);
  return k % 2 == 1 ? c * std::sin(2.0 * pi * m * x / L) : c * std::cos(2.0 * pi * m * x / L);
}

int multiplicity(int k) { return (k >= 2 && k % 2 == 0) ? 3 : 1; }

double insulatedEigenvalue(double h, int k) { return k * k * pi * pi / (h * h); }

double insulated(double h, int k, int idx, double s) {
  if (k == 0) return 1.0 / std::sqrt(2.0 * h);
  const double w = k * pi / h;
  if (k % 2 == 1) return std::sin(w * s) / std::sqrt(h);
  switch (idx) {
    case 0: return std::cos(w * s) / std::sqrt(h);
    case 1: return std::sin(w * s) / std::sqrt(h);
    default: return std::sin(w * std::abs(s)) / std::sqrt(h);
  }
}

double projectionWeight(double L, double h, double xc, int fk, int level, int idx) {
  auto f = [&](double s) { return fourier(L, fk, xc + s) * insulated(h, level, idx, s); };
  return integrate(f, -h, 0.0) + integrate(f, 0.0, h);
}

double projectedVariance(double L, double h, double xc, const std::vector<double>& q, int level, int idx) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double w = projectionWeight(L, h, xc, static_cast<int>(k), level, idx);
    s += q[k] * w * w;
  }
  return s;
}

double periodicDifferenceEigenvalue(int N, double dx, int m) {
  const double s = std::sin(pi * m / N);
  return 4.0 * s * s / (dx * dx);
}

double explicitOuVariance(double lambda, double s, double dt) {
  const double a = 1.0 - lambda * dt;
  return s * s * dt / (1.0 - a * a);
}

double implicitOuVariance(double lambda, double s, double dt) {
  const double a = 1.0 + lambda * dt;
  return s * s * dt / (a * a - 1.0);
}

double integratedStationaryVariance(double v, double r, double t) {
  return 2.0 * integrate([&](double s) { return (t - s) * v * std::exp(-r * s); }, 0.0, t);
}

}  // namespace oracle
