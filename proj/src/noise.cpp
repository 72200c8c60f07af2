#include "srd/noise.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "srd/numerics.hpp"

namespace srd {

QWienerSpec QWienerSpec::powerLaw(double length, int K, double r) {
  if (K < 1) throw std::invalid_argument("noise truncation K must be at least 1");
  if (r < 2.0)
    throw std::invalid_argument("decay exponent must be >= 2 for a finite trace, got " +
                                std::to_string(r));
  QWienerSpec s;
  s.length = length;
  s.q.resize(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) s.q[k] = std::pow(1.0 + k, -r);
  s.validate();
  return s;
}

QWienerSpec QWienerSpec::explicitCoefficients(double length, std::vector<double> q) {
  QWienerSpec s;
  s.length = length;
  s.q = std::move(q);
  s.validate();
  return s;
}

void QWienerSpec::validate() const {
  if (!(length > 0.0)) throw std::invalid_argument("noise domain length must be positive");
  if (q.size() < 2) throw std::invalid_argument("noise truncation K must be at least 1");
  for (std::size_t k = 0; k < q.size(); ++k)
    if (!(q[k] >= 0.0) || !std::isfinite(q[k]))
      throw std::invalid_argument("q_" + std::to_string(k) + " must be finite and non-negative");
}

double QWienerSpec::basis(int k, double x) const {
  if (k == 0) return std::sqrt(1.0 / length);
  const int m = (k + 1) / 2;
  const double arg = 2.0 * m * std::numbers::pi * x / length;
  return std::sqrt(2.0 / length) * ((k % 2 == 0) ? std::cos(arg) : std::sin(arg));
}

double QWienerSpec::weightedTrace() const {
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) s += static_cast<double>(k) * q[k];
  return s;
}

std::vector<double> uniformTimes(double horizon, int steps) {
  if (!(horizon > 0.0) || steps < 1) throw std::invalid_argument("need T > 0 and at least one step");
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) t[n] = horizon * n / steps;
  return t;
}

namespace {

void checkTimes(const std::vector<double>& times) {
  if (times.size() < 2) throw std::invalid_argument("time grid needs at least two points");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("time grid must be strictly increasing (index " +
                                  std::to_string(i) + ")");
}

Eigen::MatrixXd brownianIncrements(int rows, const std::vector<double>& times, std::uint64_t seed) {
  checkTimes(times);
  const int steps = static_cast<int>(times.size()) - 1;
  Eigen::MatrixXd inc(rows, steps);
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int n = 0; n < steps; ++n) {
    const double sd = std::sqrt(times[n + 1] - times[n]);
    for (int k = 0; k < rows; ++k) inc(k, n) = sd * normal(rng);
  }
  return inc;
}

}  // namespace

double NoisePath::beta(int k, int n) const {
  if (n < 0 || n > steps()) throw std::out_of_range("time index out of range");
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += increments(k, i);
  return s;
}

double NoisePath::fieldIncrement(int step, double x) const {
  double s = 0.0;
  for (int k = 0; k < spec.modes(); ++k) s += std::sqrt(spec.q[k]) * increments(k, step) * spec.basis(k, x);
  return s;
}

NoisePath sampleGlobalPath(const QWienerSpec& spec, const std::vector<double>& times,
                           std::uint64_t seed) {
  spec.validate();
  return NoisePath{spec, times, brownianIncrements(spec.modes(), times, seed), seed};
}

NoisePath coarsen(const NoisePath& fine, int factor) {
  if (factor < 1 || fine.steps() % factor != 0)
    throw std::invalid_argument("coarsening factor must divide the number of steps");
  const int steps = fine.steps() / factor;
  NoisePath out{fine.spec, {}, Eigen::MatrixXd::Zero(fine.increments.rows(), steps), fine.seed};
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) out.times.push_back(fine.times[static_cast<std::size_t>(n) * factor]);
  for (int n = 0; n < steps; ++n)
    for (int i = 0; i < factor; ++i) out.increments.col(n) += fine.increments.col(n * factor + i);
  return out;
}

Eigen::MatrixXd sampleAuxiliaryIncrements(int count, const std::vector<double>& times,
                                          std::uint64_t seed, std::uint64_t stream) {
  if (count < 0) throw std::invalid_argument("negative driver count");
  return brownianIncrements(count, times, deriveSeed(seed, stream));
}

void writePathBinary(const std::string& path, const NoisePath& noise) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  auto put = [&](const double* p, std::int32_t rows, std::int32_t cols) {
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(sizeof(double)) * rows * cols);
  };
  put(noise.times.data(), 1, static_cast<std::int32_t>(noise.times.size()));
  put(noise.increments.data(), static_cast<std::int32_t>(noise.increments.rows()),
      static_cast<std::int32_t>(noise.increments.cols()));
  out.write(reinterpret_cast<const char*>(&noise.seed), sizeof noise.seed);
}

NoisePath readPathBinary(const std::string& path, const QWienerSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto header = [&]() {
    std::int32_t r = 0, c = 0;
    in.read(reinterpret_cast<char*>(&r), sizeof r);
    in.read(reinterpret_cast<char*>(&c), sizeof c);
    if (!in || r < 0 || c < 0) throw std::runtime_error("corrupt noise path file " + path);
    return std::pair{r, c};
  };
  NoisePath p;
  p.spec = spec;
  auto [tr, tc] = header();
  p.times.resize(static_cast<std::size_t>(tr) * tc);
  in.read(reinterpret_cast<char*>(p.times.data()), static_cast<std::streamsize>(sizeof(double) * p.times.size()));
  auto [r, c] = header();
  if (r != spec.modes()) throw std::runtime_error("noise path mode count does not match spec");
  p.increments.resize(r, c);
  in.read(reinterpret_cast<char*>(p.increments.data()), static_cast<std::streamsize>(sizeof(double)) * r * c);
  in.read(reinterpret_cast<char*>(&p.seed), sizeof p.seed);
  if (!in) throw std::runtime_error("truncated noise path file " + path);
  return p;
}

double ElementNoiseProjection::traceBound(int j) const {
  double s = 0.0;
  for (int l = 0; l < modes.count; ++l) s += modes.lambdaAt(j, l) * qhAt(j, l);
  return s;
}

ElementNoiseProjection projectToElementModes(const QWienerSpec& spec, const ElementModeSet& modes,
                                             const DomainGrid& grid, ProjectionOptions opt) {
  if (!(modes.grid == grid)) throw std::invalid_argument("element modes sampled on a different grid");
  if (std::abs(spec.length - grid.length()) > 1e-12 * grid.length())
    throw std::invalid_argument("noise spec and grid have different domain lengths");
  spec.validate();
  const int m = grid.elements(), nl = modes.count, nk = spec.modes();
  ElementNoiseProjection p{modes, spec, opt, std::vector<double>(static_cast<std::size_t>(m) * nl * nk),
                           std::vector<double>(static_cast<std::size_t>(m) * nl)};
  // basis sampled on the element nodes
  std::vector<ElementField> basis;
  basis.reserve(nk);
  for (int k = 0; k < nk; ++k)
    basis.push_back(ElementField::sample(grid, [&](int, double x, double) { return spec.basis(k, x); }));
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < nl; ++l) {
      const ElementField& e = modes.fields[l];
      const double norm = std::sqrt(elementInnerProduct(e, e, j));
      double q = 0.0;
      for (int k = 0; k < nk; ++k) {
        double w = elementInnerProduct(basis[k], e, j) / norm;
        p.weights[(static_cast<std::size_t>(j) * nl + l) * nk + k] = w;
        q += spec.q[k] * w * w;
      }
      if (l == 0 && opt.halveGroundVariance) q *= 0.5;
      p.qh[static_cast<std::size_t>(j) * nl + l] = q;
    }
  return p;
}

ElementNoiseProjection projectToElementModes(const NoisePath& path, const ElementModeSet& modes,
                                             const DomainGrid& grid, ProjectionOptions opt) {
  return projectToElementModes(path.spec, modes, grid, opt);
}

std::vector<double> elementModeDrivers(const ElementNoiseProjection& proj, const NoisePath& path,
                                       int step) {
  if (step < 0 || step >= path.steps()) throw std::out_of_range("noise step out of range");
  if (path.spec.modes() != proj.spec.modes())
    throw std::invalid_argument("noise path and projection use different truncations");
  const int m = proj.elements(), nl = proj.modeCount(), nk = proj.spec.modes();
  std::vector<double> out(static_cast<std::size_t>(m) * nl, 0.0);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < nl; ++l) {
      double s = 0.0;
      for (int k = 0; k < nk; ++k) s += std::sqrt(proj.spec.q[k]) * proj.weight(j, l, k) * path.increments(k, step);
      double q = proj.qhAt(j, l);
      if (l == 0 && proj.options.halveGroundVariance) s *= std::sqrt(0.5);
      out[static_cast<std::size_t>(j) * nl + l] = q > 0.0 ? s / std::sqrt(q) : 0.0;
    }
  return out;
}

std::vector<double> elementNoiseIncrement(const ElementNoiseProjection& proj, const NoisePath& path,
                                          int step, double gamma) {
  std::vector<double> out = elementModeDrivers(proj, path, step);
  const int nl = proj.modeCount();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= gamma * std::sqrt(proj.qhAt(static_cast<int>(i) / nl, static_cast<int>(i) % nl));
  return out;
}

BasisTable::BasisTable(const QWienerSpec& spec, const std::vector<double>& points)
    : table_(spec.modes(), static_cast<Eigen::Index>(points.size())) {
  for (int k = 0; k < spec.modes(); ++k) {
    const double s = std::sqrt(spec.q[k]);
    for (std::size_t i = 0; i < points.size(); ++i) table_(k, static_cast<Eigen::Index>(i)) = s * spec.basis(k, points[i]);
  }
}

void BasisTable::synthesize(const NoisePath& path, int step, std::vector<double>& out) const {
  if (path.increments.rows() != table_.rows())
    throw std::invalid_argument("noise path and basis table use different truncations");
  out.resize(static_cast<std::size_t>(table_.cols()));
  Eigen::Map<Eigen::VectorXd> o(out.data(), table_.cols());
  o.noalias() = table_.transpose() * path.increments.col(step);
}

}  // namespace srd
