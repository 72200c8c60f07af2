#include <catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "srd/noise.hpp"
#include "srd/spectral.hpp"

using namespace srd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("power-law spectrum and trace condition") {
  QWienerSpec s = QWienerSpec::powerLaw(2.0, 8, 3.0);
  REQUIRE(s.modes() == 9);
  CHECK_THAT(s.q[4], WithinRel(std::pow(5.0, -3.0), 1e-15));
  CHECK_THROWS(QWienerSpec::powerLaw(2.0, 8, 1.5));
  CHECK_THROWS(QWienerSpec::explicitCoefficients(2.0, {1.0, -0.1}));
  double wt = 0.0;
  for (int k = 0; k <= 8; ++k) wt += k * s.q[k];
  CHECK_THAT(s.weightedTrace(), WithinRel(wt, 1e-14));
}

TEST_CASE("Fourier basis matches the orthonormal periodic basis") {
  QWienerSpec s = QWienerSpec::powerLaw(3.0, 6, 2.0);
  for (int k = 0; k <= 6; ++k)
    for (double x : {0.0, 0.4, 1.7, 2.9}) CHECK_THAT(s.basis(k, x), WithinAbs(oracle::fourier(3.0, k, x), 1e-14));
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      double ip = oracle::integrate([&](double x) { return s.basis(a, x) * s.basis(b, x); }, 0.0, 3.0);
      CHECK_THAT(ip, WithinAbs(a == b ? 1.0 : 0.0, 1e-12));
    }
}

TEST_CASE("paths are reproducible from the seed and have Brownian increments") {
  QWienerSpec s = QWienerSpec::powerLaw(1.0, 4, 2.0);
  auto t = uniformTimes(1.0, 2000);
  NoisePath a = sampleGlobalPath(s, t, 42), b = sampleGlobalPath(s, t, 42), c = sampleGlobalPath(s, t, 43);
  CHECK(a.increments == b.increments);
  CHECK(a.increments != c.increments);
  // increments of each beta_k over [0, 1]: sample variance of 2000 N(0, dt) draws
  const double dt = 1.0 / 2000;
  for (int k = 0; k < s.modes(); ++k) {
    double ss = 0.0;
    for (int n = 0; n < a.steps(); ++n) ss += a.increments(k, n) * a.increments(k, n);
    const double var = ss / a.steps();
    CHECK(std::abs(var - dt) < 5.0 * dt * std::sqrt(2.0 / a.steps()));
  }
  CHECK_THAT(a.beta(2, 2000), WithinAbs(a.increments.row(2).sum(), 1e-12));
  // the field increment is the Karhunen-Loeve sum
  double dw = 0.0;
  for (int k = 0; k < s.modes(); ++k) dw += std::sqrt(s.q[k]) * a.increments(k, 7) * oracle::fourier(1.0, k, 0.3);
  CHECK_THAT(a.fieldIncrement(7, 0.3), WithinAbs(dw, 1e-14));
}

TEST_CASE("coarsening sums increments and keeps the path") {
  QWienerSpec s = QWienerSpec::powerLaw(1.0, 3, 2.0);
  NoisePath f = sampleGlobalPath(s, uniformTimes(1.0, 12), 5);
  NoisePath c = coarsen(f, 4);
  REQUIRE(c.steps() == 3);
  for (int k = 0; k < 4; ++k) CHECK_THAT(c.beta(k, 3), WithinAbs(f.beta(k, 12), 1e-14));
  CHECK_THAT(c.dt(1), WithinRel(1.0 / 3.0, 1e-14));
  CHECK_THROWS(coarsen(f, 5));
}

TEST_CASE("auxiliary streams are independent of the global path and of each other") {
  auto t = uniformTimes(1.0, 500);
  Eigen::MatrixXd a = sampleAuxiliaryIncrements(3, t, 9, 0xD1);
  Eigen::MatrixXd b = sampleAuxiliaryIncrements(3, t, 9, 0xD2);
  Eigen::MatrixXd a2 = sampleAuxiliaryIncrements(3, t, 9, 0xD1);
  CHECK(a == a2);
  const double corr = (a.row(0).array() * b.row(0).array()).sum() /
                      std::sqrt(a.row(0).squaredNorm() * b.row(0).squaredNorm());
  CHECK(std::abs(corr) < 4.0 / std::sqrt(500.0));
}

TEST_CASE("binary path export round-trips") {
  QWienerSpec s = QWienerSpec::powerLaw(2.0, 5, 3.0);
  NoisePath p = sampleGlobalPath(s, uniformTimes(0.5, 40), 11);
  const auto file = std::filesystem::temp_directory_path() / "srd_path_roundtrip.bin";
  writePathBinary(file.string(), p);
  NoisePath r = readPathBinary(file.string(), s);
  CHECK(r.increments == p.increments);
  CHECK(r.times == p.times);
  std::filesystem::remove(file);
}

TEST_CASE("element-mode projection weights match quadrature") {
  const double L = 2.0 * M_PI;
  DomainGrid g(L, 6, 128);
  QWienerSpec s = QWienerSpec::powerLaw(L, 10, 2.5);
  EigenSystem eig0 = eigGamma0(g, 2);
  ElementModeSet modes = elementModes(eig0, 2);
  ElementNoiseProjection p = projectToElementModes(s, modes, g);
  const double h = g.spacing();
  for (int j : {0, 3})
    for (int l = 0; l < modes.count; ++l) {
      const int level = modes.level[l];
      int idx = 0;
      for (int m = 0; m < l; ++m) idx += modes.level[m] == level;
      for (int k : {0, 1, 4, 9}) {
        const double w = oracle::projectionWeight(L, h, g.center(j), k, level, idx);
        CHECK_THAT(p.weight(j, l, k), WithinAbs(w, 2e-4));
      }
      CHECK_THAT(p.qhAt(j, l), WithinRel(oracle::projectedVariance(L, h, g.center(j), s.q, level, idx), 1e-3));
    }
  // the element modes are orthonormal, so sum_l q^h_{j,l} <= sum_k q_k ||e_k||^2 on the element
  for (int j = 0; j < 6; ++j) {
    double sum = 0.0, bound = 0.0;
    for (int l = 0; l < modes.count; ++l) sum += p.qhAt(j, l);
    for (int k = 0; k < s.modes(); ++k)
      bound += s.q[k] * oracle::integrate([&](double x) { return std::pow(oracle::fourier(L, k, x), 2); },
                                          g.center(j) - h, g.center(j) + h);
    CHECK(sum <= bound * (1.0 + 1e-6));
  }
  ElementNoiseProjection half = projectToElementModes(s, modes, g, {true});
  CHECK_THAT(half.qhAt(2, 0), WithinRel(0.5 * p.qhAt(2, 0), 1e-14));
  CHECK_THAT(half.qhAt(2, 1), WithinRel(p.qhAt(2, 1), 1e-14));
}

TEST_CASE("element-mode drivers are unit-rate Brownian increments") {
  const double L = 2.0 * M_PI;
  DomainGrid g(L, 4, 32);
  QWienerSpec s = QWienerSpec::powerLaw(L, 12, 3.0);
  EigenSystem eig0 = eigGamma0(g, 1);
  ElementNoiseProjection p = projectToElementModes(s, elementModes(eig0, 1), g);
  const int n = 4000;
  NoisePath path = sampleGlobalPath(s, uniformTimes(1.0, n), 3);
  double ss = 0.0;
  for (int step = 0; step < n; ++step) {
    auto d = elementModeDrivers(p, path, step);
    ss += d[1 * p.modeCount() + 0] * d[1 * p.modeCount() + 0];
  }
  CHECK(std::abs(ss - 1.0) < 5.0 * std::sqrt(2.0 / n));
  auto inc = elementNoiseIncrement(p, path, 10, 0.3);
  auto drv = elementModeDrivers(p, path, 10);
  CHECK_THAT(inc[1], WithinRel(0.3 * std::sqrt(p.qhAt(0, 1)) * drv[1], 1e-12));
}

TEST_CASE("basis table synthesis equals the pointwise field increment") {
  QWienerSpec s = QWienerSpec::powerLaw(5.0, 9, 2.0);
  NoisePath path = sampleGlobalPath(s, uniformTimes(1.0, 10), 1);
  std::vector<double> x{0.0, 0.7, 2.5, 4.99};
  BasisTable t(s, x);
  std::vector<double> out;
  t.synthesize(path, 4, out);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK_THAT(out[i], WithinAbs(path.fieldIncrement(4, x[i]), 1e-14));
}
