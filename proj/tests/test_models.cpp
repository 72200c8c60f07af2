#include <catch_amalgamated.hpp>
#include <cmath>
#include <cstring>

#include "srd/errors.hpp"
#include "srd/models.hpp"

using namespace srd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

StepDrivers drivers(int m, double scale) {
  StepDrivers d;
  for (int j = 0; j < m; ++j) {
    d.point.push_back(scale * std::sin(1.0 + j));
    d.ground.push_back(scale * std::cos(0.3 + 2 * j));
    d.deviation.push_back(scale * 0.1 * std::sin(3.0 * j));
    d.limit.push_back(scale * 0.2 * std::cos(j));
    d.center.push_back(0.5 + 0.1 * std::sin(j));
  }
  return d;
}

AveragedCoeffs coeffs(int m, double h) {
  AveragedCoeffs c;
  for (int j = 0; j < m; ++j) {
    c.hatAlpha.push_back(0.98 - 0.001 * j);
    c.Qj.push_back(1e-6);
  }
  c.h = h;
  c.alpha = 1.0;
  c.sigma = 0.5;
  return c;
}

GridState state(int m) {
  GridState s;
  for (int j = 0; j < m; ++j) s.U.push_back(0.4 * std::sin(0.7 * j) + 0.1);
  return s;
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("model names round-trip") {
  for (ModelKind k : {ModelKind::ConventionalFD, ModelKind::GammaReduced, ModelKind::Holistic, ModelKind::HolisticIntroVariant})
    CHECK(modelKindFromString(toString(k)) == k);
  CHECK_THROWS(modelKindFromString("spectral"));
}

TEST_CASE("conventional FD step") {
  SpdeConfig cfg;
  cfg.dt = 1e-3;
  cfg.alpha = 2.0;
  cfg.sigma = 0.3;
  GridState s = state(6);
  GridState before = s;
  StepDrivers d = drivers(6, 1e-2);
  stepConventionalFD(s, cfg, 0.5, d);
  const double u = before.U[2];
  const double lap = (before.U[1] - 2 * u + before.U[3]) / 0.25;
  CHECK_THAT(s.U[2], WithinAbs(u + 1e-3 * (lap + 2.0 * (u - u * u * u)) + 0.3 * d.point[2], 1e-15));
  CHECK(s.t == 1e-3);
}

TEST_CASE("with sigma = 0 the holistic step equals the conventional FD step bitwise") {
  SpdeConfig cfg;
  cfg.dt = 1e-3;
  cfg.sigma = 0.0;
  AveragedCoeffs c = coeffs(7, 0.4);
  std::fill(c.hatAlpha.begin(), c.hatAlpha.end(), cfg.alpha);
  std::fill(c.Qj.begin(), c.Qj.end(), 0.0);
  GridState a = state(7), b = state(7);
  StepDrivers d = drivers(7, 1.0);
  std::fill(d.deviation.begin(), d.deviation.end(), 0.0);
  for (int n = 0; n < 50; ++n) {
    stepConventionalFD(a, cfg, 0.4, d);
    stepHolistic(b, cfg, c, d);
  }
  CHECK(identical(a.U, b.U));
}

TEST_CASE("the gamma-expanded model at gamma = 1 with truncation is the holistic model bitwise") {
  SpdeConfig cfg;
  cfg.dt = 2e-3;
  cfg.sigma = 0.5;
  AveragedCoeffs c = coeffs(8, 0.5);
  StepDrivers d = drivers(8, 0.05);
  for (bool devAlpha : {false, true}) {
    GridState a = state(8), b = state(8);
    for (int n = 0; n < 40; ++n) {
      stepHolistic(a, cfg, c, d, {devAlpha});
      stepGammaReduced(b, cfg, c, d, {1.0, true, devAlpha});
    }
    CHECK(identical(a.U, b.U));
  }
  GridState e = state(8);
  stepGammaReduced(e, cfg, c, d, {1.0, false, false});
  GridState f = state(8);
  stepHolistic(f, cfg, c, d);
  CHECK_FALSE(identical(e.U, f.U));
  CHECK_THROWS(stepGammaReduced(e, cfg, c, d, {0.0, true, false}));
}

TEST_CASE("term breakdown carries the advertised powers of gamma") {
  SpdeConfig cfg;
  cfg.dt = 1e-3;
  AveragedCoeffs c = coeffs(6, 0.5);
  StepDrivers d = drivers(6, 0.1);
  GridState s = state(6);
  auto at = [&](double g) { return gammaReducedTerms(s, cfg, c, d, {g, false, true}); };
  GammaReducedTerms t1 = at(0.2), t2 = at(0.1);
  REQUIRE(t1.terms.size() == 9);
  for (std::size_t i = 0; i < t1.terms.size(); ++i) {
    const auto& a = t1.terms[i];
    const auto& b = t2.terms[i];
    for (int j = 0; j < 6; ++j) {
      if (std::abs(b.value[j]) < 1e-300) continue;
      CHECK_THAT(a.value[j] / b.value[j], WithinRel(std::pow(2.0, a.order), 1e-12));
    }
  }
  // summing the terms reproduces one step
  GammaReducedTerms t = at(0.3);
  GridState stepped = s;
  stepGammaReduced(stepped, cfg, c, d, {0.3, false, true});
  for (int j = 0; j < 6; ++j) {
    double v = s.U[j];
    for (const auto& term : t.terms) v += term.value[j];
    CHECK_THAT(stepped.U[j], WithinAbs(v, 1e-14));
  }
  GammaReducedTerms tr = gammaReducedTerms(s, cfg, c, d, {0.3, true, true});
  CHECK(tr.terms.size() == 6);
}

TEST_CASE("uniform centre values make the neighbour noise stencil vanish") {
  SpdeConfig cfg;
  cfg.dt = 1e-3;
  AveragedCoeffs c = coeffs(5, 0.5);
  StepDrivers d = drivers(5, 0.1);
  std::fill(d.center.begin(), d.center.end(), 0.7);
  GammaReducedTerms t = gammaReducedTerms(state(5), cfg, c, d, {0.5, false, false});
  for (const auto& term : t.terms)
    if (term.name.find("stencil") != std::string::npos)
      for (double v : term.value) CHECK(v == 0.0);
}

TEST_CASE("introduction variant uses the point noise stencil") {
  SpdeConfig cfg;
  cfg.dt = 1e-3;
  cfg.sigma = 0.4;
  AveragedCoeffs c = coeffs(5, 0.5);
  StepDrivers d = drivers(5, 0.1);
  GridState s = state(5), before = s;
  stepHolisticIntro(s, cfg, c, d);
  const int j = 2;
  const double u = before.U[j];
  const double lap = (before.U[1] - 2 * u + before.U[3]) / 0.25;
  const double expect = u + 1e-3 * (lap + c.hatAlpha[j] * u - u * u * u) + 0.4 * d.point[j] +
                        3.0 * std::sqrt(2.0) * u * d.deviation[j] * d.center[j] +
                        0.1 * (d.point[3] - 2 * d.point[2] + d.point[1]);
  CHECK_THAT(s.U[j], WithinAbs(expect, 1e-14));
}

TEST_CASE("steppers reject mismatched drivers and non-finite states") {
  SpdeConfig cfg;
  cfg.dt = 1e-3;
  AveragedCoeffs c = coeffs(5, 0.5);
  StepDrivers d = drivers(4, 0.1);
  GridState s = state(5);
  CHECK_THROWS_AS(stepHolistic(s, cfg, c, d), std::invalid_argument);
  StepDrivers ok = drivers(5, 0.1);
  s.U[1] = std::nan("");
  CHECK_THROWS_AS(stepHolistic(s, cfg, c, ok), NumericalAbort);
}

TEST_CASE("noise binder produces common random numbers from the path seed") {
  const double L = 2.0 * M_PI;
  DomainGrid g(L, 6, 32);
  QWienerSpec spec = QWienerSpec::powerLaw(L, 8, 3.0);
  EigenSystem eig0 = eigGamma0(g, 1);
  ElementNoiseProjection proj = projectToElementModes(spec, elementModes(eig0, 1), g);
  std::vector<double> Q(6, 4e-4);
  NoisePath p = sampleGlobalPath(spec, uniformTimes(1.0, 2000), 8);
  NoiseBinder a(proj, Q, p), b(proj, Q, p);
  StepDrivers da = a.drivers(17), db = b.drivers(17);
  CHECK(identical(da.ground, db.ground));
  CHECK(identical(da.deviation, db.deviation));
  for (int j = 0; j < 6; ++j) CHECK_THAT(da.point[j], WithinAbs(p.fieldIncrement(17, g.center(j)), 1e-14));
  // ground driver variance per unit time is q^h_{j,0}, deviation variance Q_j
  double sg = 0.0, sd = 0.0;
  for (int n = 0; n < 2000; ++n) {
    StepDrivers d = a.drivers(n);
    sg += d.ground[3] * d.ground[3];
    sd += d.deviation[3] * d.deviation[3];
  }
  const double tol = 5.0 * std::sqrt(2.0 / 2000);
  CHECK(std::abs(sg / proj.qhAt(3, 0) - 1.0) < tol);
  CHECK(std::abs(sd / Q[3] - 1.0) < tol);
  CHECK_THROWS(NoiseBinder(proj, std::vector<double>(5, 0.0), p));
}

TEST_CASE("reduced slow model in slow eigen-coordinates") {
  const double L = 8.0;
  DomainGrid g(L, 8, 16);
  QWienerSpec spec = QWienerSpec::powerLaw(L, 16, 3.0);
  CoupledOperator op(g, 0.1);
  EigenSystem eig = eigGamma(op, 8);
  EigenSystem eig0 = eigGamma0(g, 6);
  ElementNoiseProjection proj = projectToElementModes(spec, elementModes(eig0, 6), g);
  FastModeStats stats = ouStationaryStats(proj, eig0, 0.0);
  AveragedCoeffs c = averagedCoefficients(stats, eig0, 0.0, 0.1);
  SpdeConfig cfg;
  cfg.alpha = 0.0;
  cfg.sigma = 0.0;
  cfg.gamma = 0.1;
  cfg.dt = 0.01;
  ReducedSlowModel model(eig, op, stats, c, cfg, spec);
  std::vector<double> U{0.1, 0.3, -0.2, 0.0, 0.5, 0.4, -0.1, 0.2};
  Eigen::VectorXd a = model.amplitudesFromGrid(U);
  auto back = model.gridValues(a);
  for (int j = 0; j < 8; ++j) CHECK_THAT(back[j], WithinAbs(U[j], 1e-12));
  Eigen::VectorXd b = a;
  model.step(b, nullptr, 0, nullptr);
  for (int i = 0; i < 8; ++i) CHECK_THAT(b[i], WithinAbs(a[i] * (1.0 - 0.01 * eig.values[i]), 1e-13));
}
