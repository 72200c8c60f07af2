#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "srd/spectral.hpp"

using namespace srd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("level multiplicities of the insulated spectrum") {
  CHECK(levelMultiplicity(0) == 1);
  CHECK(levelMultiplicity(1) == 1);
  CHECK(levelMultiplicity(2) == 3);
  CHECK(levelMultiplicity(3) == 1);
  CHECK(levelMultiplicity(4) == 3);
  CHECK(modesThroughLevel(4) == 9);
}

TEST_CASE("analytic element modes are orthonormal and satisfy the insulated conditions") {
  const double h = 0.7;
  for (int k = 0; k <= 4; ++k)
    for (int a = 0; a < levelMultiplicity(k); ++a) {
      for (double s : {-0.6, -0.1, 0.0, 0.3}) CHECK_THAT(analyticElementMode(h, k, a, s), WithinAbs(oracle::insulated(h, k, a, s), 1e-14));
      // value coupling at gamma = 0: both ends equal the centre value
      const double c = analyticElementMode(h, k, a, 0.0);
      CHECK_THAT(analyticElementMode(h, k, a, -h), WithinAbs(c, 1e-12));
      CHECK_THAT(analyticElementMode(h, k, a, h), WithinAbs(c, 1e-12));
      for (int k2 = 0; k2 <= 4; ++k2)
        for (int b = 0; b < levelMultiplicity(k2); ++b) {
          auto f = [&](double s) { return analyticElementMode(h, k, a, s) * analyticElementMode(h, k2, b, s); };
          const double ip = oracle::integrate(f, -h, 0.0) + oracle::integrate(f, 0.0, h);
          CHECK_THAT(ip, WithinAbs(k == k2 && a == b ? 1.0 : 0.0, 1e-11));
        }
    }
}

TEST_CASE("numeric spectrum at gamma = 0 reproduces the analytic levels") {
  DomainGrid g(3.0, 3, 64);
  CoupledOperator op(g, 0.0);
  EigenSystem eig = eigGamma(op, 3 * modesThroughLevel(3));
  int at = 0;
  for (int k = 0; k <= 3; ++k) {
    const int mult = 3 * levelMultiplicity(k);
    for (int i = 0; i < mult; ++i, ++at) {
      const double exact = oracle::insulatedEigenvalue(1.0, k);
      if (k == 0) CHECK(std::abs(eig.values[at]) < 1e-9);
      else CHECK_THAT(eig.values[at], WithinRel(exact, 2e-5));
    }
  }
  CHECK(eig.clusters.size() >= 4);
  CHECK(eig.clusters[2].size == 9);
  for (double r : eig.residuals) CHECK(r < 1e-8);
}

TEST_CASE("trapezoid mass gives the second-order spectrum") {
  DomainGrid g(3.0, 3, 32);
  EigenSystem mixed = eigGamma(CoupledOperator(g, 0.0, MassKind::Mixed), 9);
  EigenSystem lumped = eigGamma(CoupledOperator(g, 0.0, MassKind::Trapezoid), 9);
  const double exact = oracle::insulatedEigenvalue(1.0, 2);
  const double eMixed = std::abs(mixed.values[6] - exact), eLumped = std::abs(lumped.values[6] - exact);
  CHECK(eMixed < 0.05 * eLumped);
  // lumped P1 eigenvalue error is (k pi dx)^2 / 12 relative, to leading order
  const double dx = 1.0 / 32;
  CHECK_THAT((exact - lumped.values[6]) / exact, WithinRel(std::pow(2 * M_PI * dx, 2) / 12.0, 0.05));
}

TEST_CASE("prolonged coordinates satisfy the coupling conditions") {
  DomainGrid g(4.0, 4, 16);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (double gamma : {0.0, 0.3, 1.0}) {
    CoupledOperator op(g, gamma);
    Eigen::VectorXd x(op.reducedSize());
    for (auto& v : x) v = n(rng);
    ElementField u = op.prolong(x);
    CHECK(op.couplingResidual(u) < 1e-13);
    CHECK(u.continuityDefect() < 1e-13);
    // the explicit rule at X_{j+1}
    const double right = u.at(1, Half::Right, g.subgrid());
    CHECK_THAT(right, WithinAbs((1 - gamma) * u.centerValue(1) + gamma * u.centerValue(2), 1e-13));
    CHECK((op.restrict(u) - x).norm() < 1e-12);
    // projection is idempotent on H_gamma
    CHECK((op.projectCoordinates(u) - x).norm() < 1e-9 * x.norm());
  }
}

TEST_CASE("the ground mode eigenvalue is of order gamma squared") {
  DomainGrid g(8.0, 8, 16);
  std::vector<double> gs{0.01, 0.02, 0.04}, ls;
  for (double gamma : gs) {
    EigenSystem eig = eigGamma(CoupledOperator(g, gamma), 8);
    ls.push_back(eig.values[groundModeIndex(eig)]);
  }
  CHECK_THAT(ls[1] / ls[0], WithinRel(4.0, 0.02));
  CHECK_THAT(ls[2] / ls[1], WithinRel(4.0, 0.04));
}

TEST_CASE("odd element counts have no simple ground mode") {
  DomainGrid g(5.0, 5, 16);
  EigenSystem eig = eigGamma(CoupledOperator(g, 0.1), 5);
  CHECK_THROWS_AS(groundModeIndex(eig), std::runtime_error);
}

TEST_CASE("expansion corrections from centre values") {
  DomainGrid g(4.0, 4, 16);
  std::vector<double> c{1.0, 2.0, 0.5, -1.0};
  GroundModeExpansion e = expansionFromCenters(g, c, 0.1);
  const double h = 1.0;
  // element 1: left neighbour 1.0, right neighbour 0.5
  CHECK_THAT(e.f1.at(1, Half::Left, 0), WithinAbs((2.0 - 1.0) / h * (-h), 1e-14));
  CHECK_THAT(e.f1.at(1, Half::Right, 16), WithinAbs((0.5 - 2.0) / h * h, 1e-14));
  const double A = (1.0 - 4.0 + 0.5) / (2 * h * h);
  CHECK_THAT(e.curvature[1], WithinAbs(A, 1e-14));
  // F2 vanishes at both ends and the centre
  CHECK_THAT(e.f2.at(1, Half::Left, 0), WithinAbs(0.0, 1e-14));
  CHECK_THAT(e.f2.at(1, Half::Right, 16), WithinAbs(0.0, 1e-14));
  CHECK_THAT(e.f2.at(1, Half::Left, 8), WithinAbs(A * (-0.5) * 0.5, 1e-14));
}

TEST_CASE("element modes at gamma approach the insulated modes") {
  DomainGrid g(8.0, 8, 16);
  CoupledOperator op(g, 0.05);
  EigenSystem eig = eigGamma(op, 8 * modesThroughLevel(1));
  ElementModeSet m = elementModes(eig, op, 1);
  REQUIRE(m.count == 2);
  for (int j = 0; j < 8; ++j) {
    CHECK_THAT(elementInnerProduct(m.fields[0], m.fields[0], j), WithinRel(1.0, 1e-12));
    CHECK_THAT(m.lambdaAt(j, 1), WithinRel(M_PI * M_PI, 0.02));
    CHECK(std::abs(m.centerAt(j, 0)) > 0.6 / std::sqrt(2.0));
  }
}

TEST_CASE("principal cosines of a subspace with itself are one") {
  DomainGrid g(4.0, 4, 8);
  CoupledOperator op(g, 0.4);
  EigenSystem eig = eigGamma(op, 6);
  auto c = principalCosines(eig.fields.leftCols(4), eig.fields.leftCols(4), op);
  for (double v : c) CHECK_THAT(v, WithinAbs(1.0, 1e-10));
  auto d = principalCosines(eig.fields.leftCols(2), eig.fields.middleCols(2, 2), op);
  for (double v : d) CHECK(v < 1e-8);
}
