#include "srd/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace srd {

DomainGrid::DomainGrid(double length, int elements, int subgrid)
    : length_(length), elements_(elements), subgrid_(subgrid) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("domain length must be positive, got " + std::to_string(length));
  if (elements < 3)
    throw std::invalid_argument("need at least 3 elements for the j-1, j, j+1 coupling, got " +
                                std::to_string(elements));
  if (subgrid < 8)
    throw std::invalid_argument("subgrid resolution must be at least 8, got " +
                                std::to_string(subgrid));
}

DomainGrid buildGrid(double length, int elements, int subgrid) {
  return DomainGrid(length, elements, subgrid);
}

int DomainGrid::wrap(int j) const {
  int r = j % elements_;
  return r < 0 ? r + elements_ : r;
}

int DomainGrid::nodeIndex(int j, Half half, int i) const {
  return wrap(j) * elementNodes() + (half == Half::Left ? 0 : halfNodes()) + i;
}

double DomainGrid::localCoordinate(Half half, int i) const {
  double s = i * subStep();
  return half == Half::Left ? s - spacing() : s;
}

double DomainGrid::nodePosition(int j, Half half, int i) const {
  return center(j) + localCoordinate(half, i);
}

ElementField::ElementField(const DomainGrid& grid)
    : grid_(grid), values_(static_cast<std::size_t>(grid.fieldSize()), 0.0) {}

ElementField::ElementField(const DomainGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid.fieldSize()))
    throw std::invalid_argument("element field size does not match grid");
}

ElementField ElementField::sample(const DomainGrid& grid,
                                  const std::function<double(int, double, double)>& f) {
  ElementField out(grid);
  for (int j = 0; j < grid.elements(); ++j)
    for (Half h : {Half::Left, Half::Right})
      for (int i = 0; i < grid.halfNodes(); ++i)
        out.at(j, h, i) = f(j, grid.nodePosition(j, h, i), grid.localCoordinate(h, i));
  return out;
}

std::span<double> ElementField::half(int j, Half h) {
  return {values_.data() + grid_.nodeIndex(j, h, 0), static_cast<std::size_t>(grid_.halfNodes())};
}

std::span<const double> ElementField::half(int j, Half h) const {
  return {values_.data() + grid_.nodeIndex(j, h, 0), static_cast<std::size_t>(grid_.halfNodes())};
}

std::span<double> ElementField::element(int j) {
  return {values_.data() + grid_.nodeIndex(j, Half::Left, 0),
          static_cast<std::size_t>(grid_.elementNodes())};
}

std::span<const double> ElementField::element(int j) const {
  return {values_.data() + grid_.nodeIndex(j, Half::Left, 0),
          static_cast<std::size_t>(grid_.elementNodes())};
}

double ElementField::centerValue(int j) const {
  return 0.5 * (at(j, Half::Left, grid_.subgrid()) + at(j, Half::Right, 0));
}

double ElementField::continuityDefect() const {
  double worst = 0.0;
  for (int j = 0; j < grid_.elements(); ++j)
    worst = std::max(worst, std::abs(at(j, Half::Left, grid_.subgrid()) - at(j, Half::Right, 0)));
  return worst;
}

ElementField& ElementField::operator+=(const ElementField& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("element fields on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ElementField& ElementField::operator-=(const ElementField& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("element fields on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ElementField& ElementField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ElementField operator+(ElementField a, const ElementField& b) { return a += b; }
ElementField operator-(ElementField a, const ElementField& b) { return a -= b; }
ElementField operator*(double s, ElementField a) { return a *= s; }

std::vector<double> halfWeights(const DomainGrid& grid) {
  std::vector<double> w(static_cast<std::size_t>(grid.halfNodes()), grid.subStep());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

namespace {

void requireGrid(const ElementField& u, const DomainGrid& grid) {
  if (!(u.grid() == grid)) throw std::invalid_argument("field sampled on a different grid");
}

}  // namespace

double elementInnerProduct(const ElementField& u, const ElementField& v, int j) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("fields sampled on different grids");
  const auto w = halfWeights(u.grid());
  double sum = 0.0;
  for (Half h : {Half::Left, Half::Right}) {
    auto a = u.half(j, h);
    auto b = v.half(j, h);
    for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * a[i] * b[i];
  }
  return sum;
}

double innerProduct(const ElementField& u, const ElementField& v, const DomainGrid& grid) {
  requireGrid(u, grid);
  requireGrid(v, grid);
  double sum = 0.0;
  for (int j = 0; j < grid.elements(); ++j) sum += elementInnerProduct(u, v, j);
  return sum;
}

double seminorm(const ElementField& u, int order, const DomainGrid& grid) {
  requireGrid(u, grid);
  if (order < 0 || order > 2)
    throw std::invalid_argument("seminorm order must be 0, 1 or 2, got " + std::to_string(order));
  if (order == 0) return std::sqrt(innerProduct(u, u, grid));

  const double dx = grid.subStep();
  const int n = grid.subgrid();
  double sum = 0.0;
  for (int j = 0; j < grid.elements(); ++j) {
    for (Half h : {Half::Left, Half::Right}) {
      auto a = u.half(j, h);
      if (order == 1) {
        // piecewise-linear interpolant: exact integral of the squared cell slopes
        for (int i = 0; i < n; ++i) {
          double d = (a[i + 1] - a[i]) / dx;
          sum += dx * d * d;
        }
      } else {
        std::vector<double> d2(static_cast<std::size_t>(n + 1));
        for (int i = 1; i < n; ++i) d2[i] = (a[i + 1] - 2.0 * a[i] + a[i - 1]) / (dx * dx);
        d2[0] = d2[1];
        d2[n] = d2[n - 1];
        for (int i = 0; i <= n; ++i) {
          double w = (i == 0 || i == n) ? 0.5 * dx : dx;
          sum += w * d2[i] * d2[i];
        }
      }
    }
  }
  return std::sqrt(sum);
}

}  // namespace srd
