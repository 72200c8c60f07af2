#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace srd {

enum class Half { Left, Right };

/// Periodic domain [0, L] split into M overlapping elements I_j = [X_j - h, X_j + h].
///
/// Elements are indexed 0..M-1 in code; element j is centred on X_j = (j + 1) h,
/// so the last centre coincides with L (equivalently 0). Each half-element is
/// resolved by `subgrid()` uniform intervals, and the centre node is stored twice
/// (as the right end of the left half and the left end of the right half).
class DomainGrid {
public:
  DomainGrid(double length, int elements, int subgrid);

  double length() const { return length_; }
  int elements() const { return elements_; }
  int subgrid() const { return subgrid_; }
  double spacing() const { return length_ / elements_; }
  double subStep() const { return spacing() / subgrid_; }

  /// Grid point X_j for any integer j (not wrapped; X_{j+M} = X_j + L).
  double center(int j) const { return (j + 1) * spacing(); }
  /// Periodic element index in [0, M).
  int wrap(int j) const;

  int halfNodes() const { return subgrid_ + 1; }
  int elementNodes() const { return 2 * halfNodes(); }
  int fieldSize() const { return elements_ * elementNodes(); }

  /// Flat index of node i of the given half of element j (j is wrapped).
  int nodeIndex(int j, Half half, int i) const;
  /// Unwrapped coordinate of a node; element j spans [X_j - h, X_j + h].
  double nodePosition(int j, Half half, int i) const;
  /// Coordinate relative to the element centre, in [-h, h].
  double localCoordinate(Half half, int i) const;

  bool operator==(const DomainGrid& other) const = default;

private:
  double length_;
  int elements_;
  int subgrid_;
};

DomainGrid buildGrid(double length, int elements, int subgrid);

/// Real samples of one field per element on the element subgrid.
class ElementField {
public:
  explicit ElementField(const DomainGrid& grid);
  ElementField(const DomainGrid& grid, std::vector<double> values);

  /// Samples f(x, local) at every node; x is the unwrapped coordinate, local is x - X_j.
  static ElementField sample(const DomainGrid& grid,
                             const std::function<double(int j, double x, double local)>& f);

  const DomainGrid& grid() const { return grid_; }

  std::span<double> half(int j, Half h);
  std::span<const double> half(int j, Half h) const;
  std::span<double> element(int j);
  std::span<const double> element(int j) const;

  double& at(int j, Half h, int i) { return values_[grid_.nodeIndex(j, h, i)]; }
  double at(int j, Half h, int i) const { return values_[grid_.nodeIndex(j, h, i)]; }
  /// Value at X_j (average of the two stored copies).
  double centerValue(int j) const;

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// max_j |u_j(X_j^-) - u_j(X_j^+)|.
  double continuityDefect() const;

  ElementField& operator+=(const ElementField& other);
  ElementField& operator-=(const ElementField& other);
  ElementField& operator*=(double s);

private:
  DomainGrid grid_;
  std::vector<double> values_;
};

ElementField operator+(ElementField a, const ElementField& b);
ElementField operator-(ElementField a, const ElementField& b);
ElementField operator*(double s, ElementField a);

/// Trapezoid weights on one half-element (subgrid + 1 nodes).
std::vector<double> halfWeights(const DomainGrid& grid);

/// Sum of element integrals of u_j v_j, composite trapezoid on each half.
double innerProduct(const ElementField& u, const ElementField& v, const DomainGrid& grid);
/// Integral over element j only.
double elementInnerProduct(const ElementField& u, const ElementField& v, int j);

/// ||u||_alpha = (sum_j ||d^alpha u_j||_0^2)^(1/2), alpha in {0, 1, 2}. Differences are
/// taken within each half so derivative jumps at X_j are not smoothed.
double seminorm(const ElementField& u, int order, const DomainGrid& grid);

}  // namespace srd
