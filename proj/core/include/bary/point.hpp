#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bary/numeric.hpp"

namespace bary {

/// A support point in R^d. Comparison and ordering are lexicographic on the
/// coordinates; equality is exact for Rat coordinates and tolerance-based for
/// double ones.
template <class T>
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<T> coords) : coords_(std::move(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  const T& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<T>& coords() const { return coords_; }

  bool equals(const Point& other) const {
    if (dim() != other.dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!num<T>::eq(coords_[i], other.coords_[i])) return false;
    return true;
  }

  /// Strict lexicographic order, consistent with equals() in float mode:
  /// coordinates within tolerance compare as equal.
  bool lex_less(const Point& other) const {
    std::size_t n = std::min(dim(), other.dim());
    for (std::size_t i = 0; i < n; ++i) {
      if (num<T>::eq(coords_[i], other.coords_[i])) continue;
      return coords_[i] < other.coords_[i];
    }
    return dim() < other.dim();
  }

 private:
  std::vector<T> coords_;
};

template <class T>
void require_same_dim(const Point<T>& a, const Point<T>& b) {
  if (a.dim() != b.dim())
    throw data_error("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
}

/// Squared Euclidean distance; exact for rational coordinates.
template <class T>
T squared_distance(const Point<T>& a, const Point<T>& b) {
  require_same_dim(a, b);
  T sum = T(0);
  for (std::size_t t = 0; t < a.dim(); ++t) {
    T diff = a[t] - b[t];
    sum += diff * diff;
  }
  return sum;
}

/// The weighted centroid sum_i lambda_i x_i, the unique minimizer of
/// s -> sum_i lambda_i |s - x_i|^2.
template <class T>
Point<T> weighted_centroid(const std::vector<Point<T>>& points, const std::vector<T>& lambda) {
  if (points.empty() || points.size() != lambda.size())
    throw data_error("weighted_centroid: need as many points as weights");
  std::size_t d = points[0].dim();
  std::vector<T> c(d, T(0));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_dim(points[i], points[0]);
    for (std::size_t t = 0; t < d; ++t) c[t] += lambda[i] * points[i][t];
  }
  return Point<T>(std::move(c));
}

}  // namespace bary
