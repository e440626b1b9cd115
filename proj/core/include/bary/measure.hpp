#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "bary/point.hpp"

namespace bary {

template <class T>
struct Atom {
  Point<T> point;
  T mass;
};

enum class MeasureKind { full, partial };

/// A discrete measure: finitely many distinct support points with strictly
/// positive masses. A full measure has total mass exactly 1 (within tolerance
/// in float mode), a partial one at most 1. Atoms are kept sorted
/// lexicographically; coincident points are merged on construction.
template <class T>
class Measure {
 public:
  Measure() = default;

  explicit Measure(std::vector<Atom<T>> atoms, MeasureKind kind = MeasureKind::full)
      : atoms_(std::move(atoms)), kind_(kind) {
    normalize_atoms();
    validate();
  }

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom<T>& atom(std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom<T>>& atoms() const { return atoms_; }
  MeasureKind kind() const { return kind_; }
  std::size_t dim() const { return atoms_.empty() ? 0 : atoms_[0].point.dim(); }

  T total_mass() const {
    T sum = T(0);
    for (const auto& a : atoms_) sum += a.mass;
    return sum;
  }

  std::vector<Point<T>> support() const {
    std::vector<Point<T>> pts;
    pts.reserve(atoms_.size());
    for (const auto& a : atoms_) pts.push_back(a.point);
    return pts;
  }

  /// Index of an exactly/tolerance equal support point, or npos.
  std::size_t find(const Point<T>& p) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].point.equals(p)) return i;
    return npos;
  }

  bool equals(const Measure& other) const {
    if (size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!atoms_[i].point.equals(other.atoms_[i].point)) return false;
      if (!num<T>::eq(atoms_[i].mass, other.atoms_[i].mass)) return false;
    }
    return true;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void normalize_atoms() {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom<T>& a, const Atom<T>& b) { return a.point.lex_less(b.point); });
    // Merge coincident points, summing masses.
    std::vector<Atom<T>> merged;
    for (auto& a : atoms_) {
      if (!merged.empty() && merged.back().point.equals(a.point))
        merged.back().mass += a.mass;
      else
        merged.push_back(std::move(a));
    }
    atoms_ = std::move(merged);
  }

  void validate() const {
    if (atoms_.empty()) throw data_error("measure has no atoms");
    for (const auto& a : atoms_) {
      require_same_dim(a.point, atoms_[0].point);
      if (!num<T>::is_positive(a.mass)) throw data_error("measure has a nonpositive mass");
    }
    T sum = total_mass();
    if (kind_ == MeasureKind::full) {
      if (!num<T>::eq(sum, T(1)))
        throw data_error("full measure masses must sum to 1");
    } else {
      if (num<T>::is_positive(sum - T(1)))
        throw data_error("partial measure masses must sum to at most 1");
    }
  }

  std::vector<Atom<T>> atoms_;
  MeasureKind kind_ = MeasureKind::full;
};

/// The weight vector lambda: strictly positive entries summing to 1.
template <class T>
class Weights {
 public:
  explicit Weights(std::vector<T> values) : values_(std::move(values)) {
    if (values_.empty()) throw data_error("empty weight vector");
    T sum = T(0);
    for (const auto& w : values_) {
      if (!num<T>::is_positive(w)) throw data_error("weights must be strictly positive");
      sum += w;
    }
    if (!num<T>::eq(sum, T(1))) throw data_error("weights must sum to 1");
  }

  /// Uniform weights 1/N.
  static Weights uniform(std::size_t n) {
    std::vector<T> v(n, num<T>::from_fraction(1, static_cast<long>(n)));
    return Weights(std::move(v));
  }

  /// Exact normalization of arbitrary positive values.
  static Weights normalized(std::vector<T> values) {
    T sum = T(0);
    for (const auto& w : values) {
      if (!num<T>::is_positive(w)) throw data_error("weights must be strictly positive");
      sum += w;
    }
    for (auto& w : values) w /= sum;
    return Weights(std::move(values));
  }

  std::size_t size() const { return values_.size(); }
  const T& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<T>& values() const { return values_; }

 private:
  std::vector<T> values_;
};

namespace detail {

template <class T>
std::vector<Point<T>> sorted_dedup(std::vector<Point<T>> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point<T>& a, const Point<T>& b) { return a.lex_less(b); });
  std::vector<Point<T>> out;
  for (auto& p : pts)
    if (out.empty() || !out.back().equals(p)) out.push_back(std::move(p));
  return out;
}

}  // namespace detail

/// Deduplicated union of the input supports, lexicographically sorted.
template <class T>
std::vector<Point<T>> union_support(const std::vector<Measure<T>>& measures) {
  if (measures.empty()) throw data_error("union_support: no measures");
  std::vector<Point<T>> pts;
  for (const auto& m : measures) {
    if (m.dim() != measures[0].dim())
      throw data_error("union_support: measures of mixed dimension");
    for (const auto& a : m.atoms()) pts.push_back(a.point);
  }
  return detail::sorted_dedup(std::move(pts));
}

/// The set of all weighted centroids with one support point per measure,
/// deduplicated and sorted. Its size is bounded by the product of the support
/// sizes; enumeration refuses instances whose product exceeds `cap`.
template <class T>
std::vector<Point<T>> centroid_set(const std::vector<Measure<T>>& measures,
                                   const Weights<T>& lambda,
                                   std::size_t cap = 1000000) {
  if (measures.empty()) throw data_error("centroid_set: no measures");
  if (measures.size() != lambda.size())
    throw data_error("centroid_set: weight count does not match measure count");
  std::size_t combos = 1;
  for (const auto& m : measures) {
    if (m.dim() != measures[0].dim())
      throw data_error("centroid_set: measures of mixed dimension");
    if (combos > cap / std::max<std::size_t>(m.size(), 1))
      throw cap_error("instance too large for exact support enumeration");
    combos *= m.size();
  }
  if (combos > cap) throw cap_error("instance too large for exact support enumeration");

  std::size_t n = measures.size(), d = measures[0].dim();
  std::vector<Point<T>> pts;
  pts.reserve(combos);
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    std::vector<T> c(d, T(0));
    for (std::size_t i = 0; i < n; ++i) {
      const Point<T>& x = measures[i].atom(pick[i]).point;
      for (std::size_t t = 0; t < d; ++t) c[t] += lambda[i] * x[t];
    }
    pts.emplace_back(std::move(c));
    std::size_t i = 0;
    while (i < n && ++pick[i] == measures[i].size()) pick[i++] = 0;
    if (i == n) break;
  }
  return detail::sorted_dedup(std::move(pts));
}

/// The support bound sum_i |P_i| - N + 1 guaranteed for vertex solutions.
template <class T>
std::size_t sparsity_bound(const std::vector<Measure<T>>& measures) {
  std::size_t total = 0;
  for (const auto& m : measures) total += m.size();
  return total - measures.size() + 1;
}

}  // namespace bary
