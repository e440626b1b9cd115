#pragma once

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "bary/numeric.hpp"

namespace bary {

/// An equality-form linear program min c'x s.t. Ax = b, x >= 0, restricted to
/// constraint coefficients in {-1, 0, 1} (zeros are simply absent entries).
template <class T>
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_rows) : rhs_(num_rows, T(0)) {}

  std::size_t add_variable(T cost) {
    objective_.push_back(std::move(cost));
    cols_.emplace_back();
    return cols_.size() - 1;
  }

  void set_rhs(std::size_t row, T value) { rhs_.at(row) = std::move(value); }

  /// Adds a nonzero coefficient. Anything outside {-1, 1} is rejected, which
  /// also catches accidental duplicate entries on the same (row, var).
  void add_coeff(std::size_t row, std::size_t var, int coeff) {
    if (coeff != 1 && coeff != -1)
      throw data_error("constraint coefficients must be -1 or 1");
    if (row >= rhs_.size()) throw data_error("constraint row out of range");
    for (const auto& [r, c] : cols_.at(var))
      if (r == row) throw data_error("duplicate coefficient entry");
    cols_[var].emplace_back(row, coeff);
  }

  std::size_t num_vars() const { return cols_.size(); }
  std::size_t num_rows() const { return rhs_.size(); }
  const T& objective(std::size_t var) const { return objective_[var]; }
  const T& rhs(std::size_t row) const { return rhs_[row]; }
  const std::vector<std::pair<std::size_t, int>>& col(std::size_t var) const {
    return cols_[var];
  }

  /// Plain text dump (rows / columns / rhs) for inspection.
  void dump(std::ostream& os) const {
    os << "rows " << num_rows() << " columns " << num_vars() << "\n";
    std::vector<std::vector<std::pair<std::size_t, int>>> rows(num_rows());
    for (std::size_t j = 0; j < num_vars(); ++j)
      for (const auto& [r, c] : cols_[j]) rows[r].emplace_back(j, c);
    for (std::size_t r = 0; r < num_rows(); ++r) {
      os << "row " << r << ":";
      for (const auto& [j, c] : rows[r]) os << (c > 0 ? " +x" : " -x") << j;
      os << " = " << format_number(rhs_[r]) << "\n";
    }
    os << "objective:";
    for (std::size_t j = 0; j < num_vars(); ++j)
      os << " " << format_number(objective_[j]);
    os << "\n";
  }

 private:
  std::vector<T> objective_;
  std::vector<T> rhs_;
  std::vector<std::vector<std::pair<std::size_t, int>>> cols_;
};

enum class SolveStatus { optimal, infeasible, unbounded };

/// An optimal basic solution. `basis` lists the basic structural variables;
/// `artificial_rows` lists rows whose basic slot is an internal unit column at
/// level zero (these occur on redundant rows). Together they describe a full
/// nonsingular basis: columns of `basis` plus a unit column per listed row.
template <class T>
struct VertexSolution {
  SolveStatus status = SolveStatus::optimal;
  std::vector<T> values;
  std::vector<std::size_t> basis;
  std::vector<std::size_t> artificial_rows;
  T objective_value = T(0);
  long pivots = 0;
  bool warm_fallback = false;
};

}  // namespace bary
