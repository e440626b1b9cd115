#pragma once

#include <cstddef>
#include <vector>

#include "bary/lp.hpp"
#include "bary/measure.hpp"

namespace bary {
namespace oracle {

/// A transportation instance scaled to integer masses by a common
/// denominator D. Exhaustive search over the integral flows of such an
/// instance gives the true LP optimum, because the transportation polytope
/// with integral marginals has integral vertices.
template <class T>
struct IntegralTransportInstance {
  std::vector<long> source_units;
  std::vector<long> target_units;
  std::vector<std::vector<T>> cost;
  long denominator;
};

namespace detail {

template <class T>
long scaled_units(const T& mass, long d) {
  if constexpr (std::is_same_v<T, double>) {
    double scaled = mass * static_cast<double>(d);
    long rounded = std::lround(scaled);
    if (std::fabs(scaled - rounded) > 1e-6) throw data_error("mass is not a multiple of 1/D");
    return rounded;
  } else {
    T scaled = mass * T(d);
    if (scaled.get_den() != 1) throw data_error("mass is not a multiple of 1/D");
    return scaled.get_num().get_si();
  }
}

template <class T>
struct Search {
  const IntegralTransportInstance<T>& inst;
  std::size_t cols;
  std::vector<long> row_left, col_left;
  T best;
  bool found = false;

  void run(std::size_t j, std::size_t k, T partial) {
    if (found && !(partial < best)) return;
    std::size_t rows = inst.source_units.size();
    if (j == rows - 1) {
      // last row is forced by the column remainders
      T total = partial;
      for (std::size_t kk = 0; kk < cols; ++kk) {
        if (col_left[kk] > row_left[j]) return;
        if (col_left[kk] > 0)
          total += T(col_left[kk]) * inst.cost[j][kk];
      }
      if (!found || total < best) {
        best = total;
        found = true;
      }
      return;
    }
    if (k == cols - 1) {
      long f = row_left[j];
      if (f > col_left[k]) return;
      T next = partial + (f > 0 ? T(f) * inst.cost[j][k] : T(0));
      row_left[j] -= f;
      col_left[k] -= f;
      run(j + 1, 0, next);
      row_left[j] += f;
      col_left[k] += f;
      return;
    }
    long cap = std::min(row_left[j], col_left[k]);
    for (long f = cap; f >= 0; --f) {
      T next = partial + (f > 0 ? T(f) * inst.cost[j][k] : T(0));
      row_left[j] -= f;
      col_left[k] -= f;
      run(j, k + 1, next);
      row_left[j] += f;
      col_left[k] += f;
    }
  }
};

}  // namespace detail

template <class T>
IntegralTransportInstance<T> make_integral_instance(const Measure<T>& p0, const Measure<T>& p1,
                                                    long d) {
  if (d < 1 || d > 16) throw cap_error("oracle denominator limit is 16");
  if (p0.size() * p1.size() > 16) throw cap_error("oracle cost matrix limit is 16 entries");
  IntegralTransportInstance<T> inst;
  inst.denominator = d;
  long total0 = 0, total1 = 0;
  for (const auto& a : p0.atoms()) {
    inst.source_units.push_back(detail::scaled_units(a.mass, d));
    total0 += inst.source_units.back();
  }
  for (const auto& a : p1.atoms()) {
    inst.target_units.push_back(detail::scaled_units(a.mass, d));
    total1 += inst.target_units.back();
  }
  if (total0 != total1) throw data_error("oracle marginals have different total mass");
  inst.cost.resize(p0.size());
  for (std::size_t j = 0; j < p0.size(); ++j)
    for (std::size_t k = 0; k < p1.size(); ++k)
      inst.cost[j].push_back(squared_distance(p0.atom(j).point, p1.atom(k).point));
  return inst;
}

/// Minimal transport cost between two measures whose masses are multiples of
/// 1/D, by exhaustive search over all integral flows.
template <class T>
T brute_force_w2(const Measure<T>& p0, const Measure<T>& p1, long d) {
  IntegralTransportInstance<T> inst = make_integral_instance(p0, p1, d);
  detail::Search<T> search{inst, inst.target_units.size(), inst.source_units,
                           inst.target_units, T(0)};
  search.run(0, 0, T(0));
  if (!search.found) throw data_error("oracle search found no feasible transport");
  return search.best / T(d);
}

/// The lambda-weighted objective sum_i lambda_i W2(P0, P_i)^2 by brute force.
template <class T>
T brute_force_phi(const Measure<T>& p0, const std::vector<Measure<T>>& measures,
                  const Weights<T>& lambda, long d) {
  if (measures.size() != lambda.size())
    throw data_error("brute_force_phi: weight count does not match measure count");
  T phi = T(0);
  for (std::size_t i = 0; i < measures.size(); ++i)
    phi += lambda[i] * brute_force_w2(p0, measures[i], d);
  return phi;
}

/// Independent vertex check: exact feasibility, zero nonbasic variables, a
/// nonsingular basis, and no improving reduced cost against duals computed
/// here by plain Gaussian elimination (not by the solver).
template <class T>
bool verify_vertex(const VertexSolution<T>& sol, const LinearProgram<T>& lp) {
  if (sol.status != SolveStatus::optimal) return false;
  std::size_t m = lp.num_rows(), n = lp.num_vars();
  if (sol.values.size() != n) return false;
  if (sol.basis.size() + sol.artificial_rows.size() != m) return false;

  for (const auto& v : sol.values)
    if (num<T>::is_negative(v)) return false;
  std::vector<T> residual;
  residual.reserve(m);
  for (std::size_t r = 0; r < m; ++r) residual.push_back(lp.rhs(r));
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [r, coef] : lp.col(j))
      residual[r] -= coef > 0 ? sol.values[j] : -sol.values[j];
  for (const auto& v : residual)
    if (!num<T>::is_zero(v)) return false;

  std::vector<bool> basic(n, false);
  for (std::size_t j : sol.basis) {
    if (j >= n) return false;
    basic[j] = true;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!basic[j] && !num<T>::is_zero(sol.values[j])) return false;

  // Assemble B' (rows of the transposed basis) and solve B' y = c_B.
  std::vector<std::vector<T>> mat(m, std::vector<T>(m + 1, T(0)));
  std::size_t slot = 0;
  for (std::size_t j : sol.basis) {
    for (const auto& [r, coef] : lp.col(j)) mat[slot][r] = T(coef);
    mat[slot][m] = lp.objective(j);
    ++slot;
  }
  for (std::size_t r : sol.artificial_rows) {
    if (r >= m) return false;
    mat[slot][r] = T(1);
    mat[slot][m] = T(0);
    ++slot;
  }
  std::vector<std::size_t> pivot_col(m);
  std::vector<bool> used_col(m, false);
  for (std::size_t row = 0; row < m; ++row) {
    std::size_t pc = m;
    for (std::size_t c = 0; c < m; ++c)
      if (!used_col[c] && !num<T>::is_zero(mat[row][c])) {
        pc = c;
        break;
      }
    if (pc == m) return false;  // singular: not a basis
    used_col[pc] = true;
    pivot_col[row] = pc;
    for (std::size_t rr = 0; rr < m; ++rr) {
      if (rr == row || num<T>::is_zero(mat[rr][pc])) continue;
      T f = mat[rr][pc] / mat[row][pc];
      for (std::size_t c = 0; c <= m; ++c) mat[rr][c] -= f * mat[row][c];
    }
  }
  std::vector<T> y(m, T(0));
  for (std::size_t row = 0; row < m; ++row) y[pivot_col[row]] = mat[row][m] / mat[row][pivot_col[row]];

  for (std::size_t j = 0; j < n; ++j) {
    T rc = lp.objective(j);
    for (const auto& [r, coef] : lp.col(j)) rc -= coef > 0 ? y[r] : -y[r];
    if (num<T>::is_negative(rc)) return false;
    if (!num<T>::is_zero(sol.values[j]) && !num<T>::is_zero(rc)) return false;
  }
  return true;
}

}  // namespace oracle
}  // namespace bary
