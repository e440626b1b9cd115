#pragma once

#include <algorithm>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "bary/lp.hpp"
#include "bary/rat_lu.hpp"

namespace bary {

/// Solver configuration. Rational solves default to the basis-factorization
/// form: a double-precision simplex proposes a basis, which is then verified
/// exactly and, if needed, repaired by exact Bland pivots. `pure_exact` runs
/// every pivot in rational arithmetic instead.
struct SolveOptions {
  enum class Mode { assisted, pure_exact };
  enum class PivotRule { dantzig, bland };
  Mode mode = Mode::assisted;
  PivotRule rule = PivotRule::dantzig;
  long max_pivots = 500000;
  long max_exact_pivots = 100000;
};

/// A feasible point used to warm-start a solve, optionally with the basis
/// that makes it a vertex. A point without a basis is verified exactly and
/// crashed to a vertex without worsening the objective; a basis is reused
/// directly, so restarting from an optimal vertex performs zero pivots. An
/// infeasible hint falls back to a cold solve.
template <class T>
struct WarmStart {
  std::vector<T> values;
  std::vector<std::size_t> basis;
  std::vector<std::size_t> artificial_rows;

  static WarmStart from(const VertexSolution<T>& sol) {
    return WarmStart{sol.values, sol.basis, sol.artificial_rows};
  }
};

namespace lpdetail {

// Engine tolerances. Rational comparisons are exact; the double thresholds
// follow the documented 1e-10 reduced-cost heuristic.
template <class T>
struct Eps;
template <>
struct Eps<double> {
  static constexpr double rc = 1e-10;
  static constexpr double piv = 1e-9;
  static constexpr double feas = 1e-7;
};

template <class T>
bool rc_negative(const T& v) {
  if constexpr (std::is_same_v<T, double>)
    return v < -Eps<double>::rc;
  else
    return num<T>::is_negative(v);
}

template <class T>
bool dir_positive(const T& v) {
  if constexpr (std::is_same_v<T, double>)
    return v > Eps<double>::piv;
  else
    return num<T>::is_positive(v);
}

template <class T>
bool dir_nonzero(const T& v) {
  if constexpr (std::is_same_v<T, double>)
    return v > Eps<double>::piv || v < -Eps<double>::piv;
  else
    return !num<T>::is_zero(v);
}

// Row-flipped internal copy (rhs made nonnegative). Flipping keeps all
// coefficients in {-1, 0, 1}. Artificial variable for row r has index n + r.
template <class T>
struct Internal {
  std::size_t m = 0, n = 0;
  std::vector<std::vector<std::pair<std::size_t, int>>> cols;
  std::vector<T> c, b;
};

template <class T>
Internal<T> internalize(const LinearProgram<T>& lp) {
  Internal<T> P;
  P.m = lp.num_rows();
  P.n = lp.num_vars();
  std::vector<int> flip(P.m, 1);
  P.b.reserve(P.m);
  for (std::size_t r = 0; r < P.m; ++r) {
    if (num<T>::is_negative(lp.rhs(r))) {
      flip[r] = -1;
      P.b.push_back(-lp.rhs(r));
    } else {
      P.b.push_back(lp.rhs(r));
    }
  }
  P.cols.resize(P.n);
  P.c.reserve(P.n);
  for (std::size_t j = 0; j < P.n; ++j) {
    P.c.push_back(lp.objective(j));
    P.cols[j].reserve(lp.col(j).size());
    for (const auto& [r, coef] : lp.col(j)) P.cols[j].emplace_back(r, coef * flip[r]);
    std::sort(P.cols[j].begin(), P.cols[j].end());
  }
  return P;
}

template <class T, class U>
Internal<T> convert(const Internal<U>& src) {
  Internal<T> dst;
  dst.m = src.m;
  dst.n = src.n;
  dst.cols = src.cols;
  dst.c.reserve(src.n);
  dst.b.reserve(src.m);
  for (const auto& v : src.c) dst.c.push_back(static_cast<T>(num<U>::to_double(v)));
  for (const auto& v : src.b) dst.b.push_back(static_cast<T>(num<U>::to_double(v)));
  return dst;
}

enum class RunResult { optimal, unbounded, pivot_limit };

/// Revised primal simplex with an explicit dense basis inverse. One code path
/// serves both arithmetic modes; with T = Rat every pivot is exact.
template <class T>
class SimplexEngine {
 public:
  explicit SimplexEngine(const Internal<T>& P) : P_(P) {}

  void start_artificial() {
    std::size_t m = P_.m;
    binv_.assign(m * m, T(0));
    for (std::size_t r = 0; r < m; ++r) binv_[r * m + r] = T(1);
    basis_var_.resize(m);
    for (std::size_t r = 0; r < m; ++r) basis_var_[r] = P_.n + r;
    xb_ = P_.b;
    rebuild_flags();
  }

  /// Builds a basis through the support of a feasible point, sliding along
  /// null directions (never worsening the objective) whenever a support
  /// column is dependent on the ones already accepted. Returns false when the
  /// walk hits an unbounded improving ray or numeric trouble.
  bool start_from_point(std::vector<T> x) {
    start_artificial();
    std::size_t m = P_.m;
    for (std::size_t j = 0; j < P_.n; ++j) {
      if (!num<T>::is_positive(x[j]) || in_basis_[j]) continue;
      while (true) {
        std::vector<T> w = ftran(j);
        // deepest artificial pivot available
        std::size_t best = npos;
        for (std::size_t r = 0; r < m; ++r) {
          if (basis_var_[r] < P_.n || !dir_nonzero(w[r])) continue;
          if constexpr (std::is_same_v<T, double>) {
            if (best == npos || std::fabs(w[r]) > std::fabs(w[best])) best = r;
          } else {
            if (best == npos) best = r;
          }
        }
        if (best != npos) {
          pivot(best, j, w);
          break;
        }
        // dependent: walk the null direction until some positive var drops out
        T gamma = P_.c[j];
        for (std::size_t r = 0; r < m; ++r)
          if (basis_var_[r] < P_.n && dir_nonzero(w[r])) gamma -= w[r] * P_.c[basis_var_[r]];
        bool increase = num<T>::is_negative(gamma);
        // step t in the chosen orientation; find the blocking variable
        std::size_t block = npos, block_row = npos;
        T best_t = T(0);
        auto consider = [&](std::size_t var, std::size_t row, const T& value, const T& rate) {
          // var decreases at `rate` > 0 per unit step
          T t = value / rate;
          if constexpr (std::is_same_v<T, double>) {
            if (t < 0) t = 0;
          }
          if (block == npos || t < best_t || (t == best_t && var < block)) {
            block = var;
            block_row = row;
            best_t = t;
          }
        };
        // d_j = increase ? +1 : -1; basic var at row r changes by -/+ w[r]
        if (!increase) consider(j, npos, x[j], T(1));
        for (std::size_t r = 0; r < m; ++r) {
          if (basis_var_[r] >= P_.n || !dir_nonzero(w[r])) continue;
          std::size_t v = basis_var_[r];
          T rate = increase ? w[r] : -w[r];
          if (dir_positive(rate)) consider(v, r, x[v], rate);
        }
        if (block == npos) return false;
        if (block != j && !num<T>::is_positive(best_t)) {
          // degenerate block: swap the zero-level basic out, j in
          pivot(block_row, j, w);
          break;
        }
        T t = best_t;
        x[j] += increase ? t : -t;
        for (std::size_t r = 0; r < m; ++r) {
          if (basis_var_[r] >= P_.n || !dir_nonzero(w[r])) continue;
          std::size_t v = basis_var_[r];
          x[v] -= (increase ? t : -t) * w[r];
          if (num<T>::is_negative(x[v]) || v == block) x[v] = T(0);
        }
        if (block == j) x[j] = T(0);
        if (!num<T>::is_positive(x[j])) break;  // j dropped out, nothing to insert
      }
    }
    xb_ = solve_b();
    if constexpr (std::is_same_v<T, double>) {
      for (auto& v : xb_)
        if (v < 0) v = 0;
    } else {
      for (const auto& v : xb_)
        if (num<T>::is_negative(v)) return false;
    }
    return true;
  }

  /// Runs primal simplex. Phase 1 minimizes the sum of artificials (which may
  /// then stay basic at level zero); phase 2 pins them there. The dense
  /// inverse is refreshed from a fresh factorization at a fixed cadence to
  /// keep the accumulated update error in check.
  RunResult run(bool phase1, SolveOptions::PivotRule rule, long max_pivots) {
    std::size_t m = P_.m, n = P_.n;
    long stall = 0;
    bool bland = rule == SolveOptions::PivotRule::bland;
    while (true) {
      if constexpr (std::is_same_v<T, double>) {
        if (pivots_ >= last_reinvert_ + kReinvertInterval) reinvert();
      }
      std::vector<T> y = btran_costs(phase1);
      std::size_t enter = npos;
      T best_rc = T(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (in_basis_[j]) continue;
        T rc = phase1 ? T(0) : P_.c[j];
        for (const auto& [r, coef] : P_.cols[j]) rc += coef > 0 ? -y[r] : y[r];
        if (!rc_negative(rc)) continue;
        if (bland || stall > kStallLimit) {
          enter = j;
          break;
        }
        if (enter == npos || rc < best_rc) {
          enter = j;
          best_rc = rc;
        }
      }
      if (enter == npos) return RunResult::optimal;

      std::vector<T> w = ftran(enter);
      std::size_t leave = npos;
      bool forced_zero = false;
      T best_t = T(0);
      for (std::size_t r = 0; r < m; ++r) {
        bool artificial = basis_var_[r] >= n;
        if (!phase1 && artificial) {
          // artificials must stay at exactly zero
          if (dir_nonzero(w[r])) {
            if (!forced_zero || basis_var_[r] < basis_var_[leave]) {
              leave = r;
              best_t = T(0);
            }
            forced_zero = true;
          }
          continue;
        }
        if (!dir_positive(w[r])) continue;
        T t = xb_[r] / w[r];
        if constexpr (std::is_same_v<T, double>) {
          if (t < 0) t = 0;
        }
        if (forced_zero && num<T>::is_positive(t)) continue;
        if (leave == npos || t < best_t || (t == best_t && basis_var_[r] < basis_var_[leave])) {
          leave = r;
          best_t = t;
        }
      }
      if (leave == npos) {
        ray_var_ = enter;
        return RunResult::unbounded;
      }
      pivot(leave, enter, w);
      if (++pivots_ >= max_pivots) return RunResult::pivot_limit;
      if (num<T>::is_positive(best_t)) {
        stall = 0;
      } else if (++stall == kStallLimit + 1) {
        if constexpr (std::is_same_v<T, double>) reinvert();
      }
    }
  }

  T phase1_objective() const {
    T sum = T(0);
    for (std::size_t r = 0; r < P_.m; ++r)
      if (basis_var_[r] >= P_.n) sum += xb_[r];
    return sum;
  }

  const std::vector<std::size_t>& basis_var() const { return basis_var_; }
  const std::vector<T>& xb() const { return xb_; }
  long pivots() const { return pivots_; }
  std::size_t ray_var() const { return ray_var_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static constexpr long kStallLimit = 30;
  static constexpr long kReinvertInterval = 256;

  void rebuild_flags() {
    in_basis_.assign(P_.n, false);
    for (std::size_t v : basis_var_)
      if (v < P_.n) in_basis_[v] = true;
  }

  // w = Binv * A_j
  std::vector<T> ftran(std::size_t j) const {
    std::size_t m = P_.m;
    std::vector<T> w(m, T(0));
    for (const auto& [r, coef] : P_.cols[j]) {
      if (coef > 0)
        for (std::size_t i = 0; i < m; ++i) w[i] += binv_[i * m + r];
      else
        for (std::size_t i = 0; i < m; ++i) w[i] -= binv_[i * m + r];
    }
    return w;
  }

  std::vector<T> solve_b() const {
    std::size_t m = P_.m;
    std::vector<T> x(m, T(0));
    for (std::size_t i = 0; i < m; ++i) {
      T acc = T(0);
      for (std::size_t r = 0; r < m; ++r) acc += binv_[i * m + r] * P_.b[r];
      x[i] = std::move(acc);
    }
    return x;
  }

  // Rebuilds the dense inverse and the basic values from a fresh sparse
  // factorization of the current basis.
  void reinvert() {
    std::size_t m = P_.m;
    std::vector<typename BasisLU<T>::SparseCol> cols(m);
    for (std::size_t s = 0; s < m; ++s) {
      std::size_t v = basis_var_[s];
      if (v < P_.n) {
        for (const auto& [r, coef] : P_.cols[v]) cols[s].emplace_back(r, T(coef));
      } else {
        cols[s].emplace_back(v - P_.n, T(1));
      }
    }
    BasisLU<T> lu;
    if (!lu.factor(m, cols)) return;  // keep the updated inverse
    std::vector<T> unit(m, T(0));
    for (std::size_t r = 0; r < m; ++r) {
      unit[r] = T(1);
      std::vector<T> col = lu.solve(unit);
      for (std::size_t s = 0; s < m; ++s) binv_[s * m + r] = col[s];
      unit[r] = T(0);
    }
    xb_ = lu.solve(P_.b);
    if constexpr (std::is_same_v<T, double>) {
      for (auto& v : xb_)
        if (v < 0) v = 0;
    }
    last_reinvert_ = pivots_;
  }

  std::vector<T> btran_costs(bool phase1) const {
    std::size_t m = P_.m;
    std::vector<T> y(m, T(0));
    for (std::size_t r = 0; r < m; ++r) {
      std::size_t v = basis_var_[r];
      T cost = phase1 ? (v >= P_.n ? T(1) : T(0)) : (v >= P_.n ? T(0) : P_.c[v]);
      if (num<T>::is_zero(cost)) continue;
      for (std::size_t i = 0; i < m; ++i) y[i] += cost * binv_[r * m + i];
    }
    return y;
  }

  void pivot(std::size_t leave, std::size_t enter, const std::vector<T>& w) {
    std::size_t m = P_.m;
    T piv = w[leave];
    T* lrow = binv_.data() + leave * m;
    for (std::size_t i = 0; i < m; ++i) lrow[i] /= piv;
    xb_[leave] /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave || !dir_nonzero(w[r])) continue;
      T f = w[r];
      T* row = binv_.data() + r * m;
      for (std::size_t i = 0; i < m; ++i) row[i] -= f * lrow[i];
      xb_[r] -= f * xb_[leave];
      if constexpr (std::is_same_v<T, double>) {
        if (xb_[r] < 0) xb_[r] = 0;
      }
    }
    if (basis_var_[leave] < P_.n) in_basis_[basis_var_[leave]] = false;
    basis_var_[leave] = enter;
    in_basis_[enter] = true;
  }

  const Internal<T>& P_;
  std::vector<T> binv_, xb_;
  std::vector<std::size_t> basis_var_;
  std::vector<bool> in_basis_;
  long pivots_ = 0;
  long last_reinvert_ = 0;
  std::size_t ray_var_ = npos;
};

// ---------------------------------------------------------------------------
// Exact finalization: verify a candidate basis with the sparse LU, then do
// Bland pivots in exact arithmetic until optimality (or unboundedness).
// ---------------------------------------------------------------------------

enum class FinalizeOutcome { optimal, unbounded, bad_basis, pivot_limit };

template <class T>
struct FinalizeResult {
  FinalizeOutcome outcome = FinalizeOutcome::bad_basis;
  std::vector<std::size_t> basis_var;
  std::vector<T> xb;
  long pivots = 0;
};

template <class T>
FinalizeResult<T> exact_finalize(const Internal<T>& P, std::vector<std::size_t> basis_var,
                                 long max_pivots) {
  FinalizeResult<T> out;
  std::size_t m = P.m, n = P.n;
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  BasisLU<T> lu;
  std::vector<bool> in_basis(n, false);

  while (true) {
    typename BasisLU<T>::SparseCol unit;
    std::vector<typename BasisLU<T>::SparseCol> cols(m);
    for (std::size_t s = 0; s < m; ++s) {
      std::size_t v = basis_var[s];
      if (v < n) {
        for (const auto& [r, coef] : P.cols[v]) cols[s].emplace_back(r, T(coef));
      } else {
        cols[s].emplace_back(v - n, T(1));
      }
    }
    if (!lu.factor(m, cols)) return out;  // singular: bad basis

    std::vector<T> xb = lu.solve(P.b);
    for (std::size_t s = 0; s < m; ++s) {
      if (num<T>::is_negative(xb[s])) return out;                       // infeasible basis
      if (basis_var[s] >= n && !num<T>::is_zero(xb[s])) return out;     // artificial off zero
    }

    std::vector<T> cb(m, T(0));
    for (std::size_t s = 0; s < m; ++s)
      if (basis_var[s] < n) cb[s] = P.c[basis_var[s]];
    std::vector<T> y = lu.solve_transposed(cb);

    std::fill(in_basis.begin(), in_basis.end(), false);
    for (std::size_t v : basis_var)
      if (v < n) in_basis[v] = true;

    std::size_t enter = npos;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_basis[j]) continue;
      T rc = P.c[j];
      for (const auto& [r, coef] : P.cols[j]) rc += coef > 0 ? -y[r] : y[r];
      if (num<T>::is_negative(rc)) {
        enter = j;
        break;
      }
    }
    if (enter == npos) {
      out.outcome = FinalizeOutcome::optimal;
      out.basis_var = std::move(basis_var);
      out.xb = std::move(xb);
      return out;
    }

    std::vector<T> col(m, T(0));
    for (const auto& [r, coef] : P.cols[enter]) col[r] = T(coef);
    std::vector<T> w = lu.solve(col);

    std::size_t leave = npos;
    bool forced_zero = false;
    T best_t = T(0);
    for (std::size_t s = 0; s < m; ++s) {
      bool artificial = basis_var[s] >= n;
      if (artificial) {
        if (!num<T>::is_zero(w[s])) {
          if (!forced_zero || basis_var[s] < basis_var[leave]) {
            leave = s;
            best_t = T(0);
          }
          forced_zero = true;
        }
        continue;
      }
      if (!num<T>::is_positive(w[s])) continue;
      T t = xb[s] / w[s];
      if (forced_zero && num<T>::is_positive(t)) continue;
      if (leave == npos || t < best_t || (t == best_t && basis_var[s] < basis_var[leave])) {
        leave = s;
        best_t = t;
      }
    }
    if (leave == npos) {
      out.outcome = FinalizeOutcome::unbounded;
      out.basis_var = std::move(basis_var);
      return out;
    }
    basis_var[leave] = enter;
    if (++out.pivots >= max_pivots) {
      out.outcome = FinalizeOutcome::pivot_limit;
      return out;
    }
  }
}

template <class T>
VertexSolution<T> assemble(const LinearProgram<T>& lp, const std::vector<std::size_t>& basis_var,
                           const std::vector<T>& xb, long pivots, bool warm_fallback) {
  VertexSolution<T> sol;
  sol.status = SolveStatus::optimal;
  sol.pivots = pivots;
  sol.warm_fallback = warm_fallback;
  sol.values.assign(lp.num_vars(), T(0));
  for (std::size_t s = 0; s < basis_var.size(); ++s) {
    if (basis_var[s] < lp.num_vars()) {
      sol.values[basis_var[s]] = xb[s];
      sol.basis.push_back(basis_var[s]);
    } else {
      sol.artificial_rows.push_back(basis_var[s] - lp.num_vars());
    }
  }
  std::sort(sol.basis.begin(), sol.basis.end());
  std::sort(sol.artificial_rows.begin(), sol.artificial_rows.end());
  sol.objective_value = T(0);
  for (std::size_t j : sol.basis) sol.objective_value += lp.objective(j) * sol.values[j];
  return sol;
}

// Tries to reuse a basis carried by a warm-start hint. Returns true and fills
// `sol` when the basis is usable (feasible; repivoted to optimality if the
// objective changed since it was produced).
template <class T>
bool try_basis_hint(const LinearProgram<T>& lp, const Internal<T>& P, const WarmStart<T>& hint,
                    const SolveOptions& opts, VertexSolution<T>& sol) {
  std::size_t m = P.m, n = P.n;
  if (hint.basis.size() + hint.artificial_rows.size() != m) return false;
  std::vector<std::size_t> basis_var;
  basis_var.reserve(m);
  for (std::size_t j : hint.basis) {
    if (j >= n) return false;
    basis_var.push_back(j);
  }
  for (std::size_t r : hint.artificial_rows) {
    if (r >= m) return false;
    basis_var.push_back(n + r);
  }
  FinalizeResult<T> fin = exact_finalize<T>(P, std::move(basis_var), opts.max_exact_pivots);
  if (fin.outcome == FinalizeOutcome::pivot_limit)
    throw solver_error("exact cleanup pivot limit exceeded");
  if (fin.outcome == FinalizeOutcome::optimal) {
    sol = assemble(lp, fin.basis_var, fin.xb, fin.pivots, false);
    return true;
  }
  if (fin.outcome == FinalizeOutcome::unbounded) {
    sol.status = SolveStatus::unbounded;
    sol.pivots = fin.pivots;
    return true;
  }
  return false;
}

// Exact feasibility of a candidate point, checked against the original LP.
template <class T>
bool exactly_feasible(const LinearProgram<T>& lp, const std::vector<T>& x) {
  if (x.size() != lp.num_vars()) return false;
  for (const auto& v : x)
    if (num<T>::is_negative(v)) return false;
  std::vector<T> residual;
  residual.reserve(lp.num_rows());
  for (std::size_t r = 0; r < lp.num_rows(); ++r) residual.push_back(lp.rhs(r));
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (num<T>::is_zero(x[j])) continue;
    for (const auto& [r, coef] : lp.col(j))
      residual[r] -= coef > 0 ? x[j] : -x[j];
  }
  for (const auto& v : residual)
    if (!num<T>::is_zero(v)) return false;
  return true;
}

template <class T>
VertexSolution<T> pure_exact_solve(const LinearProgram<T>& lp, const Internal<T>& P,
                                   const std::vector<T>* start, const SolveOptions& opts,
                                   bool warm_fallback) {
  SimplexEngine<T> eng(P);
  if (start) {
    if (!eng.start_from_point(*start)) {
      VertexSolution<T> sol;
      sol.status = SolveStatus::unbounded;
      return sol;
    }
  } else {
    eng.start_artificial();
    RunResult r1 = eng.run(true, SolveOptions::PivotRule::bland, opts.max_exact_pivots);
    if (r1 == RunResult::pivot_limit) throw solver_error("exact phase 1 pivot limit exceeded");
    if (!num<T>::is_zero(eng.phase1_objective())) {
      VertexSolution<T> sol;
      sol.status = SolveStatus::infeasible;
      sol.pivots = eng.pivots();
      return sol;
    }
  }
  RunResult r2 = eng.run(false, SolveOptions::PivotRule::bland, opts.max_exact_pivots);
  if (r2 == RunResult::pivot_limit) throw solver_error("exact phase 2 pivot limit exceeded");
  if (r2 == RunResult::unbounded) {
    VertexSolution<T> sol;
    sol.status = SolveStatus::unbounded;
    sol.pivots = eng.pivots();
    return sol;
  }
  return assemble(lp, eng.basis_var(), eng.xb(), eng.pivots(), warm_fallback);
}

}  // namespace lpdetail

/// Solves to an optimal basic solution. Infeasibility and unboundedness are
/// reported through the status, never silently.
template <class T>
VertexSolution<T> solve_to_optimal_vertex(const LinearProgram<T>& lp,
                                          const SolveOptions& opts = {});

/// Warm-started solve. The hint is verified for exact feasibility; a feasible
/// non-vertex hint is crashed to a vertex without worsening the objective. An
/// infeasible hint falls back to a cold solve with `warm_fallback` set.
template <class T>
VertexSolution<T> solve_warm_started(const LinearProgram<T>& lp, const WarmStart<T>& hint,
                                     const SolveOptions& opts = {});

namespace lpdetail {

inline VertexSolution<double> solve_double(const LinearProgram<double>& lp,
                                           const Internal<double>& P,
                                           const std::vector<double>* start,
                                           const SolveOptions& opts, bool warm_fallback) {
  SimplexEngine<double> eng(P);
  bool started = false;
  if (start) started = eng.start_from_point(*start);
  if (!started) {
    eng.start_artificial();
    RunResult r1 = eng.run(true, opts.rule, opts.max_pivots);
    if (r1 == RunResult::pivot_limit) throw solver_error("phase 1 pivot limit exceeded");
    if (eng.phase1_objective() > Eps<double>::feas) {
      VertexSolution<double> sol;
      sol.status = SolveStatus::infeasible;
      sol.pivots = eng.pivots();
      sol.warm_fallback = warm_fallback;
      return sol;
    }
  }
  RunResult r2 = eng.run(false, opts.rule, opts.max_pivots);
  if (r2 == RunResult::pivot_limit) throw solver_error("phase 2 pivot limit exceeded");
  if (r2 == RunResult::unbounded) {
    VertexSolution<double> sol;
    sol.status = SolveStatus::unbounded;
    sol.pivots = eng.pivots();
    sol.warm_fallback = warm_fallback;
    return sol;
  }
  return assemble(lp, eng.basis_var(), eng.xb(), eng.pivots(), warm_fallback);
}

inline VertexSolution<Rat> solve_rational(const LinearProgram<Rat>& lp,
                                          const std::vector<Rat>* start, const SolveOptions& opts,
                                          bool warm_fallback) {
  Internal<Rat> P = internalize(lp);
  if (opts.mode == SolveOptions::Mode::pure_exact)
    return pure_exact_solve(lp, P, start, opts, warm_fallback);

  Internal<double> Pd = convert<double>(P);
  SimplexEngine<double> eng(Pd);
  bool have_basis = false;
  bool skip_double = false;
  if (start) {
    std::vector<double> xd;
    xd.reserve(start->size());
    for (const auto& v : *start) xd.push_back(v.get_d());
    have_basis = eng.start_from_point(xd);
  }
  if (!have_basis) {
    eng.start_artificial();
    RunResult r1 = eng.run(true, opts.rule, opts.max_pivots);
    // a pivot cap or a positive phase-1 sum both mean the exact path decides
    skip_double =
        r1 == RunResult::pivot_limit || eng.phase1_objective() > Eps<double>::feas;
  }
  if (!skip_double) {
    // a phase-2 pivot cap is fine here: the exact finalize repairs from
    // wherever the double engine stopped
    eng.run(false, opts.rule, opts.max_pivots);
    FinalizeResult<Rat> fin =
        exact_finalize<Rat>(P, eng.basis_var(), opts.max_exact_pivots);
    if (fin.outcome == FinalizeOutcome::pivot_limit)
      throw solver_error("exact cleanup pivot limit exceeded");
    if (fin.outcome == FinalizeOutcome::optimal)
      return assemble(lp, fin.basis_var, fin.xb, eng.pivots() + fin.pivots, warm_fallback);
    if (fin.outcome == FinalizeOutcome::unbounded) {
      VertexSolution<Rat> sol;
      sol.status = SolveStatus::unbounded;
      sol.pivots = eng.pivots() + fin.pivots;
      sol.warm_fallback = warm_fallback;
      return sol;
    }
    // fall through: the double basis was unusable, redo everything exactly
  }
  VertexSolution<Rat> sol =
      pure_exact_solve(lp, P, static_cast<const std::vector<Rat>*>(nullptr), opts, warm_fallback);
  sol.pivots += eng.pivots();
  return sol;
}

}  // namespace lpdetail

template <>
inline VertexSolution<double> solve_to_optimal_vertex(const LinearProgram<double>& lp,
                                                      const SolveOptions& opts) {
  lpdetail::Internal<double> P = lpdetail::internalize(lp);
  return lpdetail::solve_double(lp, P, nullptr, opts, false);
}

template <>
inline VertexSolution<Rat> solve_to_optimal_vertex(const LinearProgram<Rat>& lp,
                                                   const SolveOptions& opts) {
  return lpdetail::solve_rational(lp, nullptr, opts, false);
}

template <>
inline VertexSolution<double> solve_warm_started(const LinearProgram<double>& lp,
                                                 const WarmStart<double>& hint,
                                                 const SolveOptions& opts) {
  lpdetail::Internal<double> P = lpdetail::internalize(lp);
  if (!hint.basis.empty() || !hint.artificial_rows.empty()) {
    VertexSolution<double> sol;
    if (lpdetail::try_basis_hint(lp, P, hint, opts, sol)) return sol;
  }
  if (!lpdetail::exactly_feasible(lp, hint.values)) {
    VertexSolution<double> sol = lpdetail::solve_double(lp, P, nullptr, opts, true);
    return sol;
  }
  return lpdetail::solve_double(lp, P, &hint.values, opts, false);
}

template <>
inline VertexSolution<Rat> solve_warm_started(const LinearProgram<Rat>& lp,
                                              const WarmStart<Rat>& hint,
                                              const SolveOptions& opts) {
  if (!hint.basis.empty() || !hint.artificial_rows.empty()) {
    lpdetail::Internal<Rat> P = lpdetail::internalize(lp);
    VertexSolution<Rat> sol;
    if (lpdetail::try_basis_hint(lp, P, hint, opts, sol)) return sol;
  }
  if (!lpdetail::exactly_feasible(lp, hint.values))
    return lpdetail::solve_rational(lp, nullptr, opts, true);
  return lpdetail::solve_rational(lp, &hint.values, opts, false);
}

}  // namespace bary
