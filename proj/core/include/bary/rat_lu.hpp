#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "bary/numeric.hpp"

namespace bary {

/// Exact sparse LU factorization of a basis matrix, specialized for the
/// near-network bases produced by transportation-style programs. Pivots are
/// chosen by peeling singleton rows and columns; whatever core remains is
/// eliminated densely. All arithmetic is exact.
template <class T>
class BasisLU {
 public:
  using SparseCol = std::vector<std::pair<std::size_t, T>>;

  /// Factors the m x m matrix whose columns are `cols`. Returns false if the
  /// matrix is singular.
  bool factor(std::size_t m, const std::vector<SparseCol>& cols) {
    m_ = m;
    prow_.clear();
    pslot_.clear();
    pivot_.clear();
    lcol_.clear();
    urow_.clear();
    if (cols.size() != m) return false;

    rows_.assign(m, {});
    for (std::size_t slot = 0; slot < m; ++slot)
      for (const auto& [r, v] : cols[slot]) {
        if (r >= m) return false;
        if (num<T>::is_zero(v)) continue;
        rows_[r].emplace_back(slot, v);
      }
    for (auto& row : rows_) std::sort(row.begin(), row.end());

    col_rows_.assign(m, {});
    col_count_.assign(m, 0);
    for (std::size_t r = 0; r < m; ++r)
      for (const auto& [slot, v] : rows_[r]) {
        col_rows_[slot].push_back(r);
        ++col_count_[slot];
      }

    row_active_.assign(m, true);
    slot_active_.assign(m, true);

    std::vector<std::size_t> row_q, col_q;
    for (std::size_t r = 0; r < m; ++r)
      if (rows_[r].size() == 1) row_q.push_back(r);
    for (std::size_t s = 0; s < m; ++s)
      if (col_count_[s] == 1) col_q.push_back(s);

    std::size_t steps = 0;
    while (steps < m) {
      std::size_t pr = npos, ps = npos;
      while (!row_q.empty()) {
        std::size_t r = row_q.back();
        row_q.pop_back();
        if (row_active_[r] && rows_[r].size() == 1) {
          pr = r;
          ps = rows_[r][0].first;
          break;
        }
      }
      if (pr == npos) {
        while (!col_q.empty()) {
          std::size_t s = col_q.back();
          col_q.pop_back();
          if (!slot_active_[s] || col_count_[s] != 1) continue;
          for (std::size_t r : col_rows_[s])
            if (row_active_[r] && row_has(r, s)) {
              pr = r;
              ps = s;
              break;
            }
          if (pr != npos) break;
        }
      }
      if (pr == npos) break;  // no singleton left, switch to the dense core
      eliminate(pr, ps, row_q, col_q);
      ++steps;
    }

    if (steps < m && !dense_core(steps)) return false;

    row_step_.assign(m, 0);
    slot_step_.assign(m, 0);
    for (std::size_t s = 0; s < m; ++s) {
      row_step_[prow_[s]] = s;
      slot_step_[pslot_[s]] = s;
    }
    // U rows keyed by slot -> keyed by elimination step, plus column lists.
    ucol_.assign(m, {});
    for (std::size_t s = 0; s < m; ++s) {
      for (auto& [slot, v] : urow_[s]) slot = slot_step_[slot];
      std::sort(urow_[s].begin(), urow_[s].end());
      for (const auto& [t, v] : urow_[s]) ucol_[t].emplace_back(s, v);
    }
    rows_.clear();
    col_rows_.clear();
    return true;
  }

  /// Solves B x = b; the result is indexed by basis slot.
  std::vector<T> solve(const std::vector<T>& b) const {
    std::vector<T> w = b;
    std::vector<T> xhat(m_, T(0));
    for (std::size_t s = 0; s < m_; ++s) {
      const T& ws = w[prow_[s]];
      if (!num<T>::is_zero(ws))
        for (const auto& [r, mult] : lcol_[s]) w[r] -= mult * ws;
    }
    for (std::size_t si = m_; si-- > 0;) {
      T acc = w[prow_[si]];
      for (const auto& [t, v] : urow_[si]) acc -= v * xhat[t];
      xhat[si] = acc / pivot_[si];
    }
    std::vector<T> x(m_, T(0));
    for (std::size_t s = 0; s < m_; ++s) x[pslot_[s]] = std::move(xhat[s]);
    return x;
  }

  /// Solves B' y = c, with c indexed by basis slot; the result is indexed by
  /// row.
  std::vector<T> solve_transposed(const std::vector<T>& c) const {
    std::vector<T> z(m_, T(0));
    for (std::size_t t = 0; t < m_; ++t) {
      T acc = c[pslot_[t]];
      for (const auto& [s, v] : ucol_[t]) acc -= v * z[s];
      z[t] = acc / pivot_[t];
    }
    for (std::size_t s = m_; s-- > 0;) {
      T acc = std::move(z[s]);
      for (const auto& [r, mult] : lcol_[s]) acc -= mult * z[row_step_[r]];
      z[s] = std::move(acc);
    }
    std::vector<T> y(m_, T(0));
    for (std::size_t s = 0; s < m_; ++s) y[prow_[s]] = std::move(z[s]);
    return y;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool row_has(std::size_t r, std::size_t slot) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), slot,
                               [](const auto& e, std::size_t s) { return e.first < s; });
    return it != row.end() && it->first == slot;
  }

  const T* row_value(std::size_t r, std::size_t slot) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), slot,
                               [](const auto& e, std::size_t s) { return e.first < s; });
    if (it == row.end() || it->first != slot) return nullptr;
    return &it->second;
  }

  void eliminate(std::size_t pr, std::size_t ps, std::vector<std::size_t>& row_q,
                 std::vector<std::size_t>& col_q) {
    const T* pv = row_value(pr, ps);
    T v = *pv;
    std::size_t step = prow_.size();
    prow_.push_back(pr);
    pslot_.push_back(ps);
    pivot_.push_back(v);
    lcol_.emplace_back();
    auto& urow = urow_.emplace_back();
    for (const auto& [slot, val] : rows_[pr])
      if (slot != ps) urow.emplace_back(slot, val);

    std::vector<std::size_t> targets;
    for (std::size_t r : col_rows_[ps])
      if (r != pr && row_active_[r] && row_has(r, ps)) targets.push_back(r);

    for (std::size_t r : targets) {
      T mult = *row_value(r, ps) / v;
      lcol_[step].emplace_back(r, mult);
      merge_row(r, pr, mult, ps, row_q, col_q);
    }

    row_active_[pr] = false;
    slot_active_[ps] = false;
    for (const auto& [slot, val] : rows_[pr])
      if (slot != ps && --col_count_[slot] == 1) col_q.push_back(slot);
    rows_[pr].shrink_to_fit();
  }

  // row r -= mult * row pr; the entry in column ps cancels exactly.
  void merge_row(std::size_t r, std::size_t pr, const T& mult, std::size_t ps,
                 std::vector<std::size_t>& row_q, std::vector<std::size_t>& col_q) {
    std::vector<std::pair<std::size_t, T>> out;
    out.reserve(rows_[r].size() + rows_[pr].size());
    auto a = rows_[r].begin(), ae = rows_[r].end();
    auto b = rows_[pr].begin(), be = rows_[pr].end();
    while (a != ae || b != be) {
      if (b == be || (a != ae && a->first < b->first)) {
        out.push_back(*a++);
      } else if (a == ae || b->first < a->first) {
        T nv = -mult * b->second;
        if (!num<T>::is_zero(nv)) {
          col_rows_[b->first].push_back(r);
          ++col_count_[b->first];
          out.emplace_back(b->first, std::move(nv));
        }
        ++b;
      } else {
        T nv = a->second - mult * b->second;
        if (a->first == ps || num<T>::is_zero(nv)) {
          if (--col_count_[a->first] == 1) col_q.push_back(a->first);
        } else {
          out.emplace_back(a->first, std::move(nv));
        }
        ++a;
        ++b;
      }
    }
    rows_[r] = std::move(out);
    if (rows_[r].size() == 1) row_q.push_back(r);
  }

  bool dense_core(std::size_t steps_done) {
    std::vector<std::size_t> rs, ss;
    for (std::size_t r = 0; r < m_; ++r)
      if (row_active_[r]) rs.push_back(r);
    for (std::size_t s = 0; s < m_; ++s)
      if (slot_active_[s]) ss.push_back(s);
    if (rs.size() != ss.size()) return false;
    std::size_t k = rs.size();
    if (steps_done + k != m_) return false;

    std::vector<std::vector<T>> dense(k, std::vector<T>(k, T(0)));
    for (std::size_t ri = 0; ri < k; ++ri)
      for (const auto& [slot, v] : rows_[rs[ri]]) {
        auto it = std::lower_bound(ss.begin(), ss.end(), slot);
        dense[ri][static_cast<std::size_t>(it - ss.begin())] = v;
      }

    std::vector<bool> used(k, false);
    for (std::size_t ci = 0; ci < k; ++ci) {
      std::size_t pr = npos;
      for (std::size_t ri = 0; ri < k; ++ri)
        if (!used[ri] && !num<T>::is_zero(dense[ri][ci])) {
          pr = ri;
          break;
        }
      if (pr == npos) return false;
      used[pr] = true;
      std::size_t step = prow_.size();
      prow_.push_back(rs[pr]);
      pslot_.push_back(ss[ci]);
      pivot_.push_back(dense[pr][ci]);
      lcol_.emplace_back();
      auto& urow = urow_.emplace_back();
      for (std::size_t cj = ci + 1; cj < k; ++cj)
        if (!num<T>::is_zero(dense[pr][cj])) urow.emplace_back(ss[cj], dense[pr][cj]);
      for (std::size_t ri = 0; ri < k; ++ri) {
        if (used[ri] || num<T>::is_zero(dense[ri][ci])) continue;
        T mult = dense[ri][ci] / dense[pr][ci];
        lcol_[step].emplace_back(rs[ri], mult);
        dense[ri][ci] = T(0);
        for (std::size_t cj = ci + 1; cj < k; ++cj)
          if (!num<T>::is_zero(dense[pr][cj])) dense[ri][cj] -= mult * dense[pr][cj];
      }
    }
    return true;
  }

  std::size_t m_ = 0;
  std::vector<std::size_t> prow_, pslot_, row_step_, slot_step_;
  std::vector<T> pivot_;
  std::vector<std::vector<std::pair<std::size_t, T>>> lcol_;
  std::vector<std::vector<std::pair<std::size_t, T>>> urow_, ucol_;

  // factorization workspace
  std::vector<std::vector<std::pair<std::size_t, T>>> rows_;
  std::vector<std::vector<std::size_t>> col_rows_;
  std::vector<std::size_t> col_count_;
  std::vector<bool> row_active_, slot_active_;
};

}  // namespace bary
