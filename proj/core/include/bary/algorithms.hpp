#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "bary/measure.hpp"
#include "bary/transport.hpp"

namespace bary {

/// An approximate barycenter: the measure, an optimal transport realizing
/// phi, and the support set the optimization ran over.
template <class T>
struct ApproxResult {
  Measure<T> measure;
  TransportPlan<T> plan;
  T phi;
  std::vector<Point<T>> support_used;
};

namespace lpdetail {

/// The barycenter program over a candidate support set: variables z_j (one
/// per candidate, cost 0) followed by
/// y_ijk in (i, j, k) order with cost lambda_i |x_j - x_ik|^2. Rows are the
/// coupling rows (i, j) in i-major order, then the marginal rows (i, k).
template <class T>
LinearProgram<T> barycenter_lp(const std::vector<Point<T>>& s0,
                               const std::vector<Measure<T>>& measures,
                               const Weights<T>& lambda) {
  std::size_t n = measures.size(), ns = s0.size();
  std::size_t total_atoms = 0;
  for (const auto& m : measures) total_atoms += m.size();
  LinearProgram<T> lp(n * ns + total_atoms);

  for (std::size_t j = 0; j < ns; ++j) {
    std::size_t z = lp.add_variable(T(0));
    for (std::size_t i = 0; i < n; ++i) lp.add_coeff(i * ns + j, z, -1);
  }
  std::size_t marginal_base = n * ns;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Measure<T>& pi = measures[i];
    for (std::size_t j = 0; j < ns; ++j)
      for (std::size_t k = 0; k < pi.size(); ++k) {
        std::size_t y =
            lp.add_variable(lambda[i] * squared_distance(s0[j], pi.atom(k).point));
        lp.add_coeff(i * ns + j, y, 1);
        lp.add_coeff(marginal_base + offset + k, y, 1);
      }
    for (std::size_t k = 0; k < pi.size(); ++k)
      lp.set_rhs(marginal_base + offset + k, pi.atom(k).mass);
    offset += pi.size();
  }
  return lp;
}

/// Feasible start for the barycenter program: all mass on the single
/// cheapest candidate.
template <class T>
std::vector<T> single_point_start(const LinearProgram<T>& lp, const std::vector<Point<T>>& s0,
                                  const std::vector<Measure<T>>& measures,
                                  const Weights<T>& lambda) {
  std::size_t n = measures.size(), ns = s0.size();
  std::size_t best = 0;
  T best_cost = T(0);
  for (std::size_t j = 0; j < ns; ++j) {
    T cost = T(0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& a : measures[i].atoms())
        cost += lambda[i] * a.mass * squared_distance(s0[j], a.point);
    if (j == 0 || cost < best_cost) {
      best = j;
      best_cost = cost;
    }
  }
  std::vector<T> x(lp.num_vars(), T(0));
  x[best] = measures[0].total_mass();
  std::size_t var = ns;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ns; ++j)
      for (std::size_t k = 0; k < measures[i].size(); ++k, ++var)
        if (j == best) x[var] = measures[i].atom(k).mass;
  }
  return x;
}

}  // namespace lpdetail

/// Finds an optimal measure supported on S0 together with an optimal vertex
/// transport. Zero-mass
/// candidates are dropped from the reported measure.
template <class T>
ApproxResult<T> approx_barycenter(const std::vector<Point<T>>& s0,
                                  const std::vector<Measure<T>>& measures,
                                  const Weights<T>& lambda, const SolveOptions& opts = {},
                                  const WarmStart<T>* hint = nullptr) {
  if (s0.empty()) throw data_error("approx_barycenter: empty support set");
  if (measures.empty() || measures.size() != lambda.size())
    throw data_error("approx_barycenter: bad measures/weights");

  std::size_t n = measures.size(), ns = s0.size();
  LinearProgram<T> lp = lpdetail::barycenter_lp(s0, measures, lambda);
  VertexSolution<T> sol;
  if (hint) {
    sol = solve_warm_started(lp, *hint, opts);
  } else {
    WarmStart<T> start{lpdetail::single_point_start(lp, s0, measures, lambda), {}, {}};
    sol = solve_warm_started(lp, start, opts);
  }
  if (sol.status != SolveStatus::optimal)
    throw solver_error("barycenter program did not solve to optimality");

  std::vector<std::size_t> kept(ns, Measure<T>::npos);
  std::vector<Atom<T>> atoms;
  for (std::size_t j = 0; j < ns; ++j)
    if (num<T>::is_positive(sol.values[j])) {
      kept[j] = atoms.size();
      atoms.push_back({s0[j], sol.values[j]});
    }

  MeasureKind kind = num<T>::eq(measures[0].total_mass(), T(1)) ? MeasureKind::full
                                                                : MeasureKind::partial;
  Measure<T> measure(std::move(atoms), kind);

  std::vector<Flow<T>> flows;
  std::size_t var = ns;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < ns; ++j)
      for (std::size_t k = 0; k < measures[i].size(); ++k, ++var)
        if (num<T>::is_positive(sol.values[var])) {
          if (kept[j] == Measure<T>::npos)
            continue;  // roundoff shadow of a dropped candidate (float mode)
          flows.push_back({i, kept[j], k, sol.values[var]});
        }

  TransportPlan<T> plan(measure, measures, std::move(flows));
  return ApproxResult<T>{std::move(measure), std::move(plan), sol.objective_value, s0};
}

/// The exact barycenter: the same program over the full centroid set. Desk-scale
/// only; the centroid set enumeration is guarded by `cap`.
template <class T>
ApproxResult<T> exact_barycenter(const std::vector<Measure<T>>& measures,
                                 const Weights<T>& lambda, std::size_t cap = 1000000,
                                 const SolveOptions& opts = {}) {
  std::vector<Point<T>> s = centroid_set(measures, lambda, cap);
  return approx_barycenter(s, measures, lambda, opts);
}

// ---------------------------------------------------------------------------
// Recovery of a non-mass-splitting transport
// ---------------------------------------------------------------------------

template <class T>
struct CellPoint {
  Point<T> point;
  T mass;
  std::size_t target;  // atom index in the owning measure
};

/// Working state of the recovery: the image of one source atom s_l under the
/// transport, one partial point list per measure, each summing to `mass`.
template <class T>
struct PartitionCell {
  Point<T> source;
  T mass;
  std::vector<std::vector<CellPoint<T>>> parts;
};

/// Breaks the measure up into one cell per support point; cell l holds
/// the points of each P_i that receive mass from s_l, with the received mass.
template <class T>
std::vector<PartitionCell<T>> partition_by_source(const ApproxResult<T>& result,
                                                  const std::vector<Measure<T>>& measures) {
  std::size_t n = measures.size();
  std::vector<PartitionCell<T>> cells(result.measure.size());
  for (std::size_t l = 0; l < cells.size(); ++l) {
    cells[l].source = result.measure.atom(l).point;
    cells[l].mass = result.measure.atom(l).mass;
    cells[l].parts.resize(n);
  }
  for (const auto& f : result.plan.flows())
    cells[f.source_atom].parts[f.measure].push_back(
        {measures[f.measure].atom(f.target_atom).point, f.mass, f.target_atom});
  return cells;
}

namespace algdetail {

template <class T>
T dot(const std::vector<T>& dir, const Point<T>& x) {
  T acc = T(0);
  for (std::size_t t = 0; t < dir.size(); ++t) acc += dir[t] * x[t];
  return acc;
}

// argmax of (s_j - s_l)' x over a part; ties resolved toward the
// lexicographically maximal point.
template <class T>
std::size_t argmax_direction(const std::vector<CellPoint<T>>& part, const std::vector<T>& dir) {
  std::size_t best = 0;
  T best_val = dot(dir, part[0].point);
  for (std::size_t q = 1; q < part.size(); ++q) {
    T val = dot(dir, part[q].point);
    if (num<T>::eq(val, best_val)) {
      if (part[best].point.lex_less(part[q].point)) best = q;
    } else if (val > best_val) {
      best = q;
      best_val = std::move(val);
    }
  }
  return best;
}

template <class T>
std::size_t argmax_lex(const std::vector<CellPoint<T>>& part) {
  std::size_t best = 0;
  for (std::size_t q = 1; q < part.size(); ++q)
    if (part[best].point.lex_less(part[q].point)) best = q;
  return best;
}

// The shift-eligibility test |c-s_j|^2 = |c-s_l|^2: exact for rationals,
// relative tolerance on the left operand in float mode.
template <class T>
bool shift_equal(const T& lhs, const T& rhs) {
  if constexpr (std::is_same_v<T, double>) {
    double scale = std::max(1.0, lhs);
    return std::fabs(lhs - rhs) <= float_tolerance() * scale;
  } else {
    return lhs == rhs;
  }
}

template <class T>
Point<T> centroid_of_picks(const std::vector<PartitionCell<T>>& cells, std::size_t l,
                           const std::vector<std::size_t>& picks, const Weights<T>& lambda) {
  std::vector<Point<T>> pts;
  pts.reserve(picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i)
    pts.push_back(cells[l].parts[i][picks[i]].point);
  return weighted_centroid(pts, lambda.values());
}

}  // namespace algdetail

/// Makes the source mass vector (d_1, ..., d_r) greedily lexicographically
/// maximal. Mass
/// moves from higher-indexed sources to lower-indexed ones whenever the
/// extreme centroid of the donor cell is equidistant to both sources; the
/// transport cost is unchanged by every such shift.
template <class T>
std::vector<PartitionCell<T>> greedy_lex_maximize(std::vector<PartitionCell<T>> cells,
                                                  const Weights<T>& lambda) {
  std::size_t n = lambda.size(), r = cells.size();
  for (std::size_t l = r; l-- > 0;) {
    for (std::size_t j = 0; j < l && num<T>::is_positive(cells[l].mass); ++j) {
      while (num<T>::is_positive(cells[l].mass)) {
        std::vector<T> dir;
        dir.reserve(cells[l].source.dim());
        for (std::size_t t = 0; t < cells[l].source.dim(); ++t)
          dir.push_back(cells[j].source[t] - cells[l].source[t]);

        std::vector<std::size_t> picks(n);
        bool empty_part = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (cells[l].parts[i].empty()) {
            empty_part = true;
            break;
          }
          picks[i] = algdetail::argmax_direction(cells[l].parts[i], dir);
        }
        if (empty_part) break;

        Point<T> c = algdetail::centroid_of_picks(cells, l, picks, lambda);
        if (!algdetail::shift_equal(squared_distance(c, cells[j].source),
                                    squared_distance(c, cells[l].source)))
          break;

        T dmin = cells[l].parts[0][picks[0]].mass;
        for (std::size_t i = 1; i < n; ++i)
          if (cells[l].parts[i][picks[i]].mass < dmin) dmin = cells[l].parts[i][picks[i]].mass;

        cells[l].mass -= dmin;
        cells[j].mass += dmin;
        for (std::size_t i = 0; i < n; ++i) {
          CellPoint<T>& moved = cells[l].parts[i][picks[i]];
          std::size_t target = moved.target;
          Point<T> point = moved.point;
          moved.mass -= dmin;
          if (!num<T>::is_positive(moved.mass))
            cells[l].parts[i].erase(cells[l].parts[i].begin() +
                                    static_cast<std::ptrdiff_t>(picks[i]));
          auto& dest = cells[j].parts[i];
          auto it = std::find_if(dest.begin(), dest.end(),
                                 [&](const CellPoint<T>& p) { return p.target == target; });
          if (it != dest.end()) {
            it->mass += dmin;
          } else {
            dest.push_back({std::move(point), dmin, target});
            std::sort(dest.begin(), dest.end(), [](const CellPoint<T>& a, const CellPoint<T>& b) {
              return a.target < b.target;
            });
          }
        }
      }
    }
  }
  return cells;
}

/// One spread-out support point: a weighted centroid, its mass, and the atom
/// of each measure it transports to.
template <class T>
struct SpreadAtom {
  Point<T> point;
  T mass;
  std::vector<std::size_t> targets;
};

template <class T>
struct CellSpread {
  std::vector<SpreadAtom<T>> atoms;  // in construction order
};

struct RecoverOptions {
  bool mini_exact = true;
  std::size_t centroid_cap = 1000000;
  SolveOptions solver;
};

namespace algdetail {

template <class T>
CellSpread<T> greedy_spread(PartitionCell<T> cell, const Weights<T>& lambda) {
  std::size_t n = lambda.size();
  CellSpread<T> spread;
  while (num<T>::is_positive(cell.mass)) {
    std::vector<std::size_t> picks(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (cell.parts[i].empty()) return spread;  // float-mode residue guard
      picks[i] = argmax_lex(cell.parts[i]);
    }
    std::vector<Point<T>> pts;
    std::vector<std::size_t> targets(n);
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(cell.parts[i][picks[i]].point);
      targets[i] = cell.parts[i][picks[i]].target;
    }
    Point<T> c = weighted_centroid(pts, lambda.values());
    T dmin = cell.parts[0][picks[0]].mass;
    for (std::size_t i = 1; i < n; ++i)
      if (cell.parts[i][picks[i]].mass < dmin) dmin = cell.parts[i][picks[i]].mass;
    spread.atoms.push_back({std::move(c), dmin, std::move(targets)});
    cell.mass -= dmin;
    for (std::size_t i = 0; i < n; ++i) {
      cell.parts[i][picks[i]].mass -= dmin;
      if (!num<T>::is_positive(cell.parts[i][picks[i]].mass))
        cell.parts[i].erase(cell.parts[i].begin() + static_cast<std::ptrdiff_t>(picks[i]));
    }
  }
  return spread;
}

// Exact barycenter of one cell (the small-cell tweak). Falls back to the
// greedy spread when the cell's centroid set would blow the cap or when the
// solution fails the strict-improvement/single-target checks in float mode.
template <class T>
bool mini_exact_spread(const PartitionCell<T>& cell, const Weights<T>& lambda,
                       const RecoverOptions& opts, CellSpread<T>& out) {
  std::size_t n = lambda.size();
  std::vector<Measure<T>> cell_measures;
  std::vector<std::vector<std::size_t>> target_of;  // sorted-atom index -> original target
  cell_measures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Atom<T>> atoms;
    atoms.reserve(cell.parts[i].size());
    for (const auto& p : cell.parts[i]) atoms.push_back({p.point, p.mass});
    Measure<T> m(std::move(atoms), MeasureKind::partial);
    std::vector<std::size_t> map(m.size());
    for (const auto& p : cell.parts[i]) map[m.find(p.point)] = p.target;
    cell_measures.push_back(std::move(m));
    target_of.push_back(std::move(map));
  }

  std::vector<Point<T>> s_cell;
  try {
    s_cell = centroid_set(cell_measures, lambda, opts.centroid_cap);
  } catch (const cap_error&) {
    return false;
  }
  ApproxResult<T> res = approx_barycenter(s_cell, cell_measures, lambda, opts.solver);

  // Transporting straight from the source must be strictly beaten, otherwise
  // the greedy spread is the right move (this only means the cell was already
  // a single centroid, which the caller short-circuits).
  T from_source = T(0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& p : cell.parts[i])
      from_source += lambda[i] * p.mass * squared_distance(cell.source, p.point);
  if (!(res.phi < from_source)) return false;

  std::vector<std::vector<std::size_t>> unique_target(
      res.measure.size(), std::vector<std::size_t>(n, Measure<T>::npos));
  for (const auto& f : res.plan.flows()) {
    if (unique_target[f.source_atom][f.measure] != Measure<T>::npos) return false;
    unique_target[f.source_atom][f.measure] = target_of[f.measure][f.target_atom];
  }
  for (std::size_t a = 0; a < res.measure.size(); ++a) {
    std::vector<std::size_t> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (unique_target[a][i] == Measure<T>::npos) return false;
      targets[i] = unique_target[a][i];
    }
    out.atoms.push_back({res.measure.atom(a).point, res.measure.atom(a).mass, std::move(targets)});
  }
  return true;
}

}  // namespace algdetail

/// Spreads each source point out to a set of weighted centroids, each
/// transporting to a single support point per measure. Cells whose total
/// point count is below 2N are replaced by an exact cell barycenter when
/// `mini_exact` is on.
template <class T>
std::vector<CellSpread<T>> spread_to_centroids(const std::vector<PartitionCell<T>>& cells,
                                               const Weights<T>& lambda,
                                               const RecoverOptions& opts = {}) {
  std::size_t n = lambda.size();
  std::vector<CellSpread<T>> spreads;
  spreads.reserve(cells.size());
  for (const auto& cell : cells) {
    CellSpread<T> spread;
    if (!num<T>::is_positive(cell.mass)) {
      spreads.push_back(std::move(spread));
      continue;
    }
    std::size_t total_points = 0;
    bool all_singleton = true;
    for (const auto& part : cell.parts) {
      total_points += part.size();
      all_singleton = all_singleton && part.size() == 1;
    }
    if (all_singleton) {
      std::vector<Point<T>> pts;
      std::vector<std::size_t> targets(n);
      pts.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(cell.parts[i][0].point);
        targets[i] = cell.parts[i][0].target;
      }
      spread.atoms.push_back(
          {weighted_centroid(pts, lambda.values()), cell.mass, std::move(targets)});
      spreads.push_back(std::move(spread));
      continue;
    }
    if (opts.mini_exact && total_points < 2 * n &&
        algdetail::mini_exact_spread(cell, lambda, opts, spread)) {
      spreads.push_back(std::move(spread));
      continue;
    }
    spreads.push_back(algdetail::greedy_spread(cell, lambda));
  }
  return spreads;
}

/// The partial measures view of the spread output (one per nonempty cell).
template <class T>
std::vector<Measure<T>> spread_partial_measures(const std::vector<CellSpread<T>>& spreads) {
  std::vector<Measure<T>> out;
  for (const auto& s : spreads) {
    if (s.atoms.empty()) continue;
    std::vector<Atom<T>> atoms;
    atoms.reserve(s.atoms.size());
    for (const auto& a : s.atoms) atoms.push_back({a.point, a.mass});
    out.emplace_back(std::move(atoms), MeasureKind::partial);
  }
  return out;
}

template <class T>
struct RecoverResult {
  Measure<T> measure;
  TransportPlan<T> plan;
};

/// Full recovery: breaks the input up by source point, makes the mass vector
/// greedily lexicographically maximal, spreads every cell into weighted
/// centroids and combines the partial measures. The returned transport is
/// non-mass splitting by construction and its cost never exceeds the input's.
template <class T>
RecoverResult<T> recover_non_mass_split(const ApproxResult<T>& result,
                                        const std::vector<Measure<T>>& measures,
                                        const Weights<T>& lambda,
                                        const RecoverOptions& opts = {}) {
  std::vector<PartitionCell<T>> cells = partition_by_source(result, measures);
  cells = greedy_lex_maximize(std::move(cells), lambda);
  std::vector<CellSpread<T>> spreads = spread_to_centroids(cells, lambda, opts);

  std::vector<Atom<T>> atoms;
  for (const auto& s : spreads)
    for (const auto& a : s.atoms) atoms.push_back({a.point, a.mass});
  Measure<T> combined(std::move(atoms), result.measure.kind());

  std::vector<Flow<T>> flows;
  for (const auto& s : spreads)
    for (const auto& a : s.atoms) {
      std::size_t j = combined.find(a.point);
      for (std::size_t i = 0; i < measures.size(); ++i)
        flows.push_back({i, j, a.targets[i], a.mass});
    }
  return RecoverResult<T>{combined, TransportPlan<T>(combined, measures, std::move(flows))};
}

// ---------------------------------------------------------------------------
// Iterative local improvement
// ---------------------------------------------------------------------------

template <class T>
struct IterationStat {
  T phi_after_optimize;
  T phi_after_recovery;
  std::size_t support_size;
};

template <class T>
struct ImprovementTrace {
  std::vector<IterationStat<T>> iterations;
  ApproxResult<T> final;
  T certified_ratio_bound;
  bool hit_iteration_cap = false;
};

struct IterateOptions {
  bool mini_exact = true;
  bool warm_start = true;
  std::size_t max_iterations = 100;
  std::size_t centroid_cap = 1000000;
  SolveOptions solver;
};

/// The ratio bound certified by the observed improvement: with
/// alpha = phi_1 / phi_final >= 1 the final measure is a (2/alpha)-approximation.
template <class T>
T certified_bound(const ImprovementTrace<T>& trace) {
  if (trace.iterations.empty()) throw data_error("certified_bound: empty trace");
  const T& first = trace.iterations.front().phi_after_optimize;
  if (num<T>::is_zero(first)) return T(1);
  return T(2) * trace.final.phi / first;
}

/// Alternates the support-restricted optimum with the non-mass
/// split recovery until the recovery returns its input unchanged. Re-solves
/// are warm-started from the constructed transport.
template <class T>
ImprovementTrace<T> iterate_local_improvement(const std::vector<Measure<T>>& measures,
                                              const Weights<T>& lambda,
                                              const IterateOptions& opts = {}) {
  if (opts.max_iterations == 0) throw data_error("iteration cap must be positive");
  RecoverOptions rec_opts{opts.mini_exact, opts.centroid_cap, opts.solver};
  ImprovementTrace<T> trace;
  std::vector<Point<T>> s0 = union_support(measures);
  WarmStart<T> hint;
  bool have_hint = false;
  bool have_best = false;
  ApproxResult<T> best;

  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    ApproxResult<T> res =
        approx_barycenter(s0, measures, lambda, opts.solver, have_hint ? &hint : nullptr);
    RecoverResult<T> rec = recover_non_mass_split(res, measures, lambda, rec_opts);
    T phi2 = rec.plan.cost(lambda);
    trace.iterations.push_back({res.phi, phi2, rec.measure.size()});

    ApproxResult<T> improved{rec.measure, rec.plan, phi2, res.support_used};
    if (!have_best || phi2 < best.phi) {
      best = improved;
      have_best = true;
    }
    if (rec.measure.equals(res.measure)) {
      trace.final = std::move(improved);
      trace.certified_ratio_bound = certified_bound(trace);
      return trace;
    }

    s0 = rec.measure.support();
    if (opts.warm_start) {
      std::size_t ns = s0.size(), total = 0;
      for (const auto& m : measures) total += m.size();
      hint.values.assign(ns + ns * total, T(0));
      for (std::size_t j = 0; j < ns; ++j) hint.values[j] = rec.measure.atom(j).mass;
      std::size_t var = ns;
      for (std::size_t i = 0; i < measures.size(); ++i) {
        std::size_t pi_size = measures[i].size();
        for (const auto& f : rec.plan.flows())
          if (f.measure == i)
            hint.values[var + f.source_atom * pi_size + f.target_atom] += f.mass;
        var += ns * pi_size;
      }
      have_hint = true;
    }
  }
  trace.hit_iteration_cap = true;
  trace.final = std::move(best);
  trace.certified_ratio_bound = certified_bound(trace);
  return trace;
}

}  // namespace bary
