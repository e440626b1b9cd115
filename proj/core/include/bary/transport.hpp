#pragma once

#include <algorithm>
#include <cstddef>
#include <tuple>
#include <vector>

#include "bary/lp.hpp"
#include "bary/measure.hpp"
#include "bary/simplex.hpp"

namespace bary {

/// One flow entry: atom `source_atom` of the candidate measure sends `mass`
/// to atom `target_atom` of measure `measure`.
template <class T>
struct Flow {
  std::size_t measure;
  std::size_t source_atom;
  std::size_t target_atom;
  T mass;
};

/// A transport between a candidate measure and the input measures. Stored
/// entries are strictly positive and sorted by (measure, source, target).
template <class T>
class TransportPlan {
 public:
  TransportPlan() = default;
  TransportPlan(Measure<T> source, std::vector<Measure<T>> targets, std::vector<Flow<T>> flows)
      : source_(std::move(source)), targets_(std::move(targets)), flows_(std::move(flows)) {
    canonicalize();
  }

  const Measure<T>& source() const { return source_; }
  const std::vector<Measure<T>>& targets() const { return targets_; }
  const std::vector<Flow<T>>& flows() const { return flows_; }

  /// The lambda-weighted transport cost sum_i lambda_i sum |x_j - x_ik|^2 y_ijk.
  T cost(const Weights<T>& lambda) const {
    T total = T(0);
    for (const auto& f : flows_)
      total += lambda[f.measure] * f.mass *
               squared_distance(source_.atom(f.source_atom).point,
                                targets_[f.measure].atom(f.target_atom).point);
    return total;
  }

  /// Checks both marginal families: per (i, j) the flows out of source atom j
  /// sum to its mass, per (i, k) the flows into target atom k sum to its mass.
  bool marginals_valid() const {
    for (std::size_t i = 0; i < targets_.size(); ++i) {
      std::vector<T> out(source_.size(), T(0)), in(targets_[i].size(), T(0));
      for (const auto& f : flows_) {
        if (f.measure != i) continue;
        out[f.source_atom] += f.mass;
        in[f.target_atom] += f.mass;
      }
      for (std::size_t j = 0; j < source_.size(); ++j)
        if (!num<T>::eq(out[j], source_.atom(j).mass)) return false;
      for (std::size_t k = 0; k < targets_[i].size(); ++k)
        if (!num<T>::eq(in[k], targets_[i].atom(k).mass)) return false;
    }
    return true;
  }

 private:
  void canonicalize() {
    std::sort(flows_.begin(), flows_.end(), [](const Flow<T>& a, const Flow<T>& b) {
      return std::tie(a.measure, a.source_atom, a.target_atom) <
             std::tie(b.measure, b.source_atom, b.target_atom);
    });
    std::vector<Flow<T>> merged;
    for (auto& f : flows_) {
      if (!num<T>::is_positive(f.mass)) continue;
      if (!merged.empty() && merged.back().measure == f.measure &&
          merged.back().source_atom == f.source_atom &&
          merged.back().target_atom == f.target_atom)
        merged.back().mass += f.mass;
      else
        merged.push_back(std::move(f));
    }
    flows_ = std::move(merged);
  }

  Measure<T> source_;
  std::vector<Measure<T>> targets_;
  std::vector<Flow<T>> flows_;
};

/// True iff every source atom sends its full mass to exactly one target atom
/// in every measure.
template <class T>
bool is_non_mass_splitting(const TransportPlan<T>& plan) {
  std::size_t n = plan.targets().size();
  std::vector<std::vector<int>> hits(n, std::vector<int>(plan.source().size(), 0));
  for (const auto& f : plan.flows()) {
    if (!num<T>::eq(f.mass, plan.source().atom(f.source_atom).mass)) return false;
    if (++hits[f.measure][f.source_atom] > 1) return false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < plan.source().size(); ++j)
      if (hits[i][j] != 1) return false;
  return true;
}

namespace lpdetail {

/// The fixed-measure transport program for a single marginal: a classical
/// transportation problem with
/// source rows first, target rows after, variables y_jk in j-major order.
template <class T>
LinearProgram<T> transportation_lp(const Measure<T>& p0, const Measure<T>& pi) {
  LinearProgram<T> lp(p0.size() + pi.size());
  for (std::size_t j = 0; j < p0.size(); ++j)
    for (std::size_t k = 0; k < pi.size(); ++k) {
      std::size_t var =
          lp.add_variable(squared_distance(p0.atom(j).point, pi.atom(k).point));
      lp.add_coeff(j, var, 1);
      lp.add_coeff(p0.size() + k, var, 1);
    }
  for (std::size_t j = 0; j < p0.size(); ++j) lp.set_rhs(j, p0.atom(j).mass);
  for (std::size_t k = 0; k < pi.size(); ++k) lp.set_rhs(p0.size() + k, pi.atom(k).mass);
  return lp;
}

/// Feasible starting flow by the northwest-corner rule.
template <class T>
std::vector<T> northwest_corner(const Measure<T>& p0, const Measure<T>& pi) {
  std::vector<T> x(p0.size() * pi.size(), T(0));
  std::size_t j = 0, k = 0;
  T remaining_row = p0.atom(0).mass, remaining_col = pi.atom(0).mass;
  while (j < p0.size() && k < pi.size()) {
    T f = remaining_row < remaining_col ? remaining_row : remaining_col;
    x[j * pi.size() + k] += f;
    remaining_row -= f;
    remaining_col -= f;
    if (num<T>::is_zero(remaining_row) && j + 1 < p0.size()) {
      remaining_row = p0.atom(++j).mass;
    } else if (num<T>::is_zero(remaining_col) && k + 1 < pi.size()) {
      remaining_col = pi.atom(++k).mass;
    } else {
      break;
    }
  }
  return x;
}

}  // namespace lpdetail

template <class T>
struct TransportCostResult {
  T phi;
  TransportPlan<T> plan;
  /// Per-measure squared Wasserstein distances W_2(P0, P_i)^2 (unweighted).
  std::vector<T> w2;
  /// Per-measure vertex solutions, for callers that inspect bases.
  std::vector<VertexSolution<T>> solutions;
};

/// phi(P0) and an optimal transport. The program separates per measure into
/// independent transportation problems, each solved to an optimal vertex.
template <class T>
TransportCostResult<T> transport_cost(const Measure<T>& p0, const std::vector<Measure<T>>& measures,
                                      const Weights<T>& lambda, const SolveOptions& opts = {}) {
  if (measures.size() != lambda.size())
    throw data_error("transport_cost: weight count does not match measure count");
  TransportCostResult<T> out;
  out.phi = T(0);
  std::vector<Flow<T>> flows;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const Measure<T>& pi = measures[i];
    LinearProgram<T> lp = lpdetail::transportation_lp(p0, pi);
    WarmStart<T> start{lpdetail::northwest_corner(p0, pi), {}, {}};
    VertexSolution<T> sol = solve_warm_started(lp, start, opts);
    if (sol.status != SolveStatus::optimal)
      throw solver_error("transportation subproblem did not solve to optimality");
    for (std::size_t j = 0; j < p0.size(); ++j)
      for (std::size_t k = 0; k < pi.size(); ++k) {
        const T& mass = sol.values[j * pi.size() + k];
        if (num<T>::is_positive(mass)) flows.push_back({i, j, k, mass});
      }
    out.phi += lambda[i] * sol.objective_value;
    out.w2.push_back(sol.objective_value);
    out.solutions.push_back(std::move(sol));
  }
  out.plan = TransportPlan<T>(p0, measures, std::move(flows));
  return out;
}

}  // namespace bary
