#pragma once

#include <map>
#include <utility>
#include <vector>

#include "capri/core.hpp"
#include "capri/simplex.hpp"

namespace capri {

/// (customer, set) index of an assignment-LP column.
struct ColumnKey {
  int customer;
  ItemSet set;

  friend bool operator<(const ColumnKey& a, const ColumnKey& b) {
    if (a.customer != b.customer) return a.customer < b.customer;
    return a.set < b.set;
  }
  friend bool operator==(const ColumnKey& a, const ColumnKey& b) {
    return a.customer == b.customer && a.set == b.set;
  }
};

/// Sparse fractional assignment x_{j,S} together with the capacity vector it
/// was solved under. Row sums stay <= 1 and per-item coverage stays <= k_e.
template <class T>
struct FractionalAssignment {
  std::map<ColumnKey, T> weight;
  std::vector<long> capacities;

  T coverage(int item) const {
    T c(0);
    for (const auto& [key, w] : weight)
      if (key.set.contains(item)) c += w;
    return c;
  }

  T row_total(int customer) const {
    T t(0);
    for (const auto& [key, w] : weight)
      if (key.customer == customer) t += w;
    return t;
  }

  bool integral() const {
    for (const auto& [key, w] : weight)
      if (w != T(0) && w != T(1)) return false;
    return true;
  }

  Allocation to_allocation(int n) const {
    Allocation a(n);
    for (const auto& [key, w] : weight)
      if (w == T(1)) a.sets[key.customer] = key.set;
    return a;
  }
};

/// Item duals y_e >= 0 and customer duals z_j >= 0 for a capacity vector k.
template <class T>
struct DualSolution {
  std::vector<T> item_duals;      // y
  std::vector<T> customer_duals;  // z

  T objective(const std::vector<long>& k) const {
    T obj(0);
    for (size_t e = 0; e < item_duals.size(); ++e)
      obj += NumericTraits<T>::from_long(k[e]) * item_duals[e];
    for (const auto& z : customer_duals) obj += z;
    return obj;
  }

  T price(ItemSet s) const {
    T p(0);
    for (int e : s.items()) p += item_duals[e];
    return p;
  }
};

namespace detail {

/// Restricted assignment LP over an explicit column list: maximize
/// sum(values . x) subject to one-set-per-customer and capacity rows.
template <class T>
struct MasterResult {
  std::vector<T> x;  // per column
  std::vector<T> y;  // per item
  std::vector<T> z;  // per customer
  T opt;
};

template <class T>
MasterResult<T> solve_assignment_master(int n, const std::vector<long>& k,
                                        const std::vector<ColumnKey>& columns,
                                        const std::vector<T>& values) {
  const int m = int(k.size());
  LinearProgram<T> lp;
  for (const auto& v : values) lp.add_variable(v);
  // Row layout: customers first, then items.
  for (int j = 0; j < n; ++j) lp.add_row(RowSense::LE, T(1));
  for (int e = 0; e < m; ++e) lp.add_row(RowSense::LE, NumericTraits<T>::from_long(k[e]));
  for (size_t c = 0; c < columns.size(); ++c) {
    lp.add_coeff(columns[c].customer, int(c), T(1));
    for (int e : columns[c].set.items()) lp.add_coeff(n + e, int(c), T(1));
  }
  lp.solve_or_throw(LpDirection::Maximize);
  MasterResult<T> r;
  r.x = lp.primal();
  r.z.assign(lp.duals().begin(), lp.duals().begin() + n);
  r.y.assign(lp.duals().begin() + n, lp.duals().end());
  r.opt = lp.objective_value();
  return r;
}

}  // namespace detail

template <class T>
struct SwmLpResult {
  FractionalAssignment<T> assignment;
  DualSolution<T> dual;
  T opt;
  std::vector<ColumnKey> generated;  // every nonempty column the solve priced in
};

/// Solves the assignment LP for capacities k by column generation: the
/// restricted master starts from the empty column per customer and the
/// demand oracle prices new columns in until none has positive reduced cost.
/// The returned pair is certified: primal and dual objectives agree, and for
/// every customer the demand oracle's best utility is at most z_j.
template <class T>
SwmLpResult<T> solve_swm_lp(const Instance<T>& inst, const std::vector<long>& k) {
  const int n = inst.n();
  const T tol = NumericTraits<T>::tolerance();

  std::vector<ColumnKey> columns;
  std::vector<T> values;
  std::map<ColumnKey, bool> present;
  for (int j = 0; j < n; ++j) {
    columns.push_back({j, ItemSet()});
    values.push_back(T(0));
  }

  detail::MasterResult<T> master;
  for (;;) {
    master = detail::solve_assignment_master<T>(n, k, columns, values);
    bool added = false;
    for (int j = 0; j < n; ++j) {
      ItemSet s = inst.customers[j].demand(master.y);
      if (s.empty()) continue;
      T util = inst.customers[j].value(s) - [&] {
        T p(0);
        for (int e : s.items()) p += master.y[e];
        return p;
      }();
      if (util > master.z[j] + tol && !present[{j, s}]) {
        present[{j, s}] = true;
        columns.push_back({j, s});
        values.push_back(inst.customers[j].value(s));
        added = true;
      }
    }
    if (!added) break;
  }

  SwmLpResult<T> out;
  out.opt = master.opt;
  out.dual.item_duals = master.y;
  out.dual.customer_duals = master.z;
  out.assignment.capacities = k;
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].set.empty()) continue;
    out.generated.push_back(columns[c]);
    if (master.x[c] != T(0)) out.assignment.weight[columns[c]] = master.x[c];
  }

  // Certification: strong duality and the separation condition.
  T dual_obj = out.dual.objective(k);
  T gap = dual_obj - master.opt;
  if (gap > tol || gap < -tol) throw NumericFailure("duality gap beyond tolerance");
  for (int j = 0; j < n; ++j) {
    ItemSet s = inst.customers[j].demand(master.y);
    T util = inst.customers[j].value(s) - out.dual.price(s);
    if (util > master.z[j] + tol) throw NumericFailure("separation failed after termination");
  }
  return out;
}

template <class T>
struct LexiDualResult {
  DualSolution<T> dual;
  T opt;  // optimal LP value for capacities k
};

/// Optimal dual that additionally maximizes k.y among all optimal duals.
/// Phase two pins the dual objective to OPT(k) with an equality row and
/// maximizes k.y, regenerating violated valuation constraints via the demand
/// oracle until the solution is feasible for the whole column universe.
template <class T>
LexiDualResult<T> solve_dual_lexi(const Instance<T>& inst, const std::vector<long>& k) {
  const int n = inst.n();
  const int m = inst.m;
  const T tol = NumericTraits<T>::tolerance();

  SwmLpResult<T> base = solve_swm_lp(inst, k);
  std::vector<ColumnKey> constraints = base.generated;
  std::map<ColumnKey, bool> present;
  for (const auto& c : constraints) present[c] = true;

  for (;;) {
    LinearProgram<T> lp;
    // Variables: y_0..y_{m-1}, z_0..z_{n-1}.
    for (int e = 0; e < m; ++e) lp.add_variable(NumericTraits<T>::from_long(k[e]));
    for (int j = 0; j < n; ++j) lp.add_variable(T(0));
    for (const auto& c : constraints) {
      int row = lp.add_row(RowSense::GE, inst.customers[c.customer].value(c.set));
      for (int e : c.set.items()) lp.add_coeff(row, e, T(1));
      lp.add_coeff(row, m + c.customer, T(1));
    }
    int opt_row = lp.add_row(RowSense::EQ, base.opt);
    for (int e = 0; e < m; ++e) lp.add_coeff(opt_row, e, NumericTraits<T>::from_long(k[e]));
    for (int j = 0; j < n; ++j) lp.add_coeff(opt_row, m + j, T(1));
    lp.solve_or_throw(LpDirection::Maximize);

    std::vector<T> y(lp.primal().begin(), lp.primal().begin() + m);
    std::vector<T> z(lp.primal().begin() + m, lp.primal().end());
    bool added = false;
    for (int j = 0; j < n; ++j) {
      ItemSet s = inst.customers[j].demand(y);
      if (s.empty()) continue;
      T util = inst.customers[j].value(s);
      for (int e : s.items()) util -= y[e];
      if (util > z[j] + tol && !present[{j, s}]) {
        present[{j, s}] = true;
        constraints.push_back({j, s});
        added = true;
      }
    }
    if (!added) return {DualSolution<T>{std::move(y), std::move(z)}, base.opt};
  }
}

/// Assignment LP over a fixed, fully materialized column list with arbitrary
/// objective weights (used by decompositions and by tests that cross-check
/// the column-generation path).
template <class T>
struct WeightedLpResult {
  std::map<ColumnKey, T> x;
  std::vector<T> y, z;
  T opt;
};

template <class T>
WeightedLpResult<T> solve_weighted_lp(int n, const std::vector<long>& k,
                                      const std::vector<ColumnKey>& columns,
                                      const std::vector<T>& values) {
  auto master = detail::solve_assignment_master<T>(n, k, columns, values);
  WeightedLpResult<T> out;
  out.opt = master.opt;
  out.y = master.y;
  out.z = master.z;
  for (size_t c = 0; c < columns.size(); ++c)
    if (master.x[c] != T(0) && !columns[c].set.empty()) out.x[columns[c]] = master.x[c];
  return out;
}

}  // namespace capri
