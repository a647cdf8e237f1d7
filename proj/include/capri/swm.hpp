#pragma once

#include <functional>
#include <vector>

#include "capri/core.hpp"
#include "capri/lpkit.hpp"

namespace capri {

/// Integral welfare-maximizing allocation for some capacity vector.
template <class T>
struct SwmSolution {
  Allocation allocation;
  T welfare;
  std::vector<long> capacities;
};

template <class T>
using SwmSolver = std::function<SwmSolution<T>(const Instance<T>&, const std::vector<long>&)>;

/// Exhaustive welfare maximization over the candidate-set universe with
/// capacity pruning. Deterministic: the first maximum found in canonical
/// order wins. Throws BudgetExceeded when the search-space product
/// prod_j (candidates_j + 1) exceeds `budget`.
template <class T>
SwmSolution<T> swm_exact(const Instance<T>& inst, const std::vector<long>& k,
                         double budget = 1e7) {
  const int n = inst.n();
  std::vector<std::vector<ItemSet>> cands(n);
  std::vector<T> best_value(n, T(0));
  double product = 1;
  for (int j = 0; j < n; ++j) {
    cands[j] = inst.customers[j].candidate_sets();
    product *= double(cands[j].size()) + 1;
    if (product > budget) throw BudgetExceeded(product);
    for (ItemSet s : cands[j]) best_value[j] = std::max(best_value[j], inst.customers[j].value(s));
  }
  // suffix_max[j] = largest welfare attainable from customers j..n-1.
  std::vector<T> suffix_max(n + 1, T(0));
  for (int j = n - 1; j >= 0; --j) suffix_max[j] = suffix_max[j + 1] + best_value[j];

  std::vector<long> used(inst.m, 0);
  Allocation current(n), best(n);
  T best_welfare(-1);
  std::function<void(int, T)> dfs = [&](int j, T welfare) {
    if (welfare + suffix_max[j] <= best_welfare) return;
    if (j == n) {
      best_welfare = welfare;
      best = current;
      return;
    }
    dfs(j + 1, welfare);  // empty set first
    for (ItemSet s : cands[j]) {
      bool fits = true;
      for (int e : s.items())
        if (used[e] + 1 > k[e]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (int e : s.items()) ++used[e];
      current.sets[j] = s;
      dfs(j + 1, welfare + inst.customers[j].value(s));
      current.sets[j] = ItemSet();
      for (int e : s.items()) --used[e];
    }
  };
  dfs(0, T(0));
  return {best, best_welfare, k};
}

/// Unit-capacity welfare solution turned into a priced outcome: sets are
/// pairwise disjoint, so pricing one designated item of each set (the
/// lowest-index one) at the customer's full value extracts the welfare as
/// profit. All other assigned items are free; unassigned items carry the
/// unsellable sentinel.
template <class T>
PricedOutcome<T> swm_unit_pricing(const Instance<T>& inst, const SwmSolver<T>& solver) {
  std::vector<long> ones(inst.m, 1);
  SwmSolution<T> sol = solver(inst, ones);

  PricedOutcome<T> out;
  out.allocation = sol.allocation;
  out.provenance = "unit-swm";
  out.prices = PriceVector<T>(inst.m, unsellable_price(inst));
  ItemSet assigned;
  for (int j = 0; j < inst.n(); ++j) {
    ItemSet s = sol.allocation.sets[j];
    if (s.empty()) continue;
    if (s.intersects(assigned)) throw Error("unit-capacity solver returned overlapping sets");
    assigned = assigned.unite(s);
    for (int e : s.items()) out.prices.p[e] = T(0);
    out.prices.p[s.lowest()] = inst.customers[j].value(s);
  }
  out.profit = evaluate(inst, out.prices, out.allocation);
  return out;
}

/// The assignment LP restricted to paths of a tree. Customers of a tree
/// instance already list paths only (validated on load), so the generic
/// column-generation solver runs on exactly the path universe.
template <class T>
SwmLpResult<T> tree_lp(const Instance<T>& inst, const std::vector<long>& k) {
  if (inst.kind != Kind::Tree) throw NotATree("tree_lp requires a tree instance");
  inst.validate();
  return solve_swm_lp(inst, k);
}

}  // namespace capri
