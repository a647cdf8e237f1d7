#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "capri/capprofit.hpp"
#include "capri/decomp.hpp"
#include "capri/swm.hpp"

namespace capri {

/// Edge depths of a rooted tree: depth(edge) = min distance of its endpoints
/// to the root; depth(path) = min edge depth.
struct DepthIndex {
  std::vector<int> vertex_depth;
  std::vector<int> edge_depth;

  int path_depth(ItemSet path) const {
    int d = INT32_MAX;
    for (int e : path.items()) d = std::min(d, edge_depth[e]);
    return d;
  }
};

template <class T>
DepthIndex build_depth_index(const Instance<T>& inst) {
  if (inst.kind != Kind::Tree) throw NotATree("depth index requires a tree instance");
  int vertices = inst.m + 1;
  std::vector<std::vector<std::pair<int, int>>> adj(vertices);
  for (int e = 0; e < inst.m; ++e) {
    adj[inst.tree_edges[e].first].push_back({inst.tree_edges[e].second, e});
    adj[inst.tree_edges[e].second].push_back({inst.tree_edges[e].first, e});
  }
  DepthIndex idx;
  idx.vertex_depth.assign(vertices, -1);
  idx.edge_depth.assign(inst.m, 0);
  std::vector<int> queue{inst.root};
  idx.vertex_depth[inst.root] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (auto [w, e] : adj[v])
      if (idx.vertex_depth[w] < 0) {
        idx.vertex_depth[w] = idx.vertex_depth[v] + 1;
        queue.push_back(w);
      }
  }
  for (int e = 0; e < inst.m; ++e)
    idx.edge_depth[e] = std::min(idx.vertex_depth[inst.tree_edges[e].first],
                                 idx.vertex_depth[inst.tree_edges[e].second]);
  return idx;
}

/// Precomputed sampling/ordering state so that repeated rounding trials do
/// not rebuild depths or probability tables.
struct TreeRoundingPlan {
  struct Col {
    ItemSet set;
    double prob;
    int depth;
  };
  int n = 0;
  int m = 0;
  std::vector<long> capacities;
  std::vector<std::vector<Col>> per_customer;
};

template <class T>
TreeRoundingPlan make_tree_rounding_plan(const FractionalAssignment<T>& x,
                                         const Instance<T>& inst, double alpha) {
  if (alpha <= 0 || alpha > 1) throw Error("alpha must lie in (0, 1]");
  DepthIndex idx = build_depth_index(inst);
  TreeRoundingPlan plan;
  plan.n = inst.n();
  plan.m = inst.m;
  plan.capacities = x.capacities;
  plan.per_customer.resize(plan.n);
  for (const auto& [key, w] : x.weight) {
    if (key.set.empty() || !(w > T(0))) continue;
    plan.per_customer[key.customer].push_back(
        {key.set, alpha * to_double(w), idx.path_depth(key.set)});
  }
  return plan;
}

/// Two-step rounding: sample at most one path per customer with probability
/// alpha * x_{j,S}, then scan sampled paths by nondecreasing depth (ties by
/// customer index) and keep each path iff all its edges still have residual
/// capacity.
inline Allocation tree_round(const TreeRoundingPlan& plan, std::mt19937_64& rng) {
  struct Pick {
    int depth;
    int customer;
    ItemSet set;
  };
  // Typical trials sample very few paths; keep the hot loop allocation-lean.
  static thread_local std::vector<Pick> picks;
  picks.clear();
  for (int j = 0; j < plan.n; ++j) {
    double r = double(rng() >> 11) * 0x1.0p-53;
    double acc = 0;
    for (const auto& col : plan.per_customer[j]) {
      acc += col.prob;
      if (r < acc) {
        picks.push_back({col.depth, j, col.set});
        break;
      }
    }
  }
  std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.customer != b.customer) return a.customer < b.customer;
    return ItemSet::lex_less(a.set, b.set);
  });
  Allocation out(plan.n);
  static thread_local std::vector<long> used;
  used.assign(plan.m, 0);
  for (const auto& p : picks) {
    bool fits = true;
    for (int e : p.set.items())
      if (used[e] + 1 > plan.capacities[e]) {
        fits = false;
        break;
      }
    if (!fits) continue;
    for (int e : p.set.items()) ++used[e];
    out.sets[p.customer] = p.set;
  }
  return out;
}

template <class T>
Allocation tree_round(const FractionalAssignment<T>& x, const Instance<T>& inst, double alpha,
                      std::mt19937_64& rng) {
  auto plan = make_tree_rounding_plan(x, inst, alpha);
  return tree_round(plan, rng);
}

/// The sparse capacity-check subsequence of a path: split at the vertex
/// closest to the root; along each branch keep the first edge and then every
/// first edge whose capacity is at most half the previously kept one.
struct SparseCheckSet {
  std::vector<int> left;        // kept edges, outward order
  std::vector<int> right;
  std::vector<int> left_full;   // entire branches, outward order
  std::vector<int> right_full;
};

template <class T>
SparseCheckSet sparse_check_set(ItemSet path, const Instance<T>& inst,
                                const std::vector<long>& capacities) {
  SparseCheckSet out;
  if (path.empty()) return out;
  DepthIndex idx = build_depth_index(inst);
  // Highest vertex of the path.
  int top = -1;
  for (int e : path.items())
    for (int v : {inst.tree_edges[e].first, inst.tree_edges[e].second})
      if (top < 0 || idx.vertex_depth[v] < idx.vertex_depth[top]) top = v;

  std::vector<std::vector<std::pair<int, int>>> adj(inst.m + 1);
  for (int e : path.items()) {
    adj[inst.tree_edges[e].first].push_back({inst.tree_edges[e].second, e});
    adj[inst.tree_edges[e].second].push_back({inst.tree_edges[e].first, e});
  }
  std::vector<std::vector<int>> branches;
  for (auto [w, e] : adj[top]) {
    std::vector<int> branch{e};
    int prev = top, at = w;
    for (;;) {
      int next_edge = -1, next_vertex = -1;
      for (auto [w2, e2] : adj[at])
        if (w2 != prev) {
          next_edge = e2;
          next_vertex = w2;
        }
      if (next_edge < 0) break;
      branch.push_back(next_edge);
      prev = at;
      at = next_vertex;
    }
    branches.push_back(std::move(branch));
  }
  auto primed = [&](const std::vector<int>& branch) {
    std::vector<int> keep;
    long last = 0;
    for (int e : branch) {
      if (keep.empty() || 2 * capacities[e] <= last) {
        keep.push_back(e);
        last = capacities[e];
      }
    }
    return keep;
  };
  if (!branches.empty()) {
    out.left_full = branches[0];
    out.left = primed(branches[0]);
  }
  if (branches.size() > 1) {
    out.right_full = branches[1];
    out.right = primed(branches[1]);
  }
  return out;
}

/// Chernoff budget for the rejection probability: sum over the sparse check
/// set of beta(c_e) with beta(c) = ((2a)^{1/(2a)} e^{(1-2a)/(2a)})^{a c},
/// evaluated in log space.
inline double bad_event_budget_term(long capacity, double alpha) {
  return std::exp(0.5 * double(capacity) * (std::log(2.0 * alpha) + 1.0 - 2.0 * alpha));
}

inline double bad_event_budget(const SparseCheckSet& s, const std::vector<long>& capacities,
                               double alpha) {
  if (!(alpha < 0.5)) throw Error("budget bound requires alpha < 1/2");
  double total = 0;
  for (int e : s.left) total += bad_event_budget_term(capacities[e], alpha);
  for (int e : s.right) total += bad_event_budget_term(capacities[e], alpha);
  return total;
}

/// Declared factor of the depth-ordered rounding: each sampled path survives
/// with probability at least 0.00425 = 17/4000 of its fractional weight, so
/// the expected weighted welfare is within 4000/17 of the LP. With uniform
/// capacities the constant improves to 0.3.
template <class T>
T tree_round_declared_factor(bool uniform_capacities) {
  if (uniform_capacities) return NumericTraits<T>::from_long(10) / NumericTraits<T>::from_long(3);
  return NumericTraits<T>::from_long(4000) / NumericTraits<T>::from_long(17);
}

/// Rounding-based verifier for path-restricted assignment LPs. The declared
/// factor is 1/0.00425 (1/0.3 when all capacities are equal); each call
/// solves the weighted path LP and returns the best of `trials` roundings.
template <class T>
GapVerifier<T> tree_gap_verifier(const Instance<T>& inst, int trials, uint64_t seed,
                                 double alpha = 0.01) {
  bool uniform = true;
  for (long c : inst.capacities)
    if (c != inst.capacities[0]) uniform = false;
  GapVerifier<T> v;
  v.declared_factor = tree_round_declared_factor<T>(uniform);
  auto rng = std::make_shared<std::mt19937_64>(seed);
  v.solve = [trials, rng, alpha](const Instance<T>& ist, const std::vector<long>& k,
                                 const std::map<ColumnKey, T>& w) {
    std::vector<ColumnKey> cols;
    std::vector<T> vals;
    for (const auto& [key, wi] : w) {
      if (key.set.empty() || !(wi > T(0))) continue;
      cols.push_back(key);
      vals.push_back(wi);
    }
    Allocation best(ist.n());
    if (cols.empty()) return best;
    auto lp = solve_weighted_lp(ist.n(), k, cols, vals);
    FractionalAssignment<T> x;
    x.weight = lp.x;
    x.capacities = k;
    if (x.integral()) return x.to_allocation(ist.n());
    auto plan = make_tree_rounding_plan(x, ist, alpha);
    T best_score(-1);
    for (int t = 0; t < std::max(trials, 1); ++t) {
      Allocation a = tree_round(plan, *rng);
      T score(0);
      for (int j = 0; j < ist.n(); ++j) {
        auto it = w.find({j, a.sets[j]});
        if (it != w.end()) score += it->second;
      }
      if (score > best_score) {
        best_score = score;
        best = a;
      }
    }
    return best;
  };
  return v;
}

template <class T>
struct TollboothResult {
  PricedOutcome<T> outcome;
  SelectedDual<T> selected;
  T opt_full;
  T opt_unit;
  T rounded_profit;
  T unit_profit;
};

/// Capacity-scheduled pricing on trees: the path LP replaces the general
/// assignment LP and the depth-ordered rounding replaces the decomposition
/// in the rounding step.
template <class T>
TollboothResult<T> tollbooth_tree(const Instance<T>& inst, const T& epsilon, int trials,
                                  uint64_t seed, double alpha = 0.01) {
  if (inst.kind != Kind::Tree) throw NotATree("tollbooth requires a tree instance");
  TollboothResult<T> result;
  auto sched = capacity_schedule(inst.capacities, epsilon);
  result.selected = select_u(inst, sched);
  result.opt_unit = result.selected.opts.front();
  result.opt_full = result.selected.opts.back();

  auto lp = tree_lp(inst, result.selected.u);
  PriceVector<T> prices(inst.m);
  prices.p = result.selected.dual.item_duals;

  std::mt19937_64 rng(seed);
  Allocation rounded(inst.n());
  if (lp.assignment.integral()) {
    rounded = lp.assignment.to_allocation(inst.n());
  } else {
    auto plan = make_tree_rounding_plan(lp.assignment, inst, alpha);
    T best(-1);
    for (int t = 0; t < std::max(trials, 1); ++t) {
      Allocation a = tree_round(plan, rng);
      T profit(0);
      for (ItemSet s : a.sets) profit += result.selected.dual.price(s);
      if (profit > best) {
        best = profit;
        rounded = a;
      }
    }
  }
  PricedOutcome<T> branch_a{prices, rounded, T(0), "tollbooth/rounded"};
  branch_a.profit = evaluate(inst, prices, rounded);
  result.rounded_profit = branch_a.profit;

  PricedOutcome<T> branch_b = swm_unit_pricing<T>(
      inst, [](const Instance<T>& i, const std::vector<long>& k) { return swm_exact(i, k); });
  branch_b.provenance = "tollbooth/unit-swm";
  result.unit_profit = branch_b.profit;

  result.outcome = branch_a.profit >= branch_b.profit ? branch_a : branch_b;
  return result;
}

}  // namespace capri
