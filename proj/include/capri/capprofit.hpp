#pragma once

#include <random>
#include <vector>

#include "capri/decomp.hpp"
#include "capri/lpkit.hpp"
#include "capri/swm.hpp"

namespace capri {

/// Geometric capacity ladder: k^1 = all-ones, k^j = min(ceil((1+eps) k^{j-1}), c),
/// stopping at the first entry equal to c.
template <class T>
struct CapacitySchedule {
  std::vector<std::vector<long>> entries;
  T epsilon;
};

template <class T>
CapacitySchedule<T> capacity_schedule(const std::vector<long>& c, const T& epsilon) {
  if (!(epsilon > T(0))) throw Error("epsilon must be positive");
  CapacitySchedule<T> sched;
  sched.epsilon = epsilon;
  std::vector<long> k(c.size(), 1);
  for (size_t e = 0; e < c.size(); ++e) k[e] = std::min(k[e], c[e]);
  sched.entries.push_back(k);
  const T growth = T(1) + epsilon;
  while (k != c) {
    for (size_t e = 0; e < c.size(); ++e)
      k[e] = std::min(ceil_to_long(growth * NumericTraits<T>::from_long(k[e])), c[e]);
    sched.entries.push_back(k);
  }
  return sched;
}

/// Growth-dominance of the max-capacity items: for every step j > 1 and every
/// item e* of maximum capacity, d^j_{e*}/k^j_{e*} and d^j_{e*}/k^{j-1}_{e*}
/// attain the maxima of those ratios (d^j = k^j - k^{j-1}).
template <class T>
bool max_capacity_growth_dominates(const CapacitySchedule<T>& sched, const std::vector<long>& c) {
  long cmax = *std::max_element(c.begin(), c.end());
  for (size_t j = 1; j < sched.entries.size(); ++j) {
    const auto& curr = sched.entries[j];
    const auto& prev = sched.entries[j - 1];
    // Compare fractions (k^j - k^{j-1}) / k^j and / k^{j-1} cross-multiplied.
    for (size_t estar = 0; estar < c.size(); ++estar) {
      if (c[estar] != cmax) continue;
      long dstar = curr[estar] - prev[estar];
      for (size_t e = 0; e < c.size(); ++e) {
        long d = curr[e] - prev[e];
        if (dstar * curr[e] < d * curr[estar]) return false;
        if (dstar * prev[e] < d * prev[estar]) return false;
      }
    }
  }
  return true;
}

/// The schedule entry whose lexicographic-optimal dual maximizes k.y, with
/// the per-entry diagnostics retained.
template <class T>
struct SelectedDual {
  std::vector<long> u;
  DualSolution<T> dual;
  T score;  // sum_e u_e y_e
  size_t index = 0;
  std::vector<T> scores;  // per schedule entry
  std::vector<T> opts;    // LP optimum per schedule entry
};

template <class T>
SelectedDual<T> select_u(const Instance<T>& inst, const CapacitySchedule<T>& sched) {
  SelectedDual<T> best;
  bool have = false;
  for (size_t j = 0; j < sched.entries.size(); ++j) {
    auto lex = solve_dual_lexi(inst, sched.entries[j]);
    T score(0);
    for (int e = 0; e < inst.m; ++e)
      score += NumericTraits<T>::from_long(sched.entries[j][e]) * lex.dual.item_duals[e];
    best.scores.push_back(score);
    best.opts.push_back(lex.opt);
    if (!have || score > best.score) {
      have = true;
      best.u = sched.entries[j];
      best.dual = lex.dual;
      best.score = score;
      best.index = j;
    }
  }
  return best;
}

/// Randomized rounding for subadditive valuations: sample at most one set per
/// customer with probability x_{j,S}, then for each oversubscribed item keep
/// the u_e takers whose sampled sets carry the largest dual price (ties by
/// customer index) and delete the item from everyone else's set.
template <class T>
Allocation round_subadditive(const FractionalAssignment<T>& x, const std::vector<long>& u,
                             const DualSolution<T>& dual, std::mt19937_64& rng) {
  const int m = int(u.size());
  int n = int(dual.customer_duals.size());
  for (const auto& [key, w] : x.weight) n = std::max(n, key.customer + 1);

  // Stage 1: independent sampling.
  std::vector<ItemSet> sampled(n);
  {
    std::vector<std::vector<std::pair<ItemSet, double>>> per(n);
    for (const auto& [key, w] : x.weight) per[key.customer].push_back({key.set, to_double(w)});
    for (int j = 0; j < n; ++j) {
      double r = double(rng() >> 11) * 0x1.0p-53;
      double acc = 0;
      for (const auto& [s, p] : per[j]) {
        acc += p;
        if (r < acc) {
          sampled[j] = s;
          break;
        }
      }
    }
  }

  // Stage 2: per-item cleanup against the sampled sets.
  std::vector<ItemSet> removed(n);
  for (int e = 0; e < m; ++e) {
    std::vector<int> takers;
    for (int j = 0; j < n; ++j)
      if (sampled[j].contains(e)) takers.push_back(j);
    if (long(takers.size()) <= u[e]) continue;
    std::sort(takers.begin(), takers.end(), [&](int a, int b) {
      T pa = dual.price(sampled[a]);
      T pb = dual.price(sampled[b]);
      if (pa != pb) return pa > pb;
      return a < b;
    });
    for (size_t i = size_t(u[e]); i < takers.size(); ++i)
      removed[takers[i]] = removed[takers[i]].with(e);
  }

  Allocation out(n);
  for (int j = 0; j < n; ++j) out.sets[j] = sampled[j].minus(removed[j]);
  return out;
}

/// Rounding through the convex decomposition. By default returns the
/// maximum-profit term under the dual prices; with `sample_once` the term is
/// drawn according to the lambdas instead.
template <class T>
struct GeneralRounding {
  Allocation allocation;
  ConvexDecomposition<T> decomposition;
};

template <class T>
GeneralRounding<T> round_general(const FractionalAssignment<T>& x, const Instance<T>& inst,
                                 const std::vector<long>& u, const DualSolution<T>& dual,
                                 const GapVerifier<T>& verifier, std::mt19937_64& rng,
                                 bool sample_once = false) {
  GeneralRounding<T> out;
  out.decomposition = decompose(x, inst, u, verifier);
  if (sample_once) {
    out.allocation = sample(out.decomposition, rng);
    return out;
  }
  bool have = false;
  T best(0);
  for (const auto& term : out.decomposition.terms) {
    T profit(0);
    for (ItemSet s : term.allocation.sets) profit += dual.price(s);
    if (!have || profit > best) {
      have = true;
      best = profit;
      out.allocation = term.allocation;
    }
  }
  return out;
}

enum class Alg1Mode { Subadditive, General };

template <class T>
struct Alg1Result {
  PricedOutcome<T> outcome;
  SelectedDual<T> selected;
  T opt_full;      // LP optimum at the instance capacities
  T opt_unit;      // LP optimum at unit capacities
  T rounded_profit;
  T unit_profit;
  T alpha_used = T(1);  // decomposition scale (general mode)
};

/// Capacity-scheduled profit maximization: pick the best dual along the
/// ladder, round the matching primal (per valuation class), and return the
/// better of the rounded outcome and the unit-capacity welfare pricing.
template <class T>
Alg1Result<T> run_algorithm1(const Instance<T>& inst, const T& epsilon, Alg1Mode mode,
                             int trials, uint64_t seed,
                             const GapVerifier<T>* verifier = nullptr) {
  if (mode == Alg1Mode::Subadditive) {
    for (const auto& cust : inst.customers) {
      if (cust.encoding() == Encoding::Explicit) continue;  // not checkable
      if (!check_subadditive(cust, inst.m))
        throw ModeMismatch("subadditive mode on a non-subadditive valuation");
    }
  }

  Alg1Result<T> result;
  auto sched = capacity_schedule(inst.capacities, epsilon);
  result.selected = select_u(inst, sched);
  result.opt_unit = result.selected.opts.front();
  result.opt_full = result.selected.opts.back();

  auto lp = solve_swm_lp(inst, result.selected.u);
  PriceVector<T> dual_prices(inst.m);
  dual_prices.p = result.selected.dual.item_duals;

  Allocation rounded(inst.n());
  std::mt19937_64 rng(seed);
  if (mode == Alg1Mode::Subadditive) {
    bool have = false;
    T best(0);
    for (int t = 0; t < std::max(trials, 1); ++t) {
      Allocation a = round_subadditive(lp.assignment, result.selected.u, result.selected.dual, rng);
      if (int(a.sets.size()) < inst.n()) a.sets.resize(inst.n());
      T profit(0);
      for (ItemSet s : a.sets) profit += result.selected.dual.price(s);
      if (!have || profit > best) {
        have = true;
        best = profit;
        rounded = a;
      }
    }
  } else {
    GapVerifier<T> fallback = exact_gap_verifier<T>(inst.n());
    const GapVerifier<T>& v = verifier ? *verifier : fallback;
    auto gr = round_general(lp.assignment, inst, result.selected.u, result.selected.dual, v, rng);
    rounded = gr.allocation;
    result.alpha_used = gr.decomposition.alpha_used;
  }

  PricedOutcome<T> branch_a;
  branch_a.prices = dual_prices;
  branch_a.allocation = rounded;
  branch_a.profit = evaluate(inst, dual_prices, rounded);
  branch_a.provenance =
      mode == Alg1Mode::Subadditive ? "alg1/rounded-subadditive" : "alg1/decomposition";
  result.rounded_profit = branch_a.profit;

  PricedOutcome<T> branch_b = swm_unit_pricing<T>(
      inst, [](const Instance<T>& i, const std::vector<long>& k) { return swm_exact(i, k); });
  branch_b.provenance = "alg1/unit-swm";
  result.unit_profit = branch_b.profit;

  result.outcome = branch_a.profit >= branch_b.profit ? branch_a : branch_b;
  return result;
}

/// One-sided envy-freeness adjustment: raise prices on items private to each
/// assigned set until the set's price reaches max(y(S_j), (1-eps) v_j(S_j)).
/// Customers whose sets share every item with another assigned set are
/// reported and left at the dual prices.
template <class T>
struct EnvyFreeAdjustment {
  PriceVector<T> prices;
  std::vector<int> skipped;  // customers with no private item
};

template <class T>
EnvyFreeAdjustment<T> epsilon_envyfree_adjust(const Instance<T>& inst,
                                              const PricedOutcome<T>& outcome,
                                              const T& eps_prime) {
  EnvyFreeAdjustment<T> adj;
  adj.prices = outcome.prices;
  for (int j = 0; j < inst.n(); ++j) {
    ItemSet s = outcome.allocation.sets[j];
    if (s.empty()) continue;
    T current = outcome.prices.total(s);
    T raised = (T(1) - eps_prime) * inst.customers[j].value(s);
    T target = std::max(current, raised);
    T delta = target - current;
    if (!(delta > T(0))) continue;
    ItemSet shared;
    for (int i = 0; i < inst.n(); ++i)
      if (i != j) shared = shared.unite(outcome.allocation.sets[i]);
    ItemSet priv = s.minus(shared);
    if (priv.empty()) {
      adj.skipped.push_back(j);
      continue;
    }
    adj.prices.p[priv.lowest()] += delta;
  }
  return adj;
}

}  // namespace capri
