#pragma once

#include <functional>
#include <vector>

#include "capri/highway.hpp"
#include "capri/lpkit.hpp"

namespace capri {

/// Enumeration caps, enforced before any search begins.
struct OracleBudget {
  double max_allocations = 1e7;
  double max_combos = 1e7;
};

/// Exact optimum of the item-pricing problem: enumerate capacity-feasible
/// allocations over the candidate-set universe and, for each, solve the
/// pricing LP  max sum_j p(S_j)  s.t.  p(S_j) <= v_j(S_j), p >= 0.
/// Allocations whose welfare cannot beat the incumbent are skipped, since
/// profit never exceeds welfare.
template <class T>
PricedOutcome<T> exact_profit(const Instance<T>& inst, const OracleBudget& budget = {}) {
  const int n = inst.n();
  std::vector<std::vector<ItemSet>> cands(n);
  double product = 1;
  for (int j = 0; j < n; ++j) {
    cands[j] = inst.customers[j].candidate_sets();
    product *= double(cands[j].size()) + 1;
    if (product > budget.max_allocations) throw BudgetExceeded(product);
  }

  PricedOutcome<T> best;
  best.prices = PriceVector<T>(inst.m, unsellable_price(inst));
  best.allocation = Allocation(n);
  best.profit = T(0);
  best.provenance = "oracle/exact-profit";

  std::vector<T> suffix_max(n + 1, T(0));
  for (int j = n - 1; j >= 0; --j) {
    T top(0);
    for (ItemSet s : cands[j]) top = std::max(top, inst.customers[j].value(s));
    suffix_max[j] = suffix_max[j + 1] + top;
  }

  Allocation current(n);
  std::vector<long> used(inst.m, 0);
  auto price_current = [&](const T& welfare) {
    if (welfare <= best.profit) return;  // profit <= welfare
    LinearProgram<T> lp;
    for (int e = 0; e < inst.m; ++e) {
      T count(0);
      for (int j = 0; j < n; ++j)
        if (current.sets[j].contains(e)) count += T(1);
      lp.add_variable(count);
    }
    for (int j = 0; j < n; ++j) {
      if (current.sets[j].empty()) continue;
      int row = lp.add_row(RowSense::LE, inst.customers[j].value(current.sets[j]));
      for (int e : current.sets[j].items()) lp.add_coeff(row, e, T(1));
    }
    lp.solve_or_throw(LpDirection::Maximize);
    if (lp.objective_value() > best.profit) {
      best.profit = lp.objective_value();
      best.allocation = current;
      best.prices = PriceVector<T>(inst.m, unsellable_price(inst));
      ItemSet touched;
      for (int j = 0; j < n; ++j) touched = touched.unite(current.sets[j]);
      for (int e : touched.items()) best.prices.p[e] = lp.primal()[e];
    }
  };

  std::function<void(int, T)> dfs = [&](int j, T welfare) {
    if (welfare + suffix_max[j] <= best.profit) return;
    if (j == n) {
      price_current(welfare);
      return;
    }
    for (int c = -1; c < int(cands[j].size()); ++c) {
      ItemSet s = c < 0 ? ItemSet() : cands[j][c];
      bool fits = true;
      for (int e : s.items())
        if (used[e] + 1 > inst.capacities[e]) {
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
  return best;
}

/// Exhaustive voucher-pricing optimum on a half-clique: every nonincreasing
/// assignment of grid prices (or zero) to the chain, times every feasible
/// single-interval-per-customer assignment, maximizing sum max(0, p_j - b_j).
template <class T>
T exact_voucher(const HalfCliqueProblem<T>& hc, const std::vector<T>& beta,
                const std::vector<T>& prices, const OracleBudget& budget = {}) {
  const int len = int(hc.chain.size());
  const int n = int(hc.value.size());
  const int P = int(prices.size());
  double combos = 1;
  for (int i = 0; i < len; ++i) combos *= P + 1;
  for (int j = 0; j < n; ++j) combos *= len + 1;
  if (combos > budget.max_combos) throw BudgetExceeded(combos);

  T best(0);
  std::vector<int> price_idx(len, P);  // P encodes price 0
  auto price_of = [&](int pos) { return price_idx[pos] >= P ? T(0) : prices[price_idx[pos]]; };

  std::function<void(int)> assign_customers = [&](int) {
    std::vector<int> pick(n, -1);  // chain position or -1
    std::function<void(int, T)> rec = [&](int j, T total) {
      if (j == n) {
        if (total > best) {
          // capacity check
          std::vector<long> usage(hc.chain.size(), 0);
          for (int jj = 0; jj < n; ++jj)
            if (pick[jj] >= 0)
              for (int lam = pick[jj]; lam < len; ++lam) ++usage[lam];
          for (int lam = 0; lam < len; ++lam)
            if (usage[lam] > hc.mincap[lam]) return;
          best = total;
        }
        return;
      }
      rec(j + 1, total);
      for (int pos = 0; pos < len; ++pos) {
        if (!(hc.value[j][pos] >= price_of(pos))) continue;  // budget
        T w = price_of(pos) - beta[j];
        if (w < T(0)) w = T(0);
        pick[j] = pos;
        rec(j + 1, total + w);
        pick[j] = -1;
      }
    };
    rec(0, T(0));
  };

  // Nonincreasing price indices along the chain (larger index = lower price).
  std::function<void(int, int)> choose_prices = [&](int pos, int min_idx) {
    if (pos == len) {
      assign_customers(0);
      return;
    }
    for (int idx = min_idx; idx <= P; ++idx) {
      price_idx[pos] = idx;
      choose_prices(pos + 1, idx);
    }
  };
  choose_prices(0, 0);
  return best;
}

/// Exact optimum of the relaxed voucher problem, where a customer may hold
/// one interval per distinct price level. Used to certify that the dynamic
/// program solves the relaxation exactly.
template <class T>
T exact_voucher_relaxed(const HalfCliqueProblem<T>& hc, const std::vector<T>& beta,
                        const std::vector<T>& prices, const OracleBudget& budget = {}) {
  const int len = int(hc.chain.size());
  const int n = int(hc.value.size());
  const int P = int(prices.size());
  double combos = 1;
  for (int i = 0; i < len; ++i) combos *= P + 1;
  if (combos > budget.max_combos) throw BudgetExceeded(combos);

  T best(0);
  std::vector<int> price_idx(len, P);

  // For fixed prices the relaxation decomposes into per-price blocks coupled
  // only through capacity, so run a small exact search: each customer picks a
  // subset of distinct price blocks (at most one interval per block, deepest
  // affordable position within it).
  std::function<void(int, int)> choose_prices = [&](int pos, int min_idx) {
    if (pos == len) {
      // Blocks: maximal runs of equal price index with price > 0.
      struct Block {
        int i, k, idx;
      };
      std::vector<Block> blocks;
      for (int i0 = 0; i0 < len;) {
        int k0 = i0;
        while (k0 + 1 < len && price_idx[k0 + 1] == price_idx[i0]) ++k0;
        if (price_idx[i0] < P) blocks.push_back({i0, k0, price_idx[i0]});
        i0 = k0 + 1;
      }
      const int B = int(blocks.size());
      double combos2 = 1;
      for (int j = 0; j < n; ++j) combos2 *= (1 << B);
      if (combos2 > 4e6) throw BudgetExceeded(combos2);
      // DFS over customers x block subsets with capacity usage on positions.
      std::vector<long> usage(len, 0);
      T total(0);
      std::function<void(int)> rec = [&](int j) {
        if (j == n) {
          best = std::max(best, total);
          return;
        }
        for (uint64_t sub = 0; sub < (uint64_t{1} << B); ++sub) {
          // deepest affordable position per chosen block; bail if any block
          // unaffordable or capacity breaks
          std::vector<int> picks;
          bool ok = true;
          T gain(0);
          for (int b = 0; b < B && ok; ++b) {
            if (!((sub >> b) & 1)) continue;
            const Block& blk = blocks[b];
            if (!(hc.value[j][blk.i] >= prices[blk.idx])) {
              ok = false;
              break;
            }
            int deepest = blk.i;
            for (int pos = blk.k; pos > blk.i; --pos)
              if (hc.value[j][pos] >= prices[blk.idx]) {
                deepest = pos;
                break;
              }
            T w = prices[blk.idx] - beta[j];
            if (w > T(0)) gain += w;
            picks.push_back(deepest);
          }
          if (!ok) continue;
          bool cap_ok = true;
          for (int p : picks)
            for (int lam = p; lam < len; ++lam) {
              if (++usage[lam] > hc.mincap[lam]) cap_ok = false;
            }
          if (cap_ok) {
            total += gain;
            rec(j + 1);
            total -= gain;
          }
          for (int p : picks)
            for (int lam = p; lam < len; ++lam) --usage[lam];
        }
        return;
      };
      rec(0);
      return;
    }
    for (int idx = min_idx; idx <= P; ++idx) {
      price_idx[pos] = idx;
      choose_prices(pos + 1, idx);
    }
  };
  choose_prices(0, 0);
  return best;
}

/// Exact multi-product optimum in the buy-one model: enumerate per-item
/// candidate prices (plus "shelved"), then assign customers by repeated
/// augmentation, taking items in decreasing price order. Item-side-uniform
/// weights make that greedy-with-augmentation matching optimal.
template <class T>
struct MaxbuyOracleResult {
  T value = T(0);
  std::vector<T> prices;
};

template <class T>
MaxbuyOracleResult<T> exact_maxbuy(const Instance<T>& inst, const OracleBudget& budget = {}) {
  if (inst.kind != Kind::Products) throw ModeMismatch("products instance required");
  const int n = inst.n();
  const int m = inst.m;
  std::vector<std::vector<T>> val(n, std::vector<T>(m, T(0)));
  for (int j = 0; j < n; ++j)
    for (int e = 0; e < m; ++e) val[j][e] = inst.customers[j].value(ItemSet::single(e));
  std::vector<std::vector<T>> cand(m);
  double combos = 1;
  for (int e = 0; e < m; ++e) {
    for (int j = 0; j < n; ++j)
      if (val[j][e] > T(0)) cand[e].push_back(val[j][e]);
    std::sort(cand[e].begin(), cand[e].end(), std::greater<T>());
    cand[e].erase(std::unique(cand[e].begin(), cand[e].end()), cand[e].end());
    combos *= double(cand[e].size()) + 1;
    if (combos > budget.max_combos) throw BudgetExceeded(combos);
  }

  MaxbuyOracleResult<T> best;
  std::vector<int> choice(m, -1);  // candidate index or -1 = shelved

  // Maximum-profit b-matching for fixed prices: expand items into capacity
  // copies, take copies in decreasing price order, augment Kuhn-style.
  auto match_value = [&]() {
    std::vector<std::pair<T, int>> copies;
    for (int e = 0; e < m; ++e) {
      if (choice[e] < 0) continue;
      for (long c = 0; c < inst.capacities[e]; ++c)
        copies.push_back({cand[e][choice[e]], e});
    }
    std::sort(copies.begin(), copies.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return x.second < y.second;
    });
    std::vector<int> owner(n, -1);             // customer -> copy index
    std::vector<int> copy_owner(copies.size(), -1);
    T total(0);
    for (int ci = 0; ci < int(copies.size()); ++ci) {
      // find augmenting path from this copy
      std::vector<bool> seen_customer(n, false);
      std::function<bool(int)> tryc = [&](int copy) -> bool {
        int item = copies[copy].second;
        const T& price = copies[copy].first;
        for (int j = 0; j < n; ++j) {
          if (seen_customer[j] || !(val[j][item] >= price)) continue;
          seen_customer[j] = true;
          if (owner[j] < 0 || tryc(owner[j])) {
            owner[j] = copy;
            copy_owner[copy] = j;
            return true;
          }
        }
        return false;
      };
      if (tryc(ci)) total += copies[ci].first;
    }
    return total;
  };

  std::function<void(int)> rec = [&](int e) {
    if (e == m) {
      T v = match_value();
      if (v > best.value) {
        best.value = v;
        best.prices.assign(m, T(0));
        for (int i = 0; i < m; ++i)
          best.prices[i] = choice[i] < 0 ? T(0) : cand[i][choice[i]];
      }
      return;
    }
    for (int c = -1; c < int(cand[e].size()); ++c) {
      choice[e] = c;
      rec(e + 1);
    }
    choice[e] = -1;
  };
  rec(0);
  return best;
}

}  // namespace capri
