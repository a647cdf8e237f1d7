#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "capri/core.hpp"
#include "capri/simplex.hpp"

namespace capri {

/// Inclusive edge range [a, b] on the line.
struct IntervalRef {
  int a = 0;
  int b = -1;  // empty when b < a

  bool empty() const { return b < a; }
  int length() const { return empty() ? 0 : b - a + 1; }
  bool contains(int e) const { return a <= e && e <= b; }
  bool contains(IntervalRef o) const { return a <= o.a && o.b <= b; }
  ItemSet items() const { return ItemSet::range(a, b); }

  friend bool operator==(IntervalRef x, IntervalRef y) { return x.a == y.a && x.b == y.b; }
  friend bool operator<(IntervalRef x, IntervalRef y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

/// Intervals sharing a common (stabbing) edge.
struct Clique {
  int stab = 0;
  int lo = 0, hi = 0;  // leftmost and rightmost edge used by any member
  std::vector<IntervalRef> members;
};

struct CliqueGroup {
  std::vector<Clique> cliques;
};

struct CliqueSet {
  std::vector<CliqueGroup> groups;
  int interval_count = 0;
};

/// Partition of intervals into few groups of item-disjoint cliques. The
/// recursion stabs the first edge of the median interval (in sorted order),
/// collects everything containing that edge, and recurses on the strictly
/// left / strictly right remainders one level deeper; a first-fit compression
/// pass then merges deeper cliques into the earliest item-disjoint group.
inline CliqueSet interval_decompose(std::vector<IntervalRef> intervals) {
  std::sort(intervals.begin(), intervals.end());
  intervals.erase(std::unique(intervals.begin(), intervals.end()), intervals.end());
  CliqueSet out;
  out.interval_count = int(intervals.size());
  if (intervals.empty()) return out;

  struct Placed {
    int depth;
    Clique clique;
  };
  std::vector<Placed> placed;
  std::function<void(std::vector<IntervalRef>, int)> recurse = [&](std::vector<IntervalRef> span,
                                                                   int depth) {
    if (span.empty()) return;
    const IntervalRef median = span[span.size() / 2];
    const int stab = median.a;
    Clique c;
    c.stab = stab;
    c.lo = stab;
    c.hi = stab;
    std::vector<IntervalRef> left, right;
    for (const auto& iv : span) {
      if (iv.contains(stab)) {
        c.members.push_back(iv);
        c.lo = std::min(c.lo, iv.a);
        c.hi = std::max(c.hi, iv.b);
      } else if (iv.b < stab) {
        left.push_back(iv);
      } else {
        right.push_back(iv);
      }
    }
    placed.push_back({depth, std::move(c)});
    recurse(std::move(left), depth + 1);
    recurse(std::move(right), depth + 1);
  };
  recurse(intervals, 0);

  // First-fit compression: a clique may move up to the earliest group whose
  // cliques it does not share an edge with.
  std::sort(placed.begin(), placed.end(), [](const Placed& x, const Placed& y) {
    if (x.depth != y.depth) return x.depth < y.depth;
    return x.clique.stab < y.clique.stab;
  });
  std::vector<std::vector<std::pair<int, int>>> group_spans;  // per group: [lo, hi] list
  for (auto& p : placed) {
    size_t g = 0;
    for (; g < group_spans.size(); ++g) {
      bool clash = false;
      for (auto [lo, hi] : group_spans[g])
        if (!(p.clique.hi < lo || hi < p.clique.lo)) clash = true;
      if (!clash) break;
    }
    if (g == group_spans.size()) {
      group_spans.emplace_back();
      out.groups.emplace_back();
    }
    group_spans[g].push_back({p.clique.lo, p.clique.hi});
    out.groups[g].cliques.push_back(std::move(p.clique));
  }
  return out;
}

enum class TrimMode { Subadditive, Unlimited };

/// One-sided half-clique: a nested chain of intervals sharing one endpoint,
/// longest first.
struct HalfClique {
  bool kept_left = true;  // which side of the stab edge survived
  int stab = 0;
  std::vector<IntervalRef> chain;
};

/// Per-clique fair coin chooses the side to discard. In subadditive mode the
/// members are truncated to the kept side; in unlimited mode they are
/// extended across the discarded side (equivalent to pricing it at zero).
/// Cliques that never cross the stab edge on one side skip the coin.
inline std::vector<HalfClique> trim(const CliqueGroup& group, TrimMode mode,
                                    std::mt19937_64& rng) {
  std::vector<HalfClique> out;
  for (const Clique& c : group.cliques) {
    bool keep_left;
    if (c.hi == c.stab) {
      keep_left = true;  // nothing extends right of the stab; no coin needed
    } else {
      keep_left = (rng() & 1) == 0;
    }
    HalfClique h;
    h.kept_left = keep_left;
    h.stab = c.stab;
    for (const IntervalRef& s : c.members) {
      IntervalRef image;
      if (mode == TrimMode::Subadditive)
        image = keep_left ? IntervalRef{s.a, c.stab} : IntervalRef{c.stab + 1, s.b};
      else
        image = keep_left ? IntervalRef{s.a, c.hi} : IntervalRef{c.lo, s.b};
      if (image.empty()) continue;
      h.chain.push_back(image);
    }
    std::sort(h.chain.begin(), h.chain.end(), [](IntervalRef x, IntervalRef y) {
      if (x.length() != y.length()) return x.length() > y.length();
      return x < y;
    });
    h.chain.erase(std::unique(h.chain.begin(), h.chain.end()), h.chain.end());
    if (!h.chain.empty()) out.push_back(std::move(h));
  }
  return out;
}

/// Geometric price grid B, B/2, ..., down to B/(m n); the zero price is
/// implicit. Empty when B == 0.
template <class T>
struct PriceGrid {
  T base = T(0);
  std::vector<T> prices;  // strictly decreasing
};

template <class T>
PriceGrid<T> make_price_grid(const T& base, int m, int n) {
  PriceGrid<T> g;
  g.base = base;
  if (!(base > T(0))) return g;
  long span = std::max(1L, long(m) * long(n));
  T d = base;
  for (long pow = 1; pow <= span; pow *= 2) {
    g.prices.push_back(d);
    d = d / T(2);
  }
  return g;
}

/// A clique's pricing-plus-assignment solution, indices into a shared price
/// list (-1 means price zero / unassigned).
template <class T>
struct CliqueSolution {
  std::vector<int> chain_price_idx;  // per chain position
  std::vector<int> assigned_pos;     // per customer: chain position or -1
  std::vector<int> paid_idx;         // per customer: price index or -1

  bool operator==(const CliqueSolution& o) const {
    return chain_price_idx == o.chain_price_idx && assigned_pos == o.assigned_pos;
  }
};

/// Half-clique with everything the pricing problems need: the nested chain,
/// the minimum capacity over each chain interval, and each customer's value
/// for each chain interval.
template <class T>
struct HalfCliqueProblem {
  std::vector<ItemSet> chain;          // nested, longest first
  std::vector<long> mincap;            // per position
  std::vector<std::vector<T>> value;   // value[j][pos]
};

template <class T>
HalfCliqueProblem<T> make_half_clique_problem(const HalfClique& h, const Instance<T>& inst,
                                              const std::vector<long>& capacities) {
  HalfCliqueProblem<T> p;
  for (const IntervalRef& iv : h.chain) {
    p.chain.push_back(iv.items());
    long mc = capacities[iv.a];
    for (int e = iv.a; e <= iv.b; ++e) mc = std::min(mc, capacities[e]);
    p.mincap.push_back(mc);
  }
  p.value.assign(inst.n(), std::vector<T>(p.chain.size(), T(0)));
  for (int j = 0; j < inst.n(); ++j)
    for (size_t pos = 0; pos < p.chain.size(); ++pos)
      p.value[j][pos] = inst.customers[j].value(p.chain[pos]);
  return p;
}

template <class T>
struct PackedCustomer {
  int customer;
  int deepest;  // deepest affordable chain position within the block
  T weight;     // max(0, price - voucher)
};

/// Greedy selection for one price block over chain positions [i, k]: process
/// affordable customers by decreasing voucher surplus and keep each one whose
/// deepest affordable interval still fits the nested capacity profile
/// (position lambda admits at most mincap(lambda) - used buyers at positions
/// <= lambda). This is a weighted matroid on a laminar family, so every
/// prefix of the result is an optimal packing of its own cardinality.
template <class T>
std::vector<PackedCustomer<T>> pack_block_greedy(const HalfCliqueProblem<T>& hc, int i, int k,
                                                 const T& price, long used,
                                                 const std::vector<T>& beta) {
  const int n = int(hc.value.size());
  std::vector<PackedCustomer<T>> cands;
  for (int j = 0; j < n; ++j) {
    if (!(hc.value[j][i] >= price)) continue;  // cannot afford any block interval
    int deepest = i;
    for (int pos = k; pos > i; --pos)
      if (hc.value[j][pos] >= price) {
        deepest = pos;
        break;
      }
    T w = price - beta[j];
    if (w < T(0)) w = T(0);
    cands.push_back({j, deepest, w});
  }
  std::sort(cands.begin(), cands.end(),
            [](const PackedCustomer<T>& x, const PackedCustomer<T>& y) {
              if (x.weight != y.weight) return x.weight > y.weight;
              return x.customer < y.customer;
            });
  std::vector<PackedCustomer<T>> chosen;
  std::vector<long> count(hc.chain.size(), 0);  // buyers at positions <= lambda
  const int len = int(hc.chain.size());
  for (const auto& c : cands) {
    // A buyer's interval contains every deeper chain interval, so the
    // capacity check extends past the block to the end of the chain.
    bool fits = true;
    for (int lam = c.deepest; lam < len; ++lam)
      if (count[lam] + 1 > hc.mincap[lam] - used) {
        fits = false;
        break;
      }
    if (!fits) continue;
    for (int lam = c.deepest; lam < len; ++lam) ++count[lam];
    chosen.push_back(c);
  }
  return chosen;
}

template <class T>
struct IntervalPackResult {
  bool feasible = false;
  T value = T(0);
  std::vector<std::pair<int, int>> chosen;  // (customer, chain position)
};

/// Optimal packing of exactly t customers at one price: the t-prefix of the
/// greedy order (infeasible when the block's rank is below t).
template <class T>
IntervalPackResult<T> interval_pack(const HalfCliqueProblem<T>& hc, int i, int k,
                                    const T& price, int t, long used,
                                    const std::vector<T>& beta) {
  IntervalPackResult<T> out;
  auto order = pack_block_greedy(hc, i, k, price, used, beta);
  if (int(order.size()) < t) return out;
  out.feasible = true;
  for (int c = 0; c < t; ++c) {
    out.chosen.push_back({order[c].customer, order[c].deepest});
    out.value += order[c].weight;
  }
  return out;
}

/// LP cross-check for the packing step: the constraint matrix is an interval
/// matrix plus a cardinality row, so every vertex is integral. Returns the
/// LP optimum together with the largest deviation of any component from an
/// integer (callers assert it is ~0).
template <class T>
struct IntervalPackLpResult {
  bool feasible = false;
  T value = T(0);
  double max_fractionality = 0;
};

template <class T>
IntervalPackLpResult<T> interval_pack_lp(const HalfCliqueProblem<T>& hc, int i, int k,
                                         const T& price, int t, long used,
                                         const std::vector<T>& beta) {
  IntervalPackLpResult<T> out;
  const int n = int(hc.value.size());
  std::vector<int> who, deepest;
  std::vector<T> weight;
  for (int j = 0; j < n; ++j) {
    if (!(hc.value[j][i] >= price)) continue;
    int dj = i;
    for (int pos = k; pos > i; --pos)
      if (hc.value[j][pos] >= price) {
        dj = pos;
        break;
      }
    T w = price - beta[j];
    if (w < T(0)) w = T(0);
    who.push_back(j);
    deepest.push_back(dj);
    weight.push_back(w);
  }
  LinearProgram<T> lp;
  for (const auto& w : weight) lp.add_variable(w);
  int tr = lp.add_row(RowSense::EQ, NumericTraits<T>::from_long(t));
  for (size_t c = 0; c < who.size(); ++c) {
    lp.add_coeff(tr, int(c), T(1));
    int ub = lp.add_row(RowSense::LE, T(1));  // Z_j <= 1
    lp.add_coeff(ub, int(c), T(1));
  }
  for (int lam = i; lam < int(hc.chain.size()); ++lam) {
    long cap = hc.mincap[lam] - used;
    int row = lp.add_row(RowSense::LE, NumericTraits<T>::from_long(std::max(cap, 0L)));
    for (size_t c = 0; c < who.size(); ++c)
      if (deepest[c] <= lam) lp.add_coeff(row, int(c), T(1));
  }
  if (lp.solve(LpDirection::Maximize) != LpStatus::Optimal) return out;
  out.feasible = true;
  out.value = lp.objective_value();
  for (const auto& z : lp.primal()) {
    double v = to_double(z);
    out.max_fractionality = std::max(out.max_fractionality, std::abs(v - std::round(v)));
  }
  return out;
}

template <class T>
struct VoucherDpResult {
  CliqueSolution<T> solution;  // single interval per customer
  T relaxed_value = T(0);      // exact optimum of the multi-buy relaxation
  T value = T(0);              // voucher surplus of `solution`
};

/// Voucher pricing on a half-clique: a dynamic program over (price level,
/// chain position, buyers so far) solves the relaxation in which a customer
/// may buy several intervals as long as their prices differ; keeping only
/// each customer's most expensive purchase costs at most a factor 2 because
/// the grid is geometric.
template <class T>
VoucherDpResult<T> voucher_dp(const HalfCliqueProblem<T>& hc, const std::vector<T>& beta,
                              const std::vector<T>& prices, long used = 0) {
  VoucherDpResult<T> out;
  const int len = int(hc.chain.size());
  const int n = int(hc.value.size());
  const int q_count = int(prices.size());
  out.solution.chain_price_idx.assign(len, -1);
  out.solution.assigned_pos.assign(n, -1);
  out.solution.paid_idx.assign(n, -1);
  if (len == 0 || q_count == 0) return out;

  // U counts purchases, not customers (the relaxation lets a customer buy at
  // several price levels). Its reachable range is capped by the chain's
  // largest residual capacity; the top state is saturated (no further buys).
  long cap = 0;
  for (long mc : hc.mincap) cap = std::max(cap, mc - used);
  const int umax = int(std::min<long>(std::max(cap, 0L), long(n) * q_count));

  // f[q][i][U]; q == q_count or i == len act as zero boundaries.
  auto idx = [&](int q, int i, int U) { return (q * (len + 1) + i) * (umax + 1) + U; };
  std::vector<T> f((q_count + 1) * (len + 1) * (umax + 1), T(0));
  struct Move {
    int k = -1, t = 0;
  };
  std::vector<Move> arg((q_count + 1) * (len + 1) * (umax + 1));
  for (int q = q_count - 1; q >= 0; --q) {
    for (int i = len - 1; i >= 0; --i) {
      for (int U = umax; U >= 0; --U) {
        T best = f[idx(q + 1, i, U)];  // empty block at this price
        Move bm{i - 1, 0};
        for (int k = i; k < len; ++k) {
          auto order = pack_block_greedy(hc, i, k, prices[q], used + U, beta);
          T acc(0);
          for (int t = 1; t <= int(order.size()); ++t) {
            acc += order[t - 1].weight;
            T cand = acc + f[idx(q + 1, k + 1, int(std::min<long>(U + t, umax)))];
            if (cand > best) {
              best = cand;
              bm = {k, t};
            }
          }
          // t = 0 with a nonempty block only renames prices; covered by the
          // empty-block move and deeper blocks.
          T cand0 = f[idx(q + 1, k + 1, U)];
          if (cand0 > best) {
            best = cand0;
            bm = {k, 0};
          }
        }
        f[idx(q, i, U)] = best;
        arg[idx(q, i, U)] = bm;
      }
    }
  }
  out.relaxed_value = f[idx(0, 0, 0)];

  // Reconstruct: walk the argmaxes, rebuild each block's packing, and keep
  // only the first (highest-priced) purchase per customer.
  int q = 0, i = 0, U = 0;
  while (q < q_count && i < len) {
    Move mv = arg[idx(q, i, U)];
    if (mv.k >= i) {
      auto pack = interval_pack(hc, i, mv.k, prices[q], mv.t, used + U, beta);
      for (int pos = i; pos <= mv.k; ++pos) out.solution.chain_price_idx[pos] = q;
      for (auto [j, pos] : pack.chosen) {
        if (out.solution.assigned_pos[j] >= 0) continue;  // keep the dearest
        out.solution.assigned_pos[j] = pos;
        out.solution.paid_idx[j] = q;
        T w = prices[q] - beta[j];
        if (w > T(0)) out.value += w;
      }
      i = mv.k + 1;
      U = int(std::min<long>(U + mv.t, umax));
    }
    ++q;
  }
  return out;
}

/// Restricted primal of the configuration LP together with the scaled dual
/// certificate produced at termination.
template <class T>
struct ConfigLpSolution {
  std::vector<T> prices;  // positive price list (descending)
  struct Column {
    int clique;
    CliqueSolution<T> sol;
    T x = T(0);
  };
  std::vector<Column> columns;
  std::vector<std::vector<T>> y;  // y[j][price idx]
  T objective = T(0);
  std::vector<T> cert_alpha;  // clique duals
  std::vector<T> cert_beta;   // customer duals
  T cert_scale = T(1);        // multiply cert_alpha by this for dual feasibility
  long pricer_calls = 0;
};

/// Pricing oracle contract: best-effort clique solution for voucher weights
/// beta; `scale` bounds (exact voucher optimum) / (returned value).
template <class T>
struct CliquePricer {
  T scale;
  std::function<VoucherDpResult<T>(int clique, const std::vector<T>& beta)> solve;
};

template <class T>
ConfigLpSolution<T> solve_config_lp(int n, const std::vector<T>& prices, int clique_count,
                                    const CliquePricer<T>& pricer) {
  const T tol = NumericTraits<T>::tolerance();
  ConfigLpSolution<T> out;
  out.prices = prices;
  out.cert_scale = pricer.scale;

  // Start from the all-zero solution per clique.
  for (int i = 0; i < clique_count; ++i) {
    typename ConfigLpSolution<T>::Column c;
    c.clique = i;
    c.sol.assigned_pos.assign(n, -1);
    c.sol.paid_idx.assign(n, -1);
    out.columns.push_back(std::move(c));
  }

  const int P = int(prices.size());
  for (int round = 0;; ++round) {
    if (round > 2000) throw NumericFailure("configuration LP did not converge");
    LinearProgram<T> lp;
    for (const auto& col : out.columns) {
      (void)col;
      lp.add_variable(T(0));
    }
    // y_{j,p} variables, objective p.
    auto yvar = [&](int j, int p) { return int(out.columns.size()) + j * P + p; };
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < P; ++p) lp.add_variable(prices[p]);
    std::vector<int> clique_rows, customer_rows;
    for (int i = 0; i < clique_count; ++i) clique_rows.push_back(lp.add_row(RowSense::EQ, T(1)));
    for (int j = 0; j < n; ++j) customer_rows.push_back(lp.add_row(RowSense::LE, T(1)));
    std::vector<std::vector<int>> yp_rows(n, std::vector<int>(P));
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < P; ++p) {
        yp_rows[j][p] = lp.add_row(RowSense::LE, T(0));
        lp.add_coeff(yp_rows[j][p], yvar(j, p), T(1));
        lp.add_coeff(customer_rows[j], yvar(j, p), T(1));
      }
    for (size_t c = 0; c < out.columns.size(); ++c) {
      lp.add_coeff(clique_rows[out.columns[c].clique], int(c), T(1));
      for (int j = 0; j < n; ++j) {
        int p = out.columns[c].sol.paid_idx.empty() ? -1 : out.columns[c].sol.paid_idx[j];
        if (p >= 0) lp.add_coeff(yp_rows[j][p], int(c), T(-1));
      }
    }
    lp.solve_or_throw(LpDirection::Maximize);

    std::vector<T> alpha(clique_count), betav(n);
    for (int i = 0; i < clique_count; ++i) alpha[i] = lp.duals()[clique_rows[i]];
    for (int j = 0; j < n; ++j) betav[j] = lp.duals()[customer_rows[j]];

    bool added = false;
    for (int i = 0; i < clique_count; ++i) {
      ++out.pricer_calls;
      VoucherDpResult<T> priced = pricer.solve(i, betav);
      if (priced.value > alpha[i] + tol) {
        for (const auto& col : out.columns)
          if (col.clique == i && col.sol == priced.solution)
            throw NoProgress("pricer repeated an existing configuration column");
        typename ConfigLpSolution<T>::Column c;
        c.clique = i;
        c.sol = priced.solution;
        out.columns.push_back(std::move(c));
        added = true;
      }
    }
    if (!added) {
      out.objective = lp.objective_value();
      for (size_t c = 0; c < out.columns.size(); ++c) out.columns[c].x = lp.primal()[int(c)];
      out.y.assign(n, std::vector<T>(P, T(0)));
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < P; ++p) out.y[j][p] = lp.primal()[yvar(j, p)];
      out.cert_alpha = alpha;
      out.cert_beta = betav;
      return out;
    }
  }
}

/// Independent per-clique choice by the x weights; every customer then joins
/// the clique paying her the most (ties toward the lowest clique index).
template <class T>
struct RoundedConfig {
  std::vector<int> choice;           // per clique: index into `columns`
  std::vector<int> assigned_clique;  // per customer, -1 if none
  T profit = T(0);
  std::vector<T> trial_profits;
};

template <class T>
RoundedConfig<T> round_config(const ConfigLpSolution<T>& sol, int clique_count, int n,
                              std::mt19937_64& rng, int trials) {
  std::vector<std::vector<int>> by_clique(clique_count);
  for (size_t c = 0; c < sol.columns.size(); ++c)
    by_clique[sol.columns[c].clique].push_back(int(c));

  RoundedConfig<T> best;
  bool have = false;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    RoundedConfig<T> cur;
    cur.choice.assign(clique_count, -1);
    cur.assigned_clique.assign(n, -1);
    for (int i = 0; i < clique_count; ++i) {
      double r = double(rng() >> 11) * 0x1.0p-53;
      double acc = 0;
      for (int c : by_clique[i]) {
        acc += to_double(sol.columns[c].x);
        cur.choice[i] = c;
        if (r < acc) break;
      }
    }
    for (int j = 0; j < n; ++j) {
      int best_p = -1, best_i = -1;
      for (int i = 0; i < clique_count; ++i) {
        int c = cur.choice[i];
        if (c < 0) continue;
        int p = sol.columns[c].sol.paid_idx[j];
        if (p < 0) continue;
        if (best_p < 0 || p < best_p) {  // smaller index = higher price
          best_p = p;
          best_i = i;
        }
      }
      if (best_i >= 0) {
        cur.assigned_clique[j] = best_i;
        cur.profit += sol.prices[best_p];
      }
    }
    best.trial_profits.push_back(cur.profit);
    if (!have || cur.profit > best.profit) {
      auto tp = std::move(best.trial_profits);
      best = cur;
      best.trial_profits = std::move(tp);
      have = true;
    }
  }
  return best;
}

namespace detail {

/// Listed intervals of a customer; explicit encodings must be contiguous.
template <class T>
std::vector<IntervalRef> listed_intervals(const Valuation<T>& v) {
  std::vector<IntervalRef> out;
  for (ItemSet s : v.candidate_sets()) {
    if (s.empty()) continue;
    auto items = s.items();
    if (items.back() - items.front() + 1 != int(items.size()))
      throw InvalidInstance("highway customer set is not an interval");
    out.push_back({items.front(), items.back()});
  }
  return out;
}

}  // namespace detail

/// Item prices from per-clique chain prices: within a chain, the difference
/// p(T_pos) - p(T_pos+1) lands on the lowest-index edge of T_pos \ T_pos+1
/// and the remaining chain edges are free, so interval prices reconstruct
/// exactly by telescoping. Edges untouched by any chain keep `idle_price`.
template <class T>
PriceVector<T> to_item_prices(const std::vector<HalfCliqueProblem<T>>& cliques,
                              const std::vector<const CliqueSolution<T>*>& chosen,
                              const std::vector<T>& prices, int m, const T& idle_price) {
  PriceVector<T> out(m, idle_price);
  for (size_t i = 0; i < cliques.size(); ++i) {
    const auto& chain = cliques[i].chain;
    if (chain.empty()) continue;
    auto price_of = [&](int pos) {
      if (pos >= int(chosen[i]->chain_price_idx.size())) return T(0);
      int idx = chosen[i]->chain_price_idx[pos];
      return idx < 0 ? T(0) : prices[idx];
    };
    for (int pos = 0; pos + 1 < int(chain.size()); ++pos)
      if (price_of(pos) < price_of(pos + 1))
        throw MonotoneViolation("chain prices increase along the nesting");
    for (int e : chain.front().items()) out.p[e] = T(0);
    for (int pos = 0; pos < int(chain.size()); ++pos) {
      ItemSet diff = chain[pos].minus(pos + 1 < int(chain.size()) ? chain[pos + 1] : ItemSet());
      T delta = price_of(pos) - price_of(pos + 1);
      if (diff.empty()) {
        if (delta != T(0)) throw MonotoneViolation("price step on an empty chain difference");
        continue;
      }
      out.p[diff.lowest()] = delta;
    }
  }
  return out;
}

enum class HighwayMode { Subadditive, Unlimited };

template <class T>
struct HighwayGroupReport {
  int group = 0;
  int clique_count = 0;
  T lp_value = T(0);
  long pricer_calls = 0;
  T profit = T(0);
  std::vector<T> trial_profits;
};

template <class T>
struct HighwayResult {
  PricedOutcome<T> outcome;
  int interval_count = 0;
  int group_count = 0;
  T grid_base = T(0);
  int grid_size = 0;
  std::vector<HighwayGroupReport<T>> groups;
};

/// Line pipeline: decompose listed intervals into groups of item-disjoint
/// cliques, trim each clique to a one-sided chain, price the chains through
/// the configuration LP with the voucher DP as the column oracle, round, and
/// return the most profitable group's outcome.
template <class T>
HighwayResult<T> highway_run(const Instance<T>& inst, HighwayMode mode, int trials,
                             uint64_t seed) {
  if (inst.kind != Kind::Highway && inst.kind != Kind::Products)
    throw ModeMismatch("highway pipeline requires a highway or products instance");
  const int n = inst.n();
  if (mode == HighwayMode::Unlimited) {
    for (long c : inst.capacities)
      if (c < n) throw ModeMismatch("unlimited mode requires capacities >= customer count");
  } else {
    for (const auto& cust : inst.customers) {
      auto ivals = detail::listed_intervals(cust);
      std::vector<std::tuple<int, int, T>> entries;
      for (const auto& iv : ivals)
        entries.emplace_back(iv.a, iv.b, cust.value(iv.items()));
      if (!entries.empty() &&
          !check_subadditive(Valuation<T>::intervals(entries), inst.m))
        throw ModeMismatch("subadditive mode on a non-subadditive interval valuation");
    }
  }

  HighwayResult<T> result;
  std::vector<IntervalRef> all;
  for (const auto& cust : inst.customers)
    for (const auto& iv : detail::listed_intervals(cust)) all.push_back(iv);
  CliqueSet cs = interval_decompose(all);
  result.interval_count = cs.interval_count;
  result.group_count = int(cs.groups.size());

  T base(0);
  for (const auto& cust : inst.customers) base = std::max(base, cust.max_value());
  PriceGrid<T> grid = make_price_grid(base, inst.m, std::max(n, 1));
  result.grid_base = base;
  result.grid_size = int(grid.prices.size());

  result.outcome.prices = PriceVector<T>(inst.m, unsellable_price(inst));
  result.outcome.allocation = Allocation(n);
  result.outcome.profit = T(0);
  result.outcome.provenance = "highway/empty";
  if (grid.prices.empty() || cs.groups.empty()) return result;

  std::vector<long> caps = inst.capacities;
  if (mode == HighwayMode::Unlimited)
    for (auto& c : caps) c = std::max<long>(c, n);

  std::mt19937_64 rng(seed);
  bool have = false;
  for (int g = 0; g < int(cs.groups.size()); ++g) {
    auto halves = trim(cs.groups[g], mode == HighwayMode::Subadditive ? TrimMode::Subadditive
                                                                      : TrimMode::Unlimited,
                       rng);
    HighwayGroupReport<T> rep;
    rep.group = g;
    rep.clique_count = int(halves.size());
    if (halves.empty()) {
      result.groups.push_back(rep);
      continue;
    }
    std::vector<HalfCliqueProblem<T>> problems;
    for (const auto& h : halves) problems.push_back(make_half_clique_problem(h, inst, caps));

    CliquePricer<T> pricer;
    pricer.scale = T(2);
    pricer.solve = [&problems, &grid](int clique, const std::vector<T>& beta) {
      return voucher_dp(problems[clique], beta, grid.prices);
    };
    auto sol = solve_config_lp(n, grid.prices, int(problems.size()), pricer);
    rep.lp_value = sol.objective;
    rep.pricer_calls = sol.pricer_calls;

    auto rounded = round_config(sol, int(problems.size()), n, rng, trials);
    rep.profit = rounded.profit;
    rep.trial_profits = rounded.trial_profits;

    std::vector<const CliqueSolution<T>*> chosen(problems.size(), nullptr);
    for (int i = 0; i < int(problems.size()); ++i)
      chosen[i] = &sol.columns[rounded.choice[i]].sol;
    PriceVector<T> prices = to_item_prices(
        problems, chosen, grid.prices, inst.m,
        mode == HighwayMode::Subadditive ? unsellable_price(inst) : T(0));
    Allocation alloc(n);
    for (int j = 0; j < n; ++j) {
      int i = rounded.assigned_clique[j];
      if (i < 0) continue;
      int pos = chosen[i]->assigned_pos[j];
      alloc.sets[j] = problems[i].chain[pos];
    }
    PricedOutcome<T> outcome;
    outcome.prices = prices;
    outcome.allocation = alloc;
    outcome.profit = evaluate(inst, prices, alloc);
    outcome.provenance = "highway/group-" + std::to_string(g);
    result.groups.push_back(rep);
    if (!have || outcome.profit > result.outcome.profit) {
      have = true;
      result.outcome = outcome;
    }
  }
  return result;
}

template <class T>
struct MaxbuyResult {
  PricedOutcome<T> outcome;
  T lp_value = T(0);
  std::vector<T> trial_profits;
};

/// Multi-product pricing: every item is its own single-interval clique, the
/// candidate prices are the distinct customer values on that item (no grid),
/// and the per-item pricing problem is solved exactly, so the configuration
/// LP value is exact and rounding loses only the (1 - 1/e) factor.
template <class T>
MaxbuyResult<T> maxbuy_run(const Instance<T>& inst, int trials, uint64_t seed) {
  if (inst.kind != Kind::Products)
    throw ModeMismatch("max-buy pipeline requires a products instance");
  const int n = inst.n();
  const int m = inst.m;

  // Item values per customer and the global candidate price list.
  std::vector<std::vector<T>> val(n, std::vector<T>(m, T(0)));
  for (int j = 0; j < n; ++j)
    for (int e = 0; e < m; ++e) val[j][e] = inst.customers[j].value(ItemSet::single(e));
  std::vector<T> prices;
  for (int e = 0; e < m; ++e)
    for (int j = 0; j < n; ++j)
      if (val[j][e] > T(0)) prices.push_back(val[j][e]);
  std::sort(prices.begin(), prices.end(), std::greater<T>());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());

  MaxbuyResult<T> result;
  result.outcome.prices = PriceVector<T>(m, unsellable_price(inst));
  result.outcome.allocation = Allocation(n);
  result.outcome.provenance = "maxbuy";
  if (prices.empty()) return result;

  std::vector<HalfCliqueProblem<T>> problems(m);
  for (int e = 0; e < m; ++e) {
    problems[e].chain = {ItemSet::single(e)};
    problems[e].mincap = {inst.capacities[e]};
    problems[e].value.assign(n, std::vector<T>(1, T(0)));
    for (int j = 0; j < n; ++j) problems[e].value[j][0] = val[j][e];
  }

  CliquePricer<T> pricer;
  pricer.scale = T(1);
  pricer.solve = [&](int item, const std::vector<T>& beta) {
    // Exact: for each candidate price take the top affordable surpluses up to
    // the capacity.
    VoucherDpResult<T> best;
    best.solution.chain_price_idx = {-1};
    best.solution.assigned_pos.assign(n, -1);
    best.solution.paid_idx.assign(n, -1);
    for (int p = 0; p < int(prices.size()); ++p) {
      std::vector<std::pair<T, int>> surplus;  // (gamma~, customer)
      for (int j = 0; j < n; ++j) {
        if (!(val[j][item] >= prices[p])) continue;
        T w = prices[p] - beta[j];
        if (w > T(0)) surplus.push_back({w, j});
      }
      std::sort(surplus.begin(), surplus.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
      });
      T total(0);
      long take = std::min<long>(inst.capacities[item], long(surplus.size()));
      for (long i = 0; i < take; ++i) total += surplus[i].first;
      if (total > best.value) {
        best.value = total;
        best.relaxed_value = total;
        best.solution.chain_price_idx = {p};
        best.solution.assigned_pos.assign(n, -1);
        best.solution.paid_idx.assign(n, -1);
        for (long i = 0; i < take; ++i) {
          best.solution.assigned_pos[surplus[i].second] = 0;
          best.solution.paid_idx[surplus[i].second] = p;
        }
      }
    }
    return best;
  };

  auto sol = solve_config_lp(n, prices, m, pricer);
  result.lp_value = sol.objective;
  std::mt19937_64 rng(seed);
  auto rounded = round_config(sol, m, n, rng, trials);
  result.trial_profits = rounded.trial_profits;

  std::vector<const CliqueSolution<T>*> chosen(m, nullptr);
  for (int e = 0; e < m; ++e) chosen[e] = &sol.columns[rounded.choice[e]].sol;
  PriceVector<T> itemp =
      to_item_prices(problems, chosen, prices, m, unsellable_price(inst));
  Allocation alloc(n);
  for (int j = 0; j < n; ++j) {
    int e = rounded.assigned_clique[j];
    if (e >= 0) alloc.sets[j] = ItemSet::single(e);
  }
  result.outcome.prices = itemp;
  result.outcome.allocation = alloc;
  result.outcome.profit = evaluate(inst, itemp, alloc);
  return result;
}

}  // namespace capri
