#pragma once

#include <functional>
#include <map>
#include <vector>

#include "capri/lpkit.hpp"
#include "capri/swm.hpp"

namespace capri {

/// Exact maximum-weight capacity-feasible allocation over an explicit
/// weighted column list (at most one column per customer). Used as the
/// pricing machine behind decompositions and as the exact gap verifier.
template <class T>
Allocation max_weight_allocation(int n, int m, const std::vector<long>& k,
                                 const std::map<ColumnKey, T>& weights) {
  std::vector<std::vector<std::pair<ItemSet, T>>> cands(n);
  for (const auto& [key, w] : weights)
    if (!key.set.empty() && w > T(0)) cands[key.customer].push_back({key.set, w});
  std::vector<T> best_w(n, T(0));
  for (int j = 0; j < n; ++j)
    for (const auto& [s, w] : cands[j]) best_w[j] = std::max(best_w[j], w);
  std::vector<T> suffix(n + 1, T(0));
  for (int j = n - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + best_w[j];

  std::vector<long> used(m, 0);
  Allocation current(n), best(n);
  T best_score(-1);
  std::function<void(int, T)> dfs = [&](int j, T score) {
    if (score + suffix[j] <= best_score) return;
    if (j == n) {
      best_score = score;
      best = current;
      return;
    }
    dfs(j + 1, score);
    for (const auto& [s, w] : cands[j]) {
      bool fits = true;
      for (int e : s.items())
        if (used[e] + 1 > k[e]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (int e : s.items()) ++used[e];
      current.sets[j] = s;
      dfs(j + 1, score + w);
      current.sets[j] = ItemSet();
      for (int e : s.items()) --used[e];
    }
  };
  dfs(0, T(0));
  return best;
}

/// Contract: given per-column weights, returns a capacity-feasible integral
/// allocation over the weighted columns worth at least
/// (weighted LP optimum) / declared_factor.
template <class T>
struct GapVerifier {
  T declared_factor;
  std::function<Allocation(const Instance<T>&, const std::vector<long>&,
                           const std::map<ColumnKey, T>&)>
      solve;
};

/// Exact integer search as a verifier. Its honest declared factor is n: any
/// weighted assignment LP is at most n times its best single column, and a
/// single column is always a feasible integral allocation. The adaptive
/// decomposition recovers the instance's true (much smaller) scale anyway.
template <class T>
GapVerifier<T> exact_gap_verifier(int n) {
  GapVerifier<T> v;
  v.declared_factor = NumericTraits<T>::from_long(std::max(n, 1));
  v.solve = [](const Instance<T>& inst, const std::vector<long>& k,
               const std::map<ColumnKey, T>& w) {
    return max_weight_allocation(inst.n(), inst.m, k, w);
  };
  return v;
}

/// Convex combination of integral allocations dominating x / alpha_used.
/// After construction the combination is trimmed to satisfy
///   sum_r lambda_r xhat^r = x_{j,S} / alpha_used   componentwise,
/// so sampling hits each support column with probability exactly
/// x / alpha_used (and never more than x itself).
template <class T>
struct ConvexDecomposition {
  struct Term {
    T lambda;
    Allocation allocation;
  };
  std::vector<Term> terms;
  T alpha_used = T(1);

  T mass(const ColumnKey& key) const {
    T s(0);
    for (const auto& t : terms)
      if (t.allocation.sets[key.customer] == key.set) s += t.lambda;
    return s;
  }
};

template <class T>
ConvexDecomposition<T> decompose(const FractionalAssignment<T>& x, const Instance<T>& inst,
                                 const std::vector<long>& k, const GapVerifier<T>& verifier) {
  const T tol = NumericTraits<T>::tolerance();
  const int n = inst.n();
  ConvexDecomposition<T> out;

  std::vector<ColumnKey> support;
  for (const auto& [key, w] : x.weight)
    if (w > T(0)) support.push_back(key);

  if (support.empty()) {
    out.terms.push_back({T(1), Allocation(n)});
    return out;
  }
  if (x.integral()) {
    out.terms.push_back({T(1), x.to_allocation(n)});
    return out;
  }

  auto column_of = [&](const Allocation& a) {
    std::vector<T> col(support.size(), T(0));
    for (size_t i = 0; i < support.size(); ++i)
      if (a.sets[support[i].customer] == support[i].set) col[i] = T(1);
    return col;
  };
  auto validate_support = [&](const Allocation& a) {
    for (int j = 0; j < n; ++j) {
      if (a.sets[j].empty()) continue;
      if (x.weight.find({j, a.sets[j]}) == x.weight.end())
        throw VerifierContractBroken("verifier assigned a set outside the support");
    }
  };

  // Seed columns: the empty allocation plus the verifier's answer on x itself.
  std::vector<Allocation> allocs{Allocation(n)};
  {
    Allocation seeded = verifier.solve(inst, k, x.weight);
    validate_support(seeded);
    allocs.push_back(seeded);
  }

  std::vector<ColumnKey> support_cols = support;
  T theta(0);
  for (int iter = 0;; ++iter) {
    if (iter > 5000) throw NumericFailure("decomposition column generation did not converge");
    LinearProgram<T> lp;
    int theta_var = lp.add_variable(T(1));
    for (size_t r = 0; r < allocs.size(); ++r) lp.add_variable(T(0));
    std::vector<int> cover_rows;
    for (size_t i = 0; i < support.size(); ++i) {
      int row = lp.add_row(RowSense::GE, T(0));
      lp.add_coeff(row, theta_var, T(-x.weight.at(support[i])));
      cover_rows.push_back(row);
    }
    int sum_row = lp.add_row(RowSense::EQ, T(1));
    int cap_row = lp.add_row(RowSense::LE, T(1));
    lp.add_coeff(cap_row, theta_var, T(1));
    for (size_t r = 0; r < allocs.size(); ++r) {
      auto col = column_of(allocs[r]);
      for (size_t i = 0; i < support.size(); ++i)
        if (col[i] != T(0)) lp.add_coeff(cover_rows[i], int(r) + 1, T(1));
      lp.add_coeff(sum_row, int(r) + 1, T(1));
    }
    lp.solve_or_throw(LpDirection::Maximize);
    theta = lp.objective_value();

    // Pricing: maximize the dual weights over integral allocations.
    std::map<ColumnKey, T> w;
    for (size_t i = 0; i < support.size(); ++i) {
      T wi = -lp.duals()[cover_rows[i]];
      if (wi > T(0)) w[support[i]] = wi;
    }
    T delta = lp.duals()[sum_row];
    Allocation priced = verifier.solve(inst, k, w);
    validate_support(priced);
    T score(0);
    for (int j = 0; j < n; ++j) {
      auto it = w.find({j, priced.sets[j]});
      if (it != w.end()) score += it->second;
    }

    // Verifier contract: the weighted welfare must reach LP/alpha.
    {
      std::vector<ColumnKey> wcols;
      std::vector<T> wvals;
      for (const auto& [key, wi] : w) {
        wcols.push_back(key);
        wvals.push_back(wi);
      }
      if (!wcols.empty()) {
        T wlp = solve_weighted_lp(n, k, wcols, wvals).opt;
        if (score * verifier.declared_factor < wlp - tol) {
          std::string msg = "verifier returned " + format_number(score) + " < " +
                            format_number(wlp) + " / " + format_number(verifier.declared_factor) +
                            " on weights:";
          for (const auto& [key, wi] : w)
            msg += " (" + std::to_string(key.customer) + "," + key.set.to_string() + ")=" +
                   format_number(wi);
          throw VerifierContractBroken(msg);
        }
      }
    }

    if (score <= delta + tol) {
      // No improving column: recover lambdas and stop.
      out.terms.clear();
      for (size_t r = 0; r < allocs.size(); ++r)
        if (lp.primal()[int(r) + 1] > T(0)) out.terms.push_back({lp.primal()[int(r) + 1], allocs[r]});
      break;
    }
    bool duplicate = false;
    auto pcol = column_of(priced);
    for (const auto& a : allocs)
      if (column_of(a) == pcol) duplicate = true;
    if (duplicate) throw NoProgress("pricing returned an existing decomposition column");
    allocs.push_back(priced);
  }

  if (!(theta > T(0))) throw NumericFailure("decomposition scale collapsed to zero");
  out.alpha_used = T(1) / theta;

  // Trim the over-covered components down to equality by cloning terms and
  // deleting the assignment from the clone.
  for (const auto& key : support) {
    T target = theta * x.weight.at(key);
    T excess = out.mass(key) - target;
    if (!(excess > tol)) continue;
    size_t count = out.terms.size();
    for (size_t r = 0; r < count && excess > T(0); ++r) {
      auto& term = out.terms[r];
      if (term.allocation.sets[key.customer] != key.set) continue;
      if (term.lambda <= excess) {
        excess -= term.lambda;
        term.allocation.sets[key.customer] = ItemSet();
      } else {
        typename ConvexDecomposition<T>::Term clone{excess, term.allocation};
        clone.allocation.sets[key.customer] = ItemSet();
        term.lambda -= excess;
        excess = T(0);
        out.terms.push_back(std::move(clone));
      }
    }
  }
  return out;
}

/// Draws one allocation with probability lambda_r. Deterministic for a fixed
/// generator state.
template <class T>
const Allocation& sample(const ConvexDecomposition<T>& d, std::mt19937_64& rng) {
  double u = double(rng() >> 11) * 0x1.0p-53;
  double acc = 0;
  for (const auto& t : d.terms) {
    acc += to_double(t.lambda);
    if (u < acc) return t.allocation;
  }
  return d.terms.back().allocation;
}

}  // namespace capri
