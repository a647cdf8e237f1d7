#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "capri/core.hpp"

namespace capri {

/// Seeded RNG with platform-independent helpers, so that fixed seeds produce
/// byte-identical instances everywhere.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(uint64_t seed) : eng(seed) {}

  /// Uniform in [lo, hi], inclusive.
  long uniform_int(long lo, long hi) {
    if (hi <= lo) return lo;
    return lo + long(eng() % uint64_t(hi - lo + 1));
  }

  double uniform01() { return double(eng() >> 11) * 0x1.0p-53; }

  /// Child generator for an independent, reproducible stream.
  Rng fork(uint64_t salt) {
    return Rng(eng() ^ (salt * 0x9e3779b97f4a7c15ULL + 0x100000001b3ULL));
  }
};

/// One item in supply n; customer j (1-based) values it at 1/j. The welfare
/// optimum is H_n while the best item-pricing profit is exactly 1.
template <class T>
Instance<T> gen_gap(int n) {
  Instance<T> inst;
  inst.kind = Kind::Products;
  inst.m = 1;
  inst.capacities = {long(n)};
  for (int j = 1; j <= n; ++j) {
    std::vector<typename Valuation<T>::Entry> e;
    e.push_back({ItemSet::single(0), T(1) / NumericTraits<T>::from_long(j)});
    inst.customers.push_back(Valuation<T>::explicit_sets(std::move(e)));
  }
  inst.validate();
  return inst;
}

struct GenSpec {
  Kind kind = Kind::General;
  int m = 4;
  int n = 4;
  int sets_per_customer = 3;
  long cap_max = 3;
  uint64_t seed = 1;
  // General instances draw this encoding; Tree/Highway/Products fix their own.
  Encoding encoding = Encoding::Explicit;
  // Table instances are coverage valuations (weighted item-cover of ground
  // elements), which are subadditive by construction. When `interval_cover`
  // is set, item e covers ground cells {e, e+1}, giving line-structured
  // coverage without leaving the table encoding.
  bool interval_cover = false;
  // Highway instances: list every subinterval of a random window with value
  // sum-of-edge-weights plus a constant, which keeps the derived interval
  // valuation subadditive over interval unions.
  bool subadditive_intervals = false;
};

namespace detail {

template <class T>
T random_value(Rng& rng) {
  // Small rationals: numerator 1..12 over denominator 1..4 keeps exact mode
  // exact and denominators diverse.
  long num = rng.uniform_int(1, 12);
  long den = rng.uniform_int(1, 4);
  return NumericTraits<T>::from_long(num) / NumericTraits<T>::from_long(den);
}

template <class T>
Valuation<T> random_explicit(Rng& rng, int m, int sets) {
  std::vector<typename Valuation<T>::Entry> entries;
  for (int s = 0; s < sets; ++s) {
    ItemSet set;
    int size = int(rng.uniform_int(1, std::min(m, 3)));
    for (int i = 0; i < size; ++i) set = set.with(int(rng.uniform_int(0, m - 1)));
    entries.push_back({set, random_value<T>(rng)});
  }
  return Valuation<T>::explicit_sets(std::move(entries));
}

template <class T>
Valuation<T> random_interval(Rng& rng, int m, int sets) {
  std::vector<std::tuple<int, int, T>> ivals;
  for (int s = 0; s < sets; ++s) {
    int a = int(rng.uniform_int(0, m - 1));
    int b = int(rng.uniform_int(a, std::min(m - 1, a + 3)));
    ivals.emplace_back(a, b, random_value<T>(rng));
  }
  return Valuation<T>::intervals(ivals);
}

/// All subintervals of a window [a, b], valued sum-of-edge-weights plus a
/// constant. Such valuations satisfy v(A) + v(B) >= v(A u B) whenever the
/// union is an interval.
template <class T>
Valuation<T> random_subadditive_interval(Rng& rng, int m) {
  int a = int(rng.uniform_int(0, m - 1));
  int b = int(rng.uniform_int(a, std::min(m - 1, a + 3)));
  std::vector<T> w(size_t(b - a + 1));
  for (auto& x : w) x = NumericTraits<T>::from_long(rng.uniform_int(0, 4));
  T base = NumericTraits<T>::from_long(rng.uniform_int(0, 3));
  std::vector<std::tuple<int, int, T>> ivals;
  for (int lo = a; lo <= b; ++lo) {
    T acc = base;
    for (int hi = lo; hi <= b; ++hi) {
      acc += w[size_t(hi - a)];
      if (acc > T(0)) ivals.emplace_back(lo, hi, acc);
    }
  }
  if (ivals.empty()) ivals.emplace_back(a, a, T(0));
  return Valuation<T>::intervals(ivals);
}

/// Coverage valuation: ground cells with weights, each item covers a few
/// cells, v(S) = total weight covered.
template <class T>
Valuation<T> random_coverage(Rng& rng, int m, bool interval_cover) {
  int ground = interval_cover ? m + 1 : m + 2;
  std::vector<T> weight(ground);
  for (auto& w : weight) w = NumericTraits<T>::from_long(rng.uniform_int(0, 5));
  std::vector<uint64_t> covers(m, 0);
  for (int e = 0; e < m; ++e) {
    if (interval_cover) {
      covers[e] = (uint64_t{1} << e) | (uint64_t{1} << (e + 1));
    } else {
      int k = int(rng.uniform_int(1, 3));
      for (int i = 0; i < k; ++i) covers[e] |= uint64_t{1} << rng.uniform_int(0, ground - 1);
    }
  }
  std::vector<T> table(size_t{1} << m, T(0));
  for (uint64_t mask = 1; mask < table.size(); ++mask) {
    uint64_t cells = 0;
    for (int e = 0; e < m; ++e)
      if ((mask >> e) & 1) cells |= covers[e];
    T v(0);
    for (int g = 0; g < ground; ++g)
      if ((cells >> g) & 1) v += weight[g];
    table[mask] = v;
  }
  return Valuation<T>::table(m, std::move(table));
}

template <class T>
Valuation<T> random_unit_demand(Rng& rng, int m) {
  std::vector<T> w(m);
  for (auto& v : w) v = random_value<T>(rng);
  return Valuation<T>::unit_demand(std::move(w));
}

inline std::vector<std::pair<int, int>> random_tree(Rng& rng, int edges) {
  std::vector<std::pair<int, int>> out;
  for (int v = 1; v <= edges; ++v) out.emplace_back(int(rng.uniform_int(0, v - 1)), v);
  return out;
}

/// Edge set of the unique path between two vertices of a tree.
inline ItemSet tree_path_edges(const std::vector<std::pair<int, int>>& edges, int a, int b) {
  int vertices = int(edges.size()) + 1;
  std::vector<int> parent(vertices, -1), parent_edge(vertices, -1);
  std::vector<std::vector<std::pair<int, int>>> adj(vertices);
  for (int e = 0; e < int(edges.size()); ++e) {
    adj[edges[e].first].push_back({edges[e].second, e});
    adj[edges[e].second].push_back({edges[e].first, e});
  }
  std::vector<int> stack{a};
  std::vector<bool> seen(vertices, false);
  seen[a] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [w, e] : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        parent_edge[w] = e;
        stack.push_back(w);
      }
  }
  ItemSet path;
  for (int v = b; v != a; v = parent[v]) path = path.with(parent_edge[v]);
  return path;
}

}  // namespace detail

template <class T>
Instance<T> gen_random(const GenSpec& spec) {
  Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0xda3e39cb94b95bdbULL);
  Instance<T> inst;
  inst.kind = spec.kind;
  inst.m = spec.m;
  inst.capacities.resize(spec.m);
  for (auto& c : inst.capacities) c = rng.uniform_int(1, spec.cap_max);

  switch (spec.kind) {
    case Kind::General:
      for (int j = 0; j < spec.n; ++j) {
        switch (spec.encoding) {
          case Encoding::Explicit:
            inst.customers.push_back(detail::random_explicit<T>(rng, spec.m, spec.sets_per_customer));
            break;
          case Encoding::Interval:
            inst.customers.push_back(detail::random_interval<T>(rng, spec.m, spec.sets_per_customer));
            break;
          case Encoding::Table:
            inst.customers.push_back(detail::random_coverage<T>(rng, spec.m, spec.interval_cover));
            break;
          case Encoding::UnitDemand:
            inst.customers.push_back(detail::random_unit_demand<T>(rng, spec.m));
            break;
        }
      }
      break;
    case Kind::Tree: {
      inst.tree_edges = detail::random_tree(rng, spec.m);
      inst.root = 0;
      for (int j = 0; j < spec.n; ++j) {
        std::vector<typename Valuation<T>::Entry> entries;
        for (int s = 0; s < spec.sets_per_customer; ++s) {
          int a = int(rng.uniform_int(0, spec.m));
          int b = int(rng.uniform_int(0, spec.m));
          if (a == b) b = (b + 1) % (spec.m + 1);
          ItemSet path = detail::tree_path_edges(inst.tree_edges, a, b);
          entries.push_back({path, detail::random_value<T>(rng)});
        }
        inst.customers.push_back(Valuation<T>::explicit_sets(std::move(entries)));
      }
      break;
    }
    case Kind::Highway:
      for (int j = 0; j < spec.n; ++j) {
        if (spec.subadditive_intervals)
          inst.customers.push_back(detail::random_subadditive_interval<T>(rng, spec.m));
        else
          inst.customers.push_back(detail::random_interval<T>(rng, spec.m, spec.sets_per_customer));
      }
      break;
    case Kind::Products:
      for (int j = 0; j < spec.n; ++j) {
        std::vector<typename Valuation<T>::Entry> entries;
        int wants = int(rng.uniform_int(1, std::min(spec.m, 3)));
        for (int s = 0; s < wants; ++s)
          entries.push_back({ItemSet::single(int(rng.uniform_int(0, spec.m - 1))),
                             detail::random_value<T>(rng)});
        inst.customers.push_back(Valuation<T>::explicit_sets(std::move(entries)));
      }
      break;
  }
  inst.validate();
  return inst;
}

}  // namespace capri
