#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "capri/errors.hpp"
#include "capri/itemset.hpp"
#include "capri/numeric.hpp"

namespace capri {

enum class Encoding { Explicit, Interval, Table, UnitDemand };

inline std::string encoding_name(Encoding e) {
  switch (e) {
    case Encoding::Explicit: return "explicit";
    case Encoding::Interval: return "interval";
    case Encoding::Table: return "table";
    case Encoding::UnitDemand: return "unit_demand";
  }
  return "?";
}

/// A customer's valuation oracle. Explicit and interval encodings list a
/// finite family of desired sets; the derived set function is
///   v(T) = max{ value(S) : listed S contained in T },  max over nothing = 0,
/// which is monotone by construction. Tables enumerate all subsets (m <= 12).
/// Unit-demand valuations price single items: v(S) = max_{e in S} w_e.
template <class T>
class Valuation {
 public:
  struct Entry {
    ItemSet set;
    T value;
  };

  static Valuation explicit_sets(std::vector<Entry> entries) {
    Valuation v;
    v.encoding_ = Encoding::Explicit;
    v.init_entries(std::move(entries));
    return v;
  }

  /// Intervals as inclusive edge ranges [a, b].
  static Valuation intervals(const std::vector<std::tuple<int, int, T>>& ivals) {
    Valuation v;
    v.encoding_ = Encoding::Interval;
    std::vector<Entry> es;
    es.reserve(ivals.size());
    for (const auto& [a, b, val] : ivals) {
      if (a > b) throw InvalidInstance("empty interval entry");
      es.push_back({ItemSet::range(a, b), val});
    }
    v.init_entries(std::move(es));
    return v;
  }

  /// Full map subset -> value, indexed by bitmask; table[0] must be 0.
  static Valuation table(int m, std::vector<T> by_mask, bool claim_subadditive = false) {
    if (m > 12) throw InvalidInstance("table encoding limited to m <= 12");
    if (by_mask.size() != (size_t{1} << m)) throw InvalidInstance("table size != 2^m");
    if (!(by_mask[0] == T(0))) throw InvalidInstance("table value of empty set must be 0");
    for (const auto& val : by_mask)
      if (val < T(0)) throw InvalidInstance("negative table value");
    Valuation v;
    v.encoding_ = Encoding::Table;
    v.table_ = std::move(by_mask);
    v.table_m_ = m;
    if (claim_subadditive && !v.subadditive_table())
      throw InvalidInstance("valuation claimed subadditive but is not");
    return v;
  }

  static Valuation unit_demand(std::vector<T> per_item) {
    for (const auto& val : per_item)
      if (val < T(0)) throw InvalidInstance("negative item value");
    Valuation v;
    v.encoding_ = Encoding::UnitDemand;
    v.items_ = std::move(per_item);
    return v;
  }

  Encoding encoding() const { return encoding_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<T>& item_values() const { return items_; }
  const std::vector<T>& table_values() const { return table_; }

  /// v(S) under the encoding's rule; v(empty) = 0.
  T value(ItemSet s) const {
    switch (encoding_) {
      case Encoding::Explicit:
      case Encoding::Interval: {
        T best(0);
        for (const auto& e : entries_)
          if (e.set.subset_of(s) && e.value > best) best = e.value;
        return best;
      }
      case Encoding::Table:
        return table_[s.bits()];
      case Encoding::UnitDemand: {
        T best(0);
        for (int e : s.items())
          if (items_[e] > best) best = items_[e];
        return best;
      }
    }
    return T(0);
  }

  /// Candidate purchase sets (excluding the empty set): the listed sets for
  /// explicit/interval encodings, all nonempty subsets for tables, singletons
  /// for unit demand. This is the column universe LPs and enumerators run on.
  std::vector<ItemSet> candidate_sets() const {
    std::vector<ItemSet> out;
    switch (encoding_) {
      case Encoding::Explicit:
      case Encoding::Interval:
        for (const auto& e : entries_) out.push_back(e.set);
        break;
      case Encoding::Table:
        for (uint64_t mask = 1; mask < (uint64_t{1} << table_m_); ++mask)
          out.push_back(ItemSet::from_bits(mask));
        break;
      case Encoding::UnitDemand:
        for (size_t e = 0; e < items_.size(); ++e) out.push_back(ItemSet::single(int(e)));
        break;
    }
    return out;
  }

  /// Utility-maximizing candidate set under the given prices. Ties broken by
  /// (smaller cardinality, then lexicographic item order); the empty set is
  /// always a candidate, so the result has nonnegative utility.
  ItemSet demand(const std::vector<T>& prices) const {
    ItemSet best;  // empty, utility 0
    T best_util(0);
    auto consider = [&](ItemSet s, const T& util) {
      if (util > best_util || (util == best_util && ItemSet::demand_less(s, best))) {
        best = s;
        best_util = util;
      }
    };
    if (encoding_ == Encoding::Table) {
      // Subset-sum the prices once instead of re-adding per mask.
      std::vector<T> psum(size_t{1} << table_m_, T(0));
      for (uint64_t mask = 1; mask < psum.size(); ++mask) {
        uint64_t low = mask & (~mask + 1);
        psum[mask] = psum[mask ^ low] + prices[std::countr_zero(low)];
        consider(ItemSet::from_bits(mask), table_[mask] - psum[mask]);
      }
      return best;
    }
    for (ItemSet s : candidate_sets()) {
      T price(0);
      for (int e : s.items()) price += prices[e];
      consider(s, value(s) - price);
    }
    return best;
  }

  T max_value() const {
    T best(0);
    switch (encoding_) {
      case Encoding::Explicit:
      case Encoding::Interval:
        for (const auto& e : entries_) best = std::max(best, e.value);
        break;
      case Encoding::Table:
        for (const auto& val : table_) best = std::max(best, val);
        break;
      case Encoding::UnitDemand:
        for (const auto& val : items_) best = std::max(best, val);
        break;
    }
    return best;
  }

  bool subadditive_table() const {
    size_t n = table_.size();
    for (uint64_t a = 1; a + 1 < n; ++a)
      for (uint64_t b = a + 1; b < n; ++b)
        if (table_[a] + table_[b] < table_[a | b]) return false;
    return true;
  }

 private:
  void init_entries(std::vector<Entry> entries) {
    for (const auto& e : entries) {
      if (e.set.empty()) throw InvalidInstance("listed set must be nonempty");
      if (e.value < T(0)) throw InvalidInstance("negative listed value");
    }
    // Deterministic order; duplicate sets collapse to their max value.
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
      if (x.set != y.set) return x.set < y.set;
      return x.value > y.value;
    });
    for (const auto& e : entries) {
      if (!entries_.empty() && entries_.back().set == e.set) continue;
      entries_.push_back(e);
    }
  }

  Encoding encoding_ = Encoding::Explicit;
  std::vector<Entry> entries_;  // explicit / interval
  std::vector<T> table_;        // table, indexed by mask
  int table_m_ = 0;
  std::vector<T> items_;  // unit demand
};

enum class Kind { General, Tree, Highway, Products };

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::General: return "general";
    case Kind::Tree: return "tree";
    case Kind::Highway: return "highway";
    case Kind::Products: return "products";
  }
  return "?";
}

/// Shared problem container: items with integer supplies plus an ordered list
/// of customers. Immutable after load; safe for concurrent reads.
template <class T>
struct Instance {
  Kind kind = Kind::General;
  int m = 0;                              // item count
  std::vector<long> capacities;           // per item, >= 1
  std::vector<Valuation<T>> customers;    // ordered
  std::vector<std::pair<int, int>> tree_edges;  // kind == Tree: edge i = (u, v)
  int root = 0;

  int n() const { return int(customers.size()); }
  long c_max() const {
    long c = 1;
    for (long ce : capacities) c = std::max(c, ce);
    return c;
  }

  void validate() const {
    if (m < 1 || m > ItemSet::kMaxItems) throw InvalidInstance("item count out of range");
    if (capacities.size() != size_t(m)) throw InvalidInstance("capacity vector length != m");
    for (long c : capacities)
      if (c < 1) throw InvalidInstance("capacities must be >= 1");
    if (kind == Kind::Tree) validate_tree();
    for (const auto& cust : customers) {
      for (ItemSet s : cust.candidate_sets()) {
        if (!s.empty() && s.items().back() >= m) throw InvalidInstance("item index >= m");
        if (kind == Kind::Tree && !is_tree_path(s)) throw InvalidInstance("tree customer set is not a path");
        if (kind == Kind::Highway && !is_contiguous(s)) throw InvalidInstance("highway customer set is not an interval");
        if (kind == Kind::Products && s.size() != 1) throw InvalidInstance("products customer set is not a single item");
      }
    }
  }

  static bool is_contiguous(ItemSet s) {
    if (s.empty()) return true;
    auto v = s.items();
    return v.back() - v.front() + 1 == int(v.size());
  }

  /// True iff the edge set forms a simple path of this tree.
  bool is_tree_path(ItemSet s) const {
    if (s.empty()) return true;
    std::map<int, int> deg;
    for (int e : s.items()) {
      deg[tree_edges[e].first]++;
      deg[tree_edges[e].second]++;
    }
    for (auto& [v, d] : deg)
      if (d > 2) return false;
    // Connectivity: walk from one endpoint through shared vertices.
    auto edges = s.items();
    std::vector<bool> used(edges.size(), false);
    int start = -1;
    for (auto& [v, d] : deg)
      if (d == 1) start = v;
    if (start < 0) return s.size() == 0;  // cycle would have all degree 2
    int at = start;
    size_t visited = 0;
    bool moved = true;
    while (moved) {
      moved = false;
      for (size_t i = 0; i < edges.size(); ++i) {
        if (used[i]) continue;
        auto [u, w] = tree_edges[edges[i]];
        if (u == at || w == at) {
          at = (u == at) ? w : u;
          used[i] = true;
          ++visited;
          moved = true;
          break;
        }
      }
    }
    return visited == edges.size();
  }

 private:
  void validate_tree() const {
    if (tree_edges.size() != size_t(m)) throw InvalidInstance("tree must have m edges");
    int vertices = m + 1;
    std::vector<std::vector<int>> adj(vertices);
    for (const auto& [u, v] : tree_edges) {
      if (u < 0 || v < 0 || u >= vertices || v >= vertices || u == v)
        throw NotATree("bad tree edge");
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    if (root < 0 || root >= vertices) throw NotATree("bad root");
    std::vector<bool> seen(vertices, false);
    std::vector<int> stack{root};
    seen[root] = true;
    int count = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++count;
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    if (count != vertices) throw NotATree("tree is not connected");
    // m edges on m+1 connected vertices is necessarily acyclic.
  }
};

/// Nonnegative item prices. Items outside an active sub-instance carry an
/// "unsellable" sentinel exceeding every customer value.
template <class T>
struct PriceVector {
  std::vector<T> p;

  explicit PriceVector(int m = 0, T fill = T(0)) : p(size_t(m), fill) {}

  T total(ItemSet s) const {
    T sum(0);
    for (int e : s.items()) sum += p[e];
    return sum;
  }
};

/// 1 + sum of every customer's best value: no budget can ever cover it.
template <class T>
T unsellable_price(const Instance<T>& inst) {
  T s(1);
  for (const auto& c : inst.customers) s += c.max_value();
  return s;
}

/// Per-customer assigned sets (possibly empty).
struct Allocation {
  std::vector<ItemSet> sets;

  explicit Allocation(int n = 0) : sets(size_t(n)) {}

  int count_takers(int item) const {
    int c = 0;
    for (ItemSet s : sets) c += s.contains(item) ? 1 : 0;
    return c;
  }
};

/// Prices + integral allocation + realized profit; `provenance` records which
/// algorithm/branch produced it.
template <class T>
struct PricedOutcome {
  PriceVector<T> prices;
  Allocation allocation;
  T profit = T(0);
  std::string provenance;
};

// ---------------------------------------------------------------------------
// Operations

template <class T>
T value(const Valuation<T>& v, ItemSet s) {
  return v.value(s);
}

template <class T>
ItemSet demand(const Valuation<T>& v, const std::vector<T>& prices) {
  return v.demand(prices);
}

/// Checks budget constraints (customer order) then capacity constraints (item
/// order) and returns the realized profit. Throws on the first failure.
template <class T>
T evaluate(const Instance<T>& inst, const PriceVector<T>& prices, const Allocation& alloc) {
  if (alloc.sets.size() != size_t(inst.n())) throw InvalidInstance("allocation size != n");
  const T tol = NumericTraits<T>::tolerance();
  T profit(0);
  for (int j = 0; j < inst.n(); ++j) {
    ItemSet s = alloc.sets[j];
    if (s.empty()) continue;
    T paid = prices.total(s);
    if (paid > inst.customers[j].value(s) + tol) throw BudgetViolation(j);
    profit += paid;
  }
  for (int e = 0; e < inst.m; ++e)
    if (alloc.count_takers(e) > inst.capacities[e]) throw CapacityViolation(e);
  return profit;
}

/// Subadditivity check. Tables check every pair of subsets; interval
/// encodings check v(A) + v(B) >= v(A u B) for all interval pairs whose union
/// is an interval; unit-demand valuations are max-functions, hence always
/// subadditive. Explicit encodings are not checkable.
template <class T>
bool check_subadditive(const Valuation<T>& v, int m) {
  switch (v.encoding()) {
    case Encoding::Table:
      return v.subadditive_table();
    case Encoding::UnitDemand:
      return true;
    case Encoding::Interval: {
      for (int a1 = 0; a1 < m; ++a1)
        for (int b1 = a1; b1 < m; ++b1)
          for (int a2 = a1; a2 < m; ++a2)
            for (int b2 = a2; b2 < m; ++b2) {
              if (a2 > b1 + 1) continue;  // union is not an interval
              ItemSet A = ItemSet::range(a1, b1);
              ItemSet B = ItemSet::range(a2, b2);
              if (v.value(A) + v.value(B) < v.value(A.unite(B))) return false;
            }
      return true;
    }
    case Encoding::Explicit:
      throw UnsupportedEncoding("subadditivity is not checkable for explicit encodings");
  }
  throw UnsupportedEncoding("unknown encoding");
}

}  // namespace capri
