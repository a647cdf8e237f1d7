#include <catch_amalgamated.hpp>

#include "capri/gen.hpp"
#include "capri/swm.hpp"

using namespace capri;

namespace {

/// Independent reference enumerator: plain recursive product over candidate
/// sets, no pruning, no shared code with swm_exact's search.
template <class T>
T reference_welfare(const Instance<T>& inst, const std::vector<long>& k) {
  const int n = inst.n();
  std::vector<std::vector<ItemSet>> cands(n);
  for (int j = 0; j < n; ++j) {
    cands[j].push_back(ItemSet());
    for (ItemSet s : inst.customers[j].candidate_sets()) cands[j].push_back(s);
  }
  T best(0);
  std::vector<int> choice(n, 0);
  for (;;) {
    std::vector<long> used(inst.m, 0);
    bool ok = true;
    T welfare(0);
    for (int j = 0; j < n && ok; ++j) {
      ItemSet s = cands[j][choice[j]];
      for (int e : s.items())
        if (++used[e] > k[e]) ok = false;
      welfare += inst.customers[j].value(s);
    }
    if (ok && welfare > best) best = welfare;
    int j = 0;
    while (j < n && ++choice[j] == int(cands[j].size())) choice[j++] = 0;
    if (j == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("exact welfare on the gap fixture") {
  auto inst = gen_gap<Rational>(4);
  SECTION("full capacity serves all four customers") {
    auto sol = swm_exact(inst, inst.capacities);
    REQUIRE(sol.welfare == Rational(25, 12));
    for (const auto& s : sol.allocation.sets) REQUIRE(!s.empty());
  }
  SECTION("a single slot takes the value-1 customer") {
    auto sol = swm_exact(inst, {1});
    REQUIRE(sol.welfare == Rational(1));
  }
}

TEST_CASE("exact welfare matches an independent enumerator") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = gen_random<Rational>({Kind::General, 4, 4, 3, 2, seed});
    auto sol = swm_exact(inst, inst.capacities);
    REQUIRE(sol.welfare == reference_welfare(inst, inst.capacities));
  }
}

TEST_CASE("welfare dominates every LP-rounded or priced allocation") {
  for (uint64_t seed = 5; seed <= 12; ++seed) {
    auto inst = gen_random<Rational>({Kind::General, 4, 3, 2, 2, seed});
    auto sol = swm_exact(inst, inst.capacities);
    auto lp = solve_swm_lp(inst, inst.capacities);
    REQUIRE(sol.welfare <= lp.opt);  // integral <= fractional
  }
}

TEST_CASE("enumeration budget guard") {
  auto inst = gen_random<Rational>({Kind::General, 4, 4, 3, 3, 7});
  REQUIRE_THROWS_AS(swm_exact(inst, inst.capacities, 2.0), BudgetExceeded);
}

TEST_CASE("unit-capacity pricing extracts the full welfare as profit") {
  SwmSolver<Rational> solver = [](const Instance<Rational>& i, const std::vector<long>& k) {
    return swm_exact(i, k);
  };
  SECTION("gap fixture sells the item at price 1") {
    auto inst = gen_gap<Rational>(4);
    auto out = swm_unit_pricing(inst, solver);
    REQUIRE(out.profit == Rational(1));
    REQUIRE(out.prices.p[0] == Rational(1));
  }
  SECTION("two disjoint singletons give 3 + 4") {
    Instance<Rational> inst;
    inst.m = 2;
    inst.capacities = {1, 1};
    for (int j = 0; j < 2; ++j) {
      std::vector<typename Valuation<Rational>::Entry> e;
      e.push_back({ItemSet::single(j), Rational(j + 3)});
      inst.customers.push_back(Valuation<Rational>::explicit_sets(std::move(e)));
    }
    inst.validate();
    auto out = swm_unit_pricing(inst, solver);
    REQUIRE(out.profit == Rational(7));
  }
  SECTION("profit equals the unit-capacity welfare on random instances") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      auto inst = gen_random<Rational>({Kind::General, 4, 4, 2, 3, seed});
      auto out = swm_unit_pricing(inst, solver);
      std::vector<long> ones(inst.m, 1);
      REQUIRE(out.profit == swm_exact(inst, ones).welfare);
      REQUIRE_NOTHROW(evaluate(inst, out.prices, out.allocation));
    }
  }
}

TEST_CASE("tree LP") {
  SECTION("single-edge tree with one customer") {
    Instance<Rational> inst;
    inst.kind = Kind::Tree;
    inst.m = 1;
    inst.capacities = {1};
    inst.tree_edges = {{0, 1}};
    std::vector<typename Valuation<Rational>::Entry> e;
    e.push_back({ItemSet::single(0), Rational(5)});
    inst.customers.push_back(Valuation<Rational>::explicit_sets(std::move(e)));
    auto r = tree_lp(inst, inst.capacities);
    REQUIRE(r.opt == Rational(5));
    REQUIRE(r.dual.item_duals[0] >= Rational(0));
    REQUIRE(r.dual.item_duals[0] <= Rational(5));
  }
  SECTION("path-graph tree agrees with the interval-encoded highway LP") {
    // Same combinatorics expressed two ways: path tree with explicit path
    // sets vs highway instance with interval entries.
    Instance<Rational> tree;
    tree.kind = Kind::Tree;
    tree.m = 4;
    tree.capacities = {1, 2, 1, 1};
    for (int e = 0; e < 4; ++e) tree.tree_edges.push_back({e, e + 1});
    Instance<Rational> highway;
    highway.kind = Kind::Highway;
    highway.m = 4;
    highway.capacities = tree.capacities;
    Rng rng(99);
    for (int j = 0; j < 4; ++j) {
      std::vector<typename Valuation<Rational>::Entry> sets;
      std::vector<std::tuple<int, int, Rational>> ivals;
      for (int s = 0; s < 2; ++s) {
        int a = int(rng.uniform_int(0, 3));
        int b = int(rng.uniform_int(a, 3));
        Rational v(rng.uniform_int(1, 9), 2);
        sets.push_back({ItemSet::range(a, b), v});
        ivals.emplace_back(a, b, v);
      }
      tree.customers.push_back(Valuation<Rational>::explicit_sets(std::move(sets)));
      highway.customers.push_back(Valuation<Rational>::intervals(ivals));
    }
    auto rt = tree_lp(tree, tree.capacities);
    auto rh = solve_swm_lp(highway, highway.capacities);
    REQUIRE(rt.opt == rh.opt);
  }
  SECTION("star tree optimum matches the materialized LP") {
    Instance<Rational> star;
    star.kind = Kind::Tree;
    star.m = 3;
    star.capacities = {1, 1, 1};
    star.tree_edges = {{0, 1}, {0, 2}, {0, 3}};  // leaves 1..3 around vertex 0
    // Paths through the center: {0},{1},{2},{0,1},{0,2},{1,2}
    auto add = [&](std::vector<std::pair<std::vector<int>, Rational>> sets) {
      std::vector<typename Valuation<Rational>::Entry> e;
      for (auto& [items, v] : sets) e.push_back({ItemSet::from_items(items), v});
      star.customers.push_back(Valuation<Rational>::explicit_sets(std::move(e)));
    };
    add({{{0, 1}, Rational(3)}, {{0}, Rational(2)}});
    add({{{1, 2}, Rational(4)}});
    add({{{2}, Rational(2)}, {{0, 2}, Rational(3)}});
    auto r = tree_lp(star, star.capacities);
    std::vector<ColumnKey> cols;
    std::vector<Rational> vals;
    for (int j = 0; j < star.n(); ++j) {
      cols.push_back({j, ItemSet()});
      vals.push_back(Rational(0));
      for (ItemSet s : star.customers[j].candidate_sets()) {
        cols.push_back({j, s});
        vals.push_back(star.customers[j].value(s));
      }
    }
    auto full = solve_weighted_lp(star.n(), star.capacities, cols, vals);
    REQUIRE(r.opt == full.opt);
  }
  SECTION("non-tree instances are rejected") {
    auto inst = gen_gap<Rational>(2);
    REQUIRE_THROWS_AS(tree_lp(inst, inst.capacities), NotATree);
  }
}
