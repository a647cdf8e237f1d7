#include <catch_amalgamated.hpp>

#include "capri/capprofit.hpp"
#include "capri/gen.hpp"
#include "capri/oracle.hpp"

using namespace capri;

TEST_CASE("exact profit") {
  SECTION("gap fixture: welfare 25/12 but profit exactly 1") {
    auto inst = gen_gap<Rational>(4);
    auto r = exact_profit(inst);
    REQUIRE(r.profit == Rational(1));
    REQUIRE_NOTHROW(evaluate(inst, r.prices, r.allocation));
    auto lp = solve_swm_lp(inst, inst.capacities);
    REQUIRE(lp.opt == Rational(25, 12));
    REQUIRE(r.profit <= lp.opt);
  }
  SECTION("single customer, single set: full value extracted") {
    Instance<Rational> inst;
    inst.m = 2;
    inst.capacities = {1, 1};
    std::vector<typename Valuation<Rational>::Entry> es;
    es.push_back({ItemSet::range(0, 1), Rational(7, 2)});
    inst.customers.push_back(Valuation<Rational>::explicit_sets(std::move(es)));
    inst.validate();
    REQUIRE(exact_profit(inst).profit == Rational(7, 2));
  }
  SECTION("dominates algorithm outputs and is dominated by the welfare LP") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
      auto inst = gen_random<Rational>({Kind::General, 4, 4, 2, 3, seed});
      auto oracle = exact_profit(inst);
      auto lp = solve_swm_lp(inst, inst.capacities);
      REQUIRE(oracle.profit <= lp.opt);
      auto alg = run_algorithm1(inst, Rational(1, 4), Alg1Mode::General, 16, seed);
      REQUIRE(alg.outcome.profit <= oracle.profit);
    }
  }
  SECTION("budget guard") {
    auto inst = gen_random<Rational>({Kind::General, 4, 4, 3, 3, 2});
    OracleBudget tiny;
    tiny.max_allocations = 3;
    REQUIRE_THROWS_AS(exact_profit(inst, tiny), BudgetExceeded);
  }
}

TEST_CASE("exact maxbuy") {
  SECTION("gap products fixture is worth exactly 1") {
    auto inst = gen_gap<Rational>(4);
    REQUIRE(exact_maxbuy(inst).value == Rational(1));
  }
  SECTION("disjoint customers sum their values") {
    Instance<Rational> inst;
    inst.kind = Kind::Products;
    inst.m = 2;
    inst.capacities = {1, 1};
    for (int j = 0; j < 2; ++j) {
      std::vector<typename Valuation<Rational>::Entry> es;
      es.push_back({ItemSet::single(j), Rational(j + 1)});
      inst.customers.push_back(Valuation<Rational>::explicit_sets(std::move(es)));
    }
    inst.validate();
    REQUIRE(exact_maxbuy(inst).value == Rational(3));
  }
  SECTION("one product: max over k of k-th largest value times min(k, c)") {
    Instance<Rational> inst;
    inst.kind = Kind::Products;
    inst.m = 1;
    inst.capacities = {2};
    for (Rational v : {Rational(5), Rational(3), Rational(2)}) {
      std::vector<typename Valuation<Rational>::Entry> es;
      es.push_back({ItemSet::single(0), v});
      inst.customers.push_back(Valuation<Rational>::explicit_sets(std::move(es)));
    }
    inst.validate();
    // price 5 -> 5; price 3 -> 6; price 2 -> 4 (capacity 2)
    REQUIRE(exact_maxbuy(inst).value == Rational(6));
  }
  SECTION("agrees with exact_profit on products instances") {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
      auto inst = gen_random<Rational>({Kind::Products, 3, 4, 2, 2, seed});
      auto mb = exact_maxbuy(inst);
      auto ep = exact_profit(inst);
      REQUIRE(mb.value == ep.profit);
    }
  }
}
