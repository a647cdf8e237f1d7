#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "capri/capprofit.hpp"
#include "capri/gen.hpp"
#include "capri/highway.hpp"
#include "capri/json_io.hpp"
#include "capri/oracle.hpp"
#include "capri/report.hpp"
#include "capri/treeprice.hpp"

namespace capri {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double wall_ms = 0;
};

struct SuiteOptions {
  uint64_t seed = 20240817;
  std::string out_prefix;  // when set, writes <prefix>.jsonl and <prefix>.csv
  // Criterion ids to run; empty set runs nothing, unset runs everything.
  std::optional<std::vector<int>> criteria;
};

namespace suite_detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream log;
  int failures = 0;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (++failures <= 8) log << "FAIL: " << what << "; ";
    }
  }
};

/// The 200-instance pool shared by the complementary-slackness and
/// dual-selection criteria: mixed encodings, m <= 6, n <= 8.
inline std::vector<GenSpec> shared_pool(uint64_t seed) {
  std::vector<GenSpec> specs;
  Rng rng(seed ^ 0xabcdef12345ULL);
  for (int i = 0; i < 200; ++i) {
    GenSpec s;
    s.seed = seed + 1000 + uint64_t(i);
    switch (i % 4) {
      case 0:
        s.encoding = Encoding::Explicit;
        s.m = int(rng.uniform_int(3, 6));
        s.n = int(rng.uniform_int(3, 8));
        s.sets_per_customer = int(rng.uniform_int(1, 3));
        break;
      case 1:
        s.encoding = Encoding::Table;
        s.m = int(rng.uniform_int(3, 4));
        s.n = int(rng.uniform_int(3, 5));
        break;
      case 2:
        s.encoding = Encoding::UnitDemand;
        s.m = int(rng.uniform_int(3, 6));
        s.n = int(rng.uniform_int(3, 8));
        break;
      default:
        s.encoding = Encoding::Interval;
        s.kind = Kind::General;
        s.m = int(rng.uniform_int(4, 6));
        s.n = int(rng.uniform_int(3, 6));
        s.sets_per_customer = int(rng.uniform_int(1, 3));
        break;
    }
    s.cap_max = rng.uniform_int(1, 4);
    specs.push_back(s);
  }
  return specs;
}

template <class T>
void check_cs(Check& chk, const Instance<T>& inst, const std::vector<long>& k,
              const SwmLpResult<T>& lp, const std::string& tag) {
  const T tol = NumericTraits<T>::tolerance();
  for (const auto& [key, w] : lp.assignment.weight) {
    if (!(w > T(0))) continue;
    chk.expect(lp.dual.price(key.set) <= inst.customers[key.customer].value(key.set) + tol,
               tag + " tight column priced above value");
    const auto& cust = inst.customers[key.customer];
    if (cust.encoding() == Encoding::Table || cust.encoding() == Encoding::UnitDemand) {
      // subadditive: every subset of a tight column is priced below its value
      for (uint64_t sub = key.set.bits(); sub; sub = (sub - 1) & key.set.bits()) {
        ItemSet t = ItemSet::from_bits(sub);
        chk.expect(lp.dual.price(t) <= cust.value(t) + tol,
                   tag + " subset of tight column priced above value");
      }
    }
  }
  for (int e = 0; e < inst.m; ++e) {
    if (lp.dual.item_duals[e] > tol) {
      T cov = lp.assignment.coverage(e);
      T kk = NumericTraits<T>::from_long(k[e]);
      chk.expect(cov <= kk + tol && cov >= kk - tol,
                 tag + " positive dual without saturated capacity");
    }
  }
  T gap = lp.dual.objective(k) - lp.opt;
  chk.expect(gap <= tol && gap >= -tol, tag + " duality gap");
}

}  // namespace suite_detail

// --- criterion 1: the one-item supply-n fixture ----------------------------

inline CriterionResult criterion_gap_reproduction(const SuiteOptions& opt,
                                                  std::vector<RunReport>* reports) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  for (int n : {2, 4, 10}) {
    auto inst = gen_gap<Rational>(n);
    auto lp = solve_swm_lp(inst, inst.capacities);
    chk.expect(lp.opt == harmonic<Rational>(n), "LP optimum != H_n at n=" + std::to_string(n));
    auto oracle = exact_profit(inst);
    chk.expect(oracle.profit == Rational(1), "oracle profit != 1 at n=" + std::to_string(n));
    auto alg = run_algorithm1(inst, Rational(1), Alg1Mode::Subadditive, 16, opt.seed);
    chk.expect(alg.outcome.profit == Rational(1), "algorithm profit != 1 at n=" + std::to_string(n));
    if (reports) {
      RunReport r;
      r.instance_id = "gap-" + std::to_string(n);
      r.algorithm = "alg1";
      r.seed = opt.seed;
      r.epsilon = "1";
      r.trials = 16;
      r.profit = format_number(alg.outcome.profit);
      r.opt_lp_c = format_number(alg.opt_full);
      r.opt_lp_1 = format_number(alg.opt_unit);
      r.exact_profit = format_number(oracle.profit);
      r.bound = "1";
      r.pass = alg.outcome.profit == Rational(1);
      reports->push_back(r);
    }
  }
  return {1, "gap reproduction (harmonic welfare vs unit profit)", chk.ok, chk.log.str(),
          suite_detail::ms_since(t0)};
}

// --- criterion 2: complementary slackness on 200 mixed instances -----------

inline CriterionResult criterion_cs_suite(const SuiteOptions& opt, std::vector<RunReport>*) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  auto pool = suite_detail::shared_pool(opt.seed);
  for (size_t i = 0; i < pool.size(); ++i) {
    auto inst = gen_random<Rational>(pool[i]);
    auto lp = solve_swm_lp(inst, inst.capacities);
    suite_detail::check_cs(chk, inst, inst.capacities, lp, "exact#" + std::to_string(i));
    auto instf = gen_random<double>(pool[i]);
    auto lpf = solve_swm_lp(instf, instf.capacities);
    suite_detail::check_cs(chk, instf, instf.capacities, lpf, "float#" + std::to_string(i));
  }
  return {2, "complementary slackness on 200 mixed instances (exact + 1e-6 float)", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- criterion 3: dual selection score bound and schedule dominance --------

inline CriterionResult criterion_dual_selection(const SuiteOptions& opt, std::vector<RunReport>*) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  auto pool = suite_detail::shared_pool(opt.seed);
  for (size_t i = 0; i < pool.size(); ++i) {
    auto inst = gen_random<Rational>(pool[i]);
    for (Rational eps : {Rational(1, 4), Rational(1)}) {
      auto sched = capacity_schedule<Rational>(inst.capacities, eps);
      chk.expect(max_capacity_growth_dominates(sched, inst.capacities),
                 "growth dominance broken on schedule #" + std::to_string(i));
      auto sel = select_u(inst, sched);
      Rational denom = Rational(2) * (Rational(1) + eps) * harmonic<Rational>(inst.c_max());
      chk.expect(sel.score * denom >= sel.opts.back() - sel.opts.front(),
                 "dual score below harmonic bound on #" + std::to_string(i));
    }
    // Float mode at eps = 1/4 with the 1e-6 allowance.
    auto instf = gen_random<double>(pool[i]);
    auto schedf = capacity_schedule<double>(instf.capacities, 0.25);
    auto self = select_u(instf, schedf);
    double denomf = 2.0 * 1.25 * harmonic<double>(instf.c_max());
    chk.expect(self.score * denomf >= self.opts.back() - self.opts.front() - 1e-6,
               "float dual score below harmonic bound on #" + std::to_string(i));
  }
  return {3, "scheduled dual selection: harmonic score bound + growth dominance", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- criterion 4: subadditive pipeline profit + rounding expectation -------

inline CriterionResult criterion_subadditive_profit(const SuiteOptions& opt,
                                                    std::vector<RunReport>* reports) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  const Rational eps(1, 4);
  std::vector<GenSpec> specs;
  Rng rng(opt.seed ^ 0x5151);
  for (int i = 0; i < 100; ++i) {
    GenSpec s;
    s.seed = opt.seed + 40000 + uint64_t(i);
    s.cap_max = rng.uniform_int(1, 4);
    if (i % 4 == 3) {
      s.encoding = Encoding::UnitDemand;
      s.m = int(rng.uniform_int(3, 6));
      s.n = int(rng.uniform_int(3, 8));
    } else {
      s.encoding = Encoding::Table;
      s.interval_cover = i % 2 == 1;  // line-structured coverage half the time
      s.m = int(rng.uniform_int(3, 4));
      s.n = int(rng.uniform_int(3, 5));
    }
    specs.push_back(s);
  }

  Rational denom = Rational(4) * (Rational(1) + eps);
  for (size_t i = 0; i < specs.size(); ++i) {
    auto inst = gen_random<Rational>(specs[i]);
    auto alg = run_algorithm1(inst, eps, Alg1Mode::Subadditive, 64, opt.seed + i);
    Rational bound_denom = denom * harmonic<Rational>(inst.c_max());
    bool pass = alg.outcome.profit * bound_denom >= alg.opt_full;
    chk.expect(pass, "profit below OPT/(4(1+eps)H) on #" + std::to_string(i));
    if (reports) {
      RunReport r;
      r.instance_id = "subadd-" + std::to_string(i);
      r.algorithm = "alg1-subadditive";
      r.seed = opt.seed + i;
      r.epsilon = "1/4";
      r.trials = 64;
      r.profit = format_number(alg.outcome.profit);
      r.opt_lp_c = format_number(alg.opt_full);
      r.opt_lp_1 = format_number(alg.opt_unit);
      r.bound = format_number(Rational(alg.opt_full / bound_denom));
      r.pass = pass;
      reports->push_back(r);
    }
  }

  // Expectation half: Monte Carlo mean of the rounded profit against
  // (1 - 1/e) * sum_e u_e y_e, minus three standard errors, on 10 fixtures.
  for (int f = 0; f < 10; ++f) {
    auto inst = gen_random<Rational>(specs[size_t(f) * 7 % specs.size()]);
    auto sched = capacity_schedule<Rational>(inst.capacities, eps);
    auto sel = select_u(inst, sched);
    auto lp = solve_swm_lp(inst, sel.u);
    std::mt19937_64 mc(opt.seed + 777 + uint64_t(f));
    const int trials = 10000;
    double sum = 0, sum2 = 0;
    for (int t = 0; t < trials; ++t) {
      Allocation a = round_subadditive(lp.assignment, sel.u, sel.dual, mc);
      double profit = 0;
      for (ItemSet s : a.sets) profit += to_double(sel.dual.price(s));
      sum += profit;
      sum2 += profit * profit;
    }
    double mean = sum / trials;
    double var = std::max(0.0, sum2 / trials - mean * mean);
    double sigma = std::sqrt(var / trials);
    double target = (1 - std::exp(-1.0)) * to_double(sel.score);
    chk.expect(mean >= target - 3 * sigma,
               "rounded-profit mean below (1-1/e) bound on fixture " + std::to_string(f));
  }
  return {4, "subadditive pipeline: profit >= OPT/(4(1+eps)H) and rounding expectation", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- criterion 5: decomposition invariants ----------------------------------

inline CriterionResult criterion_decomposition(const SuiteOptions& opt, std::vector<RunReport>*) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  Rng rng(opt.seed ^ 0xdeca);
  int done = 0;
  for (uint64_t i = 0; done < 50 && i < 200; ++i) {
    GenSpec s{Kind::General, int(rng.uniform_int(3, 4)), int(rng.uniform_int(3, 5)),
              int(rng.uniform_int(1, 3)), rng.uniform_int(1, 2), opt.seed + 60000 + i};
    auto inst = gen_random<Rational>(s);
    ++done;
    auto sched = capacity_schedule<Rational>(inst.capacities, Rational(1, 4));
    auto sel = select_u(inst, sched);
    auto lp = solve_swm_lp(inst, sel.u);
    auto verifier = exact_gap_verifier<Rational>(inst.n());
    std::mt19937_64 mc(opt.seed + i);
    auto gr = round_general(lp.assignment, inst, sel.u, sel.dual, verifier, mc);
    const auto& d = gr.decomposition;

    Rational total(0);
    for (const auto& term : d.terms) {
      chk.expect(term.lambda >= Rational(0), "negative lambda");
      total += term.lambda;
      for (int e = 0; e < inst.m; ++e)
        chk.expect(term.allocation.count_takers(e) <= sel.u[e], "term violates capacity");
      for (int j = 0; j < inst.n(); ++j) {
        if (term.allocation.sets[j].empty()) continue;
        auto it = lp.assignment.weight.find({j, term.allocation.sets[j]});
        chk.expect(it != lp.assignment.weight.end() && it->second > Rational(0),
                   "term outside the support");
      }
    }
    chk.expect(total == Rational(1), "lambdas do not sum to 1");
    for (const auto& [key, w] : lp.assignment.weight) {
      if (!(w > Rational(0))) continue;
      Rational mass = d.mass(key);
      chk.expect(mass * d.alpha_used == w, "domination not exact at alpha_used");
      chk.expect(mass <= w, "mass exceeds the fractional weight");
    }
    Rational profit(0);
    for (ItemSet s2 : gr.allocation.sets) profit += sel.dual.price(s2);
    chk.expect(profit * d.alpha_used >= sel.score, "best term below score/alpha_used");
  }
  return {5, "convex decomposition invariants and best-term bound (50 instances, exact)", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- criterion 6: tree rounding constants and survival floor ---------------

inline CriterionResult criterion_tree_constants(const SuiteOptions& opt,
                                                std::vector<RunReport>*) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  // beta(1) = exp(0.01 (50 ln 0.02 + 49)) ~ 0.2309 < 0.231
  double b1 = bad_event_budget_term(1, 0.01);
  chk.expect(std::abs(b1 - std::exp(0.01 * (50 * std::log(0.02) + 49))) < 1e-12,
             "beta(1) formula mismatch");
  chk.expect(b1 < 0.231 && b1 > 0.2308, "beta(1) outside (0.2308, 0.231)");
  double tail = 0;
  for (long c = 1; c < (1L << 48); c *= 2) tail += std::pow(0.231, double(c));
  chk.expect(2 * tail <= 0.575, "two halving branches exceed 0.575");

  // Survival floor: five contended tree fixtures, one million trials each.
  int live_fixtures = 0;
  for (int f = 0; f < 5; ++f) {
    GenSpec s{Kind::Tree, 4 + (f % 2), 4 + (f % 3), 2, 2, opt.seed + 70000 + uint64_t(f)};
    auto inst = gen_random<Rational>(s);
    auto lp = tree_lp(inst, inst.capacities);
    if (lp.assignment.weight.empty()) continue;
    ++live_fixtures;
    auto plan = make_tree_rounding_plan(lp.assignment, inst, 0.01);
    std::mt19937_64 mc(opt.seed + 99 + uint64_t(f));
    const int trials = 1000000;
    std::map<ColumnKey, long> kept;
    for (int t = 0; t < trials; ++t) {
      Allocation a = tree_round(plan, mc);
      for (int j = 0; j < inst.n(); ++j)
        if (!a.sets[j].empty()) kept[{j, a.sets[j]}]++;
    }
    for (const auto& [key, w] : lp.assignment.weight) {
      double xs = to_double(w);
      double p = double(kept[key]) / trials;
      double sigma = std::sqrt(std::max(p * (1 - p), 0.00425 * xs) / trials);
      chk.expect(p >= 0.00425 * xs - 3 * sigma,
                 "survival below 0.00425 x* on fixture " + std::to_string(f));
    }
  }
  chk.expect(live_fixtures >= 4, "too few tree fixtures with nonempty LP support");
  return {6, "tree rounding: tail-bound constants and 0.00425 survival floor", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- criterion 7: highway components ----------------------------------------

inline CriterionResult criterion_highway_components(const SuiteOptions& opt,
                                                    std::vector<RunReport>*) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  Rng rng(opt.seed ^ 0x8a9b);

  // (a) voucher DP: factor 2 against the strict optimum, exact on the
  // relaxation, over 100 enumerable half-cliques.
  for (int i = 0; i < 100; ++i) {
    int len = int(rng.uniform_int(1, 3));
    HalfCliqueProblem<Rational> hc;
    hc.chain.resize(len);
    hc.mincap.resize(len);
    for (int p = 0; p < len; ++p) {
      hc.chain[p] = ItemSet::range(p, 4);
      hc.mincap[p] = rng.uniform_int(1, 3);
    }
    for (int p = len - 2; p >= 0; --p) hc.mincap[p] = std::min(hc.mincap[p], hc.mincap[p + 1]);
    int n = int(rng.uniform_int(1, 4));
    hc.value.assign(n, std::vector<Rational>(len, Rational(0)));
    std::vector<Rational> beta(n);
    for (int j = 0; j < n; ++j) {
      Rational v(rng.uniform_int(0, 8));
      for (int p = 0; p < len; ++p) {
        hc.value[j][p] = v;
        if (rng.uniform_int(0, 2) == 0) v = Rational(rng.uniform_int(0, 4));
        if (hc.value[j][p] < v) v = hc.value[j][p];  // monotone along nesting
      }
      beta[j] = Rational(rng.uniform_int(0, 3));
    }
    std::vector<Rational> prices;
    Rational top(rng.uniform_int(2, 8));
    for (int q = 0; q < 3; ++q) prices.push_back(top / Rational(1 << q));
    auto dp = voucher_dp(hc, beta, prices);
    Rational strict = exact_voucher(hc, beta, prices);
    Rational relaxed = exact_voucher_relaxed(hc, beta, prices);
    chk.expect(dp.relaxed_value == relaxed, "relaxed DP not exact on #" + std::to_string(i));
    chk.expect(Rational(2) * dp.value >= strict, "DP below half the optimum on #" + std::to_string(i));
  }

  // (b) geometric factor-2 identity across grids and vouchers.
  for (int i = 0; i < 300; ++i) {
    Rational top(rng.uniform_int(1, 16), rng.uniform_int(1, 4));
    Rational beta(rng.uniform_int(0, 16), rng.uniform_int(1, 4));
    auto grid = make_price_grid<Rational>(top, 6, 8);
    Rational sum(0);
    for (const auto& p : grid.prices) {
      Rational w = p - beta;
      if (w > Rational(0)) sum += w;
    }
    Rational head = top - beta;
    if (head < Rational(0)) head = Rational(0);
    chk.expect(sum <= Rational(2) * head, "geometric identity failed");
  }

  // (c) configuration LP against the fully materialized program, plus the
  // scaled dual certificate; (d) rounding expectation.
  for (int fixture = 0; fixture < 20; ++fixture) {
    const int n = 3;
    const int cliques = 2;
    std::vector<HalfCliqueProblem<Rational>> ps(cliques);
    for (int i = 0; i < cliques; ++i) {
      int len = int(rng.uniform_int(1, 2));
      ps[i].chain.resize(len);
      ps[i].mincap.resize(len);
      int base = i * 4;
      for (int p = 0; p < len; ++p) {
        ps[i].chain[p] = ItemSet::range(base + p, base + 2);
        ps[i].mincap[p] = rng.uniform_int(1, 2);
      }
      for (int p = len - 2; p >= 0; --p) ps[i].mincap[p] = std::min(ps[i].mincap[p], ps[i].mincap[p + 1]);
      ps[i].value.assign(n, std::vector<Rational>(len, Rational(0)));
      for (int j = 0; j < n; ++j) {
        Rational v(rng.uniform_int(0, 6));
        for (int p = 0; p < len; ++p) {
          ps[i].value[j][p] = v;
          if (rng.uniform_int(0, 1) == 0) v = Rational(0);
        }
      }
    }
    std::vector<Rational> prices{Rational(4), Rational(2), Rational(1)};
    CliquePricer<Rational> pricer;
    pricer.scale = Rational(2);
    pricer.solve = [&](int i, const std::vector<Rational>& beta) {
      return voucher_dp(ps[i], beta, prices);
    };
    auto sol = solve_config_lp(n, prices, cliques, pricer);

    // Materialize every clique solution: nonincreasing chain prices times
    // feasible deepest-assignment subsets.
    auto enumerate_solutions = [&](int i) {
      std::vector<CliqueSolution<Rational>> all;
      const int len = int(ps[i].chain.size());
      std::vector<int> pidx(len, int(prices.size()));
      std::function<void(int, int)> choose = [&](int pos, int min_idx) {
        if (pos == len) {
          // assignments: each customer to a position or none (deepest
          // affordable at that position's price), capacity-checked
          std::vector<int> options(n, -1);
          std::function<void(int, CliqueSolution<Rational>&)> assign =
              [&](int j, CliqueSolution<Rational>& cs) {
                if (j == n) {
                  std::vector<long> usage(len, 0);
                  for (int jj = 0; jj < n; ++jj)
                    if (cs.assigned_pos[jj] >= 0)
                      for (int lam = cs.assigned_pos[jj]; lam < len; ++lam) ++usage[lam];
                  for (int lam = 0; lam < len; ++lam)
                    if (usage[lam] > ps[i].mincap[lam]) return;
                  all.push_back(cs);
                  return;
                }
                assign(j + 1, cs);
                for (int pos2 = 0; pos2 < len; ++pos2) {
                  if (pidx[pos2] >= int(prices.size())) continue;  // zero price: skip
                  if (!(ps[i].value[j][pos2] >= prices[pidx[pos2]])) continue;
                  cs.assigned_pos[j] = pos2;
                  cs.paid_idx[j] = pidx[pos2];
                  assign(j + 1, cs);
                  cs.assigned_pos[j] = -1;
                  cs.paid_idx[j] = -1;
                }
              };
          CliqueSolution<Rational> cs;
          cs.chain_price_idx.assign(len, -1);
          for (int p = 0; p < len; ++p)
            cs.chain_price_idx[p] = pidx[p] >= int(prices.size()) ? -1 : pidx[p];
          cs.assigned_pos.assign(n, -1);
          cs.paid_idx.assign(n, -1);
          assign(0, cs);
          return;
        }
        for (int idx = min_idx; idx <= int(prices.size()); ++idx) {
          pidx[pos] = idx;
          choose(pos + 1, idx);
        }
      };
      choose(0, 0);
      return all;
    };

    std::vector<std::vector<CliqueSolution<Rational>>> mats;
    for (int i = 0; i < cliques; ++i) mats.push_back(enumerate_solutions(i));

    LinearProgram<Rational> full;
    std::vector<std::pair<int, int>> var_of;
    for (int i = 0; i < cliques; ++i)
      for (size_t s2 = 0; s2 < mats[i].size(); ++s2) {
        full.add_variable(Rational(0));
        var_of.push_back({i, int(s2)});
      }
    int nv = int(var_of.size());
    auto yv = [&](int j, int p) { return nv + j * int(prices.size()) + p; };
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < int(prices.size()); ++p) full.add_variable(prices[p]);
    for (int i = 0; i < cliques; ++i) {
      int row = full.add_row(RowSense::EQ, Rational(1));
      for (int v2 = 0; v2 < nv; ++v2)
        if (var_of[v2].first == i) full.add_coeff(row, v2, Rational(1));
    }
    for (int j = 0; j < n; ++j) {
      int row = full.add_row(RowSense::LE, Rational(1));
      for (int p = 0; p < int(prices.size()); ++p) full.add_coeff(row, yv(j, p), Rational(1));
    }
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < int(prices.size()); ++p) {
        int row = full.add_row(RowSense::LE, Rational(0));
        full.add_coeff(row, yv(j, p), Rational(1));
        for (int v2 = 0; v2 < nv; ++v2)
          if (mats[var_of[v2].first][var_of[v2].second].paid_idx[j] == p)
            full.add_coeff(row, v2, Rational(-1));
      }
    full.solve_or_throw(LpDirection::Maximize);
    chk.expect(Rational(2) * sol.objective >= full.objective_value(),
               "restricted value below half the materialized optimum, fixture " +
                   std::to_string(fixture));
    chk.expect(sol.objective <= full.objective_value(),
               "restricted value above the materialized optimum, fixture " +
                   std::to_string(fixture));
    for (int i = 0; i < cliques; ++i)
      for (const auto& cs : mats[i]) {
        Rational lhs(0);
        for (int j = 0; j < n; ++j) {
          if (cs.paid_idx[j] < 0) continue;
          Rational g = prices[cs.paid_idx[j]] - sol.cert_beta[j];
          if (g > Rational(0)) lhs += g;
        }
        chk.expect(lhs <= sol.cert_scale * sol.cert_alpha[i],
                   "dual certificate violated, fixture " + std::to_string(fixture));
      }

    // (d) rounding Monte Carlo against (1 - 1/e) of the y-mass.
    Rational mass(0);
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < int(prices.size()); ++p) mass += prices[p] * sol.y[j][p];
    if (mass > Rational(0)) {
      std::mt19937_64 mc(opt.seed + 1234 + uint64_t(fixture));
      auto rounded = round_config(sol, cliques, n, mc, 20000);
      double sum = 0, sum2 = 0;
      for (const auto& tp : rounded.trial_profits) {
        double v = to_double(tp);
        sum += v;
        sum2 += v * v;
      }
      double mean = sum / double(rounded.trial_profits.size());
      double var = std::max(0.0, sum2 / double(rounded.trial_profits.size()) - mean * mean);
      double sigma = std::sqrt(var / double(rounded.trial_profits.size()));
      chk.expect(mean >= (1 - std::exp(-1.0)) * to_double(mass) - 3 * sigma,
                 "rounding mean below (1-1/e) y-mass, fixture " + std::to_string(fixture));
    }
  }
  return {7, "highway components: voucher DP, geometric identity, config LP, rounding", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- criterion 8: max-buy guarantee -----------------------------------------

inline CriterionResult criterion_maxbuy(const SuiteOptions& opt, std::vector<RunReport>* reports) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  Rng rng(opt.seed ^ 0x31415);
  const double ratio = 1 - std::exp(-1.0);
  for (int i = 0; i < 100; ++i) {
    GenSpec s{Kind::Products, int(rng.uniform_int(2, 4)), int(rng.uniform_int(3, 8)),
              int(rng.uniform_int(1, 3)), rng.uniform_int(1, 3), opt.seed + 80000 + uint64_t(i)};
    auto inst = gen_random<Rational>(s);
    auto oracle = exact_maxbuy(inst);
    auto run = maxbuy_run(inst, 3000, opt.seed + uint64_t(i));
    chk.expect(run.lp_value >= oracle.value, "LP below the exact optimum on #" + std::to_string(i));
    double mean = 0;
    for (const auto& tp : run.trial_profits) mean += to_double(tp);
    mean /= double(run.trial_profits.size());
    bool pass = mean >= ratio * to_double(oracle.value) * 0.98;
    chk.expect(pass, "mean profit below 98% of (1-1/e) optimum on #" + std::to_string(i));
    if (reports) {
      RunReport r;
      r.instance_id = "maxbuy-" + std::to_string(i);
      r.algorithm = "maxbuy";
      r.seed = opt.seed + uint64_t(i);
      r.trials = 3000;
      r.profit = format_number(run.outcome.profit);
      r.opt_lp_c = format_number(run.lp_value);
      r.exact_profit = format_number(oracle.value);
      r.bound = std::to_string(ratio * to_double(oracle.value));
      r.pass = pass;
      reports->push_back(r);
    }
  }
  return {8, "max-buy: Monte Carlo mean within 2% of the (1-1/e) guarantee", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- criterion 9: global sanity ---------------------------------------------

inline CriterionResult criterion_global_sanity(const SuiteOptions& opt,
                                               std::vector<RunReport>*) {
  using suite_detail::Check;
  auto t0 = suite_detail::Clock::now();
  Check chk;
  Rng rng(opt.seed ^ 0x900d);

  auto sandwich = [&](const Instance<Rational>& inst, const PricedOutcome<Rational>& out,
                      const std::string& tag) {
    Rational realized(0);
    try {
      realized = evaluate(inst, out.prices, out.allocation);
    } catch (const Error& e) {
      chk.expect(false, tag + " failed evaluate: " + e.what());
      return;
    }
    chk.expect(realized == out.profit, tag + " profit mismatch with evaluate");
    auto oracle = exact_profit(inst);
    auto lp = solve_swm_lp(inst, inst.capacities);
    chk.expect(out.profit <= oracle.profit, tag + " beats the exact oracle");
    chk.expect(oracle.profit <= lp.opt, tag + " oracle beats the welfare LP");
  };

  {
    auto inst = gen_gap<Rational>(4);
    sandwich(inst, run_algorithm1(inst, Rational(1, 4), Alg1Mode::General, 16, opt.seed).outcome,
             "gap/alg1");
    sandwich(inst, maxbuy_run(inst, 64, opt.seed).outcome, "gap/maxbuy");
  }
  for (int i = 0; i < 6; ++i) {
    GenSpec s{Kind::General, 4, 4, 2, 3, opt.seed + 90000 + uint64_t(i)};
    if (i % 2) {
      s.encoding = Encoding::Table;
      s.m = 3;
    }
    auto inst = gen_random<Rational>(s);
    auto mode = i % 2 ? Alg1Mode::Subadditive : Alg1Mode::General;
    sandwich(inst, run_algorithm1(inst, Rational(1, 4), mode, 32, opt.seed + i).outcome,
             "general-" + std::to_string(i));
  }
  for (int i = 0; i < 4; ++i) {
    GenSpec s{Kind::Tree, 4, 4, 2, 2, opt.seed + 91000 + uint64_t(i)};
    auto inst = gen_random<Rational>(s);
    sandwich(inst, tollbooth_tree(inst, Rational(1, 4), 64, opt.seed + i).outcome,
             "tree-" + std::to_string(i));
  }
  for (int i = 0; i < 4; ++i) {
    GenSpec s{Kind::Products, 3, 4, 2, 2, opt.seed + 92000 + uint64_t(i)};
    auto inst = gen_random<Rational>(s);
    sandwich(inst, maxbuy_run(inst, 64, opt.seed + i).outcome, "products-" + std::to_string(i));
  }
  for (int i = 0; i < 4; ++i) {
    GenSpec s{Kind::Highway, 5, 3, 2, 2, opt.seed + 93000 + uint64_t(i)};
    auto inst = gen_random<Rational>(s);
    for (auto& c : inst.capacities) c = inst.n();
    sandwich(inst, highway_run(inst, HighwayMode::Unlimited, 32, opt.seed + i).outcome,
             "highway-" + std::to_string(i));
  }
  return {9, "global sanity: evaluate() passes, profit <= oracle <= welfare LP", chk.ok,
          chk.log.str(), suite_detail::ms_since(t0)};
}

// --- runner ------------------------------------------------------------------

inline std::vector<CriterionResult> run_suite(const SuiteOptions& opt, std::ostream& out,
                                              std::vector<RunReport>* reports = nullptr) {
  std::vector<std::function<CriterionResult(const SuiteOptions&, std::vector<RunReport>*)>>
      criteria{criterion_gap_reproduction, criterion_cs_suite,        criterion_dual_selection,
               criterion_subadditive_profit, criterion_decomposition, criterion_tree_constants,
               criterion_highway_components, criterion_maxbuy,        criterion_global_sanity};
  std::vector<CriterionResult> results;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (opt.criteria) {
      bool wanted = false;
      for (int id : *opt.criteria) wanted = wanted || id == int(i) + 1;
      if (!wanted) continue;
    }
    auto& fn = criteria[i];
    CriterionResult r = fn(opt, reports);
    results.push_back(r);
    out << "[" << (r.passed ? "PASS" : "FAIL") << "] criterion " << r.id << ": " << r.name << " ("
        << int(r.wall_ms) << " ms)";
    if (!r.passed) out << " -- " << r.detail;
    out << "\n" << std::flush;
  }
  if (!opt.out_prefix.empty() && reports) {
    std::ofstream jl(opt.out_prefix + ".jsonl");
    for (const auto& r : *reports) jl << r.to_json().dump() << "\n";
    std::ofstream csv(opt.out_prefix + ".csv");
    csv << RunReport::csv_header() << "\n";
    for (const auto& r : *reports) csv << r.csv_row() << "\n";
  }
  return results;
}

}  // namespace capri
