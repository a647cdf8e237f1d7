// Benchmark and experiment CLI: instance generation, the pricing algorithms,
// brute-force oracles, and the acceptance suite. Reports are JSON on stdout
// (or --out), instances follow the schema in include/capri/json_io.hpp.
#include <CLI11.hpp>

#include <iostream>

#include "capri/capri.hpp"

using namespace capri;

namespace {

struct CommonArgs {
  std::string instance_path;
  std::string numeric = "exact";
  std::string out;
  uint64_t seed = 1;
  int trials = 64;
};

void emit(const Json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json_file(out, j);
}

template <class T>
Json summarize_outcome(const Instance<T>& inst, const PricedOutcome<T>& outcome) {
  Json j = outcome_to_json(outcome);
  j["evaluate"] = format_number(evaluate(inst, outcome.prices, outcome.allocation));
  return j;
}

template <class T>
int run_alg1(const CommonArgs& a, const std::string& eps_str, const std::string& mode) {
  auto inst = instance_from_json<T>(load_json_file(a.instance_path));
  T eps = parse_number<T>(eps_str);
  Alg1Mode m = mode == "general" ? Alg1Mode::General : Alg1Mode::Subadditive;
  auto r = run_algorithm1(inst, eps, m, a.trials, a.seed);
  Json j;
  j["algorithm"] = "alg1";
  j["mode"] = mode;
  j["epsilon"] = eps_str;
  j["seed"] = a.seed;
  j["trials"] = a.trials;
  j["opt_lp_c"] = format_number(r.opt_full);
  j["opt_lp_1"] = format_number(r.opt_unit);
  j["selected_u"] = r.selected.u;
  j["dual_score"] = format_number(r.selected.score);
  j["rounded_profit"] = format_number(r.rounded_profit);
  j["unit_profit"] = format_number(r.unit_profit);
  j["outcome"] = summarize_outcome(inst, r.outcome);
  emit(j, a.out);
  return 0;
}

template <class T>
int run_tree(const CommonArgs& a, const std::string& eps_str, double alpha) {
  auto inst = instance_from_json<T>(load_json_file(a.instance_path));
  T eps = parse_number<T>(eps_str);
  auto r = tollbooth_tree(inst, eps, a.trials, a.seed, alpha);
  Json j;
  j["algorithm"] = "tree";
  j["alpha"] = alpha;
  j["epsilon"] = eps_str;
  j["seed"] = a.seed;
  j["trials"] = a.trials;
  j["opt_lp_c"] = format_number(r.opt_full);
  j["opt_lp_1"] = format_number(r.opt_unit);
  j["rounded_profit"] = format_number(r.rounded_profit);
  j["unit_profit"] = format_number(r.unit_profit);
  j["outcome"] = summarize_outcome(inst, r.outcome);
  emit(j, a.out);
  return 0;
}

template <class T>
int run_highway(const CommonArgs& a, const std::string& mode) {
  auto inst = instance_from_json<T>(load_json_file(a.instance_path));
  HighwayMode m = mode == "unlimited" ? HighwayMode::Unlimited : HighwayMode::Subadditive;
  auto r = highway_run(inst, m, a.trials, a.seed);
  Json j;
  j["algorithm"] = "highway";
  j["mode"] = mode;
  j["seed"] = a.seed;
  j["trials"] = a.trials;
  j["interval_count"] = r.interval_count;
  j["group_count"] = r.group_count;
  j["grid_base"] = format_number(r.grid_base);
  j["grid_size"] = r.grid_size;
  Json groups = Json::array();
  for (const auto& g : r.groups) {
    Json gg;
    gg["group"] = g.group;
    gg["cliques"] = g.clique_count;
    gg["lp_value"] = format_number(g.lp_value);
    gg["dp_oracle_calls"] = g.pricer_calls;
    gg["profit"] = format_number(g.profit);
    groups.push_back(gg);
  }
  j["groups"] = groups;
  j["outcome"] = summarize_outcome(inst, r.outcome);
  emit(j, a.out);
  return 0;
}

template <class T>
int run_maxbuy(const CommonArgs& a) {
  auto inst = instance_from_json<T>(load_json_file(a.instance_path));
  auto r = maxbuy_run(inst, a.trials, a.seed);
  Json j;
  j["algorithm"] = "maxbuy";
  j["seed"] = a.seed;
  j["trials"] = a.trials;
  j["lp_value"] = format_number(r.lp_value);
  j["outcome"] = summarize_outcome(inst, r.outcome);
  emit(j, a.out);
  return 0;
}

template <class T>
int run_oracle(const CommonArgs& a, const std::string& which) {
  auto inst = instance_from_json<T>(load_json_file(a.instance_path));
  Json j;
  j["oracle"] = which;
  if (which == "profit") {
    auto r = exact_profit(inst);
    j["outcome"] = summarize_outcome(inst, r);
  } else if (which == "swm") {
    auto r = swm_exact(inst, inst.capacities);
    j["welfare"] = format_number(r.welfare);
    Json sets = Json::array();
    for (ItemSet s : r.allocation.sets) {
      Json arr = Json::array();
      for (int e : s.items()) arr.push_back(e);
      sets.push_back(arr);
    }
    j["allocation"] = sets;
  } else if (which == "maxbuy") {
    auto r = exact_maxbuy(inst);
    j["value"] = format_number(r.value);
    Json prices = Json::array();
    for (const auto& p : r.prices) prices.push_back(format_number(p));
    j["prices"] = prices;
  } else {
    throw Error("unknown oracle: " + which);
  }
  emit(j, a.out);
  return 0;
}

template <class T>
int run_gen(const std::string& kind, int m, int n, int sets, long cap_max,
            const std::string& encoding, bool interval_cover, bool subadd_intervals,
            uint64_t seed, const std::string& out) {
  Instance<T> inst;
  if (kind == "gap") {
    inst = gen_gap<T>(n);
  } else {
    GenSpec s;
    s.m = m;
    s.n = n;
    s.sets_per_customer = sets;
    s.cap_max = cap_max;
    s.seed = seed;
    s.interval_cover = interval_cover;
    s.subadditive_intervals = subadd_intervals;
    if (kind == "general")
      s.kind = Kind::General;
    else if (kind == "tree")
      s.kind = Kind::Tree;
    else if (kind == "highway")
      s.kind = Kind::Highway;
    else if (kind == "products")
      s.kind = Kind::Products;
    else
      throw Error("unknown kind: " + kind);
    if (encoding == "explicit")
      s.encoding = Encoding::Explicit;
    else if (encoding == "interval")
      s.encoding = Encoding::Interval;
    else if (encoding == "table")
      s.encoding = Encoding::Table;
    else if (encoding == "unit_demand")
      s.encoding = Encoding::UnitDemand;
    else
      throw Error("unknown encoding: " + encoding);
    inst = gen_random<T>(s);
  }
  emit(instance_to_json(inst), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Item-pricing benchmarks for limited-supply combinatorial auctions"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string eps_str = "1/4";
  std::string mode = "subadditive";
  std::string which = "profit";
  double alpha = 0.01;

  std::string gkind = "general", gencoding = "explicit";
  int gm = 4, gn = 4, gsets = 3;
  long gcap = 3;
  bool ginterval_cover = false, gsubadd = false;
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--kind", gkind, "gap|general|tree|highway|products");
  gen->add_option("--m", gm, "item count");
  gen->add_option("--n", gn, "customer count");
  gen->add_option("--sets", gsets, "listed sets per customer");
  gen->add_option("--cap-max", gcap, "capacity upper bound");
  gen->add_option("--encoding", gencoding, "explicit|interval|table|unit_demand");
  gen->add_flag("--interval-cover", ginterval_cover, "line-structured coverage tables");
  gen->add_flag("--subadditive-intervals", gsubadd, "subadditive interval valuations (highway)");
  gen->add_option("--seed", args.seed, "generator seed");
  gen->add_option("--numeric", args.numeric, "exact|float");
  gen->add_option("--out", args.out, "output file (stdout otherwise)");

  auto add_common = [&](CLI::App* cmd, bool with_trials = true) {
    cmd->add_option("--instance", args.instance_path, "instance JSON file")->required();
    cmd->add_option("--numeric", args.numeric, "exact|float");
    cmd->add_option("--seed", args.seed, "master seed");
    if (with_trials) cmd->add_option("--trials", args.trials, "rounding trials");
    cmd->add_option("--out", args.out, "output file (stdout otherwise)");
  };

  auto* alg1 = app.add_subcommand("alg1", "capacity-scheduled pricing");
  add_common(alg1);
  alg1->add_option("--epsilon", eps_str, "schedule growth parameter");
  alg1->add_option("--mode", mode, "subadditive|general");

  auto* tree = app.add_subcommand("tree", "tollbooth pricing on trees");
  add_common(tree);
  tree->add_option("--epsilon", eps_str, "schedule growth parameter");
  tree->add_option("--alpha", alpha, "path sampling rate");

  auto* highway = app.add_subcommand("highway", "configuration-LP pricing on the line");
  add_common(highway);
  highway->add_option("--mode", mode, "subadditive|unlimited");

  auto* maxbuy = app.add_subcommand("maxbuy", "multi-product pricing");
  add_common(maxbuy);

  auto* oracle = app.add_subcommand("oracle", "brute-force reference solvers");
  add_common(oracle, /*with_trials=*/false);
  oracle->add_option("--which", which, "profit|swm|maxbuy");

  auto* suite = app.add_subcommand("suite", "acceptance matrix");
  std::vector<int> suite_criteria;
  suite->add_option("--seed", args.seed, "suite seed");
  suite->add_option("--out", args.out, "report prefix (writes .jsonl and .csv)");
  suite->add_option("--criteria", suite_criteria, "criterion ids to run (default: all)");

  CLI11_PARSE(app, argc, argv);

  try {
    bool exact = args.numeric != "float";
    if (gen->parsed())
      return exact ? run_gen<Rational>(gkind, gm, gn, gsets, gcap, gencoding, ginterval_cover,
                                       gsubadd, args.seed, args.out)
                   : run_gen<double>(gkind, gm, gn, gsets, gcap, gencoding, ginterval_cover,
                                     gsubadd, args.seed, args.out);
    if (alg1->parsed())
      return exact ? run_alg1<Rational>(args, eps_str, mode) : run_alg1<double>(args, eps_str, mode);
    if (tree->parsed())
      return exact ? run_tree<Rational>(args, eps_str, alpha) : run_tree<double>(args, eps_str, alpha);
    if (highway->parsed())
      return exact ? run_highway<Rational>(args, mode) : run_highway<double>(args, mode);
    if (maxbuy->parsed()) return exact ? run_maxbuy<Rational>(args) : run_maxbuy<double>(args);
    if (oracle->parsed())
      return exact ? run_oracle<Rational>(args, which) : run_oracle<double>(args, which);
    if (suite->parsed()) {
      SuiteOptions opt;
      opt.seed = args.seed ? args.seed : 20240817;
      opt.out_prefix = args.out;
      if (suite->count("--criteria")) opt.criteria = suite_criteria;
      std::vector<RunReport> reports;
      auto results = run_suite(opt, std::cout, &reports);
      for (const auto& r : results)
        if (!r.passed) return 1;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
