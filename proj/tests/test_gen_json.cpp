#include <catch_amalgamated.hpp>

#include "capri/gen.hpp"
#include "capri/json_io.hpp"
#include "capri/lpkit.hpp"
#include "capri/suite.hpp"

using namespace capri;

TEST_CASE("number parsing") {
  REQUIRE(parse_number<Rational>("25/12") == Rational(25, 12));
  REQUIRE(parse_number<Rational>("3") == Rational(3));
  REQUIRE(parse_number<Rational>("-2.5") == Rational(-5, 2));
  REQUIRE(parse_number<Rational>("0.125") == Rational(1, 8));
  REQUIRE(parse_number<double>("1/4") == Catch::Approx(0.25));
  REQUIRE(format_number(Rational(25, 12)) == "25/12");
  REQUIRE(ceil_to_long(Rational(5, 4)) == 2);
  REQUIRE(ceil_to_long(Rational(2)) == 2);
  REQUIRE(ceil_to_long(1.25 * 4) == 5);  // no float drift on exact products
  REQUIRE(harmonic<Rational>(4) == Rational(25, 12));
}

TEST_CASE("instance JSON round trip preserves semantics") {
  std::vector<GenSpec> specs = {
      {Kind::General, 4, 3, 2, 3, 11, Encoding::Explicit},
      {Kind::General, 3, 3, 2, 2, 12, Encoding::Table},
      {Kind::General, 4, 3, 2, 2, 13, Encoding::UnitDemand},
      {Kind::Tree, 4, 3, 2, 2, 14},
      {Kind::Highway, 5, 3, 2, 2, 15},
      {Kind::Products, 3, 4, 2, 2, 16},
  };
  for (const auto& s : specs) {
    auto inst = gen_random<Rational>(s);
    Json j = instance_to_json(inst);
    auto back = instance_from_json<Rational>(j);
    REQUIRE(back.kind == inst.kind);
    REQUIRE(back.m == inst.m);
    REQUIRE(back.capacities == inst.capacities);
    REQUIRE(back.n() == inst.n());
    // Identical LP optimum is a strong semantic equality check.
    REQUIRE(solve_swm_lp(back, back.capacities).opt == solve_swm_lp(inst, inst.capacities).opt);
    // Byte-identical re-serialization.
    REQUIRE(instance_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("gap fixture serializes exact fractions") {
  auto inst = gen_gap<Rational>(3);
  Json j = instance_to_json(inst);
  REQUIRE(j["customers"][2]["entries"][0][1].get<std::string>() == "1/3");
  auto back = instance_from_json<Rational>(j);
  REQUIRE(back.customers[2].value(ItemSet::single(0)) == Rational(1, 3));
}

TEST_CASE("float-mode instances load numeric values") {
  auto inst = gen_random<double>({Kind::General, 4, 3, 2, 3, 21});
  Json j = instance_to_json(inst);
  auto back = instance_from_json<double>(j);
  REQUIRE(solve_swm_lp(back, back.capacities).opt ==
          Catch::Approx(solve_swm_lp(inst, inst.capacities).opt));
}

TEST_CASE("generators are seed-deterministic") {
  for (uint64_t seed : {1ULL, 42ULL, 777ULL}) {
    auto a = gen_random<Rational>({Kind::Highway, 5, 4, 2, 3, seed});
    auto b = gen_random<Rational>({Kind::Highway, 5, 4, 2, 3, seed});
    REQUIRE(instance_to_json(a).dump() == instance_to_json(b).dump());
  }
  auto a = gen_random<Rational>({Kind::General, 4, 4, 2, 3, 5});
  auto b = gen_random<Rational>({Kind::General, 4, 4, 2, 3, 6});
  REQUIRE(instance_to_json(a).dump() != instance_to_json(b).dump());
}

TEST_CASE("subadditive interval generator passes the interval check") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    GenSpec s{Kind::Highway, 5, 4, 2, 2, seed};
    s.subadditive_intervals = true;
    auto inst = gen_random<Rational>(s);
    for (const auto& cust : inst.customers) REQUIRE(check_subadditive(cust, inst.m));
  }
}

TEST_CASE("generated capacities stay within [1, cap_max]") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    auto inst = gen_random<Rational>({Kind::General, 5, 4, 2, 4, seed});
    for (long c : inst.capacities) {
      REQUIRE(c >= 1);
      REQUIRE(c <= 4);
    }
  }
}

TEST_CASE("suite runner: empty selection and determinism") {
  SECTION("an empty criteria list yields an empty report") {
    capri::SuiteOptions opt;
    opt.criteria = std::vector<int>{};
    std::ostringstream sink;
    std::vector<capri::RunReport> reports;
    auto results = capri::run_suite(opt, sink, &reports);
    REQUIRE(results.empty());
    REQUIRE(reports.empty());
  }
  SECTION("identical seeds reproduce identical report rows") {
    capri::SuiteOptions opt;
    opt.criteria = std::vector<int>{1};
    std::ostringstream sink;
    std::vector<capri::RunReport> a, b;
    capri::run_suite(opt, sink, &a);
    capri::run_suite(opt, sink, &b);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].csv_row() == b[i].csv_row());
  }
}

TEST_CASE("table loading validates claimed subadditivity") {
  Json j;
  j["kind"] = "general";
  j["m"] = 2;
  j["capacities"] = {1, 1};
  Json cust;
  cust["encoding"] = "table";
  cust["subadditive"] = true;
  cust["entries"] = Json::array({Json::array({Json::array({0}), "1"}),
                                 Json::array({Json::array({1}), "1"}),
                                 Json::array({Json::array({0, 1}), "5"})});
  j["customers"] = Json::array({cust});
  REQUIRE_THROWS_AS(instance_from_json<Rational>(j), InvalidInstance);
  cust["entries"][2][1] = "2";  // now subadditive
  j["customers"] = Json::array({cust});
  REQUIRE_NOTHROW(instance_from_json<Rational>(j));
}
