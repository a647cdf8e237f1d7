#pragma once

#include <optional>
#include <sstream>
#include <string>

#include "capri/json_io.hpp"

namespace capri {

/// One row of an experiment run. Every numeric field is traceable to a module
/// output, and (instance, seed) reproduce the row bit for bit.
struct RunReport {
  std::string instance_id;
  std::string algorithm;
  uint64_t seed = 0;
  std::string epsilon;  // formatted number, may be empty
  int trials = 0;
  std::string profit;
  std::string opt_lp_c;
  std::string opt_lp_1;
  std::string exact_profit;  // empty when not computed
  std::string bound;         // guarantee value the run was checked against
  bool pass = true;
  double wall_ms = 0;

  static std::string csv_header() {
    return "instance,algorithm,seed,epsilon,trials,profit,opt_lp_c,opt_lp_1,exact_profit,bound,"
           "pass,wall_ms";
  }

  std::string csv_row() const {
    std::ostringstream os;
    os << instance_id << ',' << algorithm << ',' << seed << ',' << epsilon << ',' << trials << ','
       << profit << ',' << opt_lp_c << ',' << opt_lp_1 << ',' << exact_profit << ',' << bound
       << ',' << (pass ? "1" : "0") << ',' << wall_ms;
    return os.str();
  }

  Json to_json() const {
    Json j;
    j["instance"] = instance_id;
    j["algorithm"] = algorithm;
    j["seed"] = seed;
    j["epsilon"] = epsilon;
    j["trials"] = trials;
    j["profit"] = profit;
    j["opt_lp_c"] = opt_lp_c;
    j["opt_lp_1"] = opt_lp_1;
    j["exact_profit"] = exact_profit;
    j["bound"] = bound;
    j["pass"] = pass;
    j["wall_ms"] = wall_ms;
    return j;
  }
};

}  // namespace capri
