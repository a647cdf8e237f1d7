#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "capri/core.hpp"

namespace capri {

using Json = nlohmann::ordered_json;

namespace detail {

template <class T>
T value_from_json(const Json& v) {
  if (v.is_string()) return parse_number<T>(v.get<std::string>());
  if (v.is_number_integer()) return NumericTraits<T>::from_long(v.get<long>());
  return NumericTraits<T>::from_double(v.get<double>());
}

template <class T>
Json value_to_json(const T& v) {
  if constexpr (NumericTraits<T>::exact)
    return format_number(v);
  else
    return v;
}

inline Json set_to_json(ItemSet s) {
  Json arr = Json::array();
  for (int e : s.items()) arr.push_back(e);
  return arr;
}

inline ItemSet set_from_json(const Json& arr) {
  std::vector<int> items;
  for (const auto& v : arr) items.push_back(v.get<int>());
  return ItemSet::from_items(items);
}

}  // namespace detail

/// Instance schema:
/// {"kind":"general|tree|highway|products","m":int,"capacities":[int],
///  "tree_edges":[[u,v]]?,"root":int?,
///  "customers":[{"encoding":"explicit|interval|table|unit_demand",
///                "entries":[...],"subadditive":bool?}]}
/// Sets are sorted item-index arrays, intervals inclusive [a,b] pairs, and
/// values decimal/fraction strings (exact mode) or doubles.
template <class T>
Json instance_to_json(const Instance<T>& inst) {
  Json j;
  j["kind"] = kind_name(inst.kind);
  j["m"] = inst.m;
  j["capacities"] = inst.capacities;
  if (inst.kind == Kind::Tree) {
    Json edges = Json::array();
    for (auto [u, v] : inst.tree_edges) edges.push_back(Json::array({u, v}));
    j["tree_edges"] = edges;
    j["root"] = inst.root;
  }
  Json customers = Json::array();
  for (const auto& cust : inst.customers) {
    Json c;
    c["encoding"] = encoding_name(cust.encoding());
    Json entries = Json::array();
    switch (cust.encoding()) {
      case Encoding::Explicit:
        for (const auto& e : cust.entries())
          entries.push_back(Json::array({detail::set_to_json(e.set), detail::value_to_json(e.value)}));
        break;
      case Encoding::Interval:
        for (const auto& e : cust.entries()) {
          auto items = e.set.items();
          entries.push_back(Json::array(
              {Json::array({items.front(), items.back()}), detail::value_to_json(e.value)}));
        }
        break;
      case Encoding::Table: {
        const auto& tv = cust.table_values();
        for (uint64_t mask = 1; mask < tv.size(); ++mask)
          entries.push_back(Json::array(
              {detail::set_to_json(ItemSet::from_bits(mask)), detail::value_to_json(tv[mask])}));
        break;
      }
      case Encoding::UnitDemand:
        for (const auto& v : cust.item_values()) entries.push_back(detail::value_to_json(v));
        break;
    }
    c["entries"] = std::move(entries);
    customers.push_back(std::move(c));
  }
  j["customers"] = std::move(customers);
  return j;
}

template <class T>
Instance<T> instance_from_json(const Json& j) {
  Instance<T> inst;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "general")
    inst.kind = Kind::General;
  else if (kind == "tree")
    inst.kind = Kind::Tree;
  else if (kind == "highway")
    inst.kind = Kind::Highway;
  else if (kind == "products")
    inst.kind = Kind::Products;
  else
    throw InvalidInstance("unknown kind: " + kind);
  inst.m = j.at("m").get<int>();
  inst.capacities = j.at("capacities").get<std::vector<long>>();
  if (inst.kind == Kind::Tree) {
    for (const auto& e : j.at("tree_edges"))
      inst.tree_edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    inst.root = j.value("root", 0);
  }
  for (const auto& c : j.at("customers")) {
    std::string enc = c.at("encoding").get<std::string>();
    bool claim_subadd = c.value("subadditive", false);
    const Json& entries = c.at("entries");
    if (enc == "explicit") {
      std::vector<typename Valuation<T>::Entry> es;
      for (const auto& e : entries)
        es.push_back({detail::set_from_json(e.at(0)), detail::value_from_json<T>(e.at(1))});
      inst.customers.push_back(Valuation<T>::explicit_sets(std::move(es)));
    } else if (enc == "interval") {
      std::vector<std::tuple<int, int, T>> ivals;
      for (const auto& e : entries)
        ivals.emplace_back(e.at(0).at(0).get<int>(), e.at(0).at(1).get<int>(),
                           detail::value_from_json<T>(e.at(1)));
      inst.customers.push_back(Valuation<T>::intervals(ivals));
    } else if (enc == "table") {
      std::vector<T> table(size_t{1} << inst.m, T(0));
      for (const auto& e : entries)
        table[detail::set_from_json(e.at(0)).bits()] = detail::value_from_json<T>(e.at(1));
      inst.customers.push_back(Valuation<T>::table(inst.m, std::move(table), claim_subadd));
    } else if (enc == "unit_demand") {
      std::vector<T> per_item;
      for (const auto& e : entries) per_item.push_back(detail::value_from_json<T>(e));
      inst.customers.push_back(Valuation<T>::unit_demand(std::move(per_item)));
    } else {
      throw InvalidInstance("unknown encoding: " + enc);
    }
  }
  inst.validate();
  return inst;
}

template <class T>
Json outcome_to_json(const PricedOutcome<T>& out) {
  Json j;
  Json prices = Json::array();
  for (const auto& p : out.prices.p) prices.push_back(detail::value_to_json(p));
  j["prices"] = std::move(prices);
  Json sets = Json::array();
  for (ItemSet s : out.allocation.sets) sets.push_back(detail::set_to_json(s));
  j["allocation"] = std::move(sets);
  j["profit"] = detail::value_to_json(out.profit);
  j["provenance"] = out.provenance;
  return j;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace capri
