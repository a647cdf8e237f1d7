#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace capri {

/// Set of item indices in [0, 64), packed as a bitmask. Instances in this
/// library are desk-scale, so 64 items is a hard cap enforced on load.
class ItemSet {
 public:
  static constexpr int kMaxItems = 64;

  constexpr ItemSet() = default;

  static ItemSet single(int e) { return ItemSet(uint64_t{1} << check(e)); }

  /// Inclusive range [a, b]; empty when a > b.
  static ItemSet range(int a, int b) {
    if (a > b) return ItemSet();
    check(a);
    check(b);
    uint64_t hi = (b == 63) ? ~uint64_t{0} : ((uint64_t{1} << (b + 1)) - 1);
    uint64_t lo = (uint64_t{1} << a) - 1;
    return ItemSet(hi & ~lo);
  }

  static ItemSet from_items(const std::vector<int>& items) {
    ItemSet s;
    for (int e : items) s.bits_ |= uint64_t{1} << check(e);
    return s;
  }

  bool contains(int e) const { return (bits_ >> e) & 1u; }
  bool empty() const { return bits_ == 0; }
  int size() const { return std::popcount(bits_); }
  bool subset_of(ItemSet o) const { return (bits_ & ~o.bits_) == 0; }
  bool intersects(ItemSet o) const { return (bits_ & o.bits_) != 0; }

  ItemSet unite(ItemSet o) const { return ItemSet(bits_ | o.bits_); }
  ItemSet intersect(ItemSet o) const { return ItemSet(bits_ & o.bits_); }
  ItemSet minus(ItemSet o) const { return ItemSet(bits_ & ~o.bits_); }
  ItemSet with(int e) const { return ItemSet(bits_ | (uint64_t{1} << check(e))); }
  ItemSet without(int e) const { return ItemSet(bits_ & ~(uint64_t{1} << check(e))); }

  int lowest() const {
    if (bits_ == 0) throw std::logic_error("lowest() on empty ItemSet");
    return std::countr_zero(bits_);
  }

  std::vector<int> items() const {
    std::vector<int> out;
    out.reserve(size());
    for (uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  uint64_t bits() const { return bits_; }
  static ItemSet from_bits(uint64_t b) { return ItemSet(b); }

  /// Lexicographic order on the sorted element sequences: the set owning the
  /// lowest non-shared item comes first.
  static bool lex_less(ItemSet a, ItemSet b) {
    uint64_t diff = a.bits_ ^ b.bits_;
    if (diff == 0) return false;
    uint64_t low = diff & (~diff + 1);
    return (a.bits_ & low) != 0;
  }

  /// Demand-oracle tie order: smaller cardinality first, then lexicographic.
  static bool demand_less(ItemSet a, ItemSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_less(a, b);
  }

  friend bool operator==(ItemSet a, ItemSet b) { return a.bits_ == b.bits_; }
  friend bool operator!=(ItemSet a, ItemSet b) { return a.bits_ != b.bits_; }
  /// Arbitrary deterministic total order for use as a map key.
  friend bool operator<(ItemSet a, ItemSet b) { return a.bits_ < b.bits_; }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int e : items()) {
      if (!first) s += ",";
      s += std::to_string(e);
      first = false;
    }
    return s + "}";
  }

 private:
  explicit constexpr ItemSet(uint64_t bits) : bits_(bits) {}

  static int check(int e) {
    if (e < 0 || e >= kMaxItems) throw std::out_of_range("item index " + std::to_string(e));
    return e;
  }

  uint64_t bits_ = 0;
};

}  // namespace capri
