#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace posec {

// Index of an element inside one Poset. Indices are only meaningful across
// posets through an explicit SubsetMap.
using ElementId = std::size_t;
using Relation = std::pair<ElementId, ElementId>;

// Ordered list of parent indices selecting an induced subposet. Position i of
// the list is element i of the induced poset.
class SubsetMap {
 public:
  SubsetMap() = default;
  // Throws InvalidParameter unless members are strictly increasing.
  explicit SubsetMap(std::vector<ElementId> members);

  static SubsetMap from_mask(std::uint64_t mask);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  ElementId parent(std::size_t local) const { return members_[local]; }
  const std::vector<ElementId>& members() const { return members_; }

  // Local index of a parent element, or size() when absent.
  std::size_t local_of(ElementId parent) const;

 private:
  std::vector<ElementId> members_;
};

// A finite nonempty strict partial order. The full "less than" relation is
// kept in transitively closed form as one bitset row per element, so
// lt(a, b) is a single bit test. Immutable after construction.
class Poset {
 public:
  // Closes `pairs` transitively. Throws EmptyPosetError for n == 0,
  // ElementIndexError for out-of-range indices and CycleError when the
  // closure is not irreflexive.
  static Poset from_relations(std::size_t n, std::span<const Relation> pairs);
  static Poset from_relations(std::size_t n, std::initializer_list<Relation> pairs) {
    return from_relations(n, std::span<const Relation>(pairs.begin(), pairs.size()));
  }

  std::size_t size() const { return n_; }

  bool less(ElementId a, ElementId b) const {
    return (row(a)[b / 64] >> (b % 64)) & 1U;
  }
  bool comparable(ElementId a, ElementId b) const { return less(a, b) || less(b, a); }

  // Bitset of { y : x < y }, one bit per element, little-endian words.
  std::span<const std::uint64_t> above_bits(ElementId x) const { return row(x); }

  std::vector<ElementId> elements_above(ElementId x) const;
  std::vector<ElementId> elements_below(ElementId x) const;
  bool is_maximal(ElementId x) const;
  std::vector<ElementId> maximal_elements() const;

  // Every pair (a, b) with a < b, in lexicographic order.
  std::vector<Relation> relations() const;
  std::size_t relation_count() const;
  // Pairs a < b with nothing strictly between them (the transitive reduction).
  std::vector<Relation> cover_relations() const;

  // Throws EmptyPosetError if `subset` is empty, ElementIndexError if a
  // member is not an element of this poset.
  Poset induced(const SubsetMap& subset) const;

  friend bool operator==(const Poset&, const Poset&) = default;

 private:
  Poset(std::size_t n, std::vector<std::uint64_t> rows);

  std::span<const std::uint64_t> row(ElementId x) const {
    return {rows_.data() + x * words_, words_};
  }
  void check_index(ElementId x) const;

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

std::vector<ElementId> maximal_elements(const Poset& p);
std::vector<ElementId> elements_above(const Poset& p, ElementId x);
Poset induced_subposet(const Poset& p, const SubsetMap& subset);

}  // namespace posec
