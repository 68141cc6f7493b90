#include "posec/poset.hpp"

#include <algorithm>
#include <string>

#include "posec/error.hpp"

namespace posec {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

}  // namespace

SubsetMap::SubsetMap(std::vector<ElementId> members) : members_(std::move(members)) {
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (members_[i - 1] >= members_[i]) {
      throw InvalidParameter("subset members must be strictly increasing");
    }
  }
}

SubsetMap SubsetMap::from_mask(std::uint64_t mask) {
  std::vector<ElementId> members;
  for (ElementId i = 0; mask != 0; ++i, mask >>= 1U) {
    if (mask & 1U) members.push_back(i);
  }
  return SubsetMap(std::move(members));
}

std::size_t SubsetMap::local_of(ElementId parent) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), parent);
  if (it == members_.end() || *it != parent) return members_.size();
  return static_cast<std::size_t>(it - members_.begin());
}

Poset::Poset(std::size_t n, std::vector<std::uint64_t> rows)
    : n_(n), words_(words_for(n)), rows_(std::move(rows)) {}

Poset Poset::from_relations(std::size_t n, std::span<const Relation> pairs) {
  if (n == 0) throw EmptyPosetError("a poset needs at least one element");
  const std::size_t words = words_for(n);
  std::vector<std::uint64_t> rows(n * words, 0);
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw ElementIndexError("relation " + std::to_string(a) + " < " + std::to_string(b) +
                              " references an element outside [0, " + std::to_string(n) + ")");
    }
    rows[a * words + b / 64] |= std::uint64_t{1} << (b % 64);
  }

  // Warshall closure on bitset rows: if i < k then everything above k is above i.
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t* above_k = rows.data() + k * words;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t* above_i = rows.data() + i * words;
      if ((above_i[k / 64] >> (k % 64)) & 1U) {
        for (std::size_t w = 0; w < words; ++w) above_i[w] |= above_k[w];
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if ((rows[i * words + i / 64] >> (i % 64)) & 1U) {
      throw CycleError("relations force element " + std::to_string(i) + " below itself");
    }
  }
  return Poset(n, std::move(rows));
}

void Poset::check_index(ElementId x) const {
  if (x >= n_) {
    throw ElementIndexError("element " + std::to_string(x) + " outside [0, " +
                            std::to_string(n_) + ")");
  }
}

std::vector<ElementId> Poset::elements_above(ElementId x) const {
  check_index(x);
  std::vector<ElementId> out;
  for (ElementId y = 0; y < n_; ++y) {
    if (less(x, y)) out.push_back(y);
  }
  return out;
}

std::vector<ElementId> Poset::elements_below(ElementId x) const {
  check_index(x);
  std::vector<ElementId> out;
  for (ElementId y = 0; y < n_; ++y) {
    if (less(y, x)) out.push_back(y);
  }
  return out;
}

bool Poset::is_maximal(ElementId x) const {
  check_index(x);
  auto r = row(x);
  return std::all_of(r.begin(), r.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<ElementId> Poset::maximal_elements() const {
  std::vector<ElementId> out;
  for (ElementId x = 0; x < n_; ++x) {
    if (is_maximal(x)) out.push_back(x);
  }
  return out;
}

std::vector<Relation> Poset::relations() const {
  std::vector<Relation> out;
  for (ElementId a = 0; a < n_; ++a) {
    for (ElementId b = 0; b < n_; ++b) {
      if (less(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::size_t Poset::relation_count() const {
  std::size_t count = 0;
  for (std::uint64_t w : rows_) count += static_cast<std::size_t>(__builtin_popcountll(w));
  return count;
}

std::vector<Relation> Poset::cover_relations() const {
  std::vector<Relation> out;
  for (ElementId a = 0; a < n_; ++a) {
    for (ElementId b = 0; b < n_; ++b) {
      if (!less(a, b)) continue;
      bool covered = true;
      for (ElementId c = 0; c < n_ && covered; ++c) {
        if (less(a, c) && less(c, b)) covered = false;
      }
      if (covered) out.emplace_back(a, b);
    }
  }
  return out;
}

Poset Poset::induced(const SubsetMap& subset) const {
  if (subset.empty()) throw EmptyPosetError("induced subposet of an empty subset");
  for (ElementId m : subset.members()) check_index(m);
  const std::size_t k = subset.size();
  const std::size_t words = words_for(k);
  std::vector<std::uint64_t> rows(k * words, 0);
  // The restriction of a closed strict order is itself closed.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (less(subset.parent(i), subset.parent(j))) {
        rows[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }
  return Poset(k, std::move(rows));
}

std::vector<ElementId> maximal_elements(const Poset& p) { return p.maximal_elements(); }

std::vector<ElementId> elements_above(const Poset& p, ElementId x) { return p.elements_above(x); }

Poset induced_subposet(const Poset& p, const SubsetMap& subset) { return p.induced(subset); }

}  // namespace posec
