#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "posec/poset.hpp"
#include "posec/rational.hpp"

namespace posec {

// Weight order of a poset's elements. Only the ranking matters to the greedy
// chain: with i.i.d. continuous weights, ties have probability zero.
class WeightRanking {
 public:
  // rank[i] is the weight-rank of element i (0 = smallest weight). Throws
  // InvalidParameter unless `rank` is a permutation of [0, n).
  explicit WeightRanking(std::vector<std::size_t> rank);

  // Rank by increasing weight; equal weights are ordered by element index.
  static WeightRanking from_weights(std::span<const double> weights);
  // `by_weight[r]` is the element of rank r.
  static WeightRanking from_order(std::vector<ElementId> by_weight);

  std::size_t size() const { return rank_.size(); }
  std::size_t rank_of(ElementId x) const { return rank_[x]; }
  ElementId at_rank(std::size_t r) const { return order_[r]; }
  const std::vector<std::size_t>& ranks() const { return rank_; }
  const std::vector<ElementId>& order() const { return order_; }

 private:
  WeightRanking(std::vector<std::size_t> rank, std::vector<ElementId> order)
      : rank_(std::move(rank)), order_(std::move(order)) {}

  std::vector<std::size_t> rank_;
  std::vector<ElementId> order_;
};

// z_0, ..., z_m: z_0 has the smallest weight, z_{i+1} is the lightest element
// above z_i, and z_m is maximal.
using GreedyChain = std::vector<ElementId>;

GreedyChain greedy_chain(const Poset& p, const WeightRanking& w);

// Terminal element of the greedy chain; always maximal in `p`.
ElementId greedy_maximum(const Poset& p, const WeightRanking& w);

// Terminal element of the greedy chain for elements listed by increasing
// weight. Allocation free; `by_weight` must be a permutation of p's elements.
ElementId greedy_maximum_of_order(const Poset& p, std::span<const ElementId> by_weight);

// True iff x_local is the greedy maximum of p_x, the induced order on the
// elements exposed up to and including x.
bool is_tagged(const Poset& p_x, ElementId x_local, const WeightRanking& w);

inline constexpr std::size_t kMuEnumerationCap = 10;
inline constexpr std::size_t kMuTEnumerationCap = 8;

// Probability of each element being the greedy maximum, stored as counts of
// weight rankings over the n! equally likely rankings.
class MuTable {
 public:
  MuTable(std::vector<std::uint64_t> counts, std::uint64_t denominator)
      : counts_(std::move(counts)), denominator_(denominator) {}

  std::size_t size() const { return counts_.size(); }
  Rational at(ElementId x) const { return Rational(counts_.at(x), denominator_); }
  Rational operator[](ElementId x) const { return at(x); }
  std::uint64_t count(ElementId x) const { return counts_.at(x); }
  std::uint64_t denominator() const { return denominator_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t denominator_;
};

// Exact greedy-maximum distribution by enumerating all n! weight rankings.
// Throws TooLargeError when p.size() > cap.
MuTable mu_exact(const Poset& p, std::size_t cap = kMuEnumerationCap);

// Exact mu and mu_t queries on one poset. mu_t(x) is evaluated as the sum over
// subsets S containing x of t^{|S|-1} (1-t)^{n-|S|} mu_{p[S]}(x): every other
// element survives independently with probability t. Sub-poset tables are
// memoized by member bitmask so repeated queries share work.
class MuOracle {
 public:
  // Throws TooLargeError when p.size() > cap.
  explicit MuOracle(Poset p, std::size_t cap = kMuTEnumerationCap);

  const Poset& poset() const { return poset_; }
  const MuTable& table() { return table_for(full_mask()); }
  Rational mu(ElementId x);
  // Throws NotMaximalError unless x is maximal and InvalidParameter unless
  // 0 <= t <= 1.
  Rational mu_t(ElementId x, const Rational& t);

 private:
  std::uint64_t full_mask() const { return (std::uint64_t{1} << poset_.size()) - 1; }
  const MuTable& table_for(std::uint64_t mask);

  Poset poset_;
  std::unordered_map<std::uint64_t, MuTable> tables_;
};

Rational mu_t_exact(const Poset& p, ElementId x, const Rational& t,
                    std::size_t cap = kMuTEnumerationCap);

struct MonotonicityViolation {
  ElementId element;
  Rational t;
  Rational mu_t;
  Rational mu;
};

struct MonotonicityReport {
  std::size_t checks = 0;
  std::vector<MonotonicityViolation> violations;
  bool passed() const { return violations.empty(); }
};

// Checks mu_t(x) >= mu(x) exactly for every maximal x and every t in `grid`.
MonotonicityReport check_mu_monotonicity(const Poset& p, std::span<const Rational> grid,
                                         std::size_t cap = kMuTEnumerationCap);

// {k / steps : 0 <= k <= steps}.
std::vector<Rational> uniform_grid(unsigned steps);

}  // namespace posec
