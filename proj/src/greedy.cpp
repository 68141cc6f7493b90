#include "posec/greedy.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "posec/error.hpp"

namespace posec {

WeightRanking::WeightRanking(std::vector<std::size_t> rank) : rank_(std::move(rank)) {
  order_.assign(rank_.size(), rank_.size());
  for (ElementId x = 0; x < rank_.size(); ++x) {
    const std::size_t r = rank_[x];
    if (r >= rank_.size() || order_[r] != rank_.size()) {
      throw InvalidParameter("weight ranking is not a permutation");
    }
    order_[r] = x;
  }
}

WeightRanking WeightRanking::from_weights(std::span<const double> weights) {
  std::vector<ElementId> order(weights.size());
  std::iota(order.begin(), order.end(), ElementId{0});
  std::sort(order.begin(), order.end(), [&](ElementId a, ElementId b) {
    return weights[a] < weights[b] || (weights[a] == weights[b] && a < b);
  });
  return from_order(std::move(order));
}

WeightRanking WeightRanking::from_order(std::vector<ElementId> by_weight) {
  std::vector<std::size_t> rank(by_weight.size(), by_weight.size());
  for (std::size_t r = 0; r < by_weight.size(); ++r) {
    const ElementId x = by_weight[r];
    if (x >= by_weight.size() || rank[x] != by_weight.size()) {
      throw InvalidParameter("weight order is not a permutation");
    }
    rank[x] = r;
  }
  return WeightRanking(std::move(rank), std::move(by_weight));
}

namespace {

void check_ranking(const Poset& p, const WeightRanking& w) {
  if (w.size() != p.size()) {
    throw DimensionError("ranking covers " + std::to_string(w.size()) + " elements, poset has " +
                         std::to_string(p.size()));
  }
}

}  // namespace

// Everything above z_{i} is above z_{i-1} as well, so the lightest element above
// z_i is also the next element above it in weight order. One pass suffices.
GreedyChain greedy_chain(const Poset& p, const WeightRanking& w) {
  check_ranking(p, w);
  GreedyChain chain{w.at_rank(0)};
  for (std::size_t r = 1; r < w.size(); ++r) {
    const ElementId candidate = w.at_rank(r);
    if (p.less(chain.back(), candidate)) chain.push_back(candidate);
  }
  return chain;
}

ElementId greedy_maximum_of_order(const Poset& p, std::span<const ElementId> by_weight) {
  ElementId current = by_weight.front();
  for (ElementId candidate : by_weight.subspan(1)) {
    if (p.less(current, candidate)) current = candidate;
  }
  return current;
}

ElementId greedy_maximum(const Poset& p, const WeightRanking& w) {
  check_ranking(p, w);
  return greedy_maximum_of_order(p, w.order());
}

bool is_tagged(const Poset& p_x, ElementId x_local, const WeightRanking& w) {
  if (x_local >= p_x.size()) throw ElementIndexError("tag query outside the induced poset");
  return greedy_maximum(p_x, w) == x_local;
}

MuTable mu_exact(const Poset& p, std::size_t cap) {
  const std::size_t n = p.size();
  if (n > cap) {
    throw TooLargeError("exact mu enumerates n! rankings; n = " + std::to_string(n) +
                        " exceeds the cap of " + std::to_string(cap));
  }
  std::vector<ElementId> order(n);
  std::iota(order.begin(), order.end(), ElementId{0});
  std::vector<std::uint64_t> counts(n, 0);
  std::uint64_t total = 0;
  do {
    ++counts[greedy_maximum_of_order(p, order)];
    ++total;
  } while (std::next_permutation(order.begin(), order.end()));
  return MuTable(std::move(counts), total);
}

MuOracle::MuOracle(Poset p, std::size_t cap) : poset_(std::move(p)) {
  if (poset_.size() > cap || poset_.size() >= 64) {
    throw TooLargeError("exact mu_t sums over 2^n subsets; n = " + std::to_string(poset_.size()) +
                        " exceeds the cap of " + std::to_string(cap));
  }
}

const MuTable& MuOracle::table_for(std::uint64_t mask) {
  auto it = tables_.find(mask);
  if (it == tables_.end()) {
    const Poset sub = poset_.induced(SubsetMap::from_mask(mask));
    it = tables_.emplace(mask, mu_exact(sub, sub.size())).first;
  }
  return it->second;
}

Rational MuOracle::mu(ElementId x) {
  if (x >= poset_.size()) throw ElementIndexError("element outside the poset");
  return table().at(x);
}

Rational MuOracle::mu_t(ElementId x, const Rational& t) {
  if (!poset_.is_maximal(x)) {
    throw NotMaximalError("mu_t is only defined here for maximal elements; element " +
                          std::to_string(x) + " is not maximal");
  }
  if (t < 0 || t > 1) throw InvalidParameter("t must lie in [0, 1]");

  const std::size_t n = poset_.size();
  const std::uint64_t x_bit = std::uint64_t{1} << x;
  const std::uint64_t others = full_mask() & ~x_bit;

  // Powers of t and (1 - t) for every survivor count.
  std::vector<Rational> t_pow(n, Rational(1));
  std::vector<Rational> s_pow(n, Rational(1));
  const Rational discard = 1 - t;
  for (std::size_t i = 1; i < n; ++i) {
    t_pow[i] = t_pow[i - 1] * t;
    s_pow[i] = s_pow[i - 1] * discard;
  }

  Rational total = 0;
  // Enumerate submasks of `others` including the empty one.
  std::uint64_t kept = others;
  while (true) {
    const std::uint64_t mask = kept | x_bit;
    const auto survivors = static_cast<std::size_t>(std::popcount(kept));
    const auto x_local = static_cast<std::size_t>(std::popcount(mask & (x_bit - 1)));
    const MuTable& table = table_for(mask);
    if (table.count(x_local) != 0) {
      total += t_pow[survivors] * s_pow[n - 1 - survivors] * table.at(x_local);
    }
    if (kept == 0) break;
    kept = (kept - 1) & others;
  }
  return total;
}

Rational mu_t_exact(const Poset& p, ElementId x, const Rational& t, std::size_t cap) {
  MuOracle oracle(p, cap);
  return oracle.mu_t(x, t);
}

MonotonicityReport check_mu_monotonicity(const Poset& p, std::span<const Rational> grid,
                                         std::size_t cap) {
  MuOracle oracle(p, cap);
  MonotonicityReport report;
  for (ElementId x : p.maximal_elements()) {
    const Rational mu = oracle.mu(x);
    for (const Rational& t : grid) {
      Rational value = oracle.mu_t(x, t);
      ++report.checks;
      if (value < mu) report.violations.push_back({x, t, std::move(value), mu});
    }
  }
  return report;
}

std::vector<Rational> uniform_grid(unsigned steps) {
  if (steps == 0) throw InvalidParameter("grid needs at least one step");
  std::vector<Rational> grid;
  grid.reserve(steps + 1);
  for (unsigned k = 0; k <= steps; ++k) grid.emplace_back(k, steps);
  return grid;
}

}  // namespace posec
