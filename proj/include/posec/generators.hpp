#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posec/poset.hpp"

namespace posec {

Poset chain(std::size_t n);
Poset antichain(std::size_t n);
// Elements a = 0, b = 1, c = 2 with c < a and c < b.
Poset wedge();
// Subsets of a k-set under strict inclusion; element i is the subset with
// bitmask i. Requires 1 <= k <= 4.
Poset boolean_lattice(std::size_t k);
// Random graph order: each pair i < j is related independently with
// probability `edge_probability`, then the relation is closed.
Poset random_poset(std::size_t n, double edge_probability, std::uint64_t seed);
// Disjoint union of chains, laid out consecutively.
Poset forest_of_chains(std::span<const std::size_t> lengths);

// Parsed "family[:param]*" spec: chain:N, antichain:N, wedge, boolean:K,
// forest:L1,L2,..., random:N:P:SEED.
struct GeneratorSpec {
  std::string family;
  std::vector<std::size_t> sizes;
  double edge_probability = 0.0;
  std::uint64_t seed = 0;

  Poset build() const;
  std::string to_string() const;
};

bool is_generator_family(std::string_view family);

// Throws ParseError on malformed text and InvalidParameter on values outside
// a family's domain.
GeneratorSpec parse_generator_spec(std::string_view text);

struct NamedPoset {
  std::string name;
  Poset poset;
};

// chain(1), chain(5), chain(20), antichain(5), antichain(20), wedge,
// boolean_lattice(3), forest_of_chains({2,3,4}) and random(8, 0.3) for
// seeds 1 through 5.
std::vector<NamedPoset> canonical_suite();

}  // namespace posec
