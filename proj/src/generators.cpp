#include "posec/generators.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "posec/error.hpp"
#include "posec/random.hpp"

namespace posec {

namespace {

void require_nonempty(std::size_t n, const char* family) {
  if (n == 0) throw InvalidParameter(std::string(family) + " needs at least one element");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_number(std::string_view text, std::string_view spec) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("bad number '" + std::string(text) + "' in generator spec '" + std::string(spec) + "'");
  }
  return value;
}

}  // namespace

Poset chain(std::size_t n) {
  require_nonempty(n, "chain");
  std::vector<Relation> covers;
  for (std::size_t i = 0; i + 1 < n; ++i) covers.emplace_back(i, i + 1);
  return Poset::from_relations(n, covers);
}

Poset antichain(std::size_t n) {
  require_nonempty(n, "antichain");
  return Poset::from_relations(n, std::span<const Relation>{});
}

Poset wedge() { return Poset::from_relations(3, {{2, 0}, {2, 1}}); }

Poset boolean_lattice(std::size_t k) {
  if (k < 1 || k > 4) throw InvalidParameter("boolean lattice rank must lie in [1, 4]");
  const std::size_t n = std::size_t{1} << k;
  std::vector<Relation> rel;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && (a & b) == a) rel.emplace_back(a, b);
    }
  }
  return Poset::from_relations(n, rel);
}

Poset random_poset(std::size_t n, double edge_probability, std::uint64_t seed) {
  require_nonempty(n, "random poset");
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw InvalidParameter("edge probability must lie in [0, 1]");
  }
  Engine rng(seed);
  std::vector<Relation> rel;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < edge_probability) rel.emplace_back(i, j);
    }
  }
  return Poset::from_relations(n, rel);
}

Poset forest_of_chains(std::span<const std::size_t> lengths) {
  std::size_t n = 0;
  std::vector<Relation> covers;
  for (std::size_t len : lengths) {
    if (len == 0) throw InvalidParameter("chain lengths must be at least 1");
    for (std::size_t i = 1; i < len; ++i) covers.emplace_back(n + i - 1, n + i);
    n += len;
  }
  require_nonempty(n, "forest of chains");
  return Poset::from_relations(n, covers);
}

bool is_generator_family(std::string_view family) {
  return family == "chain" || family == "antichain" || family == "wedge" || family == "boolean" ||
         family == "forest" || family == "random";
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  const auto parts = split(text, ':');
  GeneratorSpec spec;
  spec.family = std::string(parts.front());
  if (!is_generator_family(spec.family)) {
    throw ParseError("unknown generator family '" + spec.family + "'");
  }
  auto expect = [&](std::size_t count) {
    if (parts.size() != count + 1) {
      throw ParseError("generator '" + spec.family + "' takes " + std::to_string(count) +
                       " parameter(s): '" + std::string(text) + "'");
    }
  };
  if (spec.family == "wedge") {
    expect(0);
  } else if (spec.family == "chain" || spec.family == "antichain" || spec.family == "boolean") {
    expect(1);
    spec.sizes.push_back(parse_number<std::size_t>(parts[1], text));
  } else if (spec.family == "forest") {
    expect(1);
    for (std::string_view len : split(parts[1], ',')) spec.sizes.push_back(parse_number<std::size_t>(len, text));
  } else {
    expect(3);
    spec.sizes.push_back(parse_number<std::size_t>(parts[1], text));
    spec.edge_probability = parse_number<double>(parts[2], text);
    spec.seed = parse_number<std::uint64_t>(parts[3], text);
  }
  // Validate the parameters now so parse errors and domain errors stay distinct.
  (void)spec.build();
  return spec;
}

Poset GeneratorSpec::build() const {
  if (family == "chain") return chain(sizes.at(0));
  if (family == "antichain") return antichain(sizes.at(0));
  if (family == "wedge") return wedge();
  if (family == "boolean") return boolean_lattice(sizes.at(0));
  if (family == "forest") return forest_of_chains(sizes);
  if (family == "random") return random_poset(sizes.at(0), edge_probability, seed);
  throw ParseError("unknown generator family '" + family + "'");
}

std::string GeneratorSpec::to_string() const {
  std::ostringstream out;
  out << family;
  if (family == "forest") {
    out << ':';
    for (std::size_t i = 0; i < sizes.size(); ++i) out << (i ? "," : "") << sizes[i];
  } else if (family == "random") {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, edge_probability);
    out << ':' << sizes.at(0) << ':' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << ':' << seed;
  } else if (family != "wedge") {
    out << ':' << sizes.at(0);
  }
  return out.str();
}

std::vector<NamedPoset> canonical_suite() {
  std::vector<NamedPoset> suite;
  suite.push_back({"chain:1", chain(1)});
  suite.push_back({"chain:5", chain(5)});
  suite.push_back({"chain:20", chain(20)});
  suite.push_back({"antichain:5", antichain(5)});
  suite.push_back({"antichain:20", antichain(20)});
  suite.push_back({"wedge", wedge()});
  suite.push_back({"boolean:3", boolean_lattice(3)});
  const std::size_t lengths[] = {2, 3, 4};
  suite.push_back({"forest:2,3,4", forest_of_chains(lengths)});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    suite.push_back({"random:8:0.3:" + std::to_string(seed), random_poset(8, 0.3, seed)});
  }
  return suite;
}

}  // namespace posec
