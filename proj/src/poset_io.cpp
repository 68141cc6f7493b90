#include "posec/poset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "posec/error.hpp"
#include "posec/generators.hpp"

namespace posec {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<std::size_t> to_index(std::string_view s) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Poset read_poset(std::istream& in) {
  std::optional<std::size_t> n;
  std::vector<Relation> relations;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (!n) {
      constexpr std::string_view prefix = "poset";
      if (line.substr(0, prefix.size()) != prefix) fail(line_no, "expected header 'poset n=<N>'");
      std::string_view rest = trim(line.substr(prefix.size()));
      if (rest.substr(0, 2) != "n=") fail(line_no, "expected header 'poset n=<N>'");
      n = to_index(trim(rest.substr(2)));
      if (!n) fail(line_no, "bad element count in header");
      continue;
    }

    const auto lt = line.find('<');
    if (lt == std::string_view::npos) fail(line_no, "expected '<a> < <b>'");
    const auto a = to_index(trim(line.substr(0, lt)));
    const auto b = to_index(trim(line.substr(lt + 1)));
    if (!a || !b) fail(line_no, "expected '<a> < <b>' with non-negative integer indices");
    relations.emplace_back(*a, *b);
  }
  if (!n) throw ParseError("missing header 'poset n=<N>'");
  try {
    return Poset::from_relations(*n, relations);
  } catch (const ElementIndexError& e) {
    throw ParseError(e.what());
  } catch (const EmptyPosetError& e) {
    throw ParseError(e.what());
  }
}

Poset parse_poset(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_poset(in);
}

Poset read_poset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open poset file '" + path.string() + "'");
  return read_poset(in);
}

void write_poset(std::ostream& out, const Poset& p) {
  out << "poset n=" << p.size() << '\n';
  for (const auto& [a, b] : p.cover_relations()) out << a << " < " << b << '\n';
}

std::string format_poset(const Poset& p) {
  std::ostringstream out;
  write_poset(out, p);
  return out.str();
}

Poset load_poset_source(std::string_view source) {
  const std::string_view family = source.substr(0, source.find(':'));
  if (is_generator_family(family)) return parse_generator_spec(source).build();
  return read_poset_file(std::filesystem::path(std::string(source)));
}

}  // namespace posec
