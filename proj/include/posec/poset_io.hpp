#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "posec/poset.hpp"

namespace posec {

// Text format:
//
//   # comment
//   poset n=<N>
//   <a> < <b>
//   ...
//
// Indices are zero-based; '#' starts a comment anywhere on a line. Relations
// may be any generating set; the reader closes them.
Poset read_poset(std::istream& in);
Poset parse_poset(std::string_view text);
Poset read_poset_file(const std::filesystem::path& path);

// Writes the header and the cover relations in lexicographic order.
void write_poset(std::ostream& out, const Poset& p);
std::string format_poset(const Poset& p);

// A generator spec ("chain:20", "random:8:0.3:42", ...) when the family name
// is recognised, otherwise a poset file path.
Poset load_poset_source(std::string_view source);

}  // namespace posec
