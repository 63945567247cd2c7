#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clonek {

// Minimal s-expression reader shared by the term, lambda and formula
// grammars. Atoms are maximal runs of characters outside "() \t\n;".
// A ';' starts a comment running to end of line.
struct SExpr {
  enum class Kind { Atom, List };
  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t position = 0;  // byte offset of the first character

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
};

// All top-level expressions in the source, in order.
std::vector<SExpr> read_sexprs(std::string_view source);

// Exactly one top-level expression; anything else is a ParseError.
SExpr read_single_sexpr(std::string_view source);

// "line L, column C" for a byte offset, both 1-based.
std::string describe_position(std::string_view source, std::size_t position);

// Variable atoms look like x<k> with k >= 1: "x1", "x12".
std::optional<int> parse_var_atom(const std::string& atom);

// Names usable as symbols and binders: [A-Za-z_][A-Za-z0-9_']* that is not
// a variable atom and not a grammar keyword.
bool is_identifier(const std::string& atom);

}  // namespace clonek
