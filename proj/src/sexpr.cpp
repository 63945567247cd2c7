#include "clonek/sexpr.hpp"

#include <cctype>

#include "clonek/errors.hpp"

namespace clonek {
namespace {

bool is_atom_char(char c) {
  return c != '(' && c != ')' && c != ';' && !std::isspace(static_cast<unsigned char>(c));
}

struct Reader {
  std::string_view src;
  std::size_t pos = 0;

  void skip_blanks() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ';') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool done() {
    skip_blanks();
    return pos >= src.size();
  }

  SExpr read() {
    skip_blanks();
    if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
    std::size_t start = pos;
    char c = src[pos];
    if (c == ')') throw ParseError("unmatched ')'", pos);
    if (c == '(') {
      ++pos;
      SExpr list;
      list.kind = SExpr::Kind::List;
      list.position = start;
      while (true) {
        skip_blanks();
        if (pos >= src.size()) throw ParseError("missing ')' for '(' ", start);
        if (src[pos] == ')') {
          ++pos;
          break;
        }
        list.items.push_back(read());
      }
      return list;
    }
    SExpr atom;
    atom.kind = SExpr::Kind::Atom;
    atom.position = start;
    while (pos < src.size() && is_atom_char(src[pos])) ++pos;
    atom.atom = std::string(src.substr(start, pos - start));
    return atom;
  }
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view source) {
  Reader r{source};
  std::vector<SExpr> out;
  while (!r.done()) out.push_back(r.read());
  return out;
}

SExpr read_single_sexpr(std::string_view source) {
  Reader r{source};
  if (r.done()) throw ParseError("empty input", 0);
  SExpr e = r.read();
  if (!r.done()) throw ParseError("trailing content after expression", r.pos);
  return e;
}

std::string describe_position(std::string_view source, std::size_t position) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < position && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

static bool is_var_shaped(const std::string& atom) {
  if (atom.size() < 2 || atom[0] != 'x') return false;
  for (std::size_t i = 1; i < atom.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(atom[i]))) return false;
  return true;
}

std::optional<int> parse_var_atom(const std::string& atom) {
  if (!is_var_shaped(atom)) return std::nullopt;
  long value = 0;
  for (std::size_t i = 1; i < atom.size(); ++i) {
    value = value * 10 + (atom[i] - '0');
    if (value > 1000000) return std::nullopt;
  }
  if (value < 1) return std::nullopt;
  return static_cast<int>(value);
}

bool is_identifier(const std::string& atom) {
  if (atom.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(atom[0])) && atom[0] != '_') return false;
  for (char c : atom) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'')
      return false;
  }
  return !is_var_shaped(atom);
}

}  // namespace clonek
