#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clonek/subst.hpp"

namespace clonek {

// A first-order term: a variable x_i or a function symbol applied to
// arity-many arguments. Immutable; copies share structure.
class FOTerm {
 public:
  static FOTerm var(int index);
  static FOTerm app(std::string symbol, std::vector<FOTerm> args = {});

  bool is_var() const;
  int var_index() const;
  const std::string& symbol() const;
  const std::vector<FOTerm>& args() const;

  friend bool operator==(const FOTerm& a, const FOTerm& b);
  friend bool operator!=(const FOTerm& a, const FOTerm& b) { return !(a == b); }

 private:
  struct Node;
  explicit FOTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

template <>
struct CloneTraits<FOTerm> {
  static FOTerm var(int index) { return FOTerm::var(index); }
  static FOTerm apply(const FOTerm& t, const Subst<FOTerm>& s);
};

// Homomorphic replacement: variables go through the substitution, symbols
// are preserved.
FOTerm apply_subst(const FOTerm& t, const Subst<FOTerm>& s);

inline FOTerm CloneTraits<FOTerm>::apply(const FOTerm& t, const Subst<FOTerm>& s) {
  return apply_subst(t, s);
}

// Largest variable index occurring in t, 0 for closed terms.
int rank(const FOTerm& t);
std::set<int> free_vars(const FOTerm& t);

struct Signature {
  std::map<std::string, int> arity;  // symbol -> arity >= 0

  // Throws UnknownSymbol if t uses a symbol absent from the signature or
  // with the wrong number of arguments.
  void validate(const FOTerm& t) const;
};

// Operation table for one symbol: `table` has carrier^arity entries, indexed
// with the first argument most significant.
struct OpTable {
  int arity = 0;
  std::vector<int> table;
};

// Index of an argument tuple into a row-major table over a carrier of size m.
std::size_t tuple_index(const std::vector<int>& args, int carrier_size);

// A finite algebra: carrier {0, ..., m-1} with a total table per symbol.
class FiniteAlgebra {
 public:
  FiniteAlgebra(int carrier_size, std::map<std::string, OpTable> ops);

  int carrier_size() const { return carrier_size_; }
  const std::map<std::string, OpTable>& ops() const { return ops_; }
  Signature signature() const;

  int apply(const std::string& symbol, const std::vector<int>& args) const;

  static FiniteAlgebra from_json_text(std::string_view text);
  std::string to_json_text() const;

 private:
  int carrier_size_;
  std::map<std::string, OpTable> ops_;
};

// Value of t in the algebra under env (env[0] interprets x1).
// Throws EnvTooShort when env has fewer than rank(t) entries and
// UnknownSymbol when the algebra lacks a symbol of t.
int eval_term(const FOTerm& t, const FiniteAlgebra& algebra,
              const std::vector<int>& env);

// The arity-n part of the clone generated by the algebra's operations:
// the least set of tables carrier^n -> carrier containing the n projections
// and closed under pointwise application of every basic operation.
// Returned in increasing lexicographic table order.
// Throws BoundExceeded when carrier^n exceeds table_bound.
std::vector<std::vector<int>> clone_closure(const FiniteAlgebra& algebra,
                                            int arity, long long table_bound = 16);

FOTerm parse_foterm(std::string_view source);
std::string print_foterm(const FOTerm& t);

}  // namespace clonek
