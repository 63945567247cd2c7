#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clonek/foterm.hpp"

namespace clonek {

// The built-in identity predicate; always binary, always the diagonal.
inline const std::string kEqualsPredicate = "eq";

// A first-order formula over de Bruijn-style variables: an atom, falsum,
// an implication, or a nameless universal quantifier binding index 1.
class Formula {
 public:
  enum class Kind { Atom, Falsum, Implies, Forall };

  static Formula atom(std::string predicate, std::vector<FOTerm> args);
  static Formula equals(FOTerm lhs, FOTerm rhs);
  static Formula falsum();
  static Formula implies(Formula antecedent, Formula consequent);
  static Formula forall(Formula body);

  Kind kind() const;
  const std::string& predicate() const;
  const std::vector<FOTerm>& args() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Derived connectives.
Formula neg(const Formula& p);
Formula verum();
Formula disj(const Formula& p, const Formula& q);
Formula conj(const Formula& p, const Formula& q);
Formula iff(const Formula& p, const Formula& q);
Formula exists(const Formula& p);

// Classical named quantifiers, derived from the nameless one by the same
// index rotation the lambda front-end uses.
Formula forall_named(int index, const Formula& p);
Formula exists_named(int index, const Formula& p);

// The right-algebra action of term substitutions on formulas.
Formula apply_subst(const Formula& p, const Subst<FOTerm>& s);

int rank(const Formula& p);
std::set<int> free_vars(const Formula& p);

struct Language {
  Signature functions;
  std::map<std::string, int> predicates;  // kEqualsPredicate is implicit

  int predicate_arity(const std::string& name) const;
};

// Walks formulas and records every symbol with its arity; a symbol used at
// two arities is a ParseError.
Language infer_language(const std::vector<Formula>& formulas);

struct Relation {
  int arity = 0;
  std::set<std::vector<int>> tuples;
};

// A finite interpretation: a domain {0..m-1}, operation tables for the
// function symbols, and a relation per predicate symbol. The identity
// predicate is installed as the diagonal and cannot be overridden.
class Interpretation {
 public:
  Interpretation(int domain_size, FiniteAlgebra algebra,
                 std::map<std::string, Relation> relations);

  int domain_size() const { return domain_size_; }
  const FiniteAlgebra& algebra() const { return algebra_; }
  const std::map<std::string, Relation>& relations() const { return relations_; }

  bool holds(const std::string& predicate, const std::vector<int>& tuple) const;

  static Interpretation from_json_text(std::string_view text);
  std::string to_json_text() const;

 private:
  int domain_size_;
  FiniteAlgebra algebra_;
  std::map<std::string, Relation> relations_;  // includes the diagonal under "eq"
};

// Satisfaction under env (env[0] interprets x1); returns 0 or 1.
int eval_formula(const Formula& p, const Interpretation& m,
                 const std::vector<int>& env);

// True in m: every environment of length rank(p) satisfies p. Entries past
// the rank can never matter.
bool is_true(const Formula& p, const Interpretation& m);

struct ValidityResult {
  bool valid = false;
  std::optional<Interpretation> counter_model;
};

// Enumerates every interpretation of p's symbols over domains of size
// 1..max_domain. Finding no counter-model refutes nothing beyond the bound:
// the result means "valid up to max_domain".
ValidityResult is_valid_bounded(const Formula& p, int max_domain,
                                long long budget = 10000000);

struct EntailmentResult {
  bool entailed = false;
  std::optional<Interpretation> counter_model;
  std::vector<int> counter_env;
};

// Bounded refuter for "every environment satisfying all of gamma satisfies p".
EntailmentResult implies_bounded(const std::vector<Formula>& gamma,
                                 const Formula& p, int max_domain,
                                 long long budget = 10000000);

Formula parse_formula(std::string_view source);
std::string print_formula(const Formula& p);

}  // namespace clonek
