#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clonek/subst.hpp"

namespace clonek {

// A lambda term in de Bruijn form: indices are 1-based, so Var(1) is the
// variable bound by the innermost enclosing Lam.
class LTerm {
 public:
  enum class Kind { Var, Lam, App };

  static LTerm var(int index);
  static LTerm lam(LTerm body);
  static LTerm app(LTerm fn, LTerm arg);

  Kind kind() const;
  int var_index() const;
  const LTerm& body() const;
  const LTerm& fn() const;
  const LTerm& arg() const;

  friend bool operator==(const LTerm& a, const LTerm& b);
  friend bool operator!=(const LTerm& a, const LTerm& b) { return !(a == b); }

 private:
  struct Node;
  explicit LTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

template <>
struct CloneTraits<LTerm> {
  static LTerm var(int index) { return LTerm::var(index); }
  static LTerm apply(const LTerm& t, const Subst<LTerm>& s);
};

// Variables go through the substitution, applications are homomorphic, and
// a binder lifts the substitution before descending into its body.
LTerm apply_subst(const LTerm& t, const Subst<LTerm>& s);

inline LTerm CloneTraits<LTerm>::apply(const LTerm& t, const Subst<LTerm>& s) {
  return apply_subst(t, s);
}

// Free de Bruijn indices as seen from outside the term.
std::set<int> free_indices(const LTerm& t);
int rank(const LTerm& t);

// Contracts the leftmost-outermost beta redex, if any.
// Applying (lam m) to n replaces index 1 by n and shifts every other free
// index down by one; the substitution [n, x1, x2, ...] does both at once.
std::optional<LTerm> beta_step(const LTerm& t);

// Rewrites the leftmost-outermost (lam (app m x1)) with index 1 not free
// in m, shifting the free indices of m down by one.
std::optional<LTerm> eta_step(const LTerm& t);

struct ReduceReport {
  LTerm result;
  int steps = 0;
  bool normalized = false;
};

// Normal-order reduction with a fuel bound: beta steps first, eta steps
// (when enabled) only once no beta redex remains. Divergence shows up as
// normalized == false.
ReduceReport normalize(const LTerm& t, int max_steps, bool use_eta);

// The classical binder "lambda x_i." recovered from the nameless one by
// pre-composing with the index rotation [x2, ..., x_i, x1, x_{i+2}, ...].
LTerm named_binder(int index, const LTerm& body);

// The index rotation used by named binders, shared with the quantifier
// front-end: position i goes to x1, every other position j to x_{j+1}.
template <class Term>
Subst<Term> binder_rotation(int index) {
  std::vector<Term> prefix;
  prefix.reserve(static_cast<std::size_t>(index));
  for (int j = 2; j <= index; ++j) prefix.push_back(CloneTraits<Term>::var(j));
  prefix.push_back(CloneTraits<Term>::var(1));
  return Subst<Term>::affine(std::move(prefix), 1);
}

// Parses the s-expression grammar: de Bruijn core `x<k>`, `(lam t)`,
// `(app t t)`; named sugar `(fn name t)` and bare name atoms; an optional
// leading `(free name...)` form fixes the index order of free names.
LTerm parse_lambda(std::string_view source);

std::string print_lambda(const LTerm& t);

}  // namespace clonek
