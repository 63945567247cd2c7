#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "clonek/formula.hpp"

namespace clonek {

// A finite-rank truth-valued function on assignment sequences: the value on
// (d1, d2, ...) depends only on the first `rank` entries, tabulated with the
// first coordinate most significant. Two tables of different rank can denote
// the same function; tt_equal compares them at a common rank.
class TruthTable {
 public:
  TruthTable(int domain_size, int rank, std::vector<std::uint8_t> bits);

  static TruthTable falsum(int domain_size);
  static TruthTable verum(int domain_size);
  // The identity element: rank 2, true exactly on the diagonal.
  static TruthTable identity(int domain_size);
  static TruthTable from_relation(int domain_size, const Relation& relation);

  int domain_size() const { return domain_size_; }
  int rank() const { return rank_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // point must have at least rank() entries; the rest are ignored.
  int at(const std::vector<int>& point) const;

 private:
  int domain_size_;
  int rank_;
  std::vector<std::uint8_t> bits_;
};

// Reads p at a higher rank without changing the function it denotes.
TruthTable tt_pad(const TruthTable& p, int rank);

TruthTable tt_implies(const TruthTable& p, const TruthTable& q);
TruthTable tt_not(const TruthTable& p);
TruthTable tt_and(const TruthTable& p, const TruthTable& q);
TruthTable tt_or(const TruthTable& p, const TruthTable& q);

// Quantifies the first coordinate away: rank drops by one (rank-0 tables
// are fixed points).
TruthTable tt_forall(const TruthTable& p);
TruthTable tt_exists(const TruthTable& p);

// Precomposition with a term substitution: the resulting table reads
// coordinate j of the input through lookup(s, j). target_rank must cover
// the ranks of the terms actually used; pass -1 to take the least cover.
TruthTable tt_action(const TruthTable& p, const Subst<FOTerm>& s,
                     const FiniteAlgebra& algebra, int target_rank = -1);

// Variable-only substitutions need no operations to evaluate.
TruthTable tt_action(const TruthTable& p, const Subst<FOTerm>& s,
                     int target_rank = -1);

TruthTable tt_shift_up(const TruthTable& p);

// Equality and pointwise order of the denoted functions.
bool tt_equal(const TruthTable& p, const TruthTable& q);
bool tt_leq(const TruthTable& p, const TruthTable& q);

// The truth table of p in m at rank rank(p): the evaluation homomorphism
// from formulas into the predicate set algebra of the interpretation.
TruthTable interpret_hom(const Formula& p, const Interpretation& m);

struct AxiomCheckReport {
  int domain_size = 0;
  int max_rank = 0;
  long long tables_checked = 0;
  std::array<bool, 5> condition_holds{};
  std::string witness;  // empty when every condition holds

  bool all_hold() const {
    for (bool b : condition_holds)
      if (!b) return false;
    return true;
  }
  int conditions_passed() const {
    int n = 0;
    for (bool b : condition_holds) n += b ? 1 : 0;
    return n;
  }
};

// Exhaustively checks, over every truth table of rank max_rank on a domain
// of the given size, the five conditions characterizing quantifier
// algebras: (1) Boolean-algebra laws, (2) exists distributes over joins,
// (3) a <= shift of exists a, (4) x1 = x1 is top, (5) a and (y = z)
// entails a with z substituted for y. Variables y, z range over indices
// 1..max_rank+1.
AxiomCheckReport quantifier_axiom_check(int domain_size, int max_rank,
                                        long long budget = 10000000);

}  // namespace clonek
