#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace clonek {

template <class Term>
class Subst;

// Glue between the substitution engine and a concrete term type.
// A specialization must provide:
//   static Term var(int index);                          // index >= 1
//   static Term apply(const Term&, const Subst<Term>&);  // the clone action
// and Term must have structural operator==.
template <class Term>
struct CloneTraits;

enum class TailRule {
  AffineVar,   // position j beyond the prefix maps to the variable x_{j+offset}
  RepeatLast,  // position j beyond the prefix maps to the last prefix entry
};

// A finite encoding of an infinite sequence of terms [s1, s2, s3, ...]:
// an explicit prefix for positions 1..k and a tail rule for positions > k.
// Every constructor normalizes, so structural equality of two Subst values
// coincides with pointwise equality of the sequences they denote.
template <class Term>
class Subst {
 public:
  // [x1, x2, x3, ...]
  static Subst identity() { return Subst({}, TailRule::AffineVar, 0); }

  // [x2, x3, x4, ...]
  static Subst shift_up() { return Subst({}, TailRule::AffineVar, 1); }

  // [x1, x1, x2, x3, ...]
  static Subst shift_down() {
    return Subst({CloneTraits<Term>::var(1)}, TailRule::AffineVar, -1);
  }

  // [x1, ..., x_{i-1}, x_{i+1}, x_{i+2}, ...]; insert_at(1) == shift_up().
  static Subst insert_at(int i) {
    check_index(i);
    std::vector<Term> prefix;
    prefix.reserve(static_cast<std::size_t>(i) - 1);
    for (int j = 1; j < i; ++j) prefix.push_back(CloneTraits<Term>::var(j));
    return Subst(std::move(prefix), TailRule::AffineVar, 1);
  }

  // [x1, ..., x_{i-1}, x_i, x_i, x_{i+1}, ...]; duplicate_at(1) == shift_down().
  static Subst duplicate_at(int i) {
    check_index(i);
    std::vector<Term> prefix;
    prefix.reserve(static_cast<std::size_t>(i) + 1);
    for (int j = 1; j <= i; ++j) prefix.push_back(CloneTraits<Term>::var(j));
    prefix.push_back(CloneTraits<Term>::var(i));
    return Subst(std::move(prefix), TailRule::AffineVar, -1);
  }

  // [t1, ..., tn, tn, tn, ...]
  static Subst join_finite(std::vector<Term> terms) {
    if (terms.empty())
      throw std::invalid_argument("join_finite requires at least one term");
    return Subst(std::move(terms), TailRule::RepeatLast, 0);
  }

  // [x1, ..., x_{i-1}, b, x_{i+1}, ...]
  static Subst single_sub(Term replacement, int i) {
    check_index(i);
    std::vector<Term> prefix;
    prefix.reserve(static_cast<std::size_t>(i));
    for (int j = 1; j < i; ++j) prefix.push_back(CloneTraits<Term>::var(j));
    prefix.push_back(std::move(replacement));
    return Subst(std::move(prefix), TailRule::AffineVar, 0);
  }

  static Subst affine(std::vector<Term> prefix, int offset) {
    return Subst(std::move(prefix), TailRule::AffineVar, offset);
  }

  static Subst repeat_last(std::vector<Term> prefix) {
    if (prefix.empty())
      throw std::invalid_argument("repeat_last requires a nonempty prefix");
    return Subst(std::move(prefix), TailRule::RepeatLast, 0);
  }

  // Total for every position >= 1.
  Term lookup(int position) const {
    check_index(position);
    auto k = static_cast<int>(prefix_.size());
    if (position <= k) return prefix_[static_cast<std::size_t>(position) - 1];
    if (tail_ == TailRule::RepeatLast) return prefix_.back();
    return CloneTraits<Term>::var(position + offset_);
  }

  // [x1, s1^+, s2^+, ...] where ^+ shifts every term up by one.
  // The tail rule survives lifting unchanged.
  Subst lift() const {
    std::vector<Term> prefix;
    prefix.reserve(prefix_.size() + 1);
    prefix.push_back(CloneTraits<Term>::var(1));
    Subst up = shift_up();
    for (const Term& t : prefix_)
      prefix.push_back(CloneTraits<Term>::apply(t, up));
    return Subst(std::move(prefix), tail_, offset_);
  }

  int prefix_size() const { return static_cast<int>(prefix_.size()); }
  const std::vector<Term>& prefix() const { return prefix_; }
  TailRule tail() const { return tail_; }
  int offset() const { return offset_; }

  friend bool operator==(const Subst& a, const Subst& b) {
    return a.tail_ == b.tail_ &&
           (a.tail_ == TailRule::RepeatLast || a.offset_ == b.offset_) &&
           a.prefix_ == b.prefix_;
  }
  friend bool operator!=(const Subst& a, const Subst& b) { return !(a == b); }

 private:
  Subst(std::vector<Term> prefix, TailRule tail, int offset)
      : prefix_(std::move(prefix)), tail_(tail), offset_(offset) {
    if (tail_ == TailRule::RepeatLast && prefix_.empty())
      throw std::invalid_argument("RepeatLast tail with empty prefix");
    if (tail_ == TailRule::AffineVar &&
        offset_ < -static_cast<int>(prefix_.size()))
      throw std::invalid_argument("affine tail would produce nonpositive indices");
    normalize();
  }

  static void check_index(int i) {
    if (i < 1) throw std::invalid_argument("positions are 1-based");
  }

  // Drop prefix entries already implied by the tail rule. This makes the
  // representation canonical: affine tails are never eventually constant,
  // so the two tail kinds cannot denote the same sequence.
  void normalize() {
    while (!prefix_.empty()) {
      auto k = static_cast<int>(prefix_.size());
      if (tail_ == TailRule::AffineVar) {
        if (k + offset_ < 1) break;
        if (!(prefix_.back() == CloneTraits<Term>::var(k + offset_))) break;
      } else {
        if (k < 2 || !(prefix_.back() == prefix_[static_cast<std::size_t>(k) - 2]))
          break;
      }
      prefix_.pop_back();
    }
  }

  std::vector<Term> prefix_;
  TailRule tail_;
  int offset_;
};

// Pointwise composition: lookup(compose(s, t), j) == apply(lookup(s, j), t).
// The result stays finitely representable: beyond a prefix of length at most
// max(k_s, k_t - offset_s) + 1 both tails act uniformly.
template <class Term>
Subst<Term> compose(const Subst<Term>& s, const Subst<Term>& t) {
  int length;
  TailRule tail;
  int offset = 0;
  if (s.tail() == TailRule::RepeatLast) {
    length = s.prefix_size();
    tail = TailRule::RepeatLast;
  } else if (t.tail() == TailRule::AffineVar) {
    length = std::max(s.prefix_size(), t.prefix_size() - s.offset());
    tail = TailRule::AffineVar;
    offset = s.offset() + t.offset();
  } else {
    length = std::max(s.prefix_size(), t.prefix_size() - s.offset()) + 1;
    tail = TailRule::RepeatLast;
  }
  if (tail == TailRule::RepeatLast) length = std::max(length, 1);
  std::vector<Term> prefix;
  prefix.reserve(static_cast<std::size_t>(std::max(length, 0)));
  for (int j = 1; j <= length; ++j)
    prefix.push_back(CloneTraits<Term>::apply(s.lookup(j), t));
  if (tail == TailRule::AffineVar)
    return Subst<Term>::affine(std::move(prefix), offset);
  return Subst<Term>::repeat_last(std::move(prefix));
}

// Iterated upward shift: the action of [x2, x3, ...] applied `amount` times.
template <class Term>
Term shift_by(const Term& t, int amount) {
  if (amount < 0) throw std::invalid_argument("shift_by takes a nonnegative amount");
  if (amount == 0) return t;
  return CloneTraits<Term>::apply(t, Subst<Term>::affine({}, amount));
}

}  // namespace clonek
