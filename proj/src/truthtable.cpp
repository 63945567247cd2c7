#include "clonek/truthtable.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "clonek/errors.hpp"

namespace clonek {

namespace {
std::size_t table_size(int domain_size, int rank) {
  std::size_t size = 1;
  for (int i = 0; i < rank; ++i) {
    if (size > (static_cast<std::size_t>(1) << 40))
      throw BoundExceeded("truth table is too large");
    size *= static_cast<std::size_t>(domain_size);
  }
  return size;
}

// Enumerates {0..base-1}^length in lexicographic order.
template <class Fn>
void each_point(int base, int length, Fn&& fn) {
  std::vector<int> point(static_cast<std::size_t>(length), 0);
  while (true) {
    fn(const_cast<const std::vector<int>&>(point));
    int pos = length - 1;
    for (; pos >= 0; --pos) {
      if (++point[static_cast<std::size_t>(pos)] < base) break;
      point[static_cast<std::size_t>(pos)] = 0;
    }
    if (pos < 0) return;
  }
}

void check_same_domain(const TruthTable& p, const TruthTable& q) {
  if (p.domain_size() != q.domain_size())
    throw DomainMismatch("truth tables over domains of size " +
                         std::to_string(p.domain_size()) + " and " +
                         std::to_string(q.domain_size()));
}
}  // namespace

TruthTable::TruthTable(int domain_size, int rank, std::vector<std::uint8_t> bits)
    : domain_size_(domain_size), rank_(rank), bits_(std::move(bits)) {
  if (domain_size_ < 1) throw std::invalid_argument("domain must be nonempty");
  if (rank_ < 0) throw std::invalid_argument("rank must be nonnegative");
  if (bits_.size() != table_size(domain_size_, rank_))
    throw std::invalid_argument("truth table needs " +
                                std::to_string(table_size(domain_size_, rank_)) +
                                " entries, got " + std::to_string(bits_.size()));
  for (std::uint8_t b : bits_)
    if (b > 1) throw std::invalid_argument("truth table entries are 0 or 1");
}

TruthTable TruthTable::falsum(int domain_size) {
  return TruthTable(domain_size, 0, {0});
}

TruthTable TruthTable::verum(int domain_size) {
  return TruthTable(domain_size, 0, {1});
}

TruthTable TruthTable::identity(int domain_size) {
  std::vector<std::uint8_t> bits(table_size(domain_size, 2), 0);
  for (int d = 0; d < domain_size; ++d)
    bits[static_cast<std::size_t>(d) * static_cast<std::size_t>(domain_size) +
         static_cast<std::size_t>(d)] = 1;
  return TruthTable(domain_size, 2, std::move(bits));
}

TruthTable TruthTable::from_relation(int domain_size, const Relation& relation) {
  std::vector<std::uint8_t> bits(table_size(domain_size, relation.arity), 0);
  for (const auto& tuple : relation.tuples)
    bits[tuple_index(tuple, domain_size)] = 1;
  return TruthTable(domain_size, relation.arity, std::move(bits));
}

int TruthTable::at(const std::vector<int>& point) const {
  if (static_cast<int>(point.size()) < rank_)
    throw EnvTooShort("point has " + std::to_string(point.size()) +
                      " coordinates, table has rank " + std::to_string(rank_));
  std::size_t index = 0;
  for (int i = 0; i < rank_; ++i)
    index = index * static_cast<std::size_t>(domain_size_) +
            static_cast<std::size_t>(point[static_cast<std::size_t>(i)]);
  return bits_[index];
}

TruthTable tt_pad(const TruthTable& p, int rank) {
  if (rank < p.rank())
    throw std::invalid_argument("cannot pad a table below its rank");
  if (rank == p.rank()) return p;
  std::vector<std::uint8_t> bits;
  bits.reserve(table_size(p.domain_size(), rank));
  each_point(p.domain_size(), rank, [&](const std::vector<int>& point) {
    bits.push_back(static_cast<std::uint8_t>(p.at(point)));
  });
  return TruthTable(p.domain_size(), rank, std::move(bits));
}

namespace {
template <class Fn>
TruthTable pointwise(const TruthTable& p, const TruthTable& q, Fn&& fn) {
  check_same_domain(p, q);
  int rank = std::max(p.rank(), q.rank());
  TruthTable a = tt_pad(p, rank), b = tt_pad(q, rank);
  std::vector<std::uint8_t> bits(a.bits().size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    bits[i] = static_cast<std::uint8_t>(fn(a.bits()[i], b.bits()[i]));
  return TruthTable(p.domain_size(), rank, std::move(bits));
}
}  // namespace

TruthTable tt_implies(const TruthTable& p, const TruthTable& q) {
  return pointwise(p, q, [](int a, int b) { return (a == 0 || b == 1) ? 1 : 0; });
}

TruthTable tt_not(const TruthTable& p) {
  return tt_implies(p, TruthTable::falsum(p.domain_size()));
}

TruthTable tt_and(const TruthTable& p, const TruthTable& q) {
  return tt_not(tt_implies(p, tt_not(q)));
}

TruthTable tt_or(const TruthTable& p, const TruthTable& q) {
  return tt_implies(tt_not(p), q);
}

TruthTable tt_forall(const TruthTable& p) {
  if (p.rank() == 0) return p;
  int m = p.domain_size();
  std::vector<std::uint8_t> bits;
  bits.reserve(table_size(m, p.rank() - 1));
  std::vector<int> extended(static_cast<std::size_t>(p.rank()), 0);
  each_point(m, p.rank() - 1, [&](const std::vector<int>& point) {
    std::copy(point.begin(), point.end(), extended.begin() + 1);
    int all = 1;
    for (int d = 0; d < m; ++d) {
      extended[0] = d;
      if (p.at(extended) == 0) {
        all = 0;
        break;
      }
    }
    bits.push_back(static_cast<std::uint8_t>(all));
  });
  return TruthTable(m, p.rank() - 1, std::move(bits));
}

TruthTable tt_exists(const TruthTable& p) {
  return tt_not(tt_forall(tt_not(p)));
}

TruthTable tt_action(const TruthTable& p, const Subst<FOTerm>& s,
                     const FiniteAlgebra& algebra, int target_rank) {
  if (algebra.carrier_size() != p.domain_size())
    throw DomainMismatch("algebra carrier does not match the table domain");
  int needed = 0;
  std::vector<FOTerm> coords;
  coords.reserve(static_cast<std::size_t>(p.rank()));
  for (int j = 1; j <= p.rank(); ++j) {
    coords.push_back(s.lookup(j));
    needed = std::max(needed, clonek::rank(coords.back()));
  }
  if (target_rank < 0) target_rank = needed;
  if (target_rank < needed)
    throw DomainMismatch("target rank " + std::to_string(target_rank) +
                         " is below the substitution's rank " +
                         std::to_string(needed));
  std::vector<std::uint8_t> bits;
  bits.reserve(table_size(p.domain_size(), target_rank));
  std::vector<int> image(coords.size());
  each_point(p.domain_size(), target_rank, [&](const std::vector<int>& point) {
    for (std::size_t j = 0; j < coords.size(); ++j)
      image[j] = eval_term(coords[j], algebra, point);
    bits.push_back(static_cast<std::uint8_t>(p.at(image)));
  });
  return TruthTable(p.domain_size(), target_rank, std::move(bits));
}

TruthTable tt_action(const TruthTable& p, const Subst<FOTerm>& s, int target_rank) {
  return tt_action(p, s, FiniteAlgebra(p.domain_size(), {}), target_rank);
}

TruthTable tt_shift_up(const TruthTable& p) {
  return tt_action(p, Subst<FOTerm>::shift_up(), p.rank() + 1);
}

bool tt_equal(const TruthTable& p, const TruthTable& q) {
  check_same_domain(p, q);
  int rank = std::max(p.rank(), q.rank());
  return tt_pad(p, rank).bits() == tt_pad(q, rank).bits();
}

bool tt_leq(const TruthTable& p, const TruthTable& q) {
  check_same_domain(p, q);
  int rank = std::max(p.rank(), q.rank());
  TruthTable a = tt_pad(p, rank), b = tt_pad(q, rank);
  for (std::size_t i = 0; i < a.bits().size(); ++i)
    if (a.bits()[i] > b.bits()[i]) return false;
  return true;
}

TruthTable interpret_hom(const Formula& p, const Interpretation& m) {
  int r = rank(p);
  std::vector<std::uint8_t> bits;
  bits.reserve(table_size(m.domain_size(), r));
  each_point(m.domain_size(), r, [&](const std::vector<int>& env) {
    bits.push_back(static_cast<std::uint8_t>(eval_formula(p, m, env)));
  });
  return TruthTable(m.domain_size(), r, std::move(bits));
}

namespace {
std::string show_table(const TruthTable& t) {
  std::ostringstream out;
  out << "rank " << t.rank() << " table [";
  for (std::size_t i = 0; i < t.bits().size(); ++i) {
    if (i) out << ' ';
    out << static_cast<int>(t.bits()[i]);
  }
  out << ']';
  return out.str();
}

long long checked_pow(long long base, long long exponent, long long cap) {
  long long r = 1;
  for (long long i = 0; i < exponent; ++i) {
    r *= base;
    if (r > cap) return cap + 1;
  }
  return r;
}
}  // namespace

AxiomCheckReport quantifier_axiom_check(int domain_size, int max_rank,
                                        long long budget) {
  if (domain_size < 1) throw std::invalid_argument("domain must be nonempty");
  if (max_rank < 0) throw std::invalid_argument("max_rank must be nonnegative");

  long long entries = checked_pow(domain_size, max_rank, budget);
  long long tables = checked_pow(2, entries, budget);
  // Condition 1 sweeps triples of tables, each check touching every entry.
  auto cap_mul = [&](long long a, long long b) {
    if (a == 0 || b == 0) return 0LL;
    return (a > budget / b) ? budget + 1 : a * b;
  };
  long long cost = cap_mul(cap_mul(cap_mul(tables, tables), tables), entries);
  if (cost > budget)
    throw BoundExceeded("axiom check over " + std::to_string(tables) +
                        " tables exceeds the budget " + std::to_string(budget));

  AxiomCheckReport report;
  report.domain_size = domain_size;
  report.max_rank = max_rank;
  report.tables_checked = tables;
  report.condition_holds.fill(true);

  std::vector<TruthTable> all;
  all.reserve(static_cast<std::size_t>(tables));
  for (long long code = 0; code < tables; ++code) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(entries));
    for (long long i = 0; i < entries; ++i)
      bits[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((code >> i) & 1);
    all.emplace_back(domain_size, max_rank, std::move(bits));
  }

  const TruthTable top = TruthTable::verum(domain_size);
  const TruthTable bottom = TruthTable::falsum(domain_size);
  auto blame = [&](int condition, const std::string& text) {
    report.condition_holds[static_cast<std::size_t>(condition - 1)] = false;
    if (report.witness.empty())
      report.witness = "condition " + std::to_string(condition) + ": " + text;
  };

  // 1. Boolean-algebra laws for the derived join, meet and complement.
  for (const TruthTable& a : all) {
    if (!tt_equal(tt_or(a, tt_not(a)), top))
      blame(1, "a or not a is not top for " + show_table(a));
    if (!tt_equal(tt_and(a, tt_not(a)), bottom))
      blame(1, "a and not a is not bottom for " + show_table(a));
    if (!tt_equal(tt_or(a, bottom), tt_pad(a, max_rank)))
      blame(1, "bottom is not a join unit for " + show_table(a));
    if (!tt_equal(tt_and(a, top), tt_pad(a, max_rank)))
      blame(1, "top is not a meet unit for " + show_table(a));
    for (const TruthTable& b : all) {
      if (!tt_equal(tt_or(a, b), tt_or(b, a)) ||
          !tt_equal(tt_and(a, b), tt_and(b, a)))
        blame(1, "commutativity fails for " + show_table(a) + ", " + show_table(b));
      if (!tt_equal(tt_or(a, tt_and(a, b)), tt_pad(a, max_rank)) ||
          !tt_equal(tt_and(a, tt_or(a, b)), tt_pad(a, max_rank)))
        blame(1, "absorption fails for " + show_table(a) + ", " + show_table(b));
      for (const TruthTable& c : all) {
        if (!tt_equal(tt_or(tt_or(a, b), c), tt_or(a, tt_or(b, c))) ||
            !tt_equal(tt_and(tt_and(a, b), c), tt_and(a, tt_and(b, c))))
          blame(1, "associativity fails");
        if (!tt_equal(tt_and(a, tt_or(b, c)), tt_or(tt_and(a, b), tt_and(a, c))) ||
            !tt_equal(tt_or(a, tt_and(b, c)), tt_and(tt_or(a, b), tt_or(a, c))))
          blame(1, "distributivity fails");
      }
    }
  }

  // 2. Existential quantification distributes over joins.
  for (const TruthTable& a : all)
    for (const TruthTable& b : all)
      if (!tt_equal(tt_exists(tt_or(a, b)), tt_or(tt_exists(a), tt_exists(b))))
        blame(2, "exists(a or b) != exists a or exists b for " + show_table(a) +
                     ", " + show_table(b));

  // 3. Every element is below the shifted image of its own existential.
  for (const TruthTable& a : all)
    if (!tt_leq(a, tt_shift_up(tt_exists(a))))
      blame(3, "a is not below (exists a) shifted up for " + show_table(a));

  // 4. x1 = x1 is top.
  {
    TruthTable reflexive =
        tt_action(TruthTable::identity(domain_size),
                  Subst<FOTerm>::duplicate_at(1), std::max(max_rank, 1));
    if (!tt_equal(reflexive, top)) blame(4, "x1 = x1 is not top");
  }

  // 5. a and (y = z) is below a[z/y].
  for (int y = 1; y <= max_rank + 1; ++y) {
    for (int z = 1; z <= max_rank + 1; ++z) {
      TruthTable equal_yz =
          tt_action(TruthTable::identity(domain_size),
                    Subst<FOTerm>::join_finite({FOTerm::var(y), FOTerm::var(z)}),
                    std::max({max_rank, y, z}));
      for (const TruthTable& a : all) {
        TruthTable substituted =
            tt_action(a, Subst<FOTerm>::single_sub(FOTerm::var(z), y),
                      std::max({max_rank, y, z}));
        if (!tt_leq(tt_and(a, equal_yz), substituted))
          blame(5, "a and (x" + std::to_string(y) + " = x" + std::to_string(z) +
                       ") is not below the substituted table for " + show_table(a));
      }
    }
  }

  return report;
}

}  // namespace clonek
