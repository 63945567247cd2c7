#include "clonek/formula.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "clonek/errors.hpp"
#include "clonek/lambda.hpp"
#include "clonek/sexpr.hpp"

namespace clonek {

struct Formula::Node {
  Kind kind;
  std::string predicate;
  std::vector<FOTerm> terms;
  std::vector<Formula> children;  // [lhs, rhs] for Implies, [body] for Forall
};

Formula Formula::atom(std::string predicate, std::vector<FOTerm> args) {
  if (predicate.empty()) throw std::invalid_argument("empty predicate name");
  if (predicate == kEqualsPredicate && args.size() != 2)
    throw std::invalid_argument("the identity predicate is binary");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Atom;
  node->predicate = std::move(predicate);
  node->terms = std::move(args);
  return Formula(std::move(node));
}

Formula Formula::equals(FOTerm lhs, FOTerm rhs) {
  return atom(kEqualsPredicate, {std::move(lhs), std::move(rhs)});
}

Formula Formula::falsum() {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Falsum;
  return Formula(std::move(node));
}

Formula Formula::implies(Formula antecedent, Formula consequent) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Implies;
  node->children.push_back(std::move(antecedent));
  node->children.push_back(std::move(consequent));
  return Formula(std::move(node));
}

Formula Formula::forall(Formula body) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Forall;
  node->children.push_back(std::move(body));
  return Formula(std::move(node));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::predicate() const {
  if (node_->kind != Kind::Atom) throw std::logic_error("predicate on a non-atom");
  return node_->predicate;
}

const std::vector<FOTerm>& Formula::args() const {
  if (node_->kind != Kind::Atom) throw std::logic_error("args on a non-atom");
  return node_->terms;
}

const Formula& Formula::lhs() const {
  if (node_->kind != Kind::Implies) throw std::logic_error("lhs on a non-implication");
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  if (node_->kind != Kind::Implies) throw std::logic_error("rhs on a non-implication");
  return node_->children[1];
}

const Formula& Formula::body() const {
  if (node_->kind != Kind::Forall) throw std::logic_error("body on a non-quantifier");
  return node_->children[0];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Formula::Kind::Falsum:
      return true;
    case Formula::Kind::Atom:
      return a.node_->predicate == b.node_->predicate &&
             a.node_->terms == b.node_->terms;
    default:
      return a.node_->children == b.node_->children;
  }
}

Formula neg(const Formula& p) { return Formula::implies(p, Formula::falsum()); }

Formula verum() { return neg(Formula::falsum()); }

Formula disj(const Formula& p, const Formula& q) { return Formula::implies(neg(p), q); }

Formula conj(const Formula& p, const Formula& q) {
  return neg(Formula::implies(p, neg(q)));
}

Formula iff(const Formula& p, const Formula& q) {
  return conj(Formula::implies(p, q), Formula::implies(q, p));
}

Formula exists(const Formula& p) { return neg(Formula::forall(neg(p))); }

Formula forall_named(int index, const Formula& p) {
  return Formula::forall(apply_subst(p, binder_rotation<FOTerm>(index)));
}

Formula exists_named(int index, const Formula& p) {
  return exists(apply_subst(p, binder_rotation<FOTerm>(index)));
}

Formula apply_subst(const Formula& p, const Subst<FOTerm>& s) {
  switch (p.kind()) {
    case Formula::Kind::Falsum:
      return p;
    case Formula::Kind::Atom: {
      std::vector<FOTerm> args;
      args.reserve(p.args().size());
      for (const FOTerm& t : p.args()) args.push_back(apply_subst(t, s));
      return Formula::atom(p.predicate(), std::move(args));
    }
    case Formula::Kind::Implies:
      return Formula::implies(apply_subst(p.lhs(), s), apply_subst(p.rhs(), s));
    case Formula::Kind::Forall:
      return Formula::forall(apply_subst(p.body(), s.lift()));
  }
  throw std::logic_error("unreachable");
}

namespace {
void collect_formula_vars(const Formula& p, int depth, std::set<int>& out) {
  switch (p.kind()) {
    case Formula::Kind::Falsum:
      return;
    case Formula::Kind::Atom:
      for (const FOTerm& t : p.args())
        for (int v : free_vars(t))
          if (v > depth) out.insert(v - depth);
      return;
    case Formula::Kind::Implies:
      collect_formula_vars(p.lhs(), depth, out);
      collect_formula_vars(p.rhs(), depth, out);
      return;
    case Formula::Kind::Forall:
      collect_formula_vars(p.body(), depth + 1, out);
      return;
  }
}
}  // namespace

std::set<int> free_vars(const Formula& p) {
  std::set<int> out;
  collect_formula_vars(p, 0, out);
  return out;
}

int rank(const Formula& p) {
  std::set<int> fv = free_vars(p);
  return fv.empty() ? 0 : *fv.rbegin();
}

int Language::predicate_arity(const std::string& name) const {
  if (name == kEqualsPredicate) return 2;
  auto it = predicates.find(name);
  if (it == predicates.end())
    throw UnknownSymbol("unknown predicate '" + name + "'");
  return it->second;
}

namespace {
void record_arity(std::map<std::string, int>& table, const std::string& name,
                  int arity, const char* what) {
  auto [it, inserted] = table.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw ParseError(std::string(what) + " '" + name + "' used with arities " +
                         std::to_string(it->second) + " and " + std::to_string(arity),
                     0);
}

void scan_term_symbols(const FOTerm& t, std::map<std::string, int>& functions) {
  if (t.is_var()) return;
  record_arity(functions, t.symbol(), static_cast<int>(t.args().size()),
               "function symbol");
  for (const FOTerm& a : t.args()) scan_term_symbols(a, functions);
}

void scan_formula_symbols(const Formula& p, std::map<std::string, int>& functions,
                          std::map<std::string, int>& predicates) {
  switch (p.kind()) {
    case Formula::Kind::Falsum:
      return;
    case Formula::Kind::Atom:
      if (p.predicate() != kEqualsPredicate)
        record_arity(predicates, p.predicate(),
                     static_cast<int>(p.args().size()), "predicate");
      for (const FOTerm& t : p.args()) scan_term_symbols(t, functions);
      return;
    case Formula::Kind::Implies:
      scan_formula_symbols(p.lhs(), functions, predicates);
      scan_formula_symbols(p.rhs(), functions, predicates);
      return;
    case Formula::Kind::Forall:
      scan_formula_symbols(p.body(), functions, predicates);
      return;
  }
}
}  // namespace

Language infer_language(const std::vector<Formula>& formulas) {
  Language lang;
  for (const Formula& p : formulas)
    scan_formula_symbols(p, lang.functions.arity, lang.predicates);
  return lang;
}

Interpretation::Interpretation(int domain_size, FiniteAlgebra algebra,
                               std::map<std::string, Relation> relations)
    : domain_size_(domain_size),
      algebra_(std::move(algebra)),
      relations_(std::move(relations)) {
  if (domain_size_ < 1)
    throw std::invalid_argument("the domain must be nonempty");
  if (algebra_.carrier_size() != domain_size_)
    throw DomainMismatch("algebra carrier size " +
                         std::to_string(algebra_.carrier_size()) +
                         " does not match domain size " +
                         std::to_string(domain_size_));
  if (relations_.count(kEqualsPredicate))
    throw std::invalid_argument("the identity relation cannot be overridden");
  for (const auto& [name, rel] : relations_) {
    if (rel.arity < 0) throw std::invalid_argument("negative arity for '" + name + "'");
    for (const auto& tuple : rel.tuples) {
      if (static_cast<int>(tuple.size()) != rel.arity)
        throw std::invalid_argument("tuple of wrong length in '" + name + "'");
      for (int d : tuple)
        if (d < 0 || d >= domain_size_)
          throw std::invalid_argument("tuple entry out of domain in '" + name + "'");
    }
  }
  Relation diagonal;
  diagonal.arity = 2;
  for (int d = 0; d < domain_size_; ++d) diagonal.tuples.insert({d, d});
  relations_[kEqualsPredicate] = std::move(diagonal);
}

bool Interpretation::holds(const std::string& predicate,
                           const std::vector<int>& tuple) const {
  auto it = relations_.find(predicate);
  if (it == relations_.end())
    throw UnknownSymbol("interpretation has no predicate '" + predicate + "'");
  if (static_cast<int>(tuple.size()) != it->second.arity)
    throw UnknownSymbol("predicate '" + predicate + "' applied to " +
                        std::to_string(tuple.size()) + " arguments, arity is " +
                        std::to_string(it->second.arity));
  return it->second.tuples.count(tuple) > 0;
}

int eval_formula(const Formula& p, const Interpretation& m,
                 const std::vector<int>& env) {
  switch (p.kind()) {
    case Formula::Kind::Falsum:
      return 0;
    case Formula::Kind::Atom: {
      std::vector<int> tuple;
      tuple.reserve(p.args().size());
      for (const FOTerm& t : p.args())
        tuple.push_back(eval_term(t, m.algebra(), env));
      return m.holds(p.predicate(), tuple) ? 1 : 0;
    }
    case Formula::Kind::Implies:
      return (eval_formula(p.lhs(), m, env) == 0 ||
              eval_formula(p.rhs(), m, env) == 1)
                 ? 1
                 : 0;
    case Formula::Kind::Forall: {
      std::vector<int> extended(env.size() + 1);
      std::copy(env.begin(), env.end(), extended.begin() + 1);
      for (int d = 0; d < m.domain_size(); ++d) {
        extended[0] = d;
        if (eval_formula(p.body(), m, extended) == 0) return 0;
      }
      return 1;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {
// Runs fn on every vector in {0..base-1}^length, in lexicographic order.
// fn returning false stops the sweep early.
template <class Fn>
bool for_each_tuple(int base, int length, Fn&& fn) {
  std::vector<int> tuple(static_cast<std::size_t>(length), 0);
  while (true) {
    if (!fn(const_cast<const std::vector<int>&>(tuple))) return false;
    int pos = length - 1;
    for (; pos >= 0; --pos) {
      if (++tuple[static_cast<std::size_t>(pos)] < base) break;
      tuple[static_cast<std::size_t>(pos)] = 0;
    }
    if (pos < 0) return true;
  }
}

long long saturating_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  constexpr long long kCap = 1LL << 60;
  if (a > kCap / b) return kCap;
  return a * b;
}

long long saturating_pow(long long base, long long exponent) {
  long long result = 1;
  for (long long i = 0; i < exponent; ++i) result = saturating_mul(result, base);
  return result;
}
}  // namespace

bool is_true(const Formula& p, const Interpretation& m) {
  int r = rank(p);
  return for_each_tuple(m.domain_size(), r, [&](const std::vector<int>& env) {
    return eval_formula(p, m, env) == 1;
  });
}

namespace {

// Depth-first sweep over every interpretation of the given symbols on a
// fixed domain, functions before relations, tables in lexicographic order.
// Visit returns false to stop (counterexample found).
struct InterpretationSweep {
  int domain;
  std::vector<std::pair<std::string, int>> functions;   // sorted by name
  std::vector<std::pair<std::string, int>> predicates;  // sorted by name

  std::map<std::string, OpTable> ops;
  std::map<std::string, Relation> relations;

  template <class Visit>
  bool run(Visit&& visit) {
    return run_functions(0, visit);
  }

  template <class Visit>
  bool run_functions(std::size_t i, Visit& visit) {
    if (i == functions.size()) return run_predicates(0, visit);
    const auto& [name, arity] = functions[i];
    auto entries = static_cast<long long>(saturating_pow(domain, arity));
    OpTable op;
    op.arity = arity;
    op.table.assign(static_cast<std::size_t>(entries), 0);
    bool keep_going = true;
    auto sweep = [&](auto&& self, std::size_t pos) -> void {
      if (!keep_going) return;
      if (pos == op.table.size()) {
        ops[name] = op;
        if (!run_functions(i + 1, visit)) keep_going = false;
        return;
      }
      for (int v = 0; v < domain && keep_going; ++v) {
        op.table[pos] = v;
        self(self, pos + 1);
      }
    };
    sweep(sweep, 0);
    return keep_going;
  }

  template <class Visit>
  bool run_predicates(std::size_t i, Visit& visit) {
    if (i == predicates.size()) {
      Interpretation m(domain, FiniteAlgebra(domain, ops), relations);
      return visit(m);
    }
    const auto& [name, arity] = predicates[i];
    std::vector<std::vector<int>> all_tuples;
    for_each_tuple(domain, arity, [&](const std::vector<int>& t) {
      all_tuples.push_back(t);
      return true;
    });
    bool keep_going = true;
    Relation rel;
    rel.arity = arity;
    auto sweep = [&](auto&& self, std::size_t pos) -> void {
      if (!keep_going) return;
      if (pos == all_tuples.size()) {
        relations[name] = rel;
        if (!run_predicates(i + 1, visit)) keep_going = false;
        return;
      }
      self(self, pos + 1);  // tuple absent
      if (!keep_going) return;
      rel.tuples.insert(all_tuples[pos]);  // tuple present
      self(self, pos + 1);
      rel.tuples.erase(all_tuples[pos]);
    };
    sweep(sweep, 0);
    return keep_going;
  }
};

long long interpretation_count(const Language& lang, int domain) {
  long long count = 1;
  for (const auto& [name, arity] : lang.functions.arity) {
    (void)name;
    count = saturating_mul(count,
                           saturating_pow(domain, saturating_pow(domain, arity)));
  }
  for (const auto& [name, arity] : lang.predicates) {
    (void)name;
    count = saturating_mul(count, saturating_pow(2, saturating_pow(domain, arity)));
  }
  return count;
}

void check_enumeration_budget(const Language& lang, int max_domain, int max_rank,
                              long long budget) {
  long long cost = 0;
  for (int m = 1; m <= max_domain; ++m) {
    long long per_model = std::max<long long>(1, saturating_pow(m, max_rank));
    cost += saturating_mul(interpretation_count(lang, m), per_model);
    if (cost > budget)
      throw BoundExceeded("enumeration of models up to size " +
                          std::to_string(max_domain) + " exceeds the budget " +
                          std::to_string(budget));
  }
}

InterpretationSweep make_sweep(const Language& lang, int domain) {
  InterpretationSweep sweep;
  sweep.domain = domain;
  for (const auto& entry : lang.functions.arity) sweep.functions.push_back(entry);
  for (const auto& entry : lang.predicates) sweep.predicates.push_back(entry);
  return sweep;
}

}  // namespace

ValidityResult is_valid_bounded(const Formula& p, int max_domain, long long budget) {
  if (max_domain < 1) throw std::invalid_argument("max_domain must be positive");
  Language lang = infer_language({p});
  check_enumeration_budget(lang, max_domain, rank(p), budget);
  ValidityResult result;
  for (int m = 1; m <= max_domain; ++m) {
    InterpretationSweep sweep = make_sweep(lang, m);
    bool ok = sweep.run([&](const Interpretation& candidate) {
      if (!is_true(p, candidate)) {
        result.counter_model = candidate;
        return false;
      }
      return true;
    });
    if (!ok) {
      result.valid = false;
      return result;
    }
  }
  result.valid = true;
  return result;
}

EntailmentResult implies_bounded(const std::vector<Formula>& gamma,
                                 const Formula& p, int max_domain,
                                 long long budget) {
  if (max_domain < 1) throw std::invalid_argument("max_domain must be positive");
  std::vector<Formula> all = gamma;
  all.push_back(p);
  Language lang = infer_language(all);
  int max_rank = 0;
  for (const Formula& q : all) max_rank = std::max(max_rank, rank(q));
  check_enumeration_budget(lang, max_domain, max_rank, budget);

  EntailmentResult result;
  for (int m = 1; m <= max_domain; ++m) {
    InterpretationSweep sweep = make_sweep(lang, m);
    bool ok = sweep.run([&](const Interpretation& candidate) {
      return for_each_tuple(m, max_rank, [&](const std::vector<int>& env) {
        for (const Formula& q : gamma)
          if (eval_formula(q, candidate, env) == 0) return true;
        if (eval_formula(p, candidate, env) == 1) return true;
        result.counter_model = candidate;
        result.counter_env = env;
        return false;
      });
    });
    if (!ok) {
      result.entailed = false;
      return result;
    }
  }
  result.entailed = true;
  return result;
}

Interpretation Interpretation::from_json_text(std::string_view text) {
  FiniteAlgebra algebra = FiniteAlgebra::from_json_text(text);
  nlohmann::json j = nlohmann::json::parse(text);
  std::map<std::string, Relation> relations;
  if (j.contains("relations")) {
    if (!j["relations"].is_object())
      throw ParseError("\"relations\" must be an object", 0);
    for (const auto& [name, entry] : j["relations"].items()) {
      if (!entry.is_object() || !entry.contains("arity") || !entry.contains("tuples"))
        throw ParseError("relation '" + name + "' needs \"arity\" and \"tuples\"", 0);
      Relation rel;
      rel.arity = entry["arity"].get<int>();
      for (const auto& t : entry["tuples"]) {
        std::vector<int> tuple;
        for (const auto& v : t) tuple.push_back(v.get<int>());
        rel.tuples.insert(std::move(tuple));
      }
      relations[name] = std::move(rel);
    }
  }
  try {
    return Interpretation(algebra.carrier_size(), std::move(algebra),
                          std::move(relations));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string Interpretation::to_json_text() const {
  nlohmann::json j = nlohmann::json::parse(algebra_.to_json_text());
  j["relations"] = nlohmann::json::object();
  for (const auto& [name, rel] : relations_) {
    if (name == kEqualsPredicate) continue;
    nlohmann::json tuples = nlohmann::json::array();
    for (const auto& t : rel.tuples) tuples.push_back(t);
    j["relations"][name] = {{"arity", rel.arity}, {"tuples", tuples}};
  }
  return j.dump();
}

namespace {

constexpr const char* kFalse = "false";

struct FormulaParser {
  std::string_view source;

  [[noreturn]] void fail(const std::string& message, const SExpr& e) const {
    throw ParseError(message + " at " + describe_position(source, e.position),
                     e.position);
  }

  int positive_int(const SExpr& e) const {
    if (e.is_atom()) {
      long value = 0;
      bool ok = !e.atom.empty();
      for (char c : e.atom) {
        if (c < '0' || c > '9') {
          ok = false;
          break;
        }
        value = value * 10 + (c - '0');
        if (value > 1000000) {
          ok = false;
          break;
        }
      }
      if (ok && value >= 1) return static_cast<int>(value);
    }
    fail("expected a positive variable number", e);
  }

  FOTerm term(const SExpr& e) const;
  Formula build(const SExpr& e) const;
};

FOTerm FormulaParser::term(const SExpr& e) const {
  if (e.is_atom()) {
    if (auto index = parse_var_atom(e.atom)) return FOTerm::var(*index);
    fail("expected a term variable like x1, got '" + e.atom + "'", e);
  }
  if (e.items.empty()) fail("empty term application", e);
  const SExpr& head = e.items[0];
  if (!head.is_atom() || !is_identifier(head.atom))
    fail("expected a function symbol", head);
  std::vector<FOTerm> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term(e.items[i]));
  return FOTerm::app(head.atom, std::move(args));
}

Formula FormulaParser::build(const SExpr& e) const {
  if (e.is_atom()) {
    if (e.atom == kFalse) return Formula::falsum();
    fail("expected a formula, got '" + e.atom + "'", e);
  }
  if (e.items.empty()) fail("empty formula", e);
  const SExpr& head = e.items[0];
  if (!head.is_atom()) fail("expected a formula keyword", head);
  const std::string& op = head.atom;
  auto expect = [&](std::size_t n, const char* shape) {
    if (e.items.size() != n + 1) fail(std::string("expected ") + shape, e);
  };
  if (op == "atom") {
    if (e.items.size() < 2 || !e.items[1].is_atom() || !is_identifier(e.items[1].atom))
      fail("(atom r t...) needs a predicate name", e);
    std::vector<FOTerm> args;
    for (std::size_t i = 2; i < e.items.size(); ++i) args.push_back(term(e.items[i]));
    if (e.items[1].atom == kEqualsPredicate && args.size() != 2)
      fail("the identity predicate takes two terms", e);
    return Formula::atom(e.items[1].atom, std::move(args));
  }
  if (op == "eq") {
    expect(2, "(eq t u)");
    return Formula::equals(term(e.items[1]), term(e.items[2]));
  }
  if (op == "imp") {
    expect(2, "(imp p q)");
    return Formula::implies(build(e.items[1]), build(e.items[2]));
  }
  if (op == "forall") {
    expect(1, "(forall p)");
    return Formula::forall(build(e.items[1]));
  }
  if (op == "not") {
    expect(1, "(not p)");
    return neg(build(e.items[1]));
  }
  if (op == "and") {
    expect(2, "(and p q)");
    return conj(build(e.items[1]), build(e.items[2]));
  }
  if (op == "or") {
    expect(2, "(or p q)");
    return disj(build(e.items[1]), build(e.items[2]));
  }
  if (op == "iff") {
    expect(2, "(iff p q)");
    return iff(build(e.items[1]), build(e.items[2]));
  }
  if (op == "forall-x") {
    expect(2, "(forall-x i p)");
    return forall_named(positive_int(e.items[1]), build(e.items[2]));
  }
  if (op == "exists-x") {
    expect(2, "(exists-x i p)");
    return exists_named(positive_int(e.items[1]), build(e.items[2]));
  }
  fail("unknown formula form '" + op + "'", head);
}

}  // namespace

Formula parse_formula(std::string_view source) {
  FormulaParser parser{source};
  return parser.build(read_single_sexpr(source));
}

std::string print_formula(const Formula& p) {
  switch (p.kind()) {
    case Formula::Kind::Falsum:
      return "false";
    case Formula::Kind::Atom: {
      std::ostringstream out;
      if (p.predicate() == kEqualsPredicate) {
        out << "(eq " << print_foterm(p.args()[0]) << ' '
            << print_foterm(p.args()[1]) << ')';
        return out.str();
      }
      out << "(atom " << p.predicate();
      for (const FOTerm& t : p.args()) out << ' ' << print_foterm(t);
      out << ')';
      return out.str();
    }
    case Formula::Kind::Implies:
      return "(imp " + print_formula(p.lhs()) + " " + print_formula(p.rhs()) + ")";
    case Formula::Kind::Forall:
      return "(forall " + print_formula(p.body()) + ")";
  }
  throw std::logic_error("unreachable");
}

}  // namespace clonek
