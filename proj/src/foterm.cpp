#include "clonek/foterm.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "clonek/errors.hpp"
#include "clonek/sexpr.hpp"

namespace clonek {

struct FOTerm::Node {
  int var_index = 0;  // >= 1 for variables, 0 for applications
  std::string symbol;
  std::vector<FOTerm> args;
};

FOTerm FOTerm::var(int index) {
  if (index < 1) throw std::invalid_argument("variable indices are 1-based");
  auto node = std::make_shared<Node>();
  node->var_index = index;
  return FOTerm(std::move(node));
}

FOTerm FOTerm::app(std::string symbol, std::vector<FOTerm> args) {
  if (symbol.empty()) throw std::invalid_argument("empty function symbol");
  auto node = std::make_shared<Node>();
  node->symbol = std::move(symbol);
  node->args = std::move(args);
  return FOTerm(std::move(node));
}

bool FOTerm::is_var() const { return node_->var_index != 0; }

int FOTerm::var_index() const {
  if (!is_var()) throw std::logic_error("var_index on an application");
  return node_->var_index;
}

const std::string& FOTerm::symbol() const {
  if (is_var()) throw std::logic_error("symbol on a variable");
  return node_->symbol;
}

const std::vector<FOTerm>& FOTerm::args() const {
  if (is_var()) throw std::logic_error("args on a variable");
  return node_->args;
}

bool operator==(const FOTerm& a, const FOTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->var_index != b.node_->var_index) return false;
  if (a.node_->var_index != 0) return true;
  if (a.node_->symbol != b.node_->symbol) return false;
  return a.node_->args == b.node_->args;
}

FOTerm apply_subst(const FOTerm& t, const Subst<FOTerm>& s) {
  if (t.is_var()) return s.lookup(t.var_index());
  std::vector<FOTerm> args;
  args.reserve(t.args().size());
  for (const FOTerm& a : t.args()) args.push_back(apply_subst(a, s));
  return FOTerm::app(t.symbol(), std::move(args));
}

int rank(const FOTerm& t) {
  if (t.is_var()) return t.var_index();
  int r = 0;
  for (const FOTerm& a : t.args()) r = std::max(r, rank(a));
  return r;
}

namespace {
void collect_vars(const FOTerm& t, std::set<int>& out) {
  if (t.is_var()) {
    out.insert(t.var_index());
    return;
  }
  for (const FOTerm& a : t.args()) collect_vars(a, out);
}
}  // namespace

std::set<int> free_vars(const FOTerm& t) {
  std::set<int> out;
  collect_vars(t, out);
  return out;
}

void Signature::validate(const FOTerm& t) const {
  if (t.is_var()) return;
  auto it = arity.find(t.symbol());
  if (it == arity.end())
    throw UnknownSymbol("unknown function symbol '" + t.symbol() + "'");
  if (it->second != static_cast<int>(t.args().size()))
    throw UnknownSymbol("symbol '" + t.symbol() + "' expects " +
                        std::to_string(it->second) + " arguments, got " +
                        std::to_string(t.args().size()));
  for (const FOTerm& a : t.args()) validate(a);
}

std::size_t tuple_index(const std::vector<int>& args, int carrier_size) {
  std::size_t index = 0;
  for (int a : args) index = index * static_cast<std::size_t>(carrier_size) +
                             static_cast<std::size_t>(a);
  return index;
}

namespace {
std::size_t power_checked(int base, int exponent, const char* what) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > (static_cast<std::size_t>(1) << 40))
      throw BoundExceeded(std::string(what) + " table is too large");
    result *= static_cast<std::size_t>(base);
  }
  return result;
}
}  // namespace

FiniteAlgebra::FiniteAlgebra(int carrier_size, std::map<std::string, OpTable> ops)
    : carrier_size_(carrier_size), ops_(std::move(ops)) {
  if (carrier_size_ < 1)
    throw std::invalid_argument("carrier must have at least one element");
  for (const auto& [name, op] : ops_) {
    if (op.arity < 0) throw std::invalid_argument("negative arity for '" + name + "'");
    std::size_t expected = power_checked(carrier_size_, op.arity, name.c_str());
    if (op.table.size() != expected)
      throw std::invalid_argument("operation '" + name + "' needs " +
                                  std::to_string(expected) + " table entries, got " +
                                  std::to_string(op.table.size()));
    for (int value : op.table)
      if (value < 0 || value >= carrier_size_)
        throw std::invalid_argument("table entry out of carrier range in '" + name + "'");
  }
}

Signature FiniteAlgebra::signature() const {
  Signature sig;
  for (const auto& [name, op] : ops_) sig.arity[name] = op.arity;
  return sig;
}

int FiniteAlgebra::apply(const std::string& symbol, const std::vector<int>& args) const {
  auto it = ops_.find(symbol);
  if (it == ops_.end())
    throw UnknownSymbol("algebra has no operation '" + symbol + "'");
  if (static_cast<int>(args.size()) != it->second.arity)
    throw UnknownSymbol("operation '" + symbol + "' applied to " +
                        std::to_string(args.size()) + " arguments, arity is " +
                        std::to_string(it->second.arity));
  return it->second.table[tuple_index(args, carrier_size_)];
}

int eval_term(const FOTerm& t, const FiniteAlgebra& algebra,
              const std::vector<int>& env) {
  if (t.is_var()) {
    if (t.var_index() > static_cast<int>(env.size()))
      throw EnvTooShort("environment has " + std::to_string(env.size()) +
                        " entries, term needs x" + std::to_string(t.var_index()));
    return env[static_cast<std::size_t>(t.var_index()) - 1];
  }
  std::vector<int> values;
  values.reserve(t.args().size());
  for (const FOTerm& a : t.args()) values.push_back(eval_term(a, algebra, env));
  return algebra.apply(t.symbol(), values);
}

std::vector<std::vector<int>> clone_closure(const FiniteAlgebra& algebra,
                                            int arity, long long table_bound) {
  if (arity < 1) throw std::invalid_argument("clone_closure needs arity >= 1");
  int m = algebra.carrier_size();
  std::size_t size = power_checked(m, arity, "argument");
  if (static_cast<long long>(size) > table_bound)
    throw BoundExceeded("table space " + std::to_string(size) +
                        " exceeds the bound " + std::to_string(table_bound));

  std::set<std::vector<int>> members;
  for (int p = 0; p < arity; ++p) {
    std::vector<int> projection(size);
    std::vector<int> point(static_cast<std::size_t>(arity), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      projection[idx] = point[static_cast<std::size_t>(p)];
      for (int pos = arity - 1; pos >= 0; --pos) {
        if (++point[static_cast<std::size_t>(pos)] < m) break;
        point[static_cast<std::size_t>(pos)] = 0;
      }
    }
    members.insert(std::move(projection));
  }

  // Saturate: apply every basic operation pointwise to members until fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, op] : algebra.ops()) {
      (void)name;
      int r = op.arity;
      if (r == 0) {
        std::vector<int> constant(size, op.table[0]);
        changed |= members.insert(std::move(constant)).second;
        continue;
      }
      std::vector<std::vector<int>> snapshot(members.begin(), members.end());
      std::vector<std::size_t> pick(static_cast<std::size_t>(r), 0);
      while (true) {
        std::vector<int> composite(size);
        std::vector<int> args(static_cast<std::size_t>(r));
        for (std::size_t idx = 0; idx < size; ++idx) {
          for (int j = 0; j < r; ++j)
            args[static_cast<std::size_t>(j)] =
                snapshot[pick[static_cast<std::size_t>(j)]][idx];
          composite[idx] = op.table[tuple_index(args, m)];
        }
        changed |= members.insert(std::move(composite)).second;
        int pos = r - 1;
        for (; pos >= 0; --pos) {
          if (++pick[static_cast<std::size_t>(pos)] < snapshot.size()) break;
          pick[static_cast<std::size_t>(pos)] = 0;
        }
        if (pos < 0) break;
      }
    }
  }
  return {members.begin(), members.end()};
}

FiniteAlgebra FiniteAlgebra::from_json_text(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON", 0);
  if (!j.is_object() || !j.contains("carrier") || !j["carrier"].is_number_integer())
    throw ParseError("algebra JSON needs an integer \"carrier\" field", 0);
  int carrier = j["carrier"].get<int>();
  std::map<std::string, OpTable> ops;
  if (j.contains("ops")) {
    if (!j["ops"].is_object()) throw ParseError("\"ops\" must be an object", 0);
    for (const auto& [name, entry] : j["ops"].items()) {
      if (!entry.is_object() || !entry.contains("arity") || !entry.contains("table"))
        throw ParseError("operation '" + name + "' needs \"arity\" and \"table\"", 0);
      OpTable op;
      op.arity = entry["arity"].get<int>();
      for (const auto& v : entry["table"]) op.table.push_back(v.get<int>());
      ops[name] = std::move(op);
    }
  }
  try {
    return FiniteAlgebra(carrier, std::move(ops));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string FiniteAlgebra::to_json_text() const {
  nlohmann::json j;
  j["carrier"] = carrier_size_;
  j["ops"] = nlohmann::json::object();
  for (const auto& [name, op] : ops_) {
    j["ops"][name] = {{"arity", op.arity}, {"table", op.table}};
  }
  return j.dump();
}

namespace {
FOTerm foterm_from_sexpr(const SExpr& e, std::string_view source) {
  if (e.is_atom()) {
    if (auto index = parse_var_atom(e.atom)) return FOTerm::var(*index);
    throw ParseError("expected a variable like x1, got '" + e.atom + "' at " +
                         describe_position(source, e.position),
                     e.position);
  }
  if (e.items.empty())
    throw ParseError("empty application at " + describe_position(source, e.position),
                     e.position);
  const SExpr& head = e.items.front();
  if (!head.is_atom() || !is_identifier(head.atom))
    throw ParseError("expected a function symbol at " +
                         describe_position(source, head.position),
                     head.position);
  std::vector<FOTerm> args;
  for (std::size_t i = 1; i < e.items.size(); ++i)
    args.push_back(foterm_from_sexpr(e.items[i], source));
  return FOTerm::app(head.atom, std::move(args));
}
}  // namespace

FOTerm parse_foterm(std::string_view source) {
  return foterm_from_sexpr(read_single_sexpr(source), source);
}

std::string print_foterm(const FOTerm& t) {
  if (t.is_var()) return "x" + std::to_string(t.var_index());
  std::ostringstream out;
  out << '(' << t.symbol();
  for (const FOTerm& a : t.args()) out << ' ' << print_foterm(a);
  out << ')';
  return out.str();
}

}  // namespace clonek
