#include "clonek/lambda.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "clonek/errors.hpp"
#include "clonek/sexpr.hpp"

namespace clonek {

struct LTerm::Node {
  Kind kind;
  int var_index = 0;
  std::vector<LTerm> children;  // [body] for Lam, [fn, arg] for App
};

LTerm LTerm::var(int index) {
  if (index < 1) throw std::invalid_argument("de Bruijn indices are 1-based");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Var;
  node->var_index = index;
  return LTerm(std::move(node));
}

LTerm LTerm::lam(LTerm body) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Lam;
  node->children.push_back(std::move(body));
  return LTerm(std::move(node));
}

LTerm LTerm::app(LTerm fn, LTerm arg) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::App;
  node->children.push_back(std::move(fn));
  node->children.push_back(std::move(arg));
  return LTerm(std::move(node));
}

LTerm::Kind LTerm::kind() const { return node_->kind; }

int LTerm::var_index() const {
  if (node_->kind != Kind::Var) throw std::logic_error("var_index on a non-variable");
  return node_->var_index;
}

const LTerm& LTerm::body() const {
  if (node_->kind != Kind::Lam) throw std::logic_error("body on a non-abstraction");
  return node_->children[0];
}

const LTerm& LTerm::fn() const {
  if (node_->kind != Kind::App) throw std::logic_error("fn on a non-application");
  return node_->children[0];
}

const LTerm& LTerm::arg() const {
  if (node_->kind != Kind::App) throw std::logic_error("arg on a non-application");
  return node_->children[1];
}

bool operator==(const LTerm& a, const LTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind != b.node_->kind) return false;
  if (a.node_->kind == LTerm::Kind::Var)
    return a.node_->var_index == b.node_->var_index;
  return a.node_->children == b.node_->children;
}

LTerm apply_subst(const LTerm& t, const Subst<LTerm>& s) {
  switch (t.kind()) {
    case LTerm::Kind::Var:
      return s.lookup(t.var_index());
    case LTerm::Kind::App:
      return LTerm::app(apply_subst(t.fn(), s), apply_subst(t.arg(), s));
    case LTerm::Kind::Lam:
      return LTerm::lam(apply_subst(t.body(), s.lift()));
  }
  throw std::logic_error("unreachable");
}

namespace {
void collect_free(const LTerm& t, int depth, std::set<int>& out) {
  switch (t.kind()) {
    case LTerm::Kind::Var:
      if (t.var_index() > depth) out.insert(t.var_index() - depth);
      return;
    case LTerm::Kind::App:
      collect_free(t.fn(), depth, out);
      collect_free(t.arg(), depth, out);
      return;
    case LTerm::Kind::Lam:
      collect_free(t.body(), depth + 1, out);
      return;
  }
}

bool index_free(const LTerm& t, int index) {
  switch (t.kind()) {
    case LTerm::Kind::Var:
      return t.var_index() == index;
    case LTerm::Kind::App:
      return index_free(t.fn(), index) || index_free(t.arg(), index);
    case LTerm::Kind::Lam:
      return index_free(t.body(), index + 1);
  }
  return false;
}
}  // namespace

std::set<int> free_indices(const LTerm& t) {
  std::set<int> out;
  collect_free(t, 0, out);
  return out;
}

int rank(const LTerm& t) {
  std::set<int> fv = free_indices(t);
  return fv.empty() ? 0 : *fv.rbegin();
}

std::optional<LTerm> beta_step(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::Var:
      return std::nullopt;
    case LTerm::Kind::Lam:
      if (auto r = beta_step(t.body())) return LTerm::lam(*r);
      return std::nullopt;
    case LTerm::Kind::App: {
      if (t.fn().kind() == LTerm::Kind::Lam)
        return apply_subst(t.fn().body(), Subst<LTerm>::affine({t.arg()}, -1));
      if (auto r = beta_step(t.fn())) return LTerm::app(*r, t.arg());
      if (auto r = beta_step(t.arg())) return LTerm::app(t.fn(), *r);
      return std::nullopt;
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<LTerm> eta_step(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::Var:
      return std::nullopt;
    case LTerm::Kind::Lam: {
      const LTerm& b = t.body();
      if (b.kind() == LTerm::Kind::App && b.arg().kind() == LTerm::Kind::Var &&
          b.arg().var_index() == 1 && !index_free(b.fn(), 1))
        return apply_subst(b.fn(), Subst<LTerm>::shift_down());
      if (auto r = eta_step(b)) return LTerm::lam(*r);
      return std::nullopt;
    }
    case LTerm::Kind::App:
      if (auto r = eta_step(t.fn())) return LTerm::app(*r, t.arg());
      if (auto r = eta_step(t.arg())) return LTerm::app(t.fn(), *r);
      return std::nullopt;
  }
  throw std::logic_error("unreachable");
}

ReduceReport normalize(const LTerm& t, int max_steps, bool use_eta) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be positive");
  ReduceReport report{t, 0, false};
  while (report.steps < max_steps) {
    if (auto r = beta_step(report.result)) {
      report.result = *r;
      ++report.steps;
      continue;
    }
    if (use_eta) {
      if (auto r = eta_step(report.result)) {
        report.result = *r;
        ++report.steps;
        continue;
      }
    }
    report.normalized = true;
    return report;
  }
  report.normalized = !beta_step(report.result).has_value() &&
                      (!use_eta || !eta_step(report.result).has_value());
  return report;
}

LTerm named_binder(int index, const LTerm& body) {
  if (index < 1) throw std::invalid_argument("binder indices are 1-based");
  return LTerm::lam(apply_subst(body, binder_rotation<LTerm>(index)));
}

namespace {

constexpr const char* kLam = "lam";
constexpr const char* kApp = "app";
constexpr const char* kFn = "fn";
constexpr const char* kFree = "free";

bool lambda_keyword(const std::string& s) {
  return s == kLam || s == kApp || s == kFn || s == kFree;
}

struct NameScan {
  std::vector<std::string> free_order;
  std::vector<std::string> binder_order;

  void visit(const SExpr& e, std::vector<std::string>& bound) {
    if (e.is_atom()) {
      if (parse_var_atom(e.atom)) return;
      if (std::find(bound.begin(), bound.end(), e.atom) == bound.end() &&
          std::find(free_order.begin(), free_order.end(), e.atom) == free_order.end())
        free_order.push_back(e.atom);
      return;
    }
    if (!e.items.empty() && e.items[0].is_atom() && e.items[0].atom == kFn &&
        e.items.size() == 3 && e.items[1].is_atom()) {
      const std::string& name = e.items[1].atom;
      if (std::find(binder_order.begin(), binder_order.end(), name) ==
          binder_order.end())
        binder_order.push_back(name);
      bound.push_back(name);
      visit(e.items[2], bound);
      bound.pop_back();
      return;
    }
    std::size_t first = 0;
    if (!e.items.empty() && e.items[0].is_atom() && lambda_keyword(e.items[0].atom))
      first = 1;
    for (std::size_t i = first; i < e.items.size(); ++i) visit(e.items[i], bound);
  }
};

struct LambdaParser {
  std::string_view source;
  std::map<std::string, int> name_index;

  [[noreturn]] void fail(const std::string& message, const SExpr& e) const {
    throw ParseError(message + " at " + describe_position(source, e.position),
                     e.position);
  }

  LTerm build(const SExpr& e) {
    if (e.is_atom()) {
      if (auto index = parse_var_atom(e.atom)) return LTerm::var(*index);
      if (!is_identifier(e.atom) || lambda_keyword(e.atom))
        fail("expected a variable or name, got '" + e.atom + "'", e);
      return LTerm::var(name_index.at(e.atom));
    }
    if (e.items.empty()) fail("empty list", e);
    const SExpr& head = e.items[0];
    if (!head.is_atom()) fail("expected lam, app or fn", head);
    if (head.atom == kLam) {
      if (e.items.size() != 2) fail("(lam t) takes one body", e);
      return LTerm::lam(build(e.items[1]));
    }
    if (head.atom == kApp) {
      if (e.items.size() != 3) fail("(app t u) takes two terms", e);
      return LTerm::app(build(e.items[1]), build(e.items[2]));
    }
    if (head.atom == kFn) {
      if (e.items.size() != 3 || !e.items[1].is_atom() ||
          !is_identifier(e.items[1].atom) || lambda_keyword(e.items[1].atom))
        fail("(fn name t) takes a name and a body", e);
      return named_binder(name_index.at(e.items[1].atom), build(e.items[2]));
    }
    fail("unknown form '" + head.atom + "'", head);
  }
};

}  // namespace

LTerm parse_lambda(std::string_view source) {
  std::vector<SExpr> forms = read_sexprs(source);
  if (forms.empty()) throw ParseError("empty input", 0);

  std::vector<std::string> declared;
  std::size_t term_index = 0;
  if (forms[0].is_list() && !forms[0].items.empty() && forms[0].items[0].is_atom() &&
      forms[0].items[0].atom == kFree) {
    for (std::size_t i = 1; i < forms[0].items.size(); ++i) {
      const SExpr& n = forms[0].items[i];
      if (!n.is_atom() || !is_identifier(n.atom) || lambda_keyword(n.atom))
        throw ParseError("(free ...) takes names, got '" + n.atom + "' at " +
                             describe_position(source, n.position),
                         n.position);
      if (std::find(declared.begin(), declared.end(), n.atom) == declared.end())
        declared.push_back(n.atom);
    }
    term_index = 1;
  }
  if (forms.size() != term_index + 1) {
    const SExpr& extra = forms.size() > term_index + 1 ? forms[term_index + 1] : forms[0];
    throw ParseError("expected exactly one term at " +
                         describe_position(source, extra.position),
                     extra.position);
  }
  const SExpr& body = forms[term_index];

  NameScan scan;
  std::vector<std::string> bound;
  scan.visit(body, bound);

  // Free names take the low indices, preamble order first; names that only
  // ever appear as binders follow. The index of a bound name never shows in
  // the output, it just has to differ from every other name in scope.
  LambdaParser parser{source, {}};
  int next = 1;
  for (const std::string& name : declared)
    if (!parser.name_index.count(name)) parser.name_index[name] = next++;
  for (const std::string& name : scan.free_order)
    if (!parser.name_index.count(name)) parser.name_index[name] = next++;
  for (const std::string& name : scan.binder_order)
    if (!parser.name_index.count(name)) parser.name_index[name] = next++;

  return parser.build(body);
}

std::string print_lambda(const LTerm& t) {
  switch (t.kind()) {
    case LTerm::Kind::Var:
      return "x" + std::to_string(t.var_index());
    case LTerm::Kind::Lam:
      return "(lam " + print_lambda(t.body()) + ")";
    case LTerm::Kind::App:
      return "(app " + print_lambda(t.fn()) + " " + print_lambda(t.arg()) + ")";
  }
  throw std::logic_error("unreachable");
}

}  // namespace clonek
