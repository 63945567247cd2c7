#include "clonek/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "clonek/errors.hpp"
#include "clonek/formula.hpp"
#include "clonek/lambda.hpp"
#include "clonek/truthtable.hpp"

namespace clonek {
namespace {

constexpr long long kDefaultBudget = 10000000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char kUsage[] =
    "usage: clonek <command> [options] [expression]\n"
    "\n"
    "commands:\n"
    "  lam norm       normalize a lambda term (--max-steps N, --eta)\n"
    "  lam parse      parse a lambda term and print its de Bruijn form\n"
    "  term eval      evaluate a term (--algebra FILE, --env d1,d2,...)\n"
    "  term rank      rank and free variables of a term\n"
    "  clone closure  closure tables (--algebra FILE, --arity N, --table-bound B)\n"
    "  fol eval       evaluate a formula (--model FILE, --env d1,d2,...)\n"
    "  fol true       truth in a model (--model FILE)\n"
    "  fol valid      bounded validity (--max-domain K); exit 3 on counter-model\n"
    "  fol implies    bounded entailment (--gamma EXPR ..., --max-domain K)\n"
    "  fol axioms     quantifier-algebra conditions (--domain-size M, --max-rank R)\n"
    "\n"
    "common options: --file FILE (instead of an inline expression),\n"
    "--format text|json. CLONE_KERNEL_BUDGET overrides the enumeration budget.\n";

struct Options {
  std::optional<std::string> inline_expr;
  std::optional<std::string> file;
  std::optional<std::string> algebra_file;
  std::optional<std::string> model_file;
  std::vector<std::string> gamma;
  std::vector<int> env;
  int max_steps = 10000;
  int max_domain = 3;
  int arity = 0;
  long long table_bound = 16;
  int domain_size = 0;
  int max_rank = 0;
  bool use_eta = false;
  bool json_output = false;
  long long budget = kDefaultBudget;
};

int parse_int(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError("expected an integer for " + flag + ", got '" + text + "'");
  }
}

std::vector<int> parse_env(const std::string& text) {
  std::vector<int> env;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) env.push_back(parse_int(item, "--env"));
  return env;
}

Options parse_options(const std::vector<std::string>& args, std::size_t start) {
  Options opt;
  if (const char* raw = std::getenv("CLONE_KERNEL_BUDGET")) {
    try {
      opt.budget = std::stoll(raw);
    } catch (const std::exception&) {
      throw UsageError("CLONE_KERNEL_BUDGET is not an integer");
    }
    if (opt.budget < 1) throw UsageError("CLONE_KERNEL_BUDGET must be positive");
  }
  auto need_value = [&](std::size_t& i, const std::string& flag) -> const std::string& {
    if (i + 1 >= args.size()) throw UsageError(flag + " needs a value");
    return args[++i];
  };
  for (std::size_t i = start; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--file") {
      opt.file = need_value(i, a);
    } else if (a == "--algebra") {
      opt.algebra_file = need_value(i, a);
    } else if (a == "--model") {
      opt.model_file = need_value(i, a);
    } else if (a == "--gamma") {
      opt.gamma.push_back(need_value(i, a));
    } else if (a == "--env") {
      opt.env = parse_env(need_value(i, a));
    } else if (a == "--max-steps") {
      opt.max_steps = parse_int(need_value(i, a), a);
    } else if (a == "--max-domain") {
      opt.max_domain = parse_int(need_value(i, a), a);
    } else if (a == "--arity") {
      opt.arity = parse_int(need_value(i, a), a);
    } else if (a == "--table-bound") {
      opt.table_bound = parse_int(need_value(i, a), a);
    } else if (a == "--domain-size") {
      opt.domain_size = parse_int(need_value(i, a), a);
    } else if (a == "--max-rank") {
      opt.max_rank = parse_int(need_value(i, a), a);
    } else if (a == "--eta") {
      opt.use_eta = true;
    } else if (a == "--format") {
      const std::string& v = need_value(i, a);
      if (v == "json")
        opt.json_output = true;
      else if (v == "text")
        opt.json_output = false;
      else
        throw UsageError("--format takes text or json, got '" + v + "'");
    } else if (!a.empty() && a[0] == '-') {
      throw UsageError("unknown option '" + a + "'");
    } else {
      if (opt.inline_expr) throw UsageError("more than one expression given");
      opt.inline_expr = a;
    }
  }
  return opt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Exactly one of the inline expression and --file.
std::string input_source(const Options& opt) {
  if (opt.inline_expr && opt.file)
    throw UsageError("give either an inline expression or --file, not both");
  if (opt.inline_expr) return *opt.inline_expr;
  if (opt.file) return read_file(*opt.file);
  throw UsageError("missing input expression (inline or --file)");
}

void emit(std::ostream& out, bool as_json, const nlohmann::json& json_report,
          const std::string& text_report) {
  if (as_json)
    out << json_report.dump() << '\n';
  else
    out << text_report;
}

int cmd_lam_parse(const Options& opt, std::ostream& out) {
  LTerm t = parse_lambda(input_source(opt));
  nlohmann::json j{{"schema", 1}, {"term", print_lambda(t)}};
  emit(out, opt.json_output, j, print_lambda(t) + "\n");
  return 0;
}

int cmd_lam_norm(const Options& opt, std::ostream& out) {
  if (opt.max_steps < 1) throw UsageError("--max-steps must be positive");
  LTerm t = parse_lambda(input_source(opt));
  ReduceReport r = normalize(t, opt.max_steps, opt.use_eta);
  nlohmann::json j{{"schema", 1},
                   {"term", print_lambda(r.result)},
                   {"steps", r.steps},
                   {"normalized", r.normalized}};
  std::ostringstream text;
  text << print_lambda(r.result) << '\n'
       << "steps=" << r.steps << " normalized=" << (r.normalized ? "true" : "false")
       << '\n';
  emit(out, opt.json_output, j, text.str());
  return 0;
}

int cmd_term_eval(const Options& opt, std::ostream& out) {
  if (!opt.algebra_file) throw UsageError("term eval needs --algebra FILE");
  FiniteAlgebra algebra = FiniteAlgebra::from_json_text(read_file(*opt.algebra_file));
  FOTerm t = parse_foterm(input_source(opt));
  algebra.signature().validate(t);
  int value = eval_term(t, algebra, opt.env);
  nlohmann::json j{{"schema", 1}, {"value", value}};
  emit(out, opt.json_output, j, std::to_string(value) + "\n");
  return 0;
}

int cmd_term_rank(const Options& opt, std::ostream& out) {
  FOTerm t = parse_foterm(input_source(opt));
  std::set<int> fv = free_vars(t);
  nlohmann::json j{{"schema", 1}, {"rank", rank(t)}, {"free", fv}};
  std::ostringstream text;
  text << "rank=" << rank(t) << " free=";
  bool first = true;
  for (int v : fv) {
    if (!first) text << ',';
    text << v;
    first = false;
  }
  text << '\n';
  emit(out, opt.json_output, j, text.str());
  return 0;
}

int cmd_clone_closure(const Options& opt, std::ostream& out) {
  if (!opt.algebra_file) throw UsageError("clone closure needs --algebra FILE");
  if (opt.arity < 1) throw UsageError("clone closure needs --arity N with N >= 1");
  FiniteAlgebra algebra = FiniteAlgebra::from_json_text(read_file(*opt.algebra_file));
  auto tables = clone_closure(algebra, opt.arity, opt.table_bound);
  nlohmann::json j{{"schema", 1},
                   {"carrier", algebra.carrier_size()},
                   {"arity", opt.arity},
                   {"size", tables.size()},
                   {"tables", tables}};
  std::ostringstream text;
  text << "size=" << tables.size() << '\n';
  for (const auto& table : tables) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (i) text << ' ';
      text << table[i];
    }
    text << '\n';
  }
  emit(out, opt.json_output, j, text.str());
  return 0;
}

Interpretation load_model(const Options& opt) {
  if (!opt.model_file) throw UsageError("this command needs --model FILE");
  return Interpretation::from_json_text(read_file(*opt.model_file));
}

int cmd_fol_eval(const Options& opt, std::ostream& out) {
  Interpretation m = load_model(opt);
  Formula p = parse_formula(input_source(opt));
  int value = eval_formula(p, m, opt.env);
  nlohmann::json j{{"schema", 1}, {"value", value}};
  emit(out, opt.json_output, j, std::to_string(value) + "\n");
  return 0;
}

int cmd_fol_true(const Options& opt, std::ostream& out) {
  Interpretation m = load_model(opt);
  Formula p = parse_formula(input_source(opt));
  bool value = is_true(p, m);
  nlohmann::json j{{"schema", 1}, {"true", value}};
  emit(out, opt.json_output, j, std::string(value ? "true" : "false") + "\n");
  return 0;
}

int cmd_fol_valid(const Options& opt, std::ostream& out) {
  if (opt.max_domain < 1) throw UsageError("--max-domain must be positive");
  Formula p = parse_formula(input_source(opt));
  ValidityResult r = is_valid_bounded(p, opt.max_domain, opt.budget);
  nlohmann::json j{{"schema", 1}, {"max_domain", opt.max_domain}, {"valid", r.valid}};
  std::ostringstream text;
  if (r.valid) {
    text << "valid up to domain size " << opt.max_domain << '\n';
  } else {
    j["counter_model"] = nlohmann::json::parse(r.counter_model->to_json_text());
    text << "counter-model found at domain size " << r.counter_model->domain_size()
         << '\n'
         << r.counter_model->to_json_text() << '\n';
  }
  emit(out, opt.json_output, j, text.str());
  return r.valid ? 0 : 3;
}

int cmd_fol_implies(const Options& opt, std::ostream& out) {
  if (opt.max_domain < 1) throw UsageError("--max-domain must be positive");
  std::vector<Formula> gamma;
  gamma.reserve(opt.gamma.size());
  for (const std::string& g : opt.gamma) gamma.push_back(parse_formula(g));
  Formula p = parse_formula(input_source(opt));
  EntailmentResult r = implies_bounded(gamma, p, opt.max_domain, opt.budget);
  nlohmann::json j{{"schema", 1},
                   {"max_domain", opt.max_domain},
                   {"entailed", r.entailed}};
  std::ostringstream text;
  if (r.entailed) {
    text << "entailed up to domain size " << opt.max_domain << '\n';
  } else {
    j["counter_model"] = nlohmann::json::parse(r.counter_model->to_json_text());
    j["counter_env"] = r.counter_env;
    text << "counterexample found at domain size "
         << r.counter_model->domain_size() << '\n'
         << r.counter_model->to_json_text() << '\n'
         << "env=";
    for (std::size_t i = 0; i < r.counter_env.size(); ++i) {
      if (i) text << ',';
      text << r.counter_env[i];
    }
    text << '\n';
  }
  emit(out, opt.json_output, j, text.str());
  return r.entailed ? 0 : 3;
}

int cmd_fol_axioms(const Options& opt, std::ostream& out) {
  if (opt.domain_size < 1) throw UsageError("fol axioms needs --domain-size M >= 1");
  if (opt.max_rank < 0) throw UsageError("--max-rank must be nonnegative");
  AxiomCheckReport r = quantifier_axiom_check(opt.domain_size, opt.max_rank,
                                              opt.budget);
  nlohmann::json j{{"schema", 1},
                   {"domain_size", r.domain_size},
                   {"max_rank", r.max_rank},
                   {"tables", r.tables_checked},
                   {"conditions", r.condition_holds},
                   {"passed", r.conditions_passed()},
                   {"witness", r.witness}};
  std::ostringstream text;
  text << r.conditions_passed() << "/5 conditions hold\n";
  if (!r.all_hold()) text << "witness: " << r.witness << '\n';
  emit(out, opt.json_output, j, text.str());
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  try {
    if (args.empty() || args[0] == "--help" || args[0] == "help") {
      out << kUsage;
      return args.empty() ? 2 : 0;
    }
    if (args.size() < 2) throw UsageError("missing subcommand");
    const std::string command = args[0] + " " + args[1];
    Options opt = parse_options(args, 2);
    if (command == "lam parse") return cmd_lam_parse(opt, out);
    if (command == "lam norm") return cmd_lam_norm(opt, out);
    if (command == "term eval") return cmd_term_eval(opt, out);
    if (command == "term rank") return cmd_term_rank(opt, out);
    if (command == "clone closure") return cmd_clone_closure(opt, out);
    if (command == "fol eval") return cmd_fol_eval(opt, out);
    if (command == "fol true") return cmd_fol_true(opt, out);
    if (command == "fol valid") return cmd_fol_valid(opt, out);
    if (command == "fol implies") return cmd_fol_implies(opt, out);
    if (command == "fol axioms") return cmd_fol_axioms(opt, out);
    throw UsageError("unknown command '" + command + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << kUsage;
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const SemanticError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace clonek
