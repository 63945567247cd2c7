#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "clonek/cli.hpp"
#include "clonek/formula.hpp"
#include "clonek/lambda.hpp"
#include "testutil.hpp"

using testutil::Rng;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = clonek::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  std::filesystem::path path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << text;
  return path;
}

const char* kNandJson = R"({"carrier":2,"ops":{"nand":{"arity":2,"table":[1,1,1,0]}}})";
const char* kModelJson =
    R"({"carrier":2,"ops":{"c":{"arity":0,"table":[1]}},)"
    R"("relations":{"r":{"arity":1,"tuples":[[1]]}}})";

}  // namespace

TEST_CASE("lam norm") {
  RunResult r = run({"lam", "norm", "(app (fn y y) (fn z z))"});
  CHECK(r.code == 0);
  CHECK(r.out == "(lam x1)\nsteps=1 normalized=true\n");

  r = run({"lam", "norm", "--max-steps", "50",
           "(app (lam (app x1 x1)) (lam (app x1 x1)))"});
  CHECK(r.code == 0);
  CHECK(r.out.find("normalized=false") != std::string::npos);

  r = run({"lam", "norm", "--eta", "(lam (app x2 x1))"});
  CHECK(r.out == "x1\nsteps=1 normalized=true\n");
}

TEST_CASE("lam parse") {
  RunResult r = run({"lam", "parse", "(fn y (fn z y))"});
  CHECK(r.code == 0);
  CHECK(r.out == "(lam (lam x2))\n");
  r = run({"lam", "parse", "--format", "json", "(fn y y)"});
  CHECK(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["term"] == "(lam x1)");
}

TEST_CASE("term commands") {
  auto algebra = write_temp("clonek_xor.json",
                            R"({"carrier":2,"ops":{"f":{"arity":2,"table":[0,1,1,0]}}})");
  RunResult r = run({"term", "eval", "--algebra", algebra.string(), "--env", "1,0",
                     "(f x1 x2)"});
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");
  r = run({"term", "rank", "(f x1 (f x5 x1))"});
  CHECK(r.code == 0);
  CHECK(r.out == "rank=5 free=1,5\n");
  r = run({"term", "eval", "--algebra", algebra.string(), "--env", "1", "(f x1 x2)"});
  CHECK(r.code == 1);  // environment too short
  r = run({"term", "eval", "--algebra", algebra.string(), "--env", "1,0", "(g x1)"});
  CHECK(r.code == 1);  // unknown symbol
}

TEST_CASE("clone closure") {
  auto nand = write_temp("clonek_nand.json", kNandJson);
  RunResult r = run({"clone", "closure", "--algebra", nand.string(), "--arity", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 8) == "size=16\n");
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 17);

  RunResult bounded =
      run({"clone", "closure", "--algebra", nand.string(), "--arity", "9"});
  CHECK(bounded.code == 1);  // table space over the bound

  RunResult json = run({"clone", "closure", "--algebra", nand.string(), "--arity",
                        "2", "--format", "json"});
  nlohmann::json j = nlohmann::json::parse(json.out);
  CHECK(j["size"] == 16);
  CHECK(j["tables"].size() == 16);
}

TEST_CASE("fol eval, true, valid, implies, axioms") {
  auto model = write_temp("clonek_model.json", kModelJson);
  RunResult r = run({"fol", "eval", "--model", model.string(), "--env", "1",
                     "(atom r x1)"});
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");

  r = run({"fol", "true", "--model", model.string(), "(atom r (c))"});
  CHECK(r.out == "true\n");
  r = run({"fol", "true", "--model", model.string(), "(atom r x1)"});
  CHECK(r.out == "false\n");

  r = run({"fol", "valid", "(imp (atom r x1) (atom r x1))"});
  CHECK(r.code == 0);
  CHECK(r.out == "valid up to domain size 3\n");

  r = run({"fol", "valid", "--max-domain", "2",
           "(exists-x 1 (forall-x 2 (eq x1 x2)))"});
  CHECK(r.code == 3);
  CHECK(r.out.find("counter-model found at domain size 2") == 0);

  r = run({"fol", "implies", "--gamma", "(forall-x 1 (atom r x1))", "--max-domain",
           "2", "(atom r (c))"});
  CHECK(r.code == 0);
  CHECK(r.out == "entailed up to domain size 2\n");

  r = run({"fol", "implies", "--gamma", "(atom r x1)", "--max-domain", "2",
           "(atom r x2)"});
  CHECK(r.code == 3);
  CHECK(r.out.find("counterexample found") == 0);
  CHECK(r.out.find("env=") != std::string::npos);

  r = run({"fol", "axioms", "--domain-size", "2", "--max-rank", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "5/5 conditions hold\n");
}

TEST_CASE("counter-models feed back into evaluation") {
  RunResult refuted = run({"fol", "valid", "--max-domain", "2", "--format", "json",
                           "(exists-x 1 (forall-x 2 (eq x1 x2)))"});
  REQUIRE(refuted.code == 3);
  nlohmann::json j = nlohmann::json::parse(refuted.out);
  REQUIRE(j["valid"] == false);
  auto model = write_temp("clonek_counter.json", j["counter_model"].dump());
  RunResult eval = run({"fol", "true", "--model", model.string(),
                        "(exists-x 1 (forall-x 2 (eq x1 x2)))"});
  CHECK(eval.code == 0);
  CHECK(eval.out == "false\n");
}

TEST_CASE("exit codes for bad input") {
  CHECK(run({"lam", "norm", "(lam"}).code == 2);
  CHECK(run({"lam", "norm"}).code == 2);                     // no input source
  CHECK(run({"lam", "norm", "x1", "--file", "a"}).code == 2);  // two sources
  CHECK(run({"bogus", "cmd"}).code == 2);
  CHECK(run({"fol", "axioms", "--domain-size", "0"}).code == 2);
  CHECK(run({"term", "eval", "(f x1)"}).code == 2);  // missing --algebra
  CHECK(run({}).code == 2);
  CHECK(run({"help"}).code == 0);

  RunResult parse_err = run({"lam", "parse", "(lam (app x1 x0))"});
  CHECK(parse_err.code == 2);
  CHECK(parse_err.err.find("x0") != std::string::npos);
  CHECK(parse_err.err.find("column") != std::string::npos);
}

TEST_CASE("budget can be tightened through the environment") {
  setenv("CLONE_KERNEL_BUDGET", "10", 1);
  RunResult r = run({"fol", "axioms", "--domain-size", "2", "--max-rank", "2"});
  unsetenv("CLONE_KERNEL_BUDGET");
  CHECK(r.code == 1);
  CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("file input with comments") {
  auto file = write_temp("clonek_term.sexpr",
                         "; identity applied to identity\n(app (fn y y) (fn z z))\n");
  RunResult r = run({"lam", "norm", "--file", file.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "(lam x1)\nsteps=1 normalized=true\n");
  CHECK(run({"lam", "norm", "--file", "/nonexistent/path"}).code == 2);
}

TEST_CASE("output is byte-identical across runs") {
  auto nand = write_temp("clonek_nand2.json", kNandJson);
  auto model = write_temp("clonek_model2.json", kModelJson);
  std::vector<std::vector<std::string>> invocations = {
      {"lam", "norm", "(app (fn y y) (fn z z))"},
      {"lam", "parse", "--format", "json", "(fn a (app a b))"},
      {"term", "rank", "(f x1 (f x5 x1))"},
      {"clone", "closure", "--algebra", nand.string(), "--arity", "2"},
      {"fol", "valid", "--max-domain", "2", "(exists-x 1 (forall-x 2 (eq x1 x2)))"},
      {"fol", "true", "--model", model.string(), "(atom r (c))"},
      {"fol", "axioms", "--domain-size", "2", "--max-rank", "2", "--format", "json"},
  };
  for (const auto& args : invocations) {
    RunResult first = run(args);
    RunResult second = run(args);
    REQUIRE(first.code == second.code);
    REQUIRE(first.out == second.out);
    REQUIRE(first.err == second.err);
  }
}

TEST_CASE("grammar round-trip corpus") {
  Rng rng(13001);
  int cases = 0;
  for (int i = 0; i < 40; ++i) {
    clonek::LTerm t = testutil::gen_lterm(rng, 4, 4);
    RunResult r = run({"lam", "parse", clonek::print_lambda(t)});
    REQUIRE(r.code == 0);
    REQUIRE(r.out == clonek::print_lambda(t) + "\n");
    ++cases;
  }
  for (int i = 0; i < 30; ++i) {
    clonek::FOTerm t = testutil::gen_foterm(rng, 3, 5);
    RunResult r = run({"term", "rank", clonek::print_foterm(t)});
    REQUIRE(r.code == 0);
    ++cases;
  }
  for (int i = 0; i < 30; ++i) {
    clonek::Formula p = testutil::gen_formula(rng, 3, 3);
    REQUIRE(clonek::parse_formula(clonek::print_formula(p)) == p);
    ++cases;
  }
  CHECK(cases == 100);
}
