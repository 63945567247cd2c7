#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "clonek/errors.hpp"
#include "clonek/lambda.hpp"
#include "testutil.hpp"

using clonek::LTerm;
using clonek::Subst;
using testutil::Rng;

namespace {
using SL = Subst<LTerm>;

LTerm v(int i) { return LTerm::var(i); }
LTerm lam(LTerm b) { return LTerm::lam(std::move(b)); }
LTerm app(LTerm f, LTerm a) { return LTerm::app(std::move(f), std::move(a)); }

LTerm gen_term(Rng& rng) { return testutil::gen_lterm(rng, 4, 4); }
SL gen(Rng& rng) { return testutil::gen_subst<LTerm>(rng, gen_term); }

// Pool of closed terms that reach a normal form quickly.
std::vector<LTerm> normalizing_closed_terms() {
  LTerm i = lam(v(1));
  LTerm k = lam(lam(v(2)));
  LTerm s = lam(lam(lam(app(app(v(3), v(1)), app(v(2), v(1))))));
  return {i,
          k,
          s,
          testutil::church(0),
          testutil::church(2),
          testutil::church_plus(),
          app(k, i),
          app(app(s, k), k),
          app(i, app(k, testutil::church(1)))};
}
}  // namespace

TEST_CASE("substitution fixes closed terms and respects the unit") {
  Rng rng(9001);
  for (int i = 0; i < 200; ++i) {
    SL s = gen(rng);
    REQUIRE(apply_subst(lam(v(1)), s) == lam(v(1)));
    LTerm t = gen_term(rng);
    REQUIRE(apply_subst(t, SL::identity()) == t);
  }
  LTerm b = app(lam(v(1)), v(2));
  CHECK(apply_subst(lam(v(2)), SL::join_finite({b})) ==
        lam(clonek::shift_by(b, 1)));
}

TEST_CASE("clone axioms and the substitution lemma for lambda terms") {
  Rng rng(9002);
  for (int i = 0; i < 1000; ++i) {
    LTerm a = gen_term(rng);
    SL s = gen(rng), u = gen(rng);
    REQUIRE(apply_subst(apply_subst(a, s), u) == apply_subst(a, compose(s, u)));
    int j = testutil::pick(rng, 1, 6);
    REQUIRE(apply_subst(v(j), s) == s.lookup(j));
  }
}

TEST_CASE("substitution lemma via an explicitly built pointwise composite") {
  // (a s~) u~ = a [s1 u~, s2 u~, ...] with the right side assembled by hand.
  Rng rng(9003);
  for (int i = 0; i < 1000; ++i) {
    LTerm a = gen_term(rng);
    SL s = gen(rng), u = gen(rng);
    int width = std::max(1, rank(a));
    std::vector<LTerm> pointwise;
    pointwise.reserve(static_cast<std::size_t>(width) + 1);
    for (int j = 1; j <= width + 1; ++j)
      pointwise.push_back(apply_subst(s.lookup(j), u));
    REQUIRE(apply_subst(apply_subst(a, s), u) ==
            apply_subst(a, SL::join_finite(std::move(pointwise))));
  }
}

TEST_CASE("binders commute with substitution through lift") {
  Rng rng(9004);
  for (int i = 0; i < 500; ++i) {
    LTerm b = gen_term(rng);
    SL s = gen(rng);
    REQUIRE(apply_subst(lam(b), s) == lam(apply_subst(b, s.lift())));
  }
}

TEST_CASE("beta steps") {
  LTerm b = lam(lam(app(v(1), v(2))));
  CHECK(beta_step(app(lam(v(1)), b)) == b);
  CHECK(beta_step(app(lam(v(2)), b)) == v(1));
  CHECK_FALSE(beta_step(lam(v(1))).has_value());
  CHECK_FALSE(beta_step(v(3)).has_value());
  // leftmost-outermost: the head redex fires before the argument's
  LTerm omega = app(lam(app(v(1), v(1))), lam(app(v(1), v(1))));
  LTerm head = app(lam(v(1)), v(5));
  CHECK(beta_step(app(head, omega)) == app(v(5), omega));
}

TEST_CASE("eta steps") {
  CHECK(eta_step(lam(app(v(2), v(1)))) == v(1));
  CHECK_FALSE(eta_step(lam(app(v(1), v(1)))).has_value());
  CHECK(eta_step(lam(app(lam(v(1)), v(1)))) == lam(v(1)));
  CHECK_FALSE(eta_step(lam(v(1))).has_value());
}

TEST_CASE("normalization of Church arithmetic") {
  LTerm sum = app(app(testutil::church_plus(), testutil::church(2)),
                  testutil::church(3));
  clonek::ReduceReport r = normalize(sum, 1000, false);
  CHECK(r.normalized);
  CHECK(r.result == testutil::church(5));
}

TEST_CASE("normalization reports divergence through the fuel bound") {
  LTerm omega = app(lam(app(v(1), v(1))), lam(app(v(1), v(1))));
  clonek::ReduceReport r = normalize(omega, 50, false);
  CHECK_FALSE(r.normalized);
  CHECK(r.steps == 50);
}

TEST_CASE("normal forms are returned unchanged") {
  clonek::ReduceReport r = normalize(lam(v(1)), 10, true);
  CHECK(r.normalized);
  CHECK(r.steps == 0);
  CHECK(r.result == lam(v(1)));
}

TEST_CASE("named binders reproduce the classic vectors") {
  CHECK(clonek::named_binder(1, v(1)) == lam(v(1)));
  CHECK(clonek::named_binder(2, v(2)) == lam(v(1)));
  CHECK(clonek::named_binder(1, v(2)) == lam(v(3)));
  CHECK(clonek::named_binder(1, v(3)) == lam(v(4)));
  // binding a variable above the support shifts everything across it
  for (int i = 3; i <= 6; ++i) CHECK(clonek::named_binder(i, v(1)) == lam(v(2)));
}

TEST_CASE("shifted-down binder vectors") {
  auto down = [](const LTerm& t) { return apply_subst(t, SL::shift_down()); };
  CHECK(down(clonek::named_binder(1, v(1))) == lam(v(1)));
  CHECK(down(clonek::named_binder(1, v(2))) == lam(v(2)));
  CHECK(down(clonek::named_binder(1, v(3))) == clonek::named_binder(1, v(2)));
  CHECK(down(clonek::named_binder(1, v(4))) == clonek::named_binder(1, v(3)));
}

TEST_CASE("named binder on x1 is the shifted abstraction") {
  Rng rng(9005);
  for (int i = 0; i < 500; ++i) {
    LTerm b = gen_term(rng);
    REQUIRE(clonek::named_binder(1, b) == clonek::shift_by(lam(b), 1));
    REQUIRE(apply_subst(clonek::named_binder(1, b), SL::duplicate_at(1)) == lam(b));
  }
}

TEST_CASE("substituting into a named binder routes around the bound slot") {
  // (binder_i b)[u] = lam(b[u1^, ..., u_{i-1}^, x1, u_{i+1}^, ...])
  // where ^ shifts a term up by one.
  Rng rng(9013);
  for (int trial = 0; trial < 400; ++trial) {
    LTerm b = gen_term(rng);
    SL u = gen(rng);
    int i = testutil::pick(rng, 1, 4);
    int width = std::max(rank(b), i) + 1;
    std::vector<LTerm> routed;
    for (int j = 1; j <= width; ++j)
      routed.push_back(j == i ? v(1) : clonek::shift_by(u.lookup(j), 1));
    LTerm expected = lam(apply_subst(b, SL::join_finite(std::move(routed))));
    REQUIRE(apply_subst(clonek::named_binder(i, b), u) == expected);
  }
}

TEST_CASE("binders convert across variable indices") {
  // For j <= i: binder_i b = (binder_j (b shifted around j, with x_j put
  // where x_{i+1} was)) pulled back down at j; for i < j the source slot
  // is x_i itself.
  Rng rng(9014);
  for (int trial = 0; trial < 400; ++trial) {
    LTerm b = gen_term(rng);
    int i = testutil::pick(rng, 1, 4);
    int j = testutil::pick(rng, 1, 4);
    LTerm shifted = apply_subst(b, SL::insert_at(j));
    int source = j <= i ? i + 1 : i;
    LTerm renamed = apply_subst(shifted, SL::single_sub(v(j), source));
    REQUIRE(clonek::named_binder(i, b) ==
            apply_subst(clonek::named_binder(j, renamed), SL::duplicate_at(j)));
  }
}

TEST_CASE("a named binder is a binding operation on its own variable") {
  // (binder_i b)[u] = (binder_i (b[u1^{+i}, ..., u_{i-1}^{+i}, x_i,
  // u_{i+1}^{+i}, ...])) pulled back down at i.
  Rng rng(9015);
  for (int trial = 0; trial < 400; ++trial) {
    LTerm b = gen_term(rng);
    SL u = gen(rng);
    int i = testutil::pick(rng, 1, 4);
    int width = std::max(rank(b), i) + 2;
    std::vector<LTerm> routed;
    for (int j = 1; j <= width; ++j)
      routed.push_back(j == i ? v(i)
                              : apply_subst(u.lookup(j), SL::insert_at(i)));
    LTerm inner = apply_subst(b, SL::join_finite(std::move(routed)));
    REQUIRE(apply_subst(clonek::named_binder(i, b), u) ==
            apply_subst(clonek::named_binder(i, inner), SL::duplicate_at(i)));
  }
}

TEST_CASE("free indices and rank") {
  CHECK(free_indices(lam(v(2))) == std::set<int>{1});
  CHECK(rank(lam(v(2))) == 1);
  for (int i = 2; i <= 6; ++i) CHECK(rank(lam(v(i))) == i - 1);
  CHECK(free_indices(lam(v(1))).empty());
  CHECK(rank(app(v(3), lam(v(5)))) == 4);
}

TEST_CASE("abstraction decreases rank and closes finitary terms") {
  Rng rng(9006);
  for (int i = 0; i < 500; ++i) {
    LTerm b = gen_term(rng);
    REQUIRE(rank(lam(b)) == std::max(rank(b) - 1, 0));
    LTerm closed = b;
    for (int k = rank(b); k > 0; --k) closed = lam(closed);
    REQUIRE(rank(closed) == 0);
  }
}

TEST_CASE("free indices agree with the dependence definition") {
  Rng rng(9007);
  for (int i = 0; i < 500; ++i) {
    LTerm t = gen_term(rng);
    std::set<int> fv = free_indices(t);
    for (int j = 1; j <= 8; ++j) {
      bool depends = t != apply_subst(t, SL::single_sub(v(j + 1), j));
      REQUIRE(depends == (fv.count(j) == 1));
    }
  }
}

TEST_CASE("binding an absent variable is renaming-invariant") {
  Rng rng(9008);
  int tried = 0;
  for (int i = 0; i < 2000 && tried < 300; ++i) {
    LTerm b = gen_term(rng);
    int y = testutil::pick(rng, 1, 6);
    int z = testutil::pick(rng, 1, 6);
    if (free_indices(b).count(y)) continue;
    ++tried;
    REQUIRE(clonek::named_binder(z, b) ==
            clonek::named_binder(y, apply_subst(b, SL::single_sub(v(y), z))));
    REQUIRE(clonek::named_binder(y, b) == lam(clonek::shift_by(b, 1)));
  }
  CHECK(tried >= 300);
}

TEST_CASE("identity binder applications vanish under normalization") {
  Rng rng(9009);
  for (int i = 0; i < 300; ++i) {
    LTerm b = gen_term(rng);
    clonek::ReduceReport wrapped =
        normalize(app(clonek::named_binder(1, v(1)), b), 2000, false);
    clonek::ReduceReport direct = normalize(b, 2000, false);
    REQUIRE(wrapped.normalized == direct.normalized);
    REQUIRE(wrapped.result == direct.result);
  }
}

TEST_CASE("eta extensionality on closed terms") {
  Rng rng(9010);
  for (const LTerm& a : normalizing_closed_terms()) {
    LTerm wrapped = lam(app(clonek::shift_by(a, 1), v(1)));
    clonek::ReduceReport lhs = normalize(wrapped, 2000, true);
    clonek::ReduceReport rhs = normalize(a, 2000, true);
    REQUIRE(lhs.normalized);
    REQUIRE(rhs.normalized);
    REQUIRE(lhs.result == rhs.result);
  }
}

TEST_CASE("parsing named terms") {
  CHECK(clonek::parse_lambda("(fn y y)") == lam(v(1)));
  CHECK(clonek::parse_lambda("(fn y (fn z y))") == lam(lam(v(2))));
  CHECK(clonek::parse_lambda("(fn y y)") == clonek::parse_lambda("(fn z z)"));
  CHECK(clonek::parse_lambda("(lam (app x1 x2))") == lam(app(v(1), v(2))));
  CHECK(clonek::parse_lambda("y") == v(1));
  CHECK(clonek::parse_lambda("(app y z)") == app(v(1), v(2)));
  CHECK(clonek::parse_lambda("(free z y) (app y z)") == app(v(2), v(1)));
  CHECK(clonek::parse_lambda("(fn y (app y z))") == lam(app(v(1), v(2))));
  CHECK(clonek::parse_lambda("; a comment\n(fn y y)") == lam(v(1)));
  // shadowing binds to the innermost binder
  CHECK(clonek::parse_lambda("(fn y (fn y y))") == lam(lam(v(1))));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(clonek::parse_lambda("(lam)"), clonek::ParseError);
  CHECK_THROWS_AS(clonek::parse_lambda("(app x1)"), clonek::ParseError);
  CHECK_THROWS_AS(clonek::parse_lambda("(fn x1 x1)"), clonek::ParseError);
  CHECK_THROWS_AS(clonek::parse_lambda("x0"), clonek::ParseError);
  CHECK_THROWS_AS(clonek::parse_lambda(""), clonek::ParseError);
  CHECK_THROWS_AS(clonek::parse_lambda("(lam x1) (lam x1)"), clonek::ParseError);
  try {
    clonek::parse_lambda("(lam (app x1 x0))");
    FAIL("expected a parse error");
  } catch (const clonek::ParseError& e) {
    CHECK(std::string(e.what()).find("x0") != std::string::npos);
    CHECK(e.position == 13);
  }
}

TEST_CASE("named conversion agrees with the classical environment oracle") {
  Rng rng(9011);
  for (int i = 0; i < 500; ++i) {
    std::string source = testutil::gen_named_source(rng, 5);
    CAPTURE(source);
    REQUIRE(clonek::parse_lambda(source) == testutil::convert_named_oracle(source));
  }
}

TEST_CASE("printing round-trips") {
  Rng rng(9012);
  for (int i = 0; i < 300; ++i) {
    LTerm t = gen_term(rng);
    REQUIRE(clonek::parse_lambda(clonek::print_lambda(t)) == t);
  }
}
