#include <doctest.h>

#include <random>

#include "verge/formula.hpp"
#include "verge/sexpr.hpp"

using namespace verge;

namespace {

Signature folio_sig() {
  Signature sig;
  sig.declare_sort("Person");
  sig.declare_sort("Item");
  sig.declare_entity("Alan", "Person");
  sig.declare_constant("Wine", "Item");
  sig.declare_constant("Beer", "Item");
  sig.declare_constant("Fish", "Item");
  sig.declare_predicate("Guest", {"Person"});
  sig.declare_predicate("Drinks", {"Person", "Item"});
  sig.declare_predicate("Likes", {"Person", "Item"});
  return sig;
}

Signature house_sig() {
  Signature sig;
  sig.declare_sort("House");
  sig.declare_entity("Red", "House");
  sig.declare_entity("Blue", "House");
  sig.declare_entity("Green", "House");
  sig.declare_function("pos", {"House"}, "Int");
  return sig;
}

}  // namespace

TEST_CASE("canonical rendering") {
  Signature sig = house_sig();
  FormulaPtr f = f_cmp(CmpOp::Eq, t_app("pos", {t_sym("Blue")}),
                       t_add({t_app("pos", {t_sym("Red")}), t_int(1)}));
  CHECK(render(f) == "(= (pos Blue) (+ (pos Red) 1))");
  CHECK(render(f_not(f_atom("Likes", {t_sym("Alan"), t_sym("Fish")}))) ==
        "(not (Likes Alan Fish))");
  CHECK(render(f_true()) == "true");
  CHECK(render(t_int(-3)) == "(- 3)");
}

TEST_CASE("render_smtlib emits named asserts and declarations") {
  Signature sig = folio_sig();
  NamedAssertion na;
  na.label = "c1";
  na.formula = f_atom("Drinks", {t_sym("Alan"), t_sym("Wine")});
  std::string script = render_smtlib({na}, sig);
  CHECK(script.find("(set-option :produce-unsat-cores true)") != std::string::npos);
  CHECK(script.find("(set-logic ALL)") != std::string::npos);
  CHECK(script.find("(declare-sort Person 0)") != std::string::npos);
  CHECK(script.find("(declare-fun Drinks (Person Item) Bool)") != std::string::npos);
  CHECK(script.find("(assert (! (Drinks Alan Wine) :named c1))") != std::string::npos);
  CHECK(script.find("check-sat") == std::string::npos);
}

TEST_CASE("render_smtlib rejects duplicate labels") {
  Signature sig = folio_sig();
  NamedAssertion a{"dup", f_atom("Guest", {t_sym("Alan")})};
  NamedAssertion b{"dup", f_true()};
  CHECK_THROWS_WITH_AS(render_smtlib({a, b}, sig), doctest::Contains("dup"),
                       Error);
}

TEST_CASE("instantiation expands quantifiers over entities") {
  SUBCASE("single entity gives the bare body") {
    Signature sig = folio_sig();
    FormulaPtr f = f_forall("x", "Person", f_atom("Guest", {t_var("x")}));
    CHECK(render(instantiate_quantifiers(f, sig)) == "(Guest Alan)");
  }
  SUBCASE("forall becomes a conjunction") {
    Signature sig = house_sig();
    FormulaPtr f = f_forall(
        "x", "House",
        f_cmp(CmpOp::Ge, t_app("pos", {t_var("x")}), t_int(1)));
    CHECK(render(instantiate_quantifiers(f, sig)) ==
          "(and (>= (pos Red) 1) (>= (pos Blue) 1) (>= (pos Green) 1))");
  }
  SUBCASE("exists becomes a disjunction") {
    Signature sig = folio_sig();
    sig.declare_entity("Bea", "Person");
    FormulaPtr f = f_exists("x", "Person",
                            f_atom("Drinks", {t_var("x"), t_sym("Wine")}));
    CHECK(render(instantiate_quantifiers(f, sig)) ==
          "(or (Drinks Alan Wine) (Drinks Bea Wine))");
  }
  SUBCASE("empty domain is an error") {
    Signature sig;
    sig.declare_sort("Ghost");
    FormulaPtr f = f_forall("x", "Ghost", f_true());
    CHECK_THROWS_AS(instantiate_quantifiers(f, sig), Error);
  }
  SUBCASE("nested quantifiers expand fully") {
    Signature sig = house_sig();
    FormulaPtr f = f_forall(
        "x", "House",
        f_exists("y", "House",
                 f_cmp(CmpOp::Lt, t_app("pos", {t_var("x")}),
                       t_app("pos", {t_var("y")}))));
    FormulaPtr g = instantiate_quantifiers(f, sig);
    CHECK_FALSE(contains_quantifier(*g));
  }
}

TEST_CASE("parse handles asserts, annotations and sugar") {
  Signature sig = folio_sig();
  SUBCASE("bare atom") {
    CHECK(render(parse_formula("true", sig).formula) == "true");
  }
  SUBCASE("assert wrapper with label") {
    ParsedFormula pf = parse_formula(
        "(assert (! (Drinks Alan Wine) :named Drinks_Alan_Wine))", sig);
    CHECK(render(pf.formula) == "(Drinks Alan Wine)");
    CHECK(pf.label == "Drinks_Alan_Wine");
  }
  SUBCASE("confidence attribute") {
    ParsedFormula pf = parse_formula(
        "(assert (! (Guest Alan) :named g :confidence 0.85))", sig);
    CHECK(pf.confidence == doctest::Approx(0.85));
  }
  SUBCASE("negated atom") {
    CHECK(render(parse_formula("(not (Likes Alan Fish))", sig).formula) ==
          "(not (Likes Alan Fish))");
  }
  SUBCASE("implication chain is right-associative") {
    Signature s2;
    ParsedFormula pf = parse_formula("(=> a b c)", s2, true);
    CHECK(render(pf.formula) == "(=> a (=> b c))");
  }
  SUBCASE("distinct expands to pairwise disequalities") {
    Signature sig2 = house_sig();
    ParsedFormula pf = parse_formula(
        "(distinct (pos Red) (pos Blue) (pos Green))", sig2);
    CHECK(render(pf.formula) ==
          "(and (not (= (pos Red) (pos Blue))) (not (= (pos Red) (pos "
          "Green))) (not (= (pos Blue) (pos Green))))");
  }
  SUBCASE("boolean equality parses as iff") {
    Signature s2;
    s2.declare_constant("p", "Bool");
    s2.declare_constant("q", "Bool");
    ParsedFormula pf = parse_formula("(= p q)", s2);
    CHECK(pf.formula->kind == Formula::Kind::Iff);
    CHECK(render(pf.formula) == "(= p q)");
  }
  SUBCASE("strict mode rejects unknown symbols") {
    Signature s2;
    CHECK_THROWS_AS(parse_formula("(foo bar)", s2, false), Error);
  }
  SUBCASE("lenient mode auto-declares nullary symbols") {
    Signature s2;
    ParsedFormula pf = parse_formula("(and p (not q))", s2, true);
    CHECK(render(pf.formula) == "(and p (not q))");
    CHECK(s2.symbol_sort("p") == "Bool");
  }
  SUBCASE("sort mismatch is caught") {
    Signature sig2 = folio_sig();
    CHECK_THROWS_AS(parse_formula("(Drinks Wine Alan)", sig2), Error);
    CHECK_THROWS_AS(parse_formula("(< (Guest Alan) 2)", sig2), Error);
  }
  SUBCASE("nonlinear products are rejected") {
    Signature s2;
    s2.declare_constant("x", "Int");
    s2.declare_constant("y", "Int");
    CHECK_THROWS_AS(parse_formula("(= (* x y) 4)", s2), Error);
    CHECK(render(parse_formula("(= (* 2 x) 4)", s2).formula) ==
          "(= (* 2 x) 4)");
  }
}

TEST_CASE("parse_script reads declarations and named asserts") {
  std::string text = R"(
    (set-logic QF_LIA)
    (declare-const x Int)
    (declare-fun p () Bool)
    (assert (! (> x 2) :named a :confidence 0.9))
    (assert p)
  )";
  Script s = parse_script(text);
  CHECK(s.logic == "QF_LIA");
  REQUIRE(s.assertions.size() == 2);
  CHECK(s.assertions[0].label == "a");
  CHECK(s.assertions[1].label == "a1");
  CHECK(s.confidences.at("a") == doctest::Approx(0.9));
  CHECK(render(s.assertions[0].formula) == "(> x 2)");
}

namespace {

// random propositional + arithmetic formula generator shared with the
// acceptance round-trip criterion
FormulaPtr random_formula(std::mt19937& rng, Signature& sig, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
  switch (pick(rng)) {
    case 0:
      return f_atom("p" + std::to_string(rng() % 4));
    case 1:
      return f_cmp(static_cast<CmpOp>(rng() % 5),
                   t_sym("x" + std::to_string(rng() % 3)),
                   t_int(static_cast<long long>(rng() % 7) - 3));
    case 2:
      return rng() % 2 ? f_true() : f_false();
    case 3:
      return f_not(random_formula(rng, sig, depth - 1));
    case 4:
      return f_and({random_formula(rng, sig, depth - 1),
                    random_formula(rng, sig, depth - 1)});
    case 5:
      return f_or({random_formula(rng, sig, depth - 1),
                   random_formula(rng, sig, depth - 1)});
    case 6:
      return f_implies(random_formula(rng, sig, depth - 1),
                       random_formula(rng, sig, depth - 1));
    case 7:
      return f_iff(random_formula(rng, sig, depth - 1),
                   random_formula(rng, sig, depth - 1));
    default:
      return f_cmp(CmpOp::Le,
                   t_add({t_sym("x" + std::to_string(rng() % 3)),
                          t_mul(t_int(2), t_sym("x" + std::to_string(rng() % 3)))}),
                   t_int(5));
  }
}

}  // namespace

TEST_CASE("render-parse round trip on random formulas") {
  std::mt19937 rng(7);
  Signature sig;
  for (int i = 0; i < 4; ++i)
    sig.declare_constant("p" + std::to_string(i), "Bool");
  for (int i = 0; i < 3; ++i)
    sig.declare_constant("x" + std::to_string(i), "Int");
  for (int trial = 0; trial < 300; ++trial) {
    FormulaPtr f = random_formula(rng, sig, 6);
    std::string first = render(f);
    ParsedFormula back = parse_formula(first, sig);
    CHECK(render(back.formula) == first);
  }
}

TEST_CASE("sexpr reader essentials") {
  SExpr e = parse_sexpr("(a (b c) ; comment\n d)");
  REQUIRE(e.size() == 3);
  CHECK(e[1].to_string() == "(b c)");
  CHECK(sexpr_complete("(a b)"));
  CHECK_FALSE(sexpr_complete("(a (b"));
  CHECK(sexpr_complete("sat x"));
  size_t used = 0;
  SExpr first = parse_sexpr("(a) (b)", &used);
  CHECK(first.to_string() == "(a)");
  CHECK(parse_sexpr_list("(a) (b)").size() == 2);
  CHECK_THROWS_AS(parse_sexpr("(a))"), Error);
}
