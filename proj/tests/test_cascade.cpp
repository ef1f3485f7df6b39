#include <doctest.h>

#include "verge/cascade.hpp"

using namespace verge;

namespace {

SolverSession& session() {
  static SolverSession s([] {
    SolverConfig cfg;
    cfg.path = VERGE_SMT_PATH;
    return cfg;
  }());
  return s;
}

JudgeVote vote(VerificationStatus v, double conf, int id = 0) {
  return JudgeVote{v, conf, id};
}

}  // namespace

TEST_CASE("routing is total over the claim types") {
  CHECK(route(ClaimType::Mathematical) == Route::SmtVerify);
  CHECK(route(ClaimType::Logical) == Route::SmtVerify);
  CHECK(route(ClaimType::Temporal) == Route::SmtVerify);
  CHECK(route(ClaimType::Probabilistic) == Route::SoftVerify);
  CHECK(route(ClaimType::Commonsense) == Route::SoftVerify);
  CHECK(route(ClaimType::Vague) == Route::SoftVerify);
}

TEST_CASE("two-probe verification statuses") {
  Signature sig;
  sig.declare_constant("x", "Int");
  std::vector<NamedAssertion> ctx{
      {"lo", parse_formula("(>= x 1)", sig).formula},
      {"hi", parse_formula("(<= x 3)", sig).formula}};

  Claim c;
  c.index = 0;

  SUBCASE("entailed") {
    c.formalization = parse_formula("(<= x 5)", sig).formula;
    auto out = verify_smt(c, ctx, sig, session());
    CHECK(out.status == VerificationStatus::Entailed);
    CHECK(out.core.empty());
  }
  SUBCASE("contradictory with core") {
    c.formalization = parse_formula("(> x 7)", sig).formula;
    c.label = "too_big";
    auto out = verify_smt(c, ctx, sig, session());
    CHECK(out.status == VerificationStatus::Contradictory);
    REQUIRE(out.core.size() == 2);
    CHECK(std::find(out.core.begin(), out.core.end(), "too_big") !=
          out.core.end());
    CHECK(std::find(out.core.begin(), out.core.end(), "hi") != out.core.end());
  }
  SUBCASE("possible") {
    c.formalization = parse_formula("(= x 2)", sig).formula;
    CHECK(verify_smt(c, ctx, sig, session()).status ==
          VerificationStatus::Possible);
  }
  SUBCASE("inconsistent context is an error") {
    std::vector<NamedAssertion> bad{
        {"a", parse_formula("(> x 5)", sig).formula},
        {"b", parse_formula("(< x 2)", sig).formula}};
    c.formalization = parse_formula("(= x 0)", sig).formula;
    try {
      verify_smt(c, bad, sig, session());
      FAIL("expected Error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InconsistentContext);
    }
  }
}

TEST_CASE("claim assertions carry labels and instantiated bodies") {
  Signature sig;
  sig.declare_sort("Person");
  sig.declare_entity("Alan", "Person");
  sig.declare_entity("Bea", "Person");
  sig.declare_predicate("Happy", {"Person"});

  Claim c;
  c.index = 4;
  c.formalization = parse_formula("(forall ((x Person)) (Happy x))", sig).formula;
  NamedAssertion na = claim_assertion(c, sig);
  CHECK(na.label == "claim_4");
  CHECK(na.claim_index == 4);
  CHECK(na.origin == AssertionOrigin::Claim);
  CHECK(render(na.formula) == "(and (Happy Alan) (Happy Bea))");

  c.label = "my_label";
  CHECK(claim_assertion(c, sig).label == "my_label");
}

TEST_CASE("soft verification takes the confidence-weighted majority") {
  double conf = 0.0;
  SUBCASE("weighted winner") {
    auto v = verify_soft({vote(VerificationStatus::Supported, 0.9, 0),
                          vote(VerificationStatus::Supported, 0.8, 1),
                          vote(VerificationStatus::Plausible, 0.6, 2),
                          vote(VerificationStatus::Supported, 0.7, 3),
                          vote(VerificationStatus::Uncertain, 0.5, 4)},
                         conf);
    CHECK(v == VerificationStatus::Supported);
    CHECK(conf == doctest::Approx(2.4 / 3.5));
  }
  SUBCASE("unanimity yields full confidence") {
    auto v = verify_soft({vote(VerificationStatus::Plausible, 0.6, 0),
                          vote(VerificationStatus::Plausible, 0.2, 1)},
                         conf);
    CHECK(v == VerificationStatus::Plausible);
    CHECK(conf == doctest::Approx(1.0));
  }
  SUBCASE("weight ties break conservatively") {
    auto v = verify_soft({vote(VerificationStatus::Supported, 0.5, 0),
                          vote(VerificationStatus::Unsupported, 0.5, 1)},
                         conf);
    CHECK(v == VerificationStatus::Unsupported);
    auto w = verify_soft({vote(VerificationStatus::Plausible, 0.5, 0),
                          vote(VerificationStatus::Uncertain, 0.5, 1)},
                         conf);
    CHECK(w == VerificationStatus::Uncertain);
  }
  SUBCASE("no votes abstains") {
    CHECK(verify_soft({}, conf) == VerificationStatus::Uncertain);
    CHECK(conf == 0.0);
  }
}

TEST_CASE("collect_votes queries each judge") {
  ScriptedBackend backend;
  backend.add(Stage::Judge, "claim#j0",
              R"({"verdict": "Supported", "confidence": 0.9})");
  backend.add(Stage::Judge, "claim#j1",
              R"({"verdict": "Plausible", "confidence": 0.6})");
  backend.add(Stage::Judge, "claim#j2", "mumble");
  auto votes = collect_votes(backend, "claim", "ctx", 3);
  REQUIRE(votes.size() == 3);
  CHECK(votes[0].verdict == VerificationStatus::Supported);
  CHECK(votes[1].verdict == VerificationStatus::Plausible);
  CHECK(votes[2].verdict == VerificationStatus::Uncertain);
  CHECK(votes[2].judge_id == 2);
}

TEST_CASE("boolean abstraction declares a fresh constant") {
  Signature sig;
  sig.declare_constant("b_1", "Int");  // force a collision
  Claim c0;
  c0.index = 0;
  NamedAssertion a0 = boolean_abstraction(c0, sig);
  CHECK(a0.label == "soft_0");
  CHECK(c0.abstraction_var == "b_0");
  CHECK(render(a0.formula) == "b_0");
  CHECK(a0.origin == AssertionOrigin::Abstraction);

  Claim c1;
  c1.index = 1;
  NamedAssertion a1 = boolean_abstraction(c1, sig);
  CHECK(c1.abstraction_var == "b_1_");
  CHECK(sig.symbol_sort("b_1_") == "Bool");
}

TEST_CASE("bridging axioms extend the context leniently") {
  Signature sig;
  sig.declare_constant("x", "Int");
  std::vector<NamedAssertion> ctx{{"a0", parse_formula("(>= x 0)", sig).formula}};
  std::vector<std::string> alerts;
  inject_bridging_axioms({"(assert (<= x 9))", "(assert ())", "(assert flagged)"},
                         sig, ctx, alerts);
  REQUIRE(ctx.size() == 3);
  CHECK(ctx[1].label == "bridge_0");
  CHECK(render(ctx[1].formula) == "(<= x 9)");
  CHECK(ctx[2].label == "bridge_1");
  CHECK(render(ctx[2].formula) == "flagged");
  CHECK(ctx[1].origin == AssertionOrigin::BridgingAxiom);
  REQUIRE(alerts.size() == 1);

  // labels keep counting from the bridges already present
  std::vector<std::string> alerts2;
  inject_bridging_axioms({"(assert (> x 1))"}, sig, ctx, alerts2);
  CHECK(ctx.back().label == "bridge_2");
  CHECK(alerts2.empty());
}
