#include <doctest.h>

#include "verge/mcs.hpp"

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

struct Instance {
  Signature sig;
  std::vector<NamedAssertion> context;
  std::vector<Claim> claims;
  std::vector<NamedAssertion> assertions;

  void add_context(const std::string& label, const std::string& text) {
    context.push_back({label, parse_formula(text, sig).formula});
  }
  void add_claim(const std::string& text, double conf,
                 const std::string& formula_text = "") {
    Claim c;
    c.index = static_cast<int>(claims.size());
    c.text = text;
    c.confidence = conf;
    claims.push_back(c);
    const std::string& ft = formula_text.empty() ? text : formula_text;
    assertions.push_back({"claim_" + std::to_string(c.index),
                          parse_formula(ft, sig).formula,
                          AssertionOrigin::Claim, c.index});
  }
};

Instance house_instance() {
  Instance in;
  in.sig.declare_sort("House");
  in.sig.declare_entity("Red", "House");
  in.sig.declare_entity("Blue", "House");
  in.sig.declare_entity("Green", "House");
  in.sig.declare_function("pos", {"House"}, "Int");
  in.add_context("Blue_Right_Red", "(= (pos Blue) (+ (pos Red) 1))");
  in.add_context("Green_Left_Blue", "(< (pos Green) (pos Blue))");
  in.add_claim("The red house is in position 1", 0.95, "(= (pos Red) 1)");
  in.add_claim("The blue house is in position 2", 0.92, "(= (pos Blue) 2)");
  in.add_claim("The green house is in position 3", 0.90, "(= (pos Green) 3)");
  return in;
}

Instance gap_instance() {
  Instance in;
  in.sig.declare_constant("x", "Bool");
  in.sig.declare_constant("y", "Bool");
  in.add_claim("x", 0.95);
  in.add_claim("y", 0.94);
  in.add_claim("(not x)", 0.93);
  in.add_claim("(not y)", 0.92);
  in.add_claim("(or (not x) (not y))", 0.91);
  return in;
}

}  // namespace

TEST_CASE("greedy correction removes the lowest-confidence conflict") {
  Instance in = house_instance();
  auto r = greedy_mcs(in.context, in.claims, in.assertions, in.sig, session());
  CHECK(r.mss == std::vector<int>{0, 1});
  CHECK(r.mcs == std::vector<int>{2});
  CHECK(r.uncertain.empty());
  CHECK(r.sat_calls == 3);
  CHECK(r.order_used == std::vector<int>{0, 1, 2});
}

TEST_CASE("a consistent claim set needs no correction") {
  Instance in = house_instance();
  in.assertions[2].formula = parse_formula("(= (pos Green) 1)", in.sig).formula;
  auto r = greedy_mcs(in.context, in.claims, in.assertions, in.sig, session());
  CHECK(r.mcs.empty());
  CHECK(r.mss.size() == 3);
  CHECK(r.sat_calls == 3);
}

TEST_CASE("ties in confidence break by ascending index") {
  Instance in;
  in.sig.declare_constant("p", "Bool");
  in.add_claim("p", 0.9);
  in.add_claim("(not p)", 0.9);
  auto r = greedy_mcs(in.context, in.claims, in.assertions, in.sig, session());
  CHECK(r.order_used == std::vector<int>{0, 1});
  CHECK(r.mss == std::vector<int>{0});
  CHECK(r.mcs == std::vector<int>{1});
}

TEST_CASE("greedy can overshoot where the exact search finds a smaller set") {
  Instance in = gap_instance();
  auto g = greedy_mcs(in.context, in.claims, in.assertions, in.sig, session());
  CHECK(g.mcs.size() == 3);
  auto e = exact_min_mcs(in.context, in.claims, in.assertions, in.sig, session());
  CHECK(e.mcs == std::vector<int>{0, 1});
  CHECK(e.mcs.size() < g.mcs.size());
}

TEST_CASE("exact search is deterministic under removal-set ties") {
  Instance in;
  in.sig.declare_constant("p", "Bool");
  in.add_claim("p", 0.9);
  in.add_claim("(not p)", 0.9);
  auto e = exact_min_mcs(in.context, in.claims, in.assertions, in.sig, session());
  CHECK(e.mcs == std::vector<int>{0});
}

TEST_CASE("exact search enforces the size limit") {
  Instance in;
  in.sig.declare_constant("p", "Bool");
  for (int i = 0; i < 13; ++i) in.add_claim("p", 0.9);
  CHECK_THROWS_AS(
      exact_min_mcs(in.context, in.claims, in.assertions, in.sig, session()),
      Error);
}

TEST_CASE("feedback items cite the core and direct a rewrite") {
  Instance in = house_instance();
  auto r = greedy_mcs(in.context, in.claims, in.assertions, in.sig, session());
  std::vector<std::string> core{"Green_Left_Blue", "claim_1", "claim_2"};
  auto items = format_feedback(r, core, in.claims);
  REQUIRE(items.size() == 1);
  CHECK(items[0].claim_index == 2);
  CHECK(items[0].claim_text == "The green house is in position 3");
  CHECK(items[0].core_labels == core);
  CHECK_FALSE(items[0].solver_uncertain);
  CHECK_FALSE(items[0].directive.empty());
}
