#include <doctest.h>

#include "verge/oracles.hpp"

using namespace verge;

TEST_CASE("atom collection is first-visit ordered") {
  FormulaPtr f = f_or({f_atom("q"), f_and({f_atom("p"), f_atom("q")})});
  std::vector<std::string> want{"q", "p"};
  CHECK(propositional_atoms(f) == want);
}

TEST_CASE("non-propositional input is rejected") {
  Signature sig;
  CHECK_THROWS_AS(propositional_atoms(
                      f_cmp(CmpOp::Lt, t_sym("x"), t_int(2))),
                  Error);
  CHECK_THROWS_AS(propositional_atoms(f_forall("x", "S", f_atom("p"))), Error);
}

TEST_CASE("formula evaluation") {
  TruthAssignment a{{"p", true}, {"q", false}};
  CHECK(eval_formula(f_atom("p"), a));
  CHECK_FALSE(eval_formula(f_atom("q"), a));
  CHECK(eval_formula(f_implies(f_atom("q"), f_atom("p")), a));
  CHECK_FALSE(eval_formula(f_iff(f_atom("p"), f_atom("q")), a));
  CHECK(eval_formula(f_or({f_false(), f_atom("p")}), a));
  CHECK_FALSE(eval_formula(f_and({f_atom("p"), f_atom("q")}), a));
  CHECK(eval_formula(f_not(f_atom("q")), a));
}

TEST_CASE("truth-table equivalence") {
  FormulaPtr p = f_atom("p");
  FormulaPtr q = f_atom("q");
  CHECK(oracle_equiv(f_implies(p, q), f_or({f_not(p), q})));
  CHECK(oracle_equiv(f_not(f_and({p, q})), f_or({f_not(p), f_not(q)})));
  CHECK(oracle_equiv(f_iff(p, q), f_iff(q, p)));
  CHECK_FALSE(oracle_equiv(p, q));
  CHECK_FALSE(oracle_equiv(f_and({p, q}), f_or({p, q})));
  CHECK(oracle_equiv(f_and({p, f_not(p)}), f_false()));
  CHECK(oracle_equiv(f_or({p, f_not(p)}), f_true()));
}

TEST_CASE("atom cap is enforced") {
  std::vector<FormulaPtr> big;
  for (int i = 0; i < 21; ++i) big.push_back(f_atom("a" + std::to_string(i)));
  CHECK_THROWS_AS(oracle_equiv(f_and(big), f_true()), Error);
}
