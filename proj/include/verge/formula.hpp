#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "verge/errors.hpp"
#include "verge/sexpr.hpp"

namespace verge {

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

enum class SortKind { BuiltinInt, BuiltinBool, Uninterpreted };

struct Sort {
  std::string name;
  SortKind kind = SortKind::Uninterpreted;
};

struct FuncDecl {
  std::string name;
  std::vector<std::string> arg_sorts;
  std::string result_sort;  // "Bool" makes this a predicate
};

// Sorts, typed constants and function/predicate declarations extracted from
// the problem context, plus the entity set used for finite instantiation.
class Signature {
 public:
  Signature();

  void declare_sort(const std::string& name);
  void declare_entity(const std::string& name, const std::string& sort);
  void declare_constant(const std::string& name, const std::string& sort);
  void declare_function(const std::string& name,
                        std::vector<std::string> arg_sorts,
                        const std::string& result_sort);
  void declare_predicate(const std::string& name,
                         std::vector<std::string> arg_sorts);

  bool has_sort(const std::string& name) const;
  bool has_symbol(const std::string& name) const;
  // Sort of an entity or constant; empty optional when undeclared.
  std::optional<std::string> symbol_sort(const std::string& name) const;
  const FuncDecl* find_func(const std::string& name) const;

  // Entities of a given sort, in declaration order.
  std::vector<std::string> entities_of(const std::string& sort) const;

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<std::pair<std::string, std::string>>& entities() const {
    return entities_;
  }
  const std::vector<std::pair<std::string, std::string>>& constants() const {
    return constants_;
  }
  const std::vector<FuncDecl>& functions() const { return functions_; }

 private:
  void check_sort_declared(const std::string& name) const;
  void check_symbol_fresh(const std::string& name) const;

  std::vector<Sort> sorts_;
  std::vector<std::pair<std::string, std::string>> entities_;
  std::vector<std::pair<std::string, std::string>> constants_;
  std::vector<FuncDecl> functions_;
};

// ---------------------------------------------------------------------------
// Terms and formulas
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { IntLit, Symbol, Var, App, Add, Sub, Neg, Mul };

  Kind kind;
  long long value = 0;       // IntLit
  std::string symbol;        // Symbol, Var, App (function name)
  std::vector<TermPtr> args; // App, Add, Sub, Neg, Mul
};

TermPtr t_int(long long v);
TermPtr t_sym(std::string name);
TermPtr t_var(std::string name);
TermPtr t_app(std::string fn, std::vector<TermPtr> args);
TermPtr t_add(std::vector<TermPtr> args);
TermPtr t_sub(TermPtr a, TermPtr b);
TermPtr t_neg(TermPtr a);
TermPtr t_mul(TermPtr a, TermPtr b);

enum class CmpOp { Eq, Lt, Le, Gt, Ge };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    True,
    False,
    Atom,     // predicate application (arity 0 covers boolean constants)
    Cmp,      // arithmetic atom over linear integer terms
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
  };

  Kind kind;
  std::string pred;            // Atom
  std::vector<TermPtr> args;   // Atom
  CmpOp op = CmpOp::Eq;        // Cmp
  TermPtr lhs, rhs;            // Cmp
  std::vector<FormulaPtr> kids;  // Not/And/Or/Implies/Iff (and quantifier body)
  std::string var;             // Forall/Exists
  std::string var_sort;        // Forall/Exists
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(std::string pred, std::vector<TermPtr> args = {});
FormulaPtr f_cmp(CmpOp op, TermPtr lhs, TermPtr rhs);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(std::vector<FormulaPtr> kids);
FormulaPtr f_or(std::vector<FormulaPtr> kids);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_forall(std::string var, std::string sort, FormulaPtr body);
FormulaPtr f_exists(std::string var, std::string sort, FormulaPtr body);

bool contains_quantifier(const Formula& f);

// ---------------------------------------------------------------------------
// Named assertions
// ---------------------------------------------------------------------------

enum class AssertionOrigin { ContextAxiom, Claim, BridgingAxiom, Abstraction };

struct NamedAssertion {
  std::string label;
  FormulaPtr formula;
  AssertionOrigin origin = AssertionOrigin::ContextAxiom;
  int claim_index = -1;  // valid when origin is Claim or Abstraction
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Checks well-sortedness under `sig`; throws Error(SortMismatch /
// UndeclaredSymbol / UnsortedVariable). Returns the sort of the formula's
// arithmetic-free atoms implicitly; formulas are always Bool.
void check_sorts(const FormulaPtr& f, const Signature& sig);

// Expands forall to a conjunction and exists to a disjunction over the
// entities of the quantified sort. Single-entity domains expand to the
// substituted body without a connective wrapper.
FormulaPtr instantiate_quantifiers(const FormulaPtr& f, const Signature& sig);

// Canonical rendering: fixed child order, single spaces, no line breaks.
std::string render(const FormulaPtr& f);
std::string render(const TermPtr& t);

struct RenderOptions {
  std::string logic = "ALL";
  bool include_prelude = true;  // set-option/set-logic header
};

// Full SMT-LIB2 script: prelude, declarations, then one named assert per
// assertion. No check-sat is emitted; the bridge appends commands.
std::string render_smtlib(const std::vector<NamedAssertion>& assertions,
                          const Signature& sig,
                          const RenderOptions& opts = {});

// Declarations only (no prelude / asserts), used by the bridge inside scopes.
std::string render_declarations(const Signature& sig);

struct ParsedFormula {
  FormulaPtr formula;
  std::optional<std::string> label;       // from (! body :named L)
  std::optional<double> confidence;       // from a :confidence attribute
};

// Parses a single assert body or bare s-expression. In lenient mode unknown
// nullary symbols are auto-declared on `sig` with an inferred sort.
ParsedFormula parse_formula(std::string_view text, Signature& sig,
                            bool lenient = false);
ParsedFormula formula_from_sexpr(const SExpr& e, Signature& sig, bool lenient);

struct Script {
  Signature sig;
  std::vector<NamedAssertion> assertions;
  std::map<std::string, double> confidences;  // label -> :confidence
  std::string logic;
};

// Parses a whole SMT-LIB2 script: declarations plus named asserts.
// set-option/set-info are ignored; commands beyond the declaration/assert
// subset raise SyntaxError.
Script parse_script(std::string_view text, bool lenient = false);

}  // namespace verge
