#include "verge/formula.hpp"

#include <algorithm>
#include <cstdlib>

#include "verge/sexpr.hpp"

namespace verge {

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

Signature::Signature() {
  sorts_.push_back({"Int", SortKind::BuiltinInt});
  sorts_.push_back({"Bool", SortKind::BuiltinBool});
}

void Signature::check_sort_declared(const std::string& name) const {
  if (!has_sort(name))
    throw Error(ErrorCode::UndeclaredSymbol, "sort '" + name + "' is not declared");
}

void Signature::check_symbol_fresh(const std::string& name) const {
  if (has_symbol(name) || find_func(name) != nullptr)
    throw Error(ErrorCode::DuplicateName, "symbol '" + name + "' already declared");
}

void Signature::declare_sort(const std::string& name) {
  if (has_sort(name))
    throw Error(ErrorCode::DuplicateName, "sort '" + name + "' already declared");
  sorts_.push_back({name, SortKind::Uninterpreted});
}

void Signature::declare_entity(const std::string& name, const std::string& sort) {
  check_sort_declared(sort);
  check_symbol_fresh(name);
  entities_.emplace_back(name, sort);
}

void Signature::declare_constant(const std::string& name, const std::string& sort) {
  check_sort_declared(sort);
  check_symbol_fresh(name);
  constants_.emplace_back(name, sort);
}

void Signature::declare_function(const std::string& name,
                                 std::vector<std::string> arg_sorts,
                                 const std::string& result_sort) {
  for (const auto& s : arg_sorts) check_sort_declared(s);
  check_sort_declared(result_sort);
  check_symbol_fresh(name);
  functions_.push_back({name, std::move(arg_sorts), result_sort});
}

void Signature::declare_predicate(const std::string& name,
                                  std::vector<std::string> arg_sorts) {
  declare_function(name, std::move(arg_sorts), "Bool");
}

bool Signature::has_sort(const std::string& name) const {
  return std::any_of(sorts_.begin(), sorts_.end(),
                     [&](const Sort& s) { return s.name == name; });
}

bool Signature::has_symbol(const std::string& name) const {
  return symbol_sort(name).has_value();
}

std::optional<std::string> Signature::symbol_sort(const std::string& name) const {
  for (const auto& [n, s] : entities_)
    if (n == name) return s;
  for (const auto& [n, s] : constants_)
    if (n == name) return s;
  return std::nullopt;
}

const FuncDecl* Signature::find_func(const std::string& name) const {
  for (const auto& f : functions_)
    if (f.name == name) return &f;
  return nullptr;
}

std::vector<std::string> Signature::entities_of(const std::string& sort) const {
  std::vector<std::string> out;
  for (const auto& [n, s] : entities_)
    if (s == sort) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

TermPtr t_int(long long v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::IntLit;
  t->value = v;
  return t;
}

static TermPtr term_node(Term::Kind k, std::string sym, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->symbol = std::move(sym);
  t->args = std::move(args);
  return t;
}

TermPtr t_sym(std::string name) { return term_node(Term::Kind::Symbol, std::move(name), {}); }
TermPtr t_var(std::string name) { return term_node(Term::Kind::Var, std::move(name), {}); }
TermPtr t_app(std::string fn, std::vector<TermPtr> args) {
  return term_node(Term::Kind::App, std::move(fn), std::move(args));
}
TermPtr t_add(std::vector<TermPtr> args) {
  return term_node(Term::Kind::Add, "", std::move(args));
}
TermPtr t_sub(TermPtr a, TermPtr b) {
  return term_node(Term::Kind::Sub, "", {std::move(a), std::move(b)});
}
TermPtr t_neg(TermPtr a) { return term_node(Term::Kind::Neg, "", {std::move(a)}); }
TermPtr t_mul(TermPtr a, TermPtr b) {
  return term_node(Term::Kind::Mul, "", {std::move(a), std::move(b)});
}

static FormulaPtr formula_node(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr f_true() { return formula_node(Formula::Kind::True); }
FormulaPtr f_false() { return formula_node(Formula::Kind::False); }

FormulaPtr f_atom(std::string pred, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Atom;
  f->pred = std::move(pred);
  f->args = std::move(args);
  return f;
}

FormulaPtr f_cmp(CmpOp op, TermPtr lhs, TermPtr rhs) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Cmp;
  f->op = op;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

static FormulaPtr connective(Formula::Kind k, std::vector<FormulaPtr> kids) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->kids = std::move(kids);
  return f;
}

FormulaPtr f_not(FormulaPtr a) { return connective(Formula::Kind::Not, {std::move(a)}); }
FormulaPtr f_and(std::vector<FormulaPtr> kids) {
  return connective(Formula::Kind::And, std::move(kids));
}
FormulaPtr f_or(std::vector<FormulaPtr> kids) {
  return connective(Formula::Kind::Or, std::move(kids));
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return connective(Formula::Kind::Implies, {std::move(a), std::move(b)});
}
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return connective(Formula::Kind::Iff, {std::move(a), std::move(b)});
}

static FormulaPtr quantifier(Formula::Kind k, std::string var, std::string sort,
                             FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(var);
  f->var_sort = std::move(sort);
  f->kids = {std::move(body)};
  return f;
}

FormulaPtr f_forall(std::string var, std::string sort, FormulaPtr body) {
  return quantifier(Formula::Kind::Forall, std::move(var), std::move(sort),
                    std::move(body));
}
FormulaPtr f_exists(std::string var, std::string sort, FormulaPtr body) {
  return quantifier(Formula::Kind::Exists, std::move(var), std::move(sort),
                    std::move(body));
}

bool contains_quantifier(const Formula& f) {
  if (f.kind == Formula::Kind::Forall || f.kind == Formula::Kind::Exists)
    return true;
  for (const auto& k : f.kids)
    if (contains_quantifier(*k)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Sort checking
// ---------------------------------------------------------------------------

namespace {

using VarEnv = std::map<std::string, std::string>;  // var -> sort

std::string term_sort(const TermPtr& t, const Signature& sig, const VarEnv& env) {
  switch (t->kind) {
    case Term::Kind::IntLit:
      return "Int";
    case Term::Kind::Symbol: {
      auto s = sig.symbol_sort(t->symbol);
      if (!s)
        throw Error(ErrorCode::UndeclaredSymbol, "symbol '" + t->symbol + "'");
      return *s;
    }
    case Term::Kind::Var: {
      auto it = env.find(t->symbol);
      if (it == env.end())
        throw Error(ErrorCode::UnsortedVariable, "variable '" + t->symbol + "'");
      return it->second;
    }
    case Term::Kind::App: {
      const FuncDecl* fd = sig.find_func(t->symbol);
      if (!fd)
        throw Error(ErrorCode::UndeclaredSymbol, "function '" + t->symbol + "'");
      if (fd->arg_sorts.size() != t->args.size())
        throw Error(ErrorCode::SortMismatch,
                    "'" + t->symbol + "' expects " +
                        std::to_string(fd->arg_sorts.size()) + " arguments");
      for (size_t i = 0; i < t->args.size(); ++i) {
        std::string got = term_sort(t->args[i], sig, env);
        if (got != fd->arg_sorts[i])
          throw Error(ErrorCode::SortMismatch,
                      "argument " + std::to_string(i) + " of '" + t->symbol +
                          "' has sort " + got + ", expected " + fd->arg_sorts[i]);
      }
      return fd->result_sort;
    }
    case Term::Kind::Add:
    case Term::Kind::Sub:
    case Term::Kind::Neg:
    case Term::Kind::Mul: {
      for (const auto& a : t->args) {
        std::string got = term_sort(a, sig, env);
        if (got != "Int")
          throw Error(ErrorCode::SortMismatch,
                      "arithmetic over non-Int operand of sort " + got);
      }
      return "Int";
    }
  }
  throw Error(ErrorCode::SortMismatch, "unreachable term kind");
}

// Depth of variable nesting inside a product; QF_LIA forbids var*var.
bool term_is_constant(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::IntLit:
      return true;
    case Term::Kind::Symbol:
    case Term::Kind::Var:
    case Term::Kind::App:
      return false;
    default:
      for (const auto& a : t->args)
        if (!term_is_constant(a)) return false;
      return true;
  }
}

void check_linear(const TermPtr& t) {
  if (t->kind == Term::Kind::Mul) {
    bool lc = term_is_constant(t->args[0]);
    bool rc = term_is_constant(t->args[1]);
    if (!lc && !rc)
      throw Error(ErrorCode::NonLinear,
                  "product of two non-constant terms: " + render(t));
  }
  for (const auto& a : t->args) check_linear(a);
}

void check_sorts_rec(const FormulaPtr& f, const Signature& sig, VarEnv& env) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom: {
      if (f->args.empty()) {
        // boolean constant or 0-ary predicate
        auto s = sig.symbol_sort(f->pred);
        if (s) {
          if (*s != "Bool")
            throw Error(ErrorCode::SortMismatch,
                        "'" + f->pred + "' has sort " + *s + ", expected Bool");
          return;
        }
        const FuncDecl* fd = sig.find_func(f->pred);
        if (fd && fd->arg_sorts.empty() && fd->result_sort == "Bool") return;
        throw Error(ErrorCode::UndeclaredSymbol, "predicate '" + f->pred + "'");
      }
      const FuncDecl* fd = sig.find_func(f->pred);
      if (!fd)
        throw Error(ErrorCode::UndeclaredSymbol, "predicate '" + f->pred + "'");
      if (fd->result_sort != "Bool")
        throw Error(ErrorCode::SortMismatch,
                    "'" + f->pred + "' is not a predicate");
      if (fd->arg_sorts.size() != f->args.size())
        throw Error(ErrorCode::SortMismatch,
                    "'" + f->pred + "' expects " +
                        std::to_string(fd->arg_sorts.size()) + " arguments");
      for (size_t i = 0; i < f->args.size(); ++i) {
        std::string got = term_sort(f->args[i], sig, env);
        if (got != fd->arg_sorts[i])
          throw Error(ErrorCode::SortMismatch,
                      "argument " + std::to_string(i) + " of '" + f->pred +
                          "' has sort " + got + ", expected " + fd->arg_sorts[i]);
      }
      return;
    }
    case Formula::Kind::Cmp: {
      for (const auto& side : {f->lhs, f->rhs}) {
        std::string got = term_sort(side, sig, env);
        if (got != "Int")
          throw Error(ErrorCode::SortMismatch,
                      "comparison over non-Int term of sort " + got);
        check_linear(side);
      }
      return;
    }
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      for (const auto& k : f->kids) check_sorts_rec(k, sig, env);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (!sig.has_sort(f->var_sort))
        throw Error(ErrorCode::UnsortedVariable,
                    "bound variable '" + f->var + "' of undeclared sort '" +
                        f->var_sort + "'");
      auto saved = env.find(f->var) != env.end()
                       ? std::optional<std::string>(env[f->var])
                       : std::nullopt;
      env[f->var] = f->var_sort;
      check_sorts_rec(f->kids[0], sig, env);
      if (saved)
        env[f->var] = *saved;
      else
        env.erase(f->var);
      return;
    }
  }
}

}  // namespace

void check_sorts(const FormulaPtr& f, const Signature& sig) {
  VarEnv env;
  check_sorts_rec(f, sig, env);
}

// ---------------------------------------------------------------------------
// Quantifier instantiation
// ---------------------------------------------------------------------------

namespace {

TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& repl) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->symbol == var ? repl : t;
    case Term::Kind::IntLit:
    case Term::Kind::Symbol:
      return t;
    default: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(subst_term(a, var, repl));
      auto out = std::make_shared<Term>(*t);
      out->args = std::move(args);
      return out;
    }
  }
}

FormulaPtr subst(const FormulaPtr& f, const std::string& var, const TermPtr& repl) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const auto& a : f->args) args.push_back(subst_term(a, var, repl));
      auto out = std::make_shared<Formula>(*f);
      out->args = std::move(args);
      return out;
    }
    case Formula::Kind::Cmp: {
      auto out = std::make_shared<Formula>(*f);
      out->lhs = subst_term(f->lhs, var, repl);
      out->rhs = subst_term(f->rhs, var, repl);
      return out;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (f->var == var) return f;  // shadowed
      [[fallthrough]];
    default: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(subst(k, var, repl));
      auto out = std::make_shared<Formula>(*f);
      out->kids = std::move(kids);
      return out;
    }
  }
}

}  // namespace

FormulaPtr instantiate_quantifiers(const FormulaPtr& f, const Signature& sig) {
  switch (f->kind) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (!sig.has_sort(f->var_sort))
        throw Error(ErrorCode::UnsortedVariable,
                    "bound variable '" + f->var + "' of undeclared sort '" +
                        f->var_sort + "'");
      std::vector<std::string> domain = sig.entities_of(f->var_sort);
      if (domain.empty())
        throw Error(ErrorCode::EmptyDomain,
                    "sort '" + f->var_sort + "' has no entities");
      std::vector<FormulaPtr> expanded;
      expanded.reserve(domain.size());
      for (const auto& e : domain)
        expanded.push_back(
            instantiate_quantifiers(subst(f->kids[0], f->var, t_sym(e)), sig));
      if (expanded.size() == 1) return expanded[0];
      return f->kind == Formula::Kind::Forall ? f_and(std::move(expanded))
                                              : f_or(std::move(expanded));
    }
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
    case Formula::Kind::Cmp:
      return f;
    default: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      bool changed = false;
      for (const auto& k : f->kids) {
        kids.push_back(instantiate_quantifiers(k, sig));
        changed = changed || kids.back() != k;
      }
      if (!changed) return f;
      auto out = std::make_shared<Formula>(*f);
      out->kids = std::move(kids);
      return out;
    }
  }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string render(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::IntLit:
      if (t->value < 0) return "(- " + std::to_string(-t->value) + ")";
      return std::to_string(t->value);
    case Term::Kind::Symbol:
    case Term::Kind::Var:
      return t->symbol;
    case Term::Kind::App: {
      std::string out = "(" + t->symbol;
      for (const auto& a : t->args) out += " " + render(a);
      return out + ")";
    }
    case Term::Kind::Add:
    case Term::Kind::Sub:
    case Term::Kind::Neg:
    case Term::Kind::Mul: {
      const char* op = t->kind == Term::Kind::Add   ? "+"
                       : t->kind == Term::Kind::Mul ? "*"
                                                    : "-";
      std::string out = std::string("(") + op;
      for (const auto& a : t->args) out += " " + render(a);
      return out + ")";
    }
  }
  return "";
}

static const char* cmp_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "=";
}

std::string render(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return "true";
    case Formula::Kind::False:
      return "false";
    case Formula::Kind::Atom: {
      if (f->args.empty()) return f->pred;
      std::string out = "(" + f->pred;
      for (const auto& a : f->args) out += " " + render(a);
      return out + ")";
    }
    case Formula::Kind::Cmp:
      return std::string("(") + cmp_symbol(f->op) + " " + render(f->lhs) + " " +
             render(f->rhs) + ")";
    case Formula::Kind::Not:
      return "(not " + render(f->kids[0]) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string out =
          f->kind == Formula::Kind::And ? "(and" : "(or";
      for (const auto& k : f->kids) out += " " + render(k);
      return out + ")";
    }
    case Formula::Kind::Implies:
      return "(=> " + render(f->kids[0]) + " " + render(f->kids[1]) + ")";
    case Formula::Kind::Iff:
      // boolean equality; parse distinguishes by operand sort
      return "(= " + render(f->kids[0]) + " " + render(f->kids[1]) + ")";
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string head = f->kind == Formula::Kind::Forall ? "forall" : "exists";
      return "(" + head + " ((" + f->var + " " + f->var_sort + ")) " +
             render(f->kids[0]) + ")";
    }
  }
  return "";
}

std::string render_declarations(const Signature& sig) {
  std::string out;
  for (const auto& s : sig.sorts()) {
    if (s.kind == SortKind::Uninterpreted)
      out += "(declare-sort " + s.name + " 0)\n";
  }
  for (const auto& [n, s] : sig.entities())
    out += "(declare-const " + n + " " + s + ")\n";
  for (const auto& [n, s] : sig.constants())
    out += "(declare-const " + n + " " + s + ")\n";
  for (const auto& fd : sig.functions()) {
    out += "(declare-fun " + fd.name + " (";
    for (size_t i = 0; i < fd.arg_sorts.size(); ++i) {
      if (i) out += ' ';
      out += fd.arg_sorts[i];
    }
    out += ") " + fd.result_sort + ")\n";
  }
  return out;
}

std::string render_smtlib(const std::vector<NamedAssertion>& assertions,
                          const Signature& sig, const RenderOptions& opts) {
  // duplicate label check
  for (size_t i = 0; i < assertions.size(); ++i)
    for (size_t j = i + 1; j < assertions.size(); ++j)
      if (assertions[i].label == assertions[j].label)
        throw Error(ErrorCode::DuplicateLabel,
                    "label '" + assertions[i].label + "'");
  for (const auto& a : assertions) check_sorts(a.formula, sig);

  std::string out;
  if (opts.include_prelude) {
    out += "(set-option :produce-unsat-cores true)\n";
    out += "(set-logic " + opts.logic + ")\n";
  }
  out += render_declarations(sig);
  for (const auto& a : assertions)
    out += "(assert (! " + render(a.formula) + " :named " + a.label + "))\n";
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

bool is_integer_atom(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

struct ParseCtx {
  Signature* sig;
  bool lenient;
  VarEnv env;

  // Auto-declares an unknown nullary symbol in lenient mode with the sort
  // demanded by the surrounding position.
  void require_symbol(const std::string& name, const std::string& want_sort,
                      size_t pos) {
    if (sig->symbol_sort(name)) return;
    if (!lenient)
      throw Error(ErrorCode::UnknownSymbol,
                  "symbol '" + name + "' at position " + std::to_string(pos));
    sig->declare_constant(name, want_sort);
  }
};

TermPtr parse_term(const SExpr& e, ParseCtx& ctx, const std::string& want_sort);

TermPtr parse_term_atom(const SExpr& e, ParseCtx& ctx,
                        const std::string& want_sort) {
  const std::string& s = e.atom;
  if (is_integer_atom(s)) return t_int(std::strtoll(s.c_str(), nullptr, 10));
  if (ctx.env.count(s)) return t_var(s);
  if (!ctx.sig->symbol_sort(s)) ctx.require_symbol(s, want_sort, e.pos);
  return t_sym(s);
}

TermPtr parse_term(const SExpr& e, ParseCtx& ctx, const std::string& want_sort) {
  if (e.is_atom) return parse_term_atom(e, ctx, want_sort);
  if (e.size() == 0)
    throw Error(ErrorCode::SyntaxError,
                "empty list at position " + std::to_string(e.pos));
  if (!e[0].is_atom)
    throw Error(ErrorCode::SyntaxError,
                "expected operator at position " + std::to_string(e[0].pos));
  const std::string& head = e[0].atom;
  if (head == "+") {
    std::vector<TermPtr> args;
    for (size_t i = 1; i < e.size(); ++i)
      args.push_back(parse_term(e[i], ctx, "Int"));
    if (args.size() < 2)
      throw Error(ErrorCode::SyntaxError,
                  "'+' needs at least two operands at position " +
                      std::to_string(e.pos));
    return t_add(std::move(args));
  }
  if (head == "-") {
    if (e.size() == 2) {
      TermPtr a = parse_term(e[1], ctx, "Int");
      if (a->kind == Term::Kind::IntLit) return t_int(-a->value);
      return t_neg(a);
    }
    if (e.size() == 3)
      return t_sub(parse_term(e[1], ctx, "Int"), parse_term(e[2], ctx, "Int"));
    throw Error(ErrorCode::SyntaxError,
                "'-' takes one or two operands at position " +
                    std::to_string(e.pos));
  }
  if (head == "*") {
    if (e.size() != 3)
      throw Error(ErrorCode::SyntaxError,
                  "'*' takes two operands at position " + std::to_string(e.pos));
    return t_mul(parse_term(e[1], ctx, "Int"), parse_term(e[2], ctx, "Int"));
  }
  const FuncDecl* fd = ctx.sig->find_func(head);
  if (!fd)
    throw Error(ErrorCode::UnknownSymbol,
                "function '" + head + "' at position " + std::to_string(e[0].pos));
  std::vector<TermPtr> args;
  for (size_t i = 1; i < e.size(); ++i) {
    std::string want = i - 1 < fd->arg_sorts.size() ? fd->arg_sorts[i - 1] : "Int";
    args.push_back(parse_term(e[i], ctx, want));
  }
  return t_app(head, std::move(args));
}

// The apparent sort of an expression, used to tell boolean equality from
// arithmetic equality. Unknown symbols in lenient mode default to Int.
std::string peek_sort(const SExpr& e, ParseCtx& ctx) {
  if (e.is_atom) {
    const std::string& s = e.atom;
    if (is_integer_atom(s)) return "Int";
    if (s == "true" || s == "false") return "Bool";
    if (ctx.env.count(s)) return ctx.env[s];
    if (auto ss = ctx.sig->symbol_sort(s)) return *ss;
    if (const FuncDecl* fd = ctx.sig->find_func(s);
        fd && fd->arg_sorts.empty())
      return fd->result_sort;
    return "Int";
  }
  if (e.size() == 0 || !e[0].is_atom) return "Int";
  const std::string& head = e[0].atom;
  if (head == "+" || head == "-" || head == "*") return "Int";
  if (head == "not" || head == "and" || head == "or" || head == "=>" ||
      head == "=" || head == "<" || head == "<=" || head == ">" ||
      head == ">=" || head == "forall" || head == "exists" || head == "distinct")
    return "Bool";
  if (const FuncDecl* fd = ctx.sig->find_func(head)) return fd->result_sort;
  return "Int";
}

FormulaPtr parse_formula_rec(const SExpr& e, ParseCtx& ctx);

FormulaPtr parse_formula_atom(const SExpr& e, ParseCtx& ctx) {
  const std::string& s = e.atom;
  if (s == "true") return f_true();
  if (s == "false") return f_false();
  if (is_integer_atom(s))
    throw Error(ErrorCode::SortMismatch,
                "integer literal where a formula was expected at position " +
                    std::to_string(e.pos));
  if (ctx.env.count(s)) {
    if (ctx.env[s] != "Bool")
      throw Error(ErrorCode::SortMismatch, "variable '" + s + "' is not Bool");
    // A Bool-sorted bound variable behaves as a nullary atom; rendered the same.
    return f_atom(s);
  }
  if (auto ss = ctx.sig->symbol_sort(s)) {
    if (*ss != "Bool")
      throw Error(ErrorCode::SortMismatch,
                  "'" + s + "' has sort " + *ss + ", expected Bool");
    return f_atom(s);
  }
  if (const FuncDecl* fd = ctx.sig->find_func(s)) {
    if (!fd->arg_sorts.empty() || fd->result_sort != "Bool")
      throw Error(ErrorCode::SortMismatch, "'" + s + "' is not a nullary predicate");
    return f_atom(s);
  }
  if (!ctx.lenient)
    throw Error(ErrorCode::UnknownSymbol,
                "symbol '" + s + "' at position " + std::to_string(e.pos));
  ctx.sig->declare_constant(s, "Bool");
  return f_atom(s);
}

FormulaPtr parse_cmp(const SExpr& e, ParseCtx& ctx, CmpOp op) {
  if (e.size() != 3)
    throw Error(ErrorCode::SyntaxError,
                "comparison takes two operands at position " +
                    std::to_string(e.pos));
  return f_cmp(op, parse_term(e[1], ctx, "Int"), parse_term(e[2], ctx, "Int"));
}

FormulaPtr parse_quantifier(const SExpr& e, ParseCtx& ctx, bool universal) {
  if (e.size() != 3 || !e[1].is_list())
    throw Error(ErrorCode::SyntaxError,
                "malformed quantifier at position " + std::to_string(e.pos));
  // ((v1 S1) (v2 S2) ...) unfolds to nested single-variable quantifiers
  std::vector<std::pair<std::string, std::string>> binders;
  for (const auto& b : e[1].items) {
    if (!b.is_list() || b.size() != 2 || !b[0].is_atom || !b[1].is_atom)
      throw Error(ErrorCode::SyntaxError,
                  "malformed binder at position " + std::to_string(b.pos));
    binders.emplace_back(b[0].atom, b[1].atom);
  }
  if (binders.empty())
    throw Error(ErrorCode::SyntaxError,
                "quantifier without binders at position " + std::to_string(e.pos));
  for (const auto& [v, s] : binders) {
    if (!ctx.sig->has_sort(s))
      throw Error(ErrorCode::UnsortedVariable,
                  "bound variable '" + v + "' of undeclared sort '" + s + "'");
    ctx.env[v] = s;
  }
  FormulaPtr body = parse_formula_rec(e[2], ctx);
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
    body = universal ? f_forall(it->first, it->second, body)
                     : f_exists(it->first, it->second, body);
    ctx.env.erase(it->first);
  }
  return body;
}

FormulaPtr parse_formula_rec(const SExpr& e, ParseCtx& ctx) {
  if (e.is_atom) return parse_formula_atom(e, ctx);
  if (e.size() == 0)
    throw Error(ErrorCode::SyntaxError,
                "empty list at position " + std::to_string(e.pos));
  if (!e[0].is_atom)
    throw Error(ErrorCode::SyntaxError,
                "expected operator at position " + std::to_string(e[0].pos));
  const std::string& head = e[0].atom;

  if (head == "not") {
    if (e.size() != 2)
      throw Error(ErrorCode::SyntaxError,
                  "'not' takes one operand at position " + std::to_string(e.pos));
    return f_not(parse_formula_rec(e[1], ctx));
  }
  if (head == "and" || head == "or") {
    std::vector<FormulaPtr> kids;
    for (size_t i = 1; i < e.size(); ++i)
      kids.push_back(parse_formula_rec(e[i], ctx));
    if (kids.empty())
      throw Error(ErrorCode::SyntaxError,
                  "'" + head + "' needs operands at position " +
                      std::to_string(e.pos));
    if (kids.size() == 1) return kids[0];
    return head == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
  }
  if (head == "=>") {
    if (e.size() < 3)
      throw Error(ErrorCode::SyntaxError,
                  "'=>' takes two operands at position " + std::to_string(e.pos));
    // right-associative chain
    FormulaPtr out = parse_formula_rec(e[e.size() - 1], ctx);
    for (size_t i = e.size() - 1; i-- > 1;)
      out = f_implies(parse_formula_rec(e[i], ctx), out);
    return out;
  }
  if (head == "=") {
    if (e.size() != 3)
      throw Error(ErrorCode::SyntaxError,
                  "'=' takes two operands at position " + std::to_string(e.pos));
    std::string ls = peek_sort(e[1], ctx);
    std::string rs = peek_sort(e[2], ctx);
    if (ls == "Bool" || rs == "Bool")
      return f_iff(parse_formula_rec(e[1], ctx), parse_formula_rec(e[2], ctx));
    if (ls == "Int" || rs == "Int") return parse_cmp(e, ctx, CmpOp::Eq);
    throw Error(ErrorCode::SortMismatch,
                "equality over uninterpreted sort '" + ls +
                    "' is outside the supported fragment (position " +
                    std::to_string(e.pos) + ")");
  }
  if (head == "<") return parse_cmp(e, ctx, CmpOp::Lt);
  if (head == "<=") return parse_cmp(e, ctx, CmpOp::Le);
  if (head == ">") return parse_cmp(e, ctx, CmpOp::Gt);
  if (head == ">=") return parse_cmp(e, ctx, CmpOp::Ge);
  if (head == "forall") return parse_quantifier(e, ctx, true);
  if (head == "exists") return parse_quantifier(e, ctx, false);
  if (head == "distinct") {
    // expands to pairwise negated equalities (Int operands only)
    std::vector<TermPtr> terms;
    for (size_t i = 1; i < e.size(); ++i)
      terms.push_back(parse_term(e[i], ctx, "Int"));
    if (terms.size() < 2)
      throw Error(ErrorCode::SyntaxError,
                  "'distinct' needs two operands at position " +
                      std::to_string(e.pos));
    std::vector<FormulaPtr> kids;
    for (size_t i = 0; i < terms.size(); ++i)
      for (size_t j = i + 1; j < terms.size(); ++j)
        kids.push_back(f_not(f_cmp(CmpOp::Eq, terms[i], terms[j])));
    if (kids.size() == 1) return kids[0];
    return f_and(std::move(kids));
  }

  // predicate application
  const FuncDecl* fd = ctx.sig->find_func(head);
  if (!fd)
    throw Error(ErrorCode::UnknownSymbol, "predicate '" + head +
                                              "' at position " +
                                              std::to_string(e[0].pos));
  if (fd->result_sort != "Bool")
    throw Error(ErrorCode::SortMismatch,
                "'" + head + "' is not a predicate (position " +
                    std::to_string(e[0].pos) + ")");
  std::vector<TermPtr> args;
  for (size_t i = 1; i < e.size(); ++i) {
    std::string want = i - 1 < fd->arg_sorts.size() ? fd->arg_sorts[i - 1] : "Int";
    args.push_back(parse_term(e[i], ctx, want));
  }
  return f_atom(head, std::move(args));
}

// Unwraps (assert X) and (! X :attr v ...) layers, collecting attributes.
const SExpr* unwrap_assert(const SExpr& e, ParsedFormula& meta) {
  const SExpr* cur = &e;
  for (;;) {
    if (cur->is_atom || cur->size() == 0 || !(*cur)[0].is_atom) return cur;
    const std::string& head = (*cur)[0].atom;
    if (head == "assert") {
      if (cur->size() != 2)
        throw Error(ErrorCode::SyntaxError,
                    "'assert' takes one operand at position " +
                        std::to_string(cur->pos));
      cur = &(*cur)[1];
      continue;
    }
    if (head == "!") {
      if (cur->size() < 2)
        throw Error(ErrorCode::SyntaxError,
                    "malformed annotation at position " + std::to_string(cur->pos));
      for (size_t i = 2; i + 1 < cur->size(); i += 2) {
        if (!(*cur)[i].is_atom) continue;
        const std::string& key = (*cur)[i].atom;
        if (key == ":named" && (*cur)[i + 1].is_atom)
          meta.label = (*cur)[i + 1].atom;
        else if (key == ":confidence" && (*cur)[i + 1].is_atom)
          meta.confidence = std::strtod((*cur)[i + 1].atom.c_str(), nullptr);
      }
      cur = &(*cur)[1];
      continue;
    }
    return cur;
  }
}

}  // namespace

ParsedFormula formula_from_sexpr(const SExpr& e, Signature& sig, bool lenient) {
  ParsedFormula out;
  const SExpr* body = unwrap_assert(e, out);
  ParseCtx ctx{&sig, lenient, {}};
  out.formula = parse_formula_rec(*body, ctx);
  check_sorts(out.formula, sig);
  return out;
}

ParsedFormula parse_formula(std::string_view text, Signature& sig, bool lenient) {
  SExpr e = parse_sexpr(text);
  return formula_from_sexpr(e, sig, lenient);
}

Script parse_script(std::string_view text, bool lenient) {
  Script script;
  std::vector<SExpr> cmds = parse_sexpr_list(text);
  for (const SExpr& c : cmds) {
    if (c.is_atom || c.size() == 0 || !c[0].is_atom)
      throw Error(ErrorCode::SyntaxError,
                  "expected command at position " + std::to_string(c.pos));
    const std::string& head = c[0].atom;
    if (head == "set-option" || head == "set-info") continue;
    if (head == "set-logic") {
      if (c.size() == 2 && c[1].is_atom) script.logic = c[1].atom;
      continue;
    }
    if (head == "declare-sort") {
      if (c.size() < 2 || !c[1].is_atom)
        throw Error(ErrorCode::SyntaxError, "malformed declare-sort");
      script.sig.declare_sort(c[1].atom);
      continue;
    }
    if (head == "declare-const") {
      if (c.size() != 3 || !c[1].is_atom || !c[2].is_atom)
        throw Error(ErrorCode::SyntaxError, "malformed declare-const");
      script.sig.declare_constant(c[1].atom, c[2].atom);
      continue;
    }
    if (head == "declare-fun") {
      if (c.size() != 4 || !c[1].is_atom || !c[2].is_list() || !c[3].is_atom)
        throw Error(ErrorCode::SyntaxError, "malformed declare-fun");
      std::vector<std::string> args;
      for (const auto& a : c[2].items) {
        if (!a.is_atom)
          throw Error(ErrorCode::SyntaxError, "malformed declare-fun arguments");
        args.push_back(a.atom);
      }
      if (args.empty())
        script.sig.declare_constant(c[1].atom, c[3].atom);
      else
        script.sig.declare_function(c[1].atom, std::move(args), c[3].atom);
      continue;
    }
    if (head == "assert") {
      ParsedFormula pf = formula_from_sexpr(c, script.sig, lenient);
      NamedAssertion na;
      na.label = pf.label.value_or("a" + std::to_string(script.assertions.size()));
      na.formula = pf.formula;
      for (const auto& prev : script.assertions)
        if (prev.label == na.label)
          throw Error(ErrorCode::DuplicateLabel, "label '" + na.label + "'");
      if (pf.confidence) script.confidences[na.label] = *pf.confidence;
      script.assertions.push_back(std::move(na));
      continue;
    }
    throw Error(ErrorCode::SyntaxError, "unsupported command '" + head + "'");
  }
  return script;
}

namespace {

const char* code_names[] = {
    "SyntaxError",    "SortMismatch",       "UnknownSymbol",
    "UndeclaredSymbol", "DuplicateLabel",   "DuplicateName",
    "EmptyDomain",    "UnsortedVariable",   "NonLinear",
    "NonPropositional", "TooManyAtoms",     "SolverCrashed",
    "ProtocolError",  "InconsistentContext", "ContextIrreparable",
    "LimitExceeded",  "EmptyAnswer",        "NoVotes",
    "AllCandidatesInvalid", "MalformedOutput", "FixtureMiss",
    "NetworkError",   "RateLimited",        "GatewayUnavailable",
    "ConfigError",
};

}  // namespace

const char* error_code_name(ErrorCode code) {
  return code_names[static_cast<int>(code)];
}

}  // namespace verge
