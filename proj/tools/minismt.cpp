// verge-smt: a small SMT-LIB2 command interpreter covering the ground
// QF_UF + QF_LIA fragment the verification kernel emits. It answers
// `unknown` whenever it cannot decide a query exactly; it never guesses.

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "verge/errors.hpp"
#include "verge/formula.hpp"
#include "verge/sexpr.hpp"

namespace {

using namespace verge;

constexpr size_t kMaxAtoms = 24;
constexpr long kNodeBudget = 200000;
constexpr size_t kMaxDiseqSplits = 16;
constexpr size_t kMaxFmRows = 2000;
constexpr long kModelBudget = 200000;
constexpr long long kOverflowGuard = 1000000000000000LL;

enum class Tri { False, True, Unknown };

// ---------------------------------------------------------------------------
// Linear integer arithmetic over rendered-term "variables"
// ---------------------------------------------------------------------------

// sum coef[v]*v + c
struct Lin {
  std::map<std::string, long long> coef;
  long long c = 0;
};

bool lin_add(Lin& a, const Lin& b, long long scale) {
  for (const auto& [v, k] : b.coef) {
    long long nk = a.coef[v] + k * scale;
    if (nk > kOverflowGuard || nk < -kOverflowGuard) return false;
    if (nk == 0)
      a.coef.erase(v);
    else
      a.coef[v] = nk;
  }
  a.c += b.c * scale;
  if (a.c > kOverflowGuard || a.c < -kOverflowGuard) return false;
  return true;
}

std::optional<Lin> linearize(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::IntLit: {
      Lin l;
      l.c = t->value;
      return l;
    }
    case Term::Kind::Symbol:
    case Term::Kind::Var:
    case Term::Kind::App: {
      Lin l;
      l.coef[render(t)] = 1;
      return l;
    }
    case Term::Kind::Add: {
      Lin l;
      for (const auto& a : t->args) {
        auto sub = linearize(a);
        if (!sub || !lin_add(l, *sub, 1)) return std::nullopt;
      }
      return l;
    }
    case Term::Kind::Sub: {
      auto a = linearize(t->args[0]);
      auto b = linearize(t->args[1]);
      if (!a || !b || !lin_add(*a, *b, -1)) return std::nullopt;
      return a;
    }
    case Term::Kind::Neg: {
      auto a = linearize(t->args[0]);
      if (!a) return std::nullopt;
      Lin l;
      if (!lin_add(l, *a, -1)) return std::nullopt;
      return l;
    }
    case Term::Kind::Mul: {
      auto a = linearize(t->args[0]);
      auto b = linearize(t->args[1]);
      if (!a || !b) return std::nullopt;
      if (a->coef.empty()) std::swap(a, b);
      if (!b->coef.empty()) return std::nullopt;  // nonlinear
      Lin l;
      if (!lin_add(l, *a, b->c)) return std::nullopt;
      return l;
    }
  }
  return std::nullopt;
}

// Inequality: sum coef*v <= bound
struct Ineq {
  std::map<std::string, long long> coef;
  long long bound = 0;
};

long long llgcd(long long a, long long b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// gcd tightening: (g | coefs) implies sum <= floor(bound/g)*g
std::optional<Ineq> normalize(Ineq q) {
  if (q.coef.empty()) return q;
  long long g = 0;
  for (const auto& [v, k] : q.coef) g = llgcd(g, k);
  if (g > 1) {
    for (auto& [v, k] : q.coef) k /= g;
    long long b = q.bound;
    q.bound = (b >= 0) ? b / g : -((-b + g - 1) / g);
  }
  return q;
}

// d <= bound where d = lin
Ineq ineq_from(const Lin& l, long long scale, long long bound_shift) {
  // scale*l + bound_shift <= 0  =>  scale*coef <= -scale*c - bound_shift
  Ineq q;
  for (const auto& [v, k] : l.coef)
    if (k * scale != 0) q.coef[v] = k * scale;
  q.bound = -l.c * scale - bound_shift;
  return q;
}

struct TheoryProblem {
  std::vector<Ineq> ineqs;
  std::vector<Lin> diseqs;  // lin != 0
  bool inexact = false;     // linearization or overflow trouble
};

Tri rational_fm(std::vector<Ineq> rows, bool& exact, bool& unit_coeffs);

// Bounded integer model search with interval propagation.
Tri integer_model_search(const std::vector<Ineq>& rows) {
  std::vector<std::string> vars;
  for (const auto& q : rows)
    for (const auto& [v, k] : q.coef)
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        vars.push_back(v);
  if (vars.empty()) {
    for (const auto& q : rows)
      if (q.bound < 0) return Tri::False;
    return Tri::True;
  }
  if (vars.size() > 8) return Tri::Unknown;

  long long spread = 10;
  for (const auto& q : rows) {
    long long b = q.bound < 0 ? -q.bound : q.bound;
    if (b > spread) spread = b;
  }
  if (spread > 1000) return Tri::Unknown;
  long long lo = -spread, hi = spread;

  std::map<std::string, long long> model;
  long budget = kModelBudget;
  bool exhausted_exact = true;

  std::function<Tri(size_t)> go = [&](size_t idx) -> Tri {
    if (budget-- <= 0) {
      exhausted_exact = false;
      return Tri::Unknown;
    }
    if (idx == vars.size()) {
      for (const auto& q : rows) {
        long long s = 0;
        for (const auto& [v, k] : q.coef) s += k * model[v];
        if (s > q.bound) return Tri::False;
      }
      return Tri::True;
    }
    for (long long val = lo; val <= hi; ++val) {
      model[vars[idx]] = val;
      // prune on rows fully determined so far
      bool bad = false;
      for (const auto& q : rows) {
        long long s = 0;
        bool det = true;
        for (const auto& [v, k] : q.coef) {
          auto it = model.find(v);
          if (it == model.end()) {
            det = false;
            break;
          }
          s += k * it->second;
        }
        if (det && s > q.bound) {
          bad = true;
          break;
        }
      }
      if (bad) continue;
      Tri r = go(idx + 1);
      if (r != Tri::False) return r;
    }
    model.erase(vars[idx]);
    return Tri::False;
  };

  Tri r = go(0);
  if (r == Tri::True) return Tri::True;
  if (r == Tri::False && exhausted_exact) {
    // The search space was clipped to [lo, hi]; a model may live outside it
    // unless every variable is genuinely two-sided bounded within the range.
    // Checking that precisely is not worth it here; stay conservative.
    return Tri::Unknown;
  }
  return Tri::Unknown;
}

// Fourier-Motzkin over the rationals with integer coefficients. Detecting a
// contradiction here is exact for integers too (integer-infeasible follows).
// When every row, input or derived, only ever carries coefficients in
// {-1, 0, 1} before gcd tightening, a rational model can be rounded to an
// integer one, so feasibility is exact as well; unit_coeffs reports that.
Tri rational_fm(std::vector<Ineq> rows, bool& exact, bool& unit_coeffs) {
  for (auto& q : rows) {
    for (const auto& [v, k] : q.coef)
      if (k > 1 || k < -1) unit_coeffs = false;
    auto n = normalize(q);
    if (!n) {
      exact = false;
      return Tri::Unknown;
    }
    q = *n;
  }
  for (;;) {
    // constants
    for (auto it = rows.begin(); it != rows.end();) {
      if (it->coef.empty()) {
        if (it->bound < 0) return Tri::False;
        it = rows.erase(it);
      } else {
        ++it;
      }
    }
    if (rows.empty()) return Tri::True;
    const std::string& x = rows.front().coef.begin()->first;
    std::vector<Ineq> uppers, lowers, rest;
    for (auto& q : rows) {
      auto it = q.coef.find(x);
      if (it == q.coef.end())
        rest.push_back(std::move(q));
      else if (it->second > 0)
        uppers.push_back(std::move(q));
      else
        lowers.push_back(std::move(q));
    }
    for (const auto& up : uppers)
      for (const auto& lo : lowers) {
        long long a = up.coef.at(x);       // a > 0
        long long b = -lo.coef.at(x);      // b > 0
        Ineq q;
        bool ok = true;
        for (const auto& [v, k] : up.coef)
          if (v != x) q.coef[v] += k * b;
        for (const auto& [v, k] : lo.coef)
          if (v != x) q.coef[v] += k * a;
        for (auto it = q.coef.begin(); it != q.coef.end();) {
          if (it->second > kOverflowGuard || it->second < -kOverflowGuard)
            ok = false;
          if (it->second > 1 || it->second < -1) unit_coeffs = false;
          if (it->second == 0)
            it = q.coef.erase(it);
          else
            ++it;
        }
        q.bound = up.bound * b + lo.bound * a;
        if (!ok || q.bound > kOverflowGuard || q.bound < -kOverflowGuard) {
          exact = false;
          return Tri::Unknown;
        }
        auto n = normalize(q);
        rest.push_back(*n);
        if (rest.size() > kMaxFmRows) {
          exact = false;
          return Tri::Unknown;
        }
      }
    rows = std::move(rest);
    if (rows.empty()) return Tri::True;
  }
}

Tri solve_ineqs(const std::vector<Ineq>& rows) {
  bool exact = true;
  bool unit_coeffs = true;
  std::vector<Ineq> copy = rows;
  Tri fm = rational_fm(copy, exact, unit_coeffs);
  if (fm == Tri::False) return Tri::False;
  if (fm == Tri::True && unit_coeffs) return Tri::True;
  // rationally feasible with larger coefficients in play, or FM bailed out:
  // only an explicit integer witness settles the sat side
  Tri m = integer_model_search(rows);
  if (m == Tri::True) return Tri::True;
  return Tri::Unknown;
}

Tri solve_theory(const TheoryProblem& p, size_t diseq_idx,
                 std::vector<Ineq> acc) {
  if (diseq_idx == p.diseqs.size()) {
    Tri r = solve_ineqs(acc);
    if (r == Tri::Unknown && p.inexact) return Tri::Unknown;
    return r;
  }
  if (p.diseqs.size() > kMaxDiseqSplits) return Tri::Unknown;
  const Lin& d = p.diseqs[diseq_idx];
  if (d.coef.empty()) {
    if (d.c == 0) return Tri::False;  // constant != 0 fails
    return solve_theory(p, diseq_idx + 1, std::move(acc));
  }
  bool saw_unknown = false;
  // d <= -1
  {
    auto rows = acc;
    rows.push_back(*normalize(ineq_from(d, 1, 1)));
    Tri r = solve_theory(p, diseq_idx + 1, std::move(rows));
    if (r == Tri::True) return Tri::True;
    if (r == Tri::Unknown) saw_unknown = true;
  }
  // d >= 1
  {
    auto rows = std::move(acc);
    rows.push_back(*normalize(ineq_from(d, -1, 1)));
    Tri r = solve_theory(p, diseq_idx + 1, std::move(rows));
    if (r == Tri::True) return Tri::True;
    if (r == Tri::Unknown) saw_unknown = true;
  }
  return saw_unknown ? Tri::Unknown : Tri::False;
}

// ---------------------------------------------------------------------------
// Propositional search
// ---------------------------------------------------------------------------

struct AtomTable {
  std::vector<std::string> keys;
  std::vector<FormulaPtr> cmp_nodes;  // parallel to keys; null for Bool atoms
  std::map<std::string, size_t> index;

  size_t intern(const std::string& key, const FormulaPtr& cmp) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    size_t id = keys.size();
    keys.push_back(key);
    cmp_nodes.push_back(cmp);
    index[key] = id;
    return id;
  }
};

void collect_atoms(const FormulaPtr& f, AtomTable& table) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      table.intern(render(f), nullptr);
      return;
    case Formula::Kind::Cmp:
      table.intern(render(f), f);
      return;
    default:
      for (const auto& k : f->kids) collect_atoms(k, table);
  }
}

Tri eval3(const FormulaPtr& f, const AtomTable& table,
          const std::vector<int>& assign) {
  switch (f->kind) {
    case Formula::Kind::True:
      return Tri::True;
    case Formula::Kind::False:
      return Tri::False;
    case Formula::Kind::Atom:
    case Formula::Kind::Cmp: {
      int v = assign[table.index.at(render(f))];
      return v < 0 ? Tri::Unknown : (v ? Tri::True : Tri::False);
    }
    case Formula::Kind::Not: {
      Tri a = eval3(f->kids[0], table, assign);
      if (a == Tri::Unknown) return Tri::Unknown;
      return a == Tri::True ? Tri::False : Tri::True;
    }
    case Formula::Kind::And: {
      Tri out = Tri::True;
      for (const auto& k : f->kids) {
        Tri a = eval3(k, table, assign);
        if (a == Tri::False) return Tri::False;
        if (a == Tri::Unknown) out = Tri::Unknown;
      }
      return out;
    }
    case Formula::Kind::Or: {
      Tri out = Tri::False;
      for (const auto& k : f->kids) {
        Tri a = eval3(k, table, assign);
        if (a == Tri::True) return Tri::True;
        if (a == Tri::Unknown) out = Tri::Unknown;
      }
      return out;
    }
    case Formula::Kind::Implies: {
      Tri a = eval3(f->kids[0], table, assign);
      Tri b = eval3(f->kids[1], table, assign);
      if (a == Tri::False || b == Tri::True) return Tri::True;
      if (a == Tri::True && b == Tri::False) return Tri::False;
      return Tri::Unknown;
    }
    case Formula::Kind::Iff: {
      Tri a = eval3(f->kids[0], table, assign);
      Tri b = eval3(f->kids[1], table, assign);
      if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
      return a == b ? Tri::True : Tri::False;
    }
    default:
      return Tri::Unknown;  // quantifier; callers rule this out beforehand
  }
}

Tri leaf_theory_check(const AtomTable& table, const std::vector<int>& assign) {
  TheoryProblem p;
  for (size_t i = 0; i < table.keys.size(); ++i) {
    if (assign[i] < 0 || !table.cmp_nodes[i]) continue;
    const Formula& f = *table.cmp_nodes[i];
    auto l = linearize(f.lhs);
    auto r = linearize(f.rhs);
    if (!l || !r || !lin_add(*l, *r, -1)) {
      p.inexact = true;
      continue;
    }
    Lin d = *l;  // lhs - rhs
    bool val = assign[i] == 1;
    switch (f.op) {
      case CmpOp::Eq:
        if (val) {
          p.ineqs.push_back(*normalize(ineq_from(d, 1, 0)));
          p.ineqs.push_back(*normalize(ineq_from(d, -1, 0)));
        } else {
          p.diseqs.push_back(d);
        }
        break;
      case CmpOp::Lt:
        p.ineqs.push_back(*normalize(ineq_from(d, val ? 1 : -1, val ? 1 : 0)));
        break;
      case CmpOp::Le:
        p.ineqs.push_back(*normalize(ineq_from(d, val ? 1 : -1, val ? 0 : 1)));
        break;
      case CmpOp::Gt:
        p.ineqs.push_back(*normalize(ineq_from(d, val ? -1 : 1, val ? 1 : 0)));
        break;
      case CmpOp::Ge:
        p.ineqs.push_back(*normalize(ineq_from(d, val ? -1 : 1, val ? 0 : 1)));
        break;
    }
  }
  if (p.ineqs.empty() && p.diseqs.empty()) return p.inexact ? Tri::Unknown : Tri::True;
  if (p.diseqs.size() > kMaxDiseqSplits) return Tri::Unknown;
  Tri r = solve_theory(p, 0, p.ineqs);
  if (p.inexact && r == Tri::False) return Tri::Unknown;
  return r;
}

struct SearchState {
  const std::vector<FormulaPtr>* formulas;
  const AtomTable* table;
  long budget = kNodeBudget;
  bool saw_unknown = false;
};

Tri dpll(SearchState& st, std::vector<int>& assign) {
  if (st.budget-- <= 0) {
    st.saw_unknown = true;
    return Tri::False;
  }
  bool all_true = true;
  for (const auto& f : *st.formulas) {
    Tri r = eval3(f, *st.table, assign);
    if (r == Tri::False) return Tri::False;
    if (r == Tri::Unknown) all_true = false;
  }
  if (all_true) {
    Tri t = leaf_theory_check(*st.table, assign);
    if (t == Tri::True) return Tri::True;
    if (t == Tri::Unknown) st.saw_unknown = true;
    return Tri::False;
  }
  size_t pick = assign.size();
  for (size_t i = 0; i < assign.size(); ++i)
    if (assign[i] < 0) {
      pick = i;
      break;
    }
  if (pick == assign.size()) {
    // all atoms assigned yet some formula still unknown: impossible for the
    // supported connectives, but stay safe
    st.saw_unknown = true;
    return Tri::False;
  }
  for (int v : {1, 0}) {
    assign[pick] = v;
    if (dpll(st, assign) == Tri::True) {
      assign[pick] = -1;
      return Tri::True;
    }
  }
  assign[pick] = -1;
  return Tri::False;
}

// sat / unsat / unknown over a set of ground formulas
Tri solve(const std::vector<FormulaPtr>& formulas) {
  for (const auto& f : formulas)
    if (contains_quantifier(*f)) return Tri::Unknown;
  AtomTable table;
  for (const auto& f : formulas) collect_atoms(f, table);
  if (table.keys.size() > kMaxAtoms) return Tri::Unknown;
  std::vector<int> assign(table.keys.size(), -1);
  SearchState st{&formulas, &table};
  Tri r = dpll(st, assign);
  if (r == Tri::True) return Tri::True;
  return st.saw_unknown ? Tri::Unknown : Tri::False;
}

// ---------------------------------------------------------------------------
// Command interpreter
// ---------------------------------------------------------------------------

struct Frame {
  Signature sig;
  std::vector<NamedAssertion> assertions;
};

struct Interpreter {
  std::vector<Frame> stack{Frame{}};
  std::optional<std::vector<std::string>> last_core;

  Frame& top() { return stack.back(); }

  void run(const SExpr& cmd) {
    if (cmd.is_atom || cmd.size() == 0 || !cmd[0].is_atom) {
      reply_error("expected a command");
      return;
    }
    const std::string& head = cmd[0].atom;
    try {
      dispatch(head, cmd);
    } catch (const Error& e) {
      reply_error(e.what());
    } catch (const std::exception& e) {
      reply_error(e.what());
    }
  }

  void dispatch(const std::string& head, const SExpr& cmd) {
    if (head == "set-option" || head == "set-logic" || head == "set-info") {
      return;
    }
    if (head == "declare-sort") {
      if (cmd.size() < 2 || !cmd[1].is_atom)
        throw Error(ErrorCode::SyntaxError, "malformed declare-sort");
      top().sig.declare_sort(cmd[1].atom);
      return;
    }
    if (head == "declare-const") {
      if (cmd.size() != 3 || !cmd[1].is_atom || !cmd[2].is_atom)
        throw Error(ErrorCode::SyntaxError, "malformed declare-const");
      top().sig.declare_constant(cmd[1].atom, cmd[2].atom);
      return;
    }
    if (head == "declare-fun") {
      if (cmd.size() != 4 || !cmd[1].is_atom || !cmd[2].is_list() ||
          !cmd[3].is_atom)
        throw Error(ErrorCode::SyntaxError, "malformed declare-fun");
      std::vector<std::string> args;
      for (const auto& a : cmd[2].items) args.push_back(a.atom);
      if (args.empty())
        top().sig.declare_constant(cmd[1].atom, cmd[3].atom);
      else
        top().sig.declare_function(cmd[1].atom, std::move(args), cmd[3].atom);
      return;
    }
    if (head == "assert") {
      ParsedFormula pf = formula_from_sexpr(cmd, top().sig, false);
      NamedAssertion na;
      na.label =
          pf.label.value_or("a" + std::to_string(top().assertions.size()));
      na.formula = pf.formula;
      for (const auto& prev : top().assertions)
        if (prev.label == na.label)
          throw Error(ErrorCode::DuplicateLabel, "label '" + na.label + "'");
      top().assertions.push_back(std::move(na));
      last_core.reset();
      return;
    }
    if (head == "push") {
      int n = cmd.size() > 1 ? std::atoi(cmd[1].atom.c_str()) : 1;
      for (int i = 0; i < n; ++i) stack.push_back(stack.back());
      return;
    }
    if (head == "pop") {
      int n = cmd.size() > 1 ? std::atoi(cmd[1].atom.c_str()) : 1;
      for (int i = 0; i < n; ++i) {
        if (stack.size() <= 1) {
          reply_error("pop without matching push");
          return;
        }
        stack.pop_back();
      }
      last_core.reset();
      return;
    }
    if (head == "reset") {
      stack.clear();
      stack.push_back(Frame{});
      last_core.reset();
      return;
    }
    if (head == "check-sat") {
      check_sat();
      return;
    }
    if (head == "get-unsat-core") {
      if (!last_core) {
        reply_error("no unsat core available");
        return;
      }
      std::string out = "(";
      for (size_t i = 0; i < last_core->size(); ++i) {
        if (i) out += ' ';
        out += (*last_core)[i];
      }
      out += ")";
      reply(out);
      return;
    }
    if (head == "exit") {
      std::exit(0);
    }
    if (head == "echo") {
      reply(cmd.size() > 1 ? cmd[1].atom : "");
      return;
    }
    reply_error("unsupported command '" + head + "'");
  }

  void check_sat() {
    std::vector<FormulaPtr> fs;
    for (const auto& a : top().assertions) fs.push_back(a.formula);
    Tri r = solve(fs);
    last_core.reset();
    if (r == Tri::True) {
      reply("sat");
    } else if (r == Tri::False) {
      minimize_core();
      reply("unsat");
    } else {
      reply("unknown");
    }
  }

  // Deletion-based minimization: drop an assertion whenever the remainder is
  // still definitively unsat. Decisive sub-checks make the result minimal.
  void minimize_core() {
    std::vector<size_t> keep;
    for (size_t i = 0; i < top().assertions.size(); ++i) keep.push_back(i);
    for (size_t i = 0; i < keep.size();) {
      std::vector<FormulaPtr> fs;
      for (size_t j = 0; j < keep.size(); ++j)
        if (j != i) fs.push_back(top().assertions[keep[j]].formula);
      if (solve(fs) == Tri::False)
        keep.erase(keep.begin() + i);
      else
        ++i;
    }
    std::vector<std::string> core;
    for (size_t j : keep) core.push_back(top().assertions[j].label);
    last_core = std::move(core);
  }

  void reply(const std::string& s) {
    std::cout << s << "\n";
    std::cout.flush();
  }

  void reply_error(const std::string& msg) {
    std::string quoted;
    for (char c : msg)
      if (c != '"') quoted += c;
    reply("(error \"" + quoted + "\")");
  }
};

// Returns the byte length of the first complete s-expression in `buf`,
// or 0 when more input is needed.
size_t complete_prefix(const std::string& buf) {
  int depth = 0;
  bool in_string = false;
  bool in_comment = false;
  size_t atom_start = std::string::npos;
  for (size_t i = 0; i < buf.size(); ++i) {
    char c = buf[i];
    if (in_comment) {
      if (c == '\n') in_comment = false;
      continue;
    }
    if (in_string) {
      if (c == '"') in_string = false;
      continue;
    }
    if (c == ';' && depth == 0 && atom_start == std::string::npos) {
      in_comment = true;
      continue;
    }
    if (c == '"') {
      in_string = true;
      continue;
    }
    if (c == '(') {
      if (depth == 0 && atom_start != std::string::npos) return i;
      ++depth;
      continue;
    }
    if (c == ')') {
      --depth;
      if (depth <= 0) return i + 1;
      continue;
    }
    if (depth == 0) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (atom_start != std::string::npos) return i;
      } else if (atom_start == std::string::npos) {
        atom_start = i;
      }
    }
  }
  return 0;
}

}  // namespace

int main() {
  Interpreter interp;
  std::string buf;
  char chunk[4096];
  for (;;) {
    // drain complete commands before reading more
    for (;;) {
      size_t n = complete_prefix(buf);
      if (n == 0) break;
      std::string text = buf.substr(0, n);
      buf.erase(0, n);
      bool blank = true;
      for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      try {
        SExpr e = parse_sexpr(text);
        interp.run(e);
      } catch (const std::exception& ex) {
        interp.reply_error(ex.what());
      }
    }
    ssize_t got = read(STDIN_FILENO, chunk, sizeof chunk);
    if (got <= 0) break;
    buf.append(chunk, static_cast<size_t>(got));
  }
  return 0;
}
