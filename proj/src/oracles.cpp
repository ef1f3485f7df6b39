#include "verge/oracles.hpp"

#include <algorithm>

namespace verge {

namespace {

void collect(const FormulaPtr& f, std::vector<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom: {
      std::string key = render(f);
      if (std::find(out.begin(), out.end(), key) == out.end())
        out.push_back(key);
      return;
    }
    case Formula::Kind::Cmp:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      throw Error(ErrorCode::NonPropositional,
                  "not a propositional formula: " + render(f));
    default:
      for (const auto& k : f->kids) collect(k, out);
  }
}

}  // namespace

std::vector<std::string> propositional_atoms(const FormulaPtr& f) {
  std::vector<std::string> out;
  collect(f, out);
  return out;
}

bool eval_formula(const FormulaPtr& f, const TruthAssignment& a) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atom: {
      auto it = a.find(render(f));
      if (it == a.end())
        throw Error(ErrorCode::NonPropositional,
                    "assignment missing atom " + render(f));
      return it->second;
    }
    case Formula::Kind::Not:
      return !eval_formula(f->kids[0], a);
    case Formula::Kind::And:
      for (const auto& k : f->kids)
        if (!eval_formula(k, a)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& k : f->kids)
        if (eval_formula(k, a)) return true;
      return false;
    case Formula::Kind::Implies:
      return !eval_formula(f->kids[0], a) || eval_formula(f->kids[1], a);
    case Formula::Kind::Iff:
      return eval_formula(f->kids[0], a) == eval_formula(f->kids[1], a);
    default:
      throw Error(ErrorCode::NonPropositional,
                  "not a propositional formula: " + render(f));
  }
}

bool oracle_equiv(const FormulaPtr& a, const FormulaPtr& b) {
  std::vector<std::string> atoms = propositional_atoms(a);
  for (const auto& key : propositional_atoms(b))
    if (std::find(atoms.begin(), atoms.end(), key) == atoms.end())
      atoms.push_back(key);
  if (atoms.size() > 20)
    throw Error(ErrorCode::TooManyAtoms,
                std::to_string(atoms.size()) + " atoms exceed the oracle cap");
  for (uint64_t mask = 0; mask < (uint64_t{1} << atoms.size()); ++mask) {
    TruthAssignment asg;
    for (size_t i = 0; i < atoms.size(); ++i)
      asg[atoms[i]] = (mask >> i) & 1;
    if (eval_formula(a, asg) != eval_formula(b, asg)) return false;
  }
  return true;
}

}  // namespace verge
