#pragma once

#include <map>
#include <string>
#include <vector>

#include "verge/formula.hpp"

namespace verge {

// atom rendering -> truth value, total over the formula's atoms
using TruthAssignment = std::map<std::string, bool>;

// Atom keys (canonical renderings) of a propositional formula, in first-visit
// order. Throws Error(NonPropositional) on quantifiers or arithmetic.
std::vector<std::string> propositional_atoms(const FormulaPtr& f);

bool eval_formula(const FormulaPtr& f, const TruthAssignment& a);

// Exhaustive truth-table equivalence over the union of both atom sets.
// Throws Error(TooManyAtoms) beyond 20 atoms.
bool oracle_equiv(const FormulaPtr& a, const FormulaPtr& b);

}  // namespace verge
