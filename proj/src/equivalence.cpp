#include "verge/equivalence.hpp"

#include <algorithm>

namespace verge {

namespace {

Trilean unsat_query(const FormulaPtr& f, const Signature& sig,
                    SolverSession& solver) {
  NamedAssertion na;
  na.label = "q0";
  na.formula = f;
  try {
    CheckResult r = solver.check(sig, {na}, false);
    switch (r.verdict) {
      case Verdict::Unsat: return Trilean::Yes;
      case Verdict::Sat: return Trilean::No;
      case Verdict::Unknown: return Trilean::Unknown;
    }
  } catch (const Error&) {
    return Trilean::Unknown;
  }
  return Trilean::Unknown;
}

}  // namespace

Trilean equivalent(const FormulaPtr& a, const FormulaPtr& b,
                   const Signature& sig, SolverSession& solver) {
  FormulaPtr ga = contains_quantifier(*a) ? instantiate_quantifiers(a, sig) : a;
  FormulaPtr gb = contains_quantifier(*b) ? instantiate_quantifiers(b, sig) : b;
  return unsat_query(f_not(f_iff(ga, gb)), sig, solver);
}

Trilean check_strengthening(const FormulaPtr& new_f, const FormulaPtr& old_f,
                            const Signature& sig, SolverSession& solver) {
  FormulaPtr gn =
      contains_quantifier(*new_f) ? instantiate_quantifiers(new_f, sig) : new_f;
  FormulaPtr go =
      contains_quantifier(*old_f) ? instantiate_quantifiers(old_f, sig) : old_f;
  return unsat_query(f_and({gn, f_not(go)}), sig, solver);
}

ConsensusResult consensus(const CandidateSet& cands, const Signature& sig,
                          SolverSession& solver, double threshold,
                          std::optional<double> round_trip) {
  ConsensusResult result;
  result.round_trip_similarity = round_trip;
  size_t n = cands.candidates.size();
  if (n == 0) return result;  // ambiguous

  std::vector<std::string> renderings(n);
  for (size_t i = 0; i < n; ++i)
    renderings[i] = render(cands.candidates[i].first);

  // yes-edge adjacency; identical renderings need no solver call
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) {
    edge[i][i] = true;
    for (size_t j = i + 1; j < n; ++j) {
      Trilean e = renderings[i] == renderings[j]
                      ? Trilean::Yes
                      : equivalent(cands.candidates[i].first,
                                   cands.candidates[j].first, sig, solver);
      edge[i][j] = edge[j][i] = (e == Trilean::Yes);
    }
  }

  uint32_t best_mask = 0;
  int best_size = 0;
  for (uint32_t mask = 1; mask < (uint32_t{1} << n); ++mask) {
    int size = __builtin_popcount(mask);
    if (size <= best_size) continue;
    bool clique = true;
    for (size_t i = 0; i < n && clique; ++i)
      for (size_t j = i + 1; j < n && clique; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && !edge[i][j]) clique = false;
    if (clique) {
      best_mask = mask;
      best_size = size;
    }
  }

  result.clique_size = best_size;
  double fraction = static_cast<double>(best_size) / cands.K;
  result.confidence =
      round_trip ? 0.7 * fraction + 0.3 * *round_trip : fraction;

  int majority = (cands.K + 1) / 2;
  if (best_size >= majority && result.confidence >= threshold) {
    size_t pick = n;
    for (size_t i = 0; i < n; ++i) {
      if (!(best_mask >> i & 1)) continue;
      if (pick == n || renderings[i] < renderings[pick]) pick = i;
    }
    result.representative = cands.candidates[pick].first;
    result.accepted = true;
  }
  return result;
}

std::optional<double> round_trip_similarity(const std::string& formula_text,
                                            const std::string& claim_text,
                                            Backend& backend) {
  try {
    std::string verbal =
        backend.complete(make_verbalize_request(formula_text));
    std::string score =
        backend.complete(make_similarity_request(claim_text, verbal));
    return parse_similarity(score);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace verge
