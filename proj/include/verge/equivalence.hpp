#pragma once

#include <optional>
#include <string>
#include <vector>

#include "verge/formula.hpp"
#include "verge/gateway.hpp"
#include "verge/solver_bridge.hpp"

namespace verge {

enum class Trilean { Yes, No, Unknown };

// Semantic equivalence: unsat of not(a <-> b) under the signature's
// declarations. Quantified inputs are instantiated over the entity set
// first. Bridge failures degrade to Unknown.
Trilean equivalent(const FormulaPtr& a, const FormulaPtr& b,
                   const Signature& sig, SolverSession& solver);

// new entails old: unsat of new /\ not(old).
Trilean check_strengthening(const FormulaPtr& new_f, const FormulaPtr& old_f,
                            const Signature& sig, SolverSession& solver);

struct CandidateSet {
  int claim_index = 0;
  std::vector<std::pair<FormulaPtr, std::string>> candidates;  // formula, raw text
  int K = 3;  // sample count requested (candidates may be fewer after drops)
};

struct ConsensusResult {
  FormulaPtr representative;  // null when ambiguous
  int clique_size = 0;
  double confidence = 0.0;
  std::optional<double> round_trip_similarity;
  bool accepted = false;
};

// Builds the pairwise equivalence graph (unknown edges count as non-edges),
// takes the maximum clique, and accepts when the clique reaches the majority
// size ceil(K/2) and the confidence reaches the threshold. Confidence is
// clique/K, blended 0.7/0.3 with round-trip similarity when one is supplied.
// The representative is the clique member with the lexicographically first
// canonical rendering.
ConsensusResult consensus(const CandidateSet& cands, const Signature& sig,
                          SolverSession& solver, double threshold,
                          std::optional<double> round_trip = std::nullopt);

// Verbalizes the formula through the gateway and asks it to score similarity
// against the source claim. Gateway failures yield an empty optional so
// consensus can proceed on clique size alone.
std::optional<double> round_trip_similarity(const std::string& formula_text,
                                            const std::string& claim_text,
                                            Backend& backend);

}  // namespace verge
