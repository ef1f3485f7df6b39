#pragma once

#include <optional>
#include <string>
#include <vector>

#include "verge/claims.hpp"
#include "verge/solver_bridge.hpp"

namespace verge {

struct CorrectionResult {
  std::vector<int> mss;         // claim indices kept
  std::vector<int> mcs;         // claim indices removed
  std::vector<int> uncertain;   // mcs members the solver answered unknown on
  int sat_calls = 0;
  std::vector<int> order_used;  // confidence-descending processing order
};

// Sorted greedy correction: claims are processed in confidence-descending
// order (ties by ascending index); a claim is kept iff the context plus the
// kept prefix plus the claim is satisfiable. Exactly one solver call per
// claim. An unknown verdict sends the claim to the mcs and marks it
// uncertain. `claim_assertions` is parallel to `claims`.
// Precondition: the context alone is satisfiable.
CorrectionResult greedy_mcs(const std::vector<NamedAssertion>& context,
                            const std::vector<Claim>& claims,
                            const std::vector<NamedAssertion>& claim_assertions,
                            const Signature& sig, SolverSession& solver);

// Exhaustive minimum-cardinality correction set: removal subsets enumerated
// by ascending cardinality, then lexicographically by ascending index list.
// Throws Error(LimitExceeded) beyond n_limit claims.
CorrectionResult exact_min_mcs(const std::vector<NamedAssertion>& context,
                               const std::vector<Claim>& claims,
                               const std::vector<NamedAssertion>& claim_assertions,
                               const Signature& sig, SolverSession& solver,
                               int n_limit = 12);

struct FeedbackItem {
  int claim_index = -1;
  std::string claim_text;
  std::vector<std::string> core_labels;
  bool solver_uncertain = false;
  std::string directive;
};

// One item per removed claim, citing the unsat-core labels it conflicts with
// and directing the model to rewrite that claim.
std::vector<FeedbackItem> format_feedback(
    const CorrectionResult& result,
    const std::optional<std::vector<std::string>>& core,
    const std::vector<Claim>& claims);

}  // namespace verge
