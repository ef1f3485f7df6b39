#pragma once

#include <string>
#include <vector>

#include "verge/claims.hpp"
#include "verge/gateway.hpp"
#include "verge/solver_bridge.hpp"

namespace verge {

enum class Route { SmtVerify, SoftVerify };

// Mathematical, Logical and Temporal claims go to the solver; Probabilistic,
// Commonsense and Vague claims go to the judge ensemble. Total over the six
// types; the hybrid path is an error-path fallback, not a route.
Route route(ClaimType t);

struct SmtOutcome {
  VerificationStatus status = VerificationStatus::Unknown;
  std::vector<std::string> core;  // labels, present for Contradictory
};

// Two probes against the working context: consistency (context /\ claim)
// first, then entailment (context /\ not claim). Unsat consistency yields
// Contradictory with the core; unsat entailment yields Entailed; both sat
// yields Possible; anything involving unknown yields Unknown. Both probes
// unsat means the context itself is unsatisfiable and raises
// Error(InconsistentContext).
SmtOutcome verify_smt(const Claim& claim,
                      const std::vector<NamedAssertion>& context,
                      const Signature& sig, SolverSession& solver);

// The labeled assertion form of an SMT-routed claim (quantifiers already
// instantiated), label claim.label or "claim_<index>".
NamedAssertion claim_assertion(const Claim& claim, const Signature& sig);

// Confidence-weighted majority vote. Ties break toward the conservative end
// in the order Uncertain > Unsupported > Plausible > Supported. Writes the
// winner's weight share into confidence_out. Empty vote set yields Uncertain
// with confidence 0.
VerificationStatus verify_soft(const std::vector<JudgeVote>& votes,
                               double& confidence_out);

// Requests N judge verdicts through the gateway.
std::vector<JudgeVote> collect_votes(Backend& backend,
                                     const std::string& claim_text,
                                     const std::string& context_text, int n);

// Declares a fresh boolean constant for a Supported/Plausible soft claim and
// returns the assertion `b_<index>` labeled soft_<index>. Records the
// constant name on the claim.
NamedAssertion boolean_abstraction(Claim& claim, Signature& sig);

// Parses each axiom text leniently and appends labeled bridge_<k> assertions
// to the context. Parse failures drop the axiom and add a formalization
// alert instead of failing.
void inject_bridging_axioms(const std::vector<std::string>& axiom_texts,
                            Signature& sig,
                            std::vector<NamedAssertion>& context,
                            std::vector<std::string>& alerts);

}  // namespace verge
