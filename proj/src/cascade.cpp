#include "verge/cascade.hpp"

namespace verge {

Route route(ClaimType t) {
  switch (t) {
    case ClaimType::Mathematical:
    case ClaimType::Logical:
    case ClaimType::Temporal:
      return Route::SmtVerify;
    case ClaimType::Probabilistic:
    case ClaimType::Commonsense:
    case ClaimType::Vague:
      return Route::SoftVerify;
  }
  return Route::SoftVerify;
}

NamedAssertion claim_assertion(const Claim& claim, const Signature& sig) {
  NamedAssertion na;
  na.label = claim.label.value_or("claim_" + std::to_string(claim.index));
  na.formula = contains_quantifier(*claim.formalization)
                   ? instantiate_quantifiers(claim.formalization, sig)
                   : claim.formalization;
  na.origin = AssertionOrigin::Claim;
  na.claim_index = claim.index;
  return na;
}

SmtOutcome verify_smt(const Claim& claim,
                      const std::vector<NamedAssertion>& context,
                      const Signature& sig, SolverSession& solver) {
  NamedAssertion pos = claim_assertion(claim, sig);
  NamedAssertion neg = pos;
  neg.label = "neg_" + pos.label;
  neg.formula = f_not(pos.formula);

  std::vector<NamedAssertion> with_claim = context;
  with_claim.push_back(pos);
  CheckResult consistency = solver.check(sig, with_claim, true);

  std::vector<NamedAssertion> with_negation = context;
  with_negation.push_back(neg);
  CheckResult entailment = solver.check(sig, with_negation, false);

  if (consistency.verdict == Verdict::Unsat &&
      entailment.verdict == Verdict::Unsat)
    throw Error(ErrorCode::InconsistentContext,
                "both probes unsat for claim " + std::to_string(claim.index));

  SmtOutcome out;
  if (consistency.verdict == Verdict::Unsat) {
    out.status = VerificationStatus::Contradictory;
    out.core = consistency.core;
  } else if (entailment.verdict == Verdict::Unsat) {
    out.status = VerificationStatus::Entailed;
  } else if (consistency.verdict == Verdict::Sat &&
             entailment.verdict == Verdict::Sat) {
    out.status = VerificationStatus::Possible;
  } else {
    out.status = VerificationStatus::Unknown;
  }
  return out;
}

VerificationStatus verify_soft(const std::vector<JudgeVote>& votes,
                               double& confidence_out) {
  confidence_out = 0.0;
  if (votes.empty()) return VerificationStatus::Uncertain;
  // conservative-first order makes the argmax tie-break automatic
  const VerificationStatus classes[] = {
      VerificationStatus::Uncertain,
      VerificationStatus::Unsupported,
      VerificationStatus::Plausible,
      VerificationStatus::Supported,
  };
  double weight[4] = {0, 0, 0, 0};
  double total = 0.0;
  for (const auto& v : votes) {
    for (int i = 0; i < 4; ++i)
      if (v.verdict == classes[i]) weight[i] += v.confidence;
    total += v.confidence;
  }
  int winner = 0;
  for (int i = 1; i < 4; ++i)
    if (weight[i] > weight[winner]) winner = i;
  confidence_out = total > 0.0 ? weight[winner] / total : 0.0;
  return classes[winner];
}

std::vector<JudgeVote> collect_votes(Backend& backend,
                                     const std::string& claim_text,
                                     const std::string& context_text, int n) {
  std::vector<JudgeVote> votes;
  for (int j = 0; j < n; ++j) {
    std::string reply =
        backend.complete(make_judge_request(claim_text, context_text, j));
    votes.push_back(parse_judge(reply, j));
  }
  return votes;
}

NamedAssertion boolean_abstraction(Claim& claim, Signature& sig) {
  std::string name = "b_" + std::to_string(claim.index);
  while (sig.has_symbol(name) || sig.find_func(name)) name += "_";
  sig.declare_constant(name, "Bool");
  claim.abstraction_var = name;

  NamedAssertion na;
  na.label = "soft_" + std::to_string(claim.index);
  na.formula = f_atom(name);
  na.origin = AssertionOrigin::Abstraction;
  na.claim_index = claim.index;
  return na;
}

void inject_bridging_axioms(const std::vector<std::string>& axiom_texts,
                            Signature& sig,
                            std::vector<NamedAssertion>& context,
                            std::vector<std::string>& alerts) {
  int next = 0;
  for (const auto& a : context)
    if (a.origin == AssertionOrigin::BridgingAxiom) ++next;
  for (const auto& text : axiom_texts) {
    try {
      ParsedFormula pf = parse_formula(text, sig, true);
      NamedAssertion na;
      na.label = "bridge_" + std::to_string(next++);
      na.formula = contains_quantifier(*pf.formula)
                       ? instantiate_quantifiers(pf.formula, sig)
                       : pf.formula;
      na.origin = AssertionOrigin::BridgingAxiom;
      context.push_back(std::move(na));
    } catch (const Error& e) {
      alerts.push_back("bridging axiom dropped: " + std::string(e.what()));
    }
  }
}

}  // namespace verge
