#include "verge/refine.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "verge/equivalence.hpp"
#include "verge/sexpr.hpp"

namespace verge {

using ordered_json = nlohmann::ordered_json;

bool detect_convergence(double prev, double curr, double epsilon) {
  double delta = curr - prev;
  if (delta < 0) delta = -delta;
  return delta < epsilon;
}

std::string FeedbackBundle::render(
    const std::optional<std::vector<std::string>>& core) const {
  std::string out;
  if (core && !core->empty()) {
    out += "Unsat core (conflicting assertion labels):\n";
    for (const auto& label : *core) out += "  - " + label + "\n";
  }
  if (!individual_errors.empty()) {
    out += "Individually failed claims:\n";
    for (const auto& e : individual_errors) out += "  - " + e + "\n";
  }
  if (!joint_items.empty()) {
    out += "Correction set (remove or rewrite these claims to restore "
           "consistency):\n";
    for (const auto& item : joint_items) {
      out += "  - claim " + std::to_string(item.claim_index) + ": \"" +
             item.claim_text + "\". " + item.directive + "\n";
      if (!item.core_labels.empty()) {
        out += "    conflicts with:";
        for (const auto& l : item.core_labels) out += " " + l;
        out += "\n";
      }
    }
  }
  if (!weak_claims.empty()) {
    out += "Weak claims (low verification score, strengthen or replace):\n";
    for (const auto& w : weak_claims) out += "  - " + w + "\n";
  }
  if (!formalization_alerts.empty()) {
    out += "Formalization alerts:\n";
    for (const auto& a : formalization_alerts) out += "  - " + a + "\n";
  }
  return out;
}

namespace {

std::string join_premises(const std::vector<std::string>& premises) {
  std::string out;
  for (size_t i = 0; i < premises.size(); ++i) {
    if (i) out += "\n";
    out += premises[i];
  }
  return out;
}

struct FormalizedPremise {
  NamedAssertion assertion;
  int premise_index;
};

NamedAssertion formalize_one_premise(const std::string& premise, int index,
                                     Signature& sig, Backend& backend,
                                     int repair_round) {
  std::string resp = backend.complete(make_formalize_request(
      premise, render_declarations(sig), 0, repair_round));
  std::string body = parse_formalization(resp);
  ParsedFormula pf = parse_formula(body, sig, true);
  NamedAssertion na;
  na.label = pf.label.value_or("axiom_" + std::to_string(index));
  na.formula = contains_quantifier(*pf.formula)
                   ? instantiate_quantifiers(pf.formula, sig)
                   : pf.formula;
  na.origin = AssertionOrigin::ContextAxiom;
  return na;
}

}  // namespace

std::pair<Signature, std::vector<NamedAssertion>> formalize_context(
    const std::vector<std::string>& premises, Backend& backend,
    SolverSession& solver, const RefineConfig& config,
    std::vector<std::string>& alerts) {
  Signature sig;
  std::string joined = join_premises(premises);
  if (!premises.empty()) {
    std::string resp = backend.complete(make_entity_extract_request(joined));
    sig = parse_signature(resp);
  }

  std::vector<NamedAssertion> assertions;
  for (size_t i = 0; i < premises.size(); ++i)
    assertions.push_back(formalize_one_premise(
        premises[i], static_cast<int>(i), sig, backend, 0));

  for (int round = 0; round <= config.repair_rounds; ++round) {
    if (assertions.empty()) break;
    CheckResult r = solver.check(sig, assertions, true);
    if (r.verdict == Verdict::Sat) return {std::move(sig), std::move(assertions)};
    if (round == config.repair_rounds) break;

    // find the offending premises with a greedy correction over the premises
    // themselves, then send them back for re-formalization
    std::vector<Claim> pseudo(assertions.size());
    for (size_t i = 0; i < assertions.size(); ++i) {
      pseudo[i].index = static_cast<int>(i);
      pseudo[i].confidence = 0.9;
      pseudo[i].text = premises[i];
    }
    CorrectionResult cr =
        greedy_mcs({}, pseudo, assertions, sig, solver);
    if (cr.mcs.empty()) break;
    for (int idx : cr.mcs) {
      alerts.push_back("context premise " + std::to_string(idx) +
                       " re-formalized during repair");
      assertions[idx] = formalize_one_premise(premises[idx], idx, sig, backend,
                                              round + 1);
    }
  }
  if (premises.empty()) return {std::move(sig), std::move(assertions)};
  throw Error(ErrorCode::ContextIrreparable,
              "context still unsatisfiable after " +
                  std::to_string(config.repair_rounds) + " repair rounds");
}

namespace {

void verify_claim_soft(Claim& claim, const std::string& context_text,
                       Backend& backend, int n_judges) {
  std::vector<JudgeVote> votes =
      collect_votes(backend, claim.text, context_text, n_judges);
  double conf = 0.0;
  claim.status = verify_soft(votes, conf);
  claim.confidence = conf;
}

// Consensus formalization + SMT probes for one claim; falls back to the soft
// path on formalization or solver failure.
void verify_claim_smt(Claim& claim, Signature& sig,
                      const std::vector<NamedAssertion>& working_context,
                      const std::string& context_text, Backend& backend,
                      SolverSession& solver, const RefineConfig& config,
                      std::vector<std::string>& alerts,
                      std::vector<std::string>& core_out) {
  CandidateSet cands;
  cands.claim_index = claim.index;
  cands.K = config.k_samples;
  std::vector<std::optional<std::string>> labels;
  for (int k = 0; k < config.k_samples; ++k) {
    try {
      std::string resp = backend.complete(
          make_formalize_request(claim.text, render_declarations(sig), k));
      std::string body = parse_formalization(resp);
      ParsedFormula pf = parse_formula(body, sig, true);
      cands.candidates.emplace_back(pf.formula, body);
      labels.push_back(pf.label);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::FixtureMiss) throw;
      alerts.push_back("claim " + std::to_string(claim.index) +
                       " candidate " + std::to_string(k) +
                       " dropped: " + e.what());
    }
  }
  if (cands.candidates.empty()) {
    alerts.push_back("claim " + std::to_string(claim.index) +
                     ": no valid formalization candidate, verified softly");
    claim.hybrid_fallback = true;
    verify_claim_soft(claim, context_text, backend, config.n_judges);
    return;
  }

  std::optional<double> similarity;
  if (config.use_round_trip)
    similarity = round_trip_similarity(render(cands.candidates[0].first),
                                       claim.text, backend);
  ConsensusResult cons = consensus(cands, sig, solver,
                                   config.consensus_threshold, similarity);
  if (!cons.accepted) {
    alerts.push_back("claim " + std::to_string(claim.index) +
                     ": no formalization consensus (clique " +
                     std::to_string(cons.clique_size) + "), verified softly");
    claim.hybrid_fallback = true;
    verify_claim_soft(claim, context_text, backend, config.n_judges);
    return;
  }
  claim.formalization = cons.representative;
  claim.confidence = cons.confidence;
  for (size_t i = 0; i < cands.candidates.size(); ++i)
    if (cands.candidates[i].first == cons.representative && labels[i]) {
      claim.label = labels[i];
      break;
    }

  try {
    SmtOutcome outcome = verify_smt(claim, working_context, sig, solver);
    claim.status = outcome.status;
    core_out = outcome.core;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InconsistentContext) throw;
    alerts.push_back("claim " + std::to_string(claim.index) +
                     ": solver failure (" + e.what() + "), verified softly");
    claim.hybrid_fallback = true;
    verify_claim_soft(claim, context_text, backend, config.n_judges);
  }
}

std::vector<std::string> parse_bridging(const std::string& resp,
                                        std::vector<std::string>& alerts) {
  std::string body;
  try {
    body = parse_formalization(resp);
  } catch (const Error&) {
    return {};  // no assertions offered
  }
  std::vector<std::string> out;
  try {
    for (const SExpr& e : parse_sexpr_list(body)) out.push_back(e.to_string());
  } catch (const Error& e) {
    alerts.push_back(std::string("bridging axioms unparseable: ") + e.what());
  }
  return out;
}

ordered_json claims_to_json(const std::vector<Claim>& claims) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : claims) {
    ordered_json j;
    j["index"] = c.index;
    j["text"] = c.text;
    j["type"] = claim_type_name(c.type);
    j["route"] = route(c.type) == Route::SmtVerify ? "smt" : "soft";
    j["status"] = status_name(c.status);
    j["confidence"] = c.confidence;
    if (c.label) j["label"] = *c.label;
    if (!c.abstraction_var.empty()) j["abstraction_var"] = c.abstraction_var;
    j["hybrid_fallback"] = c.hybrid_fallback;
    arr.push_back(std::move(j));
  }
  return arr;
}

void write_iteration_trace(std::ostream* trace, const IterationRecord& rec) {
  if (!trace) return;
  ordered_json j;
  j["type"] = "iteration";
  j["t"] = rec.t;
  j["answer"] = rec.answer_text;
  j["claims"] = claims_to_json(rec.claims);
  j["joint_sat"] = rec.joint_sat;
  if (rec.core) j["core"] = *rec.core;
  if (rec.correction) {
    ordered_json c;
    c["mss"] = rec.correction->mss;
    c["mcs"] = rec.correction->mcs;
    c["uncertain"] = rec.correction->uncertain;
    c["sat_calls"] = rec.correction->sat_calls;
    c["order_used"] = rec.correction->order_used;
    j["correction"] = std::move(c);
  }
  ordered_json s;
  s["mean"] = rec.score.mean;
  s["std_dev"] = rec.score.std_dev;
  s["penalty"] = rec.score.penalty;
  s["final"] = rec.score.final_score;
  j["score"] = std::move(s);
  ordered_json f;
  f["individual_errors"] = rec.feedback.individual_errors;
  ordered_json items = ordered_json::array();
  for (const auto& item : rec.feedback.joint_items) {
    ordered_json ij;
    ij["claim_index"] = item.claim_index;
    ij["claim_text"] = item.claim_text;
    ij["core_labels"] = item.core_labels;
    ij["solver_uncertain"] = item.solver_uncertain;
    items.push_back(std::move(ij));
  }
  f["joint_items"] = std::move(items);
  f["weak_claims"] = rec.feedback.weak_claims;
  f["formalization_alerts"] = rec.feedback.formalization_alerts;
  j["feedback"] = std::move(f);
  *trace << j.dump() << "\n";
  trace->flush();
}

}  // namespace

Trajectory run(const std::vector<std::string>& context_premises,
               const std::string& query, const RefineConfig& config,
               Backend& backend, SolverSession& solver, std::ostream* trace) {
  Trajectory traj;
  std::string context_text = join_premises(context_premises);

  Signature base_sig;
  std::vector<NamedAssertion> base_context;
  std::vector<std::string> context_alerts;
  bool smt_degraded = false;
  try {
    std::tie(base_sig, base_context) = formalize_context(
        context_premises, backend, solver, config, context_alerts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ContextIrreparable) throw;
    smt_degraded = true;
    base_sig = Signature();
    base_context.clear();
    context_alerts.push_back(
        "context irreparable; all claims verified softly for this problem");
  }
  if (trace) {
    ordered_json j;
    j["type"] = "context";
    j["premises"] = static_cast<int>(context_premises.size());
    j["assertions"] = static_cast<int>(base_context.size());
    j["smt_degraded"] = smt_degraded;
    j["alerts"] = context_alerts;
    *trace << j.dump() << "\n";
  }

  std::string feedback_text;
  double prev_score = 0.0;

  for (int t = 1; t <= config.t_max; ++t) {
    IterationRecord rec;
    rec.t = t;
    rec.answer_text = backend.complete(
        make_generate_request(context_text, query, feedback_text, t));

    std::vector<std::pair<std::string, ClaimType>> decomposed;
    try {
      decomposed = parse_decomposition(
          backend.complete(make_decompose_request(rec.answer_text, false)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MalformedOutput) throw;
      decomposed = parse_decomposition(
          backend.complete(make_decompose_request(rec.answer_text, true)));
    }

    Signature sig = base_sig;  // per-iteration copy; lenient parses extend it
    std::vector<NamedAssertion> working = base_context;
    std::vector<std::string> alerts =
        t == 1 ? context_alerts : std::vector<std::string>{};

    for (size_t i = 0; i < decomposed.size(); ++i) {
      Claim c;
      c.index = static_cast<int>(i);
      c.text = decomposed[i].first;
      c.type = decomposed[i].second;
      rec.claims.push_back(std::move(c));
    }

    std::string claim_summary;
    for (const auto& c : rec.claims) claim_summary += c.text + "\n";
    std::vector<std::string> bridging_texts = parse_bridging(
        backend.complete(make_bridging_request(context_text, claim_summary, t)),
        alerts);
    inject_bridging_axioms(bridging_texts, sig, working, alerts);

    std::vector<std::vector<std::string>> claim_cores(rec.claims.size());
    for (auto& claim : rec.claims) {
      if (smt_degraded || route(claim.type) == Route::SoftVerify) {
        if (smt_degraded && route(claim.type) == Route::SmtVerify)
          claim.hybrid_fallback = true;
        verify_claim_soft(claim, context_text, backend, config.n_judges);
      } else {
        verify_claim_smt(claim, sig, working, context_text, backend, solver,
                         config, alerts, claim_cores[claim.index]);
      }
    }

    // joint consistency over the non-rejected claims
    std::vector<Claim*> joint_claims;
    std::vector<NamedAssertion> joint_assertions;
    for (auto& claim : rec.claims) {
      if (claim.formalization &&
          (claim.status == VerificationStatus::Entailed ||
           claim.status == VerificationStatus::Possible)) {
        joint_claims.push_back(&claim);
        joint_assertions.push_back(claim_assertion(claim, sig));
      } else if (claim.status == VerificationStatus::Supported ||
                 claim.status == VerificationStatus::Plausible) {
        joint_claims.push_back(&claim);
        joint_assertions.push_back(boolean_abstraction(claim, sig));
      }
    }
    std::vector<NamedAssertion> joint_set = working;
    joint_set.insert(joint_set.end(), joint_assertions.begin(),
                     joint_assertions.end());
    CheckResult joint = solver.check(sig, joint_set, true);
    rec.joint_sat = joint.verdict == Verdict::Sat;
    if (joint.verdict == Verdict::Unsat) {
      rec.core = joint.core;
      std::vector<Claim> flat;
      for (Claim* c : joint_claims) flat.push_back(*c);
      rec.correction =
          greedy_mcs(working, flat, joint_assertions, sig, solver);
    }

    std::vector<double> scores;
    for (const auto& claim : rec.claims)
      scores.push_back(claim_score(claim.status));
    rec.score = aggregate(scores, rec.joint_sat);

    if (rec.score.final_score > traj.best_score ||
        traj.iterations.empty()) {
      traj.best_score = std::max(traj.best_score, rec.score.final_score);
      traj.best_answer = rec.answer_text;
    }

    bool accepted = accept(rec.score, config.tau_acc);
    if (!accepted) {
      FeedbackBundle& fb = rec.feedback;
      for (const auto& claim : rec.claims) {
        if (claim.status == VerificationStatus::Contradictory ||
            claim.status == VerificationStatus::Unknown ||
            claim.status == VerificationStatus::Unsupported ||
            claim.status == VerificationStatus::Uncertain) {
          std::string entry = "claim " + std::to_string(claim.index) + " \"" +
                              claim.text + "\" is " +
                              status_name(claim.status);
          if (!claim_cores[claim.index].empty()) {
            entry += " (core:";
            for (const auto& l : claim_cores[claim.index]) entry += " " + l;
            entry += ")";
          }
          fb.individual_errors.push_back(std::move(entry));
        }
      }
      if (rec.correction) {
        std::vector<Claim> flat;
        for (Claim* c : joint_claims) flat.push_back(*c);
        fb.joint_items = format_feedback(*rec.correction, rec.core, flat);
      }
      if (rec.joint_sat && rec.score.final_score < config.tau_acc) {
        std::vector<const Claim*> weak;
        for (const auto& claim : rec.claims)
          if (claim_score(claim.status) <= 0.7) weak.push_back(&claim);
        std::stable_sort(weak.begin(), weak.end(),
                         [](const Claim* a, const Claim* b) {
                           return claim_score(a->status) <
                                  claim_score(b->status);
                         });
        for (const Claim* c : weak)
          fb.weak_claims.push_back("claim " + std::to_string(c->index) +
                                   " \"" + c->text + "\" scored " +
                                   status_name(c->status));
      }
      fb.formalization_alerts = alerts;
      if (fb.empty())
        fb.weak_claims.push_back(
            "answer not accepted; improve the weakest claims");
    }

    write_iteration_trace(trace, rec);
    double curr_score = rec.score.final_score;
    traj.iterations.push_back(std::move(rec));

    if (accepted) {
      traj.terminal_reason = "accepted";
      break;
    }
    if (t >= 2 && detect_convergence(prev_score, curr_score, config.epsilon)) {
      traj.terminal_reason = "converged";
      break;
    }
    if (t == config.t_max) {
      traj.terminal_reason = "budget-exhausted";
      break;
    }
    prev_score = curr_score;
    feedback_text =
        traj.iterations.back().feedback.render(traj.iterations.back().core);
  }

  if (trace) {
    ordered_json j;
    j["type"] = "result";
    j["terminal"] = traj.terminal_reason;
    j["best_score"] = traj.best_score;
    j["best_answer"] = traj.best_answer;
    j["iterations"] = static_cast<int>(traj.iterations.size());
    *trace << j.dump() << "\n";
    trace->flush();
  }
  return traj;
}

}  // namespace verge
