#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "verge/cascade.hpp"
#include "verge/claims.hpp"
#include "verge/gateway.hpp"
#include "verge/mcs.hpp"
#include "verge/scoring.hpp"
#include "verge/solver_bridge.hpp"

namespace verge {

struct RefineConfig {
  int t_max = 3;
  int k_samples = 3;
  double consensus_threshold = 0.70;
  int n_judges = 5;
  double tau_acc = 0.75;
  double epsilon = 0.01;
  int repair_rounds = 2;
  bool use_round_trip = true;
};

struct FeedbackBundle {
  std::vector<std::string> individual_errors;
  std::vector<FeedbackItem> joint_items;
  std::vector<std::string> weak_claims;
  std::vector<std::string> formalization_alerts;

  bool empty() const {
    return individual_errors.empty() && joint_items.empty() &&
           weak_claims.empty() && formalization_alerts.empty();
  }
  // Text form slotted into the next generation prompt.
  std::string render(const std::optional<std::vector<std::string>>& core) const;
};

struct IterationRecord {
  int t = 0;
  std::string answer_text;
  std::vector<Claim> claims;
  bool joint_sat = false;
  std::optional<std::vector<std::string>> core;
  std::optional<CorrectionResult> correction;
  AnswerScore score;
  FeedbackBundle feedback;
};

struct Trajectory {
  std::vector<IterationRecord> iterations;
  double best_score = 0.0;
  std::string best_answer;
  std::string terminal_reason;  // accepted | converged | budget-exhausted
};

bool detect_convergence(double prev, double curr, double epsilon);

// Entity extraction plus per-premise formalization, with up to
// config.repair_rounds greedy-correction repair rounds when the joint
// context is unsatisfiable. Throws Error(ContextIrreparable) when repairs
// run out; the caller then degrades SMT routing to soft.
std::pair<Signature, std::vector<NamedAssertion>> formalize_context(
    const std::vector<std::string>& premises, Backend& backend,
    SolverSession& solver, const RefineConfig& config,
    std::vector<std::string>& alerts);

// The full loop: generate, decompose, classify, consensus-formalize, verify,
// joint check, score, feed back, until accepted / converged / out of budget.
// Trace records (one JSON object per line) go to `trace` when non-null; they
// contain no wall-clock data, so identical inputs give identical traces.
Trajectory run(const std::vector<std::string>& context_premises,
               const std::string& query, const RefineConfig& config,
               Backend& backend, SolverSession& solver,
               std::ostream* trace = nullptr);

}  // namespace verge
