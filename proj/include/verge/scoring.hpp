#pragma once

#include <vector>

#include "verge/claims.hpp"

namespace verge {

struct AnswerScore {
  std::vector<double> per_claim;
  double mean = 0.0;
  double std_dev = 0.0;       // population (divisor n)
  double penalty = 1.0;       // in [0.5, 1.0]
  double final_score = 0.0;   // mean * penalty
  bool joint_sat = false;
};

// Entailed -> 1.0, Supported -> 0.9, Possible -> 0.7, Plausible -> 0.7,
// everything else -> 0.0.
double claim_score(VerificationStatus status);

// mean * max(0.5, 1 - std/(mean + 0.01)); joint_sat is recorded, not folded
// into the number. Throws Error(EmptyAnswer) on an empty score list.
AnswerScore aggregate(const std::vector<double>& scores, bool joint_sat);

// final >= tau and joint-sat, both required; >= is inclusive.
bool accept(const AnswerScore& score, double tau_acc);

}  // namespace verge
