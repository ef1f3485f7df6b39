#include "verge/scoring.hpp"

#include <cmath>

#include "verge/errors.hpp"

namespace verge {

double claim_score(VerificationStatus status) {
  switch (status) {
    case VerificationStatus::Entailed:
      return 1.0;
    case VerificationStatus::Supported:
      return 0.9;
    case VerificationStatus::Possible:
    case VerificationStatus::Plausible:
      return 0.7;
    default:
      return 0.0;
  }
}

AnswerScore aggregate(const std::vector<double>& scores, bool joint_sat) {
  if (scores.empty())
    throw Error(ErrorCode::EmptyAnswer, "no claims to aggregate");
  AnswerScore out;
  out.per_claim = scores;
  out.joint_sat = joint_sat;
  double sum = 0.0;
  for (double s : scores) sum += s;
  out.mean = sum / scores.size();
  double var = 0.0;
  for (double s : scores) var += (s - out.mean) * (s - out.mean);
  out.std_dev = std::sqrt(var / scores.size());
  out.penalty = std::max(0.5, 1.0 - out.std_dev / (out.mean + 0.01));
  out.final_score = out.mean * out.penalty;
  return out;
}

bool accept(const AnswerScore& score, double tau_acc) {
  return score.final_score >= tau_acc && score.joint_sat;
}

}  // namespace verge
