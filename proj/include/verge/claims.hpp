#pragma once

#include <optional>
#include <string>

#include "verge/formula.hpp"

namespace verge {

enum class ClaimType {
  Mathematical,
  Logical,
  Temporal,
  Probabilistic,
  Commonsense,
  Vague,
};

const char* claim_type_name(ClaimType t);

// Alias table for classifier output: MATHEMATICAL/MATH -> Mathematical,
// LOGICAL/LOGIC -> Logical, TEMPORAL/TIME -> Temporal, PROBABILISTIC/PROB ->
// Probabilistic, COMMONSENSE/COMMON -> Commonsense, VAGUE -> Vague.
// Case-insensitive; anything else maps to Vague (routes soft, the safe side).
ClaimType claim_type_from_string(const std::string& s);

enum class VerificationStatus {
  // formal path
  Entailed,
  Contradictory,
  Possible,
  Unknown,
  // soft path
  Supported,
  Plausible,
  Unsupported,
  Uncertain,
};

const char* status_name(VerificationStatus s);

struct JudgeVote {
  VerificationStatus verdict = VerificationStatus::Uncertain;
  double confidence = 0.0;
  int judge_id = 0;
};

struct Claim {
  int index = 0;
  std::string text;
  ClaimType type = ClaimType::Vague;
  FormulaPtr formalization;                 // after consensus, SMT route only
  std::optional<std::string> label;         // assertion label for the solver
  std::string abstraction_var;              // soft route, after abstraction
  double confidence = 0.9;
  VerificationStatus status = VerificationStatus::Unknown;
  bool hybrid_fallback = false;             // verified softly after an SMT error
};

}  // namespace verge
