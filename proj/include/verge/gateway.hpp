#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "verge/claims.hpp"
#include "verge/errors.hpp"

namespace verge {

enum class Stage {
  Generate,
  Decompose,
  Classify,
  Formalize,
  Verbalize,
  Similarity,
  Judge,
  BridgingAxioms,
  EntityExtract,
};

const char* stage_name(Stage s);

struct Sampling {
  double temperature = 1.0;
  double top_p = 0.99;
  int max_tokens = 10000;
};

struct StageRequest {
  Stage stage = Stage::Generate;
  std::string prompt;   // full rendered prompt for network backends
  std::string key;      // salient-slot lookup key for the scripted backend
  Sampling sampling;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const StageRequest& req) = 0;
};

// Deterministic fixture backend: responses keyed by (stage, key). A missing
// key raises Error(FixtureMiss) naming both; there is no silent fallback.
class ScriptedBackend : public Backend {
 public:
  ScriptedBackend() = default;

  // JSON document: {"<stage>": {"<key>": "<response>", ...}, ...}
  static ScriptedBackend from_json(const std::string& json_text);
  static ScriptedBackend from_file(const std::string& path);

  // Populate before handing the backend to concurrent consumers; lookups
  // never mutate, so concurrent completes need no locking.
  void add(Stage stage, const std::string& key, const std::string& response);
  std::string complete(const StageRequest& req) override;

 private:
  std::map<std::pair<std::string, std::string>, std::string> responses_;
};

// OpenAI-compatible chat-completions client. Endpoint from config, API key
// from the VERGE_API_KEY environment variable. Network failures and 5xx
// retry 3 times with exponential backoff; 429 surfaces as RateLimited after
// the retries are exhausted.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string endpoint, std::string model);
  std::string complete(const StageRequest& req) override;

 private:
  std::string endpoint_;
  std::string model_;
};

// ---------------------------------------------------------------------------
// Structured-output parsers
// ---------------------------------------------------------------------------

// JSON list of {"text": ..., "type": ...}; throws MalformedOutput on anything
// else, including an empty list (an answer must decompose into >= 1 claim).
std::vector<std::pair<std::string, ClaimType>> parse_decomposition(
    const std::string& text);

// Extracts the region between <smt> and </smt> and strips (check-sat)
// commands. Without delimiters the whole text is returned for lenient
// parsing downstream. Throws MalformedOutput when nothing remains.
std::string parse_formalization(const std::string& text);

// {"verdict": ..., "confidence": ...}; confidence clamped into [0,1];
// malformed text degrades to (Uncertain, 0.0).
JudgeVote parse_judge(const std::string& text, int judge_id = 0);

// Entity-extraction output: {"sorts": [..], "entities": [{"name","sort"}],
// "constants": [{"name","sort"}], "predicates": [{"name","args"}],
// "functions": [{"name","args","result"}]}.
Signature parse_signature(const std::string& text);

// A bare number, clamped into [0,1]; malformed -> MalformedOutput.
double parse_similarity(const std::string& text);

// ---------------------------------------------------------------------------
// Prompt construction
// ---------------------------------------------------------------------------

StageRequest make_generate_request(const std::string& context,
                                   const std::string& query,
                                   const std::string& feedback, int t);
StageRequest make_decompose_request(const std::string& answer, bool retry);
StageRequest make_formalize_request(const std::string& claim_text,
                                    const std::string& declarations, int k,
                                    int repair_round = 0);
StageRequest make_verbalize_request(const std::string& formula_text);
StageRequest make_similarity_request(const std::string& claim_text,
                                     const std::string& verbalization);
StageRequest make_judge_request(const std::string& claim_text,
                                const std::string& context, int judge_id);
StageRequest make_bridging_request(const std::string& context,
                                   const std::string& claim_summary, int t);
StageRequest make_entity_extract_request(const std::string& context);

}  // namespace verge
