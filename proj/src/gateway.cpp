#include "verge/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include <httplib.h>

namespace verge {

using nlohmann::json;

const char* claim_type_name(ClaimType t) {
  switch (t) {
    case ClaimType::Mathematical: return "MATHEMATICAL";
    case ClaimType::Logical: return "LOGICAL";
    case ClaimType::Temporal: return "TEMPORAL";
    case ClaimType::Probabilistic: return "PROBABILISTIC";
    case ClaimType::Commonsense: return "COMMONSENSE";
    case ClaimType::Vague: return "VAGUE";
  }
  return "VAGUE";
}

ClaimType claim_type_from_string(const std::string& s) {
  std::string up;
  for (char c : s) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "MATHEMATICAL" || up == "MATH") return ClaimType::Mathematical;
  if (up == "LOGICAL" || up == "LOGIC") return ClaimType::Logical;
  if (up == "TEMPORAL" || up == "TIME") return ClaimType::Temporal;
  if (up == "PROBABILISTIC" || up == "PROB") return ClaimType::Probabilistic;
  if (up == "COMMONSENSE" || up == "COMMON") return ClaimType::Commonsense;
  return ClaimType::Vague;
}

const char* status_name(VerificationStatus s) {
  switch (s) {
    case VerificationStatus::Entailed: return "Entailed";
    case VerificationStatus::Contradictory: return "Contradictory";
    case VerificationStatus::Possible: return "Possible";
    case VerificationStatus::Unknown: return "Unknown";
    case VerificationStatus::Supported: return "Supported";
    case VerificationStatus::Plausible: return "Plausible";
    case VerificationStatus::Unsupported: return "Unsupported";
    case VerificationStatus::Uncertain: return "Uncertain";
  }
  return "Unknown";
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Generate: return "generate";
    case Stage::Decompose: return "decompose";
    case Stage::Classify: return "classify";
    case Stage::Formalize: return "formalize";
    case Stage::Verbalize: return "verbalize";
    case Stage::Similarity: return "similarity";
    case Stage::Judge: return "judge";
    case Stage::BridgingAxioms: return "bridging-axioms";
    case Stage::EntityExtract: return "entity-extract";
  }
  return "generate";
}

// ---------------------------------------------------------------------------
// ScriptedBackend
// ---------------------------------------------------------------------------

ScriptedBackend ScriptedBackend::from_json(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw Error(ErrorCode::ConfigError, "fixture file is not a JSON object");
  ScriptedBackend b;
  for (auto& [stage, entries] : doc.items()) {
    if (!entries.is_object())
      throw Error(ErrorCode::ConfigError,
                  "fixture stage '" + stage + "' is not an object");
    for (auto& [key, value] : entries.items()) {
      if (!value.is_string())
        throw Error(ErrorCode::ConfigError,
                    "fixture response for (" + stage + ", " + key +
                        ") is not a string");
      b.responses_[{stage, key}] = value.get<std::string>();
    }
  }
  return b;
}

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ConfigError, "cannot read fixture file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void ScriptedBackend::add(Stage stage, const std::string& key,
                          const std::string& response) {
  responses_[{stage_name(stage), key}] = response;
}

std::string ScriptedBackend::complete(const StageRequest& req) {
  auto it = responses_.find({stage_name(req.stage), req.key});
  if (it == responses_.end())
    throw Error(ErrorCode::FixtureMiss,
                std::string("no fixture response for stage '") +
                    stage_name(req.stage) + "' key '" + req.key + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// HttpBackend
// ---------------------------------------------------------------------------

HttpBackend::HttpBackend(std::string endpoint, std::string model)
    : endpoint_(std::move(endpoint)), model_(std::move(model)) {}

std::string HttpBackend::complete(const StageRequest& req) {
  // split endpoint into origin + path
  std::string origin = endpoint_, path = "/v1/chat/completions";
  size_t scheme = endpoint_.find("://");
  if (scheme != std::string::npos) {
    size_t slash = endpoint_.find('/', scheme + 3);
    if (slash != std::string::npos) {
      origin = endpoint_.substr(0, slash);
      path = endpoint_.substr(slash);
    }
  }

  json body = {
      {"model", model_},
      {"messages", json::array({{{"role", "user"}, {"content", req.prompt}}})},
      {"temperature", req.sampling.temperature},
      {"top_p", req.sampling.top_p},
      {"max_tokens", req.sampling.max_tokens},
  };
  httplib::Headers headers;
  if (const char* key = std::getenv("VERGE_API_KEY"); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  httplib::Client client(origin);
  client.set_read_timeout(120, 0);
  int backoff_ms = 500;
  bool rate_limited = false;
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (res && res->status == 200) {
      json reply = json::parse(res->body, nullptr, false);
      if (reply.is_discarded())
        throw Error(ErrorCode::ProtocolError, "gateway reply is not JSON");
      try {
        return reply.at("choices").at(0).at("message").at("content")
            .get<std::string>();
      } catch (const json::exception&) {
        throw Error(ErrorCode::ProtocolError,
                    "gateway reply missing choices[0].message.content");
      }
    }
    rate_limited = res && res->status == 429;
    if (res && res->status >= 400 && res->status < 500 && res->status != 429)
      throw Error(ErrorCode::NetworkError,
                  "gateway returned status " + std::to_string(res->status));
    std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
    backoff_ms *= 2;
  }
  if (rate_limited)
    throw Error(ErrorCode::RateLimited, "gateway rate limit persisted after retries");
  throw Error(ErrorCode::NetworkError,
              "gateway unreachable after 3 attempts: " + endpoint_);
}

// ---------------------------------------------------------------------------
// Parsers
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, ClaimType>> parse_decomposition(
    const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    // tolerate surrounding prose: take the outermost [...] block
    size_t a = text.find('[');
    size_t b = text.rfind(']');
    if (a != std::string::npos && b != std::string::npos && b > a)
      doc = json::parse(text.substr(a, b - a + 1), nullptr, false);
  }
  if (doc.is_discarded() || !doc.is_array())
    throw Error(ErrorCode::MalformedOutput,
                "decomposition is not a JSON list");
  std::vector<std::pair<std::string, ClaimType>> out;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("text") || !item["text"].is_string())
      throw Error(ErrorCode::MalformedOutput,
                  "decomposition entry missing \"text\"");
    std::string claim = item["text"].get<std::string>();
    if (claim.empty())
      throw Error(ErrorCode::MalformedOutput, "empty claim text");
    std::string type_str =
        item.contains("type") && item["type"].is_string()
            ? item["type"].get<std::string>()
            : "VAGUE";
    out.emplace_back(std::move(claim), claim_type_from_string(type_str));
  }
  if (out.empty())
    throw Error(ErrorCode::MalformedOutput,
                "an answer must decompose into at least one claim");
  return out;
}

std::string parse_formalization(const std::string& text) {
  std::string body = text;
  size_t open = text.find("<smt>");
  size_t close = text.find("</smt>");
  if (open != std::string::npos && close != std::string::npos && close > open)
    body = text.substr(open + 5, close - open - 5);
  // strip check-sat commands, which the template forbids anyway
  for (;;) {
    size_t at = body.find("(check-sat)");
    if (at == std::string::npos) break;
    body.erase(at, 11);
  }
  size_t s = body.find_first_not_of(" \t\r\n");
  size_t e = body.find_last_not_of(" \t\r\n");
  if (s == std::string::npos)
    throw Error(ErrorCode::MalformedOutput, "formalization output is empty");
  return body.substr(s, e - s + 1);
}

JudgeVote parse_judge(const std::string& text, int judge_id) {
  JudgeVote vote;
  vote.judge_id = judge_id;
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    size_t a = text.find('{');
    size_t b = text.rfind('}');
    if (a != std::string::npos && b != std::string::npos && b > a)
      doc = json::parse(text.substr(a, b - a + 1), nullptr, false);
  }
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("verdict") ||
      !doc["verdict"].is_string())
    return vote;  // (Uncertain, 0.0)
  std::string v = doc["verdict"].get<std::string>();
  std::string low;
  for (char c : v) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "supported")
    vote.verdict = VerificationStatus::Supported;
  else if (low == "plausible")
    vote.verdict = VerificationStatus::Plausible;
  else if (low == "unsupported")
    vote.verdict = VerificationStatus::Unsupported;
  else if (low == "uncertain")
    vote.verdict = VerificationStatus::Uncertain;
  else
    return JudgeVote{VerificationStatus::Uncertain, 0.0, judge_id};
  double conf = 0.0;
  if (doc.contains("confidence") && doc["confidence"].is_number())
    conf = doc["confidence"].get<double>();
  vote.confidence = std::clamp(conf, 0.0, 1.0);
  return vote;
}

Signature parse_signature(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw Error(ErrorCode::MalformedOutput,
                "entity extraction is not a JSON object");
  Signature sig;
  if (doc.contains("sorts"))
    for (const auto& s : doc["sorts"]) sig.declare_sort(s.get<std::string>());
  if (doc.contains("entities"))
    for (const auto& e : doc["entities"])
      sig.declare_entity(e.at("name").get<std::string>(),
                         e.at("sort").get<std::string>());
  if (doc.contains("constants"))
    for (const auto& c : doc["constants"])
      sig.declare_constant(c.at("name").get<std::string>(),
                           c.at("sort").get<std::string>());
  if (doc.contains("predicates"))
    for (const auto& p : doc["predicates"]) {
      std::vector<std::string> args;
      for (const auto& a : p.at("args")) args.push_back(a.get<std::string>());
      sig.declare_predicate(p.at("name").get<std::string>(), std::move(args));
    }
  if (doc.contains("functions"))
    for (const auto& f : doc["functions"]) {
      std::vector<std::string> args;
      for (const auto& a : f.at("args")) args.push_back(a.get<std::string>());
      sig.declare_function(f.at("name").get<std::string>(), std::move(args),
                           f.at("result").get<std::string>());
    }
  return sig;
}

double parse_similarity(const std::string& text) {
  try {
    double v = std::stod(text);
    return std::clamp(v, 0.0, 1.0);
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedOutput,
                "similarity output is not a number: " + text);
  }
}

// ---------------------------------------------------------------------------
// Prompt construction
// ---------------------------------------------------------------------------

namespace {

StageRequest make(Stage stage, std::string prompt, std::string key) {
  StageRequest req;
  req.stage = stage;
  req.prompt = std::move(prompt);
  req.key = std::move(key);
  return req;
}

}  // namespace

StageRequest make_generate_request(const std::string& context,
                                   const std::string& query,
                                   const std::string& feedback, int t) {
  std::string prompt =
      "Context:\n" + context + "\n\nQuestion:\n" + query + "\n\n";
  if (!feedback.empty())
    prompt +=
        "Your previous answer failed verification. Address every item of "
        "feedback below, keep correct claims, and rewrite the faulty "
        "ones.\n\nFeedback:\n" + feedback + "\n\n";
  prompt += "Answer the question with a short, factual response.";
  return make(Stage::Generate, std::move(prompt), "t=" + std::to_string(t));
}

StageRequest make_decompose_request(const std::string& answer, bool retry) {
  std::string prompt =
      "Decompose the following answer into atomic claims. Each claim must be "
      "a minimal self-contained statement with an independent truth value. "
      "Classify each claim as one of MATHEMATICAL, LOGICAL, TEMPORAL, "
      "PROBABILISTIC, COMMONSENSE, VAGUE. Output a JSON list of objects "
      "{\"text\": string, \"type\": string} and nothing else.\n\nAnswer:\n" +
      answer;
  if (retry)
    prompt +=
        "\n\nReminder: output only the JSON list, with both \"text\" and "
        "\"type\" on every entry.";
  return make(Stage::Decompose, std::move(prompt),
              retry ? answer + "#retry" : answer);
}

StageRequest make_formalize_request(const std::string& claim_text,
                                    const std::string& declarations, int k,
                                    int repair_round) {
  std::string prompt =
      "Translate the claim into a single SMT-LIB2 assertion using only the "
      "declared vocabulary. Use (set-logic ALL) conventions; use "
      "uninterpreted functions for ambiguous notions. Do not include "
      "(check-sat). Output: <smt> ... </smt>.\n\nDeclarations:\n" +
      declarations + "\nClaim:\n" + claim_text;
  std::string key = claim_text + "#" + std::to_string(k);
  if (repair_round > 0) {
    prompt +=
        "\n\nYour previous formalization was rejected; produce a corrected "
        "one.";
    key += "#r" + std::to_string(repair_round);
  }
  return make(Stage::Formalize, std::move(prompt), std::move(key));
}

StageRequest make_verbalize_request(const std::string& formula_text) {
  return make(Stage::Verbalize,
              "State the following formula as one plain-English sentence:\n" +
                  formula_text,
              formula_text);
}

StageRequest make_similarity_request(const std::string& claim_text,
                                     const std::string& verbalization) {
  return make(Stage::Similarity,
              "Rate the semantic similarity of the two sentences on [0,1]. "
              "Output only the number.\nA: " + claim_text +
                  "\nB: " + verbalization,
              claim_text);
}

StageRequest make_judge_request(const std::string& claim_text,
                                const std::string& context, int judge_id) {
  return make(Stage::Judge,
              "Given the context, judge the claim. Verdict must be one of "
              "Supported, Plausible, Unsupported, Uncertain. Output JSON "
              "{\"verdict\": string, \"confidence\": number}. (assessment "
              "nonce " + std::to_string(judge_id) + ")\n\nContext:\n" +
                  context + "\nClaim:\n" + claim_text,
              claim_text + "#j" + std::to_string(judge_id));
}

StageRequest make_bridging_request(const std::string& context,
                                   const std::string& claim_summary, int t) {
  return make(Stage::BridgingAxioms,
              "Produce SMT-LIB2 assertions that link vague predicates in the "
              "claims to the formal vocabulary (for example bounds implied by "
              "words like \"small\"), plus any domain constraints the context "
              "leaves implicit. Output zero or more assertions inside <smt> "
              "... </smt>.\n\nContext:\n" + context + "\nClaims:\n" +
                  claim_summary,
              "t=" + std::to_string(t));
}

StageRequest make_entity_extract_request(const std::string& context) {
  return make(Stage::EntityExtract,
              "Extract the signature from the context: sorts, named entities, "
              "integer constants, predicates and functions. Output JSON "
              "{\"sorts\": [...], \"entities\": [{\"name\",\"sort\"}], "
              "\"constants\": [...], \"predicates\": [{\"name\",\"args\"}], "
              "\"functions\": [{\"name\",\"args\",\"result\"}]}.\n\n"
              "Context:\n" + context,
              "context");
}

}  // namespace verge
