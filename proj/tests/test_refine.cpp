#include <doctest.h>

#include <sstream>

#include "verge/refine.hpp"

using namespace verge;

namespace {

SolverSession& session() {
  static SolverSession s([] {
    SolverConfig cfg;
    cfg.path = VERGE_SMT_PATH;
    return cfg;
  }());
  return s;
}

const char* kEmptySig =
    R"({"sorts": [], "entities": [], "constants": [],
        "predicates": [], "functions": []})";

// one Int constant x, no sorts or predicates
const char* kIntSig =
    R"({"sorts": [], "entities": [],
        "constants": [{"name": "x", "sort": "Int"}],
        "predicates": [], "functions": []})";

ScriptedBackend accept_backend() {
  ScriptedBackend b;
  b.add(Stage::EntityExtract, "context", kIntSig);
  b.add(Stage::Formalize, "x is at least one.#0",
        "<smt>(assert (! (>= x 1) :named axiom_x))</smt>");
  b.add(Stage::Generate, "t=1", "x is positive.");
  b.add(Stage::Decompose, "x is positive.",
        R"([{"text": "x is at least one", "type": "MATH"}])");
  b.add(Stage::BridgingAxioms, "t=1", "<smt></smt>");
  for (int k = 0; k < 3; ++k)
    b.add(Stage::Formalize, "x is at least one#" + std::to_string(k),
          "<smt>(assert (>= x 1))</smt>");
  return b;
}

}  // namespace

TEST_CASE("convergence detector") {
  CHECK(detect_convergence(0.7, 0.7, 0.01));
  CHECK(detect_convergence(0.7, 0.705, 0.01));
  CHECK_FALSE(detect_convergence(0.7, 0.8, 0.01));
  CHECK_FALSE(detect_convergence(0.7, 0.69, 0.01));
}

TEST_CASE("feedback rendering covers every section") {
  FeedbackBundle fb;
  fb.individual_errors = {"claim 0 is Contradictory"};
  FeedbackItem item;
  item.claim_index = 1;
  item.claim_text = "bad claim";
  item.core_labels = {"a", "b"};
  item.directive = "Rewrite it.";
  fb.joint_items = {item};
  fb.weak_claims = {"claim 2 scored Possible"};
  fb.formalization_alerts = {"candidate dropped"};
  std::string text = fb.render(std::vector<std::string>{"a", "b"});
  CHECK(text.find("Unsat core") != std::string::npos);
  CHECK(text.find("Individually failed") != std::string::npos);
  CHECK(text.find("bad claim") != std::string::npos);
  CHECK(text.find("conflicts with: a b") != std::string::npos);
  CHECK(text.find("Weak claims") != std::string::npos);
  CHECK(text.find("Formalization alerts") != std::string::npos);
  CHECK_FALSE(FeedbackBundle{}.empty() == false);
}

TEST_CASE("an entailed answer is accepted on the first pass") {
  ScriptedBackend backend = accept_backend();
  RefineConfig cfg;
  Trajectory traj = run({"x is at least one."}, "Is x positive?", cfg, backend,
                        session());
  CHECK(traj.terminal_reason == "accepted");
  REQUIRE(traj.iterations.size() == 1);
  const IterationRecord& it = traj.iterations[0];
  REQUIRE(it.claims.size() == 1);
  CHECK(it.claims[0].status == VerificationStatus::Entailed);
  CHECK_FALSE(it.claims[0].hybrid_fallback);
  CHECK(it.joint_sat);
  CHECK(it.score.final_score == doctest::Approx(1.0));
  CHECK(traj.best_answer == "x is positive.");
  CHECK(traj.best_score == doctest::Approx(1.0));
  CHECK(it.feedback.empty());
}

TEST_CASE("stable low scores converge") {
  ScriptedBackend backend;
  backend.add(Stage::Generate, "t=1", "Maybe two.");
  backend.add(Stage::Generate, "t=2", "Probably two.");
  backend.add(Stage::Decompose, "Maybe two.",
              R"([{"text": "x could be two", "type": "VAGUE"}])");
  backend.add(Stage::Decompose, "Probably two.",
              R"([{"text": "x could be two", "type": "VAGUE"}])");
  backend.add(Stage::BridgingAxioms, "t=1", "<smt></smt>");
  backend.add(Stage::BridgingAxioms, "t=2", "<smt></smt>");
  backend.add(Stage::Judge, "x could be two#j0",
              R"({"verdict": "Plausible", "confidence": 0.8})");
  RefineConfig cfg;
  cfg.n_judges = 1;
  Trajectory traj = run({}, "What is x?", cfg, backend, session());
  CHECK(traj.terminal_reason == "converged");
  REQUIRE(traj.iterations.size() == 2);
  CHECK(traj.iterations[0].score.final_score == doctest::Approx(0.7));
  CHECK(traj.iterations[1].score.final_score == doctest::Approx(0.7));
  CHECK(traj.best_score == doctest::Approx(0.7));
  // feedback for a rejected iteration is never empty
  CHECK_FALSE(traj.iterations[0].feedback.empty());
  CHECK_FALSE(traj.iterations[0].feedback.weak_claims.empty());
}

TEST_CASE("the budget caps the loop") {
  ScriptedBackend backend;
  backend.add(Stage::Generate, "t=1", "First try.");
  backend.add(Stage::Generate, "t=2", "Second try.");
  backend.add(Stage::Decompose, "First try.",
              R"([{"text": "a fair guess", "type": "VAGUE"}])");
  backend.add(Stage::Decompose, "Second try.",
              R"([{"text": "a wild guess", "type": "VAGUE"}])");
  backend.add(Stage::BridgingAxioms, "t=1", "<smt></smt>");
  backend.add(Stage::BridgingAxioms, "t=2", "<smt></smt>");
  backend.add(Stage::Judge, "a fair guess#j0",
              R"({"verdict": "Plausible", "confidence": 0.8})");
  backend.add(Stage::Judge, "a wild guess#j0",
              R"({"verdict": "Uncertain", "confidence": 0.9})");
  RefineConfig cfg;
  cfg.n_judges = 1;
  cfg.t_max = 2;
  Trajectory traj = run({}, "What is x?", cfg, backend, session());
  CHECK(traj.terminal_reason == "budget-exhausted");
  REQUIRE(traj.iterations.size() == 2);
  CHECK(traj.best_score == doctest::Approx(0.7));
  CHECK(traj.best_answer == "First try.");
}

TEST_CASE("malformed decomposition is retried once") {
  ScriptedBackend backend;
  backend.add(Stage::Generate, "t=1", "ans");
  backend.add(Stage::Decompose, "ans", "no json at all");
  backend.add(Stage::Decompose, "ans#retry",
              R"([{"text": "a guess", "type": "VAGUE"}])");
  backend.add(Stage::BridgingAxioms, "t=1", "<smt></smt>");
  backend.add(Stage::Judge, "a guess#j0",
              R"({"verdict": "Supported", "confidence": 0.9})");
  RefineConfig cfg;
  cfg.n_judges = 1;
  cfg.t_max = 1;
  Trajectory traj = run({}, "q", cfg, backend, session());
  REQUIRE(traj.iterations.size() == 1);
  REQUIRE(traj.iterations[0].claims.size() == 1);
  CHECK(traj.iterations[0].claims[0].text == "a guess");
  CHECK(traj.terminal_reason == "accepted");
}

TEST_CASE("context repair re-formalizes the offending premise") {
  ScriptedBackend backend;
  backend.add(Stage::EntityExtract, "context", kEmptySig);
  backend.add(Stage::Formalize, "p holds.#0", "<smt>(assert p)</smt>");
  backend.add(Stage::Formalize, "p fails.#0", "<smt>(assert (not p))</smt>");
  backend.add(Stage::Formalize, "p fails.#0#r1", "<smt>(assert (not q))</smt>");
  RefineConfig cfg;
  std::vector<std::string> alerts;
  auto [sig, ctx] = formalize_context({"p holds.", "p fails."}, backend,
                                      session(), cfg, alerts);
  REQUIRE(ctx.size() == 2);
  CHECK(ctx[0].label == "axiom_0");
  CHECK(render(ctx[0].formula) == "p");
  CHECK(render(ctx[1].formula) == "(not q)");
  REQUIRE(alerts.size() == 1);
  CHECK(alerts[0].find("premise 1") != std::string::npos);
  CHECK(session().check(sig, ctx).verdict == Verdict::Sat);
}

TEST_CASE("an irreparable context degrades verification to the soft path") {
  ScriptedBackend backend;
  backend.add(Stage::EntityExtract, "context", kEmptySig);
  backend.add(Stage::Formalize, "p holds.#0", "<smt>(assert p)</smt>");
  backend.add(Stage::Formalize, "p fails.#0", "<smt>(assert (not p))</smt>");
  backend.add(Stage::Formalize, "p fails.#0#r1", "<smt>(assert (not p))</smt>");
  backend.add(Stage::Formalize, "p fails.#0#r2", "<smt>(assert (not p))</smt>");
  backend.add(Stage::Generate, "t=1", "p is true.");
  backend.add(Stage::Decompose, "p is true.",
              R"([{"text": "p holds", "type": "LOGICAL"}])");
  backend.add(Stage::BridgingAxioms, "t=1", "<smt></smt>");
  backend.add(Stage::Judge, "p holds#j0",
              R"({"verdict": "Supported", "confidence": 0.9})");
  RefineConfig cfg;
  cfg.n_judges = 1;
  cfg.t_max = 1;

  std::vector<std::string> alerts;
  CHECK_THROWS_AS(formalize_context({"p holds.", "p fails."}, backend,
                                    session(), cfg, alerts),
                  Error);

  Trajectory traj =
      run({"p holds.", "p fails."}, "Is p true?", cfg, backend, session());
  REQUIRE(traj.iterations.size() == 1);
  const Claim& c = traj.iterations[0].claims[0];
  CHECK(c.hybrid_fallback);
  CHECK(c.status == VerificationStatus::Supported);
  CHECK(traj.terminal_reason == "accepted");
}

TEST_CASE("formalization failure falls back to judges and is recorded") {
  ScriptedBackend backend;
  backend.add(Stage::Generate, "t=1", "ans");
  backend.add(Stage::Decompose, "ans",
              R"([{"text": "mystery claim", "type": "LOGICAL"}])");
  backend.add(Stage::BridgingAxioms, "t=1", "<smt></smt>");
  backend.add(Stage::Formalize, "mystery claim#0", "<smt></smt>");
  backend.add(Stage::Judge, "mystery claim#j0",
              R"({"verdict": "Supported", "confidence": 0.9})");
  RefineConfig cfg;
  cfg.n_judges = 1;
  cfg.k_samples = 1;
  cfg.t_max = 1;
  Trajectory traj = run({}, "q", cfg, backend, session());
  REQUIRE(traj.iterations.size() == 1);
  const Claim& c = traj.iterations[0].claims[0];
  CHECK(c.hybrid_fallback);
  CHECK(c.status == VerificationStatus::Supported);
  CHECK_FALSE(c.abstraction_var.empty());
  CHECK(traj.iterations[0].joint_sat);
  CHECK(traj.terminal_reason == "accepted");
}

TEST_CASE("identical runs produce byte-identical traces") {
  RefineConfig cfg;
  std::ostringstream first, second;
  {
    ScriptedBackend backend = accept_backend();
    run({"x is at least one."}, "Is x positive?", cfg, backend, session(),
        &first);
  }
  {
    ScriptedBackend backend = accept_backend();
    run({"x is at least one."}, "Is x positive?", cfg, backend, session(),
        &second);
  }
  CHECK(first.str() == second.str());
  CHECK_FALSE(first.str().empty());
  // one JSON object per line: context record, iterations, result record
  std::istringstream lines(first.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK(line.front() == '{');
    CHECK(line.back() == '}');
    ++count;
  }
  CHECK(count == 3);
}
