#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "verge/equivalence.hpp"
#include "verge/mcs.hpp"
#include "verge/refine.hpp"

namespace {

using nlohmann::json;
using namespace verge;

struct CommonOpts {
  std::string config_path;
  std::string backend_name = "scripted";
  std::string fixtures_path;
  std::string solver_path;
  int timeout_ms = 0;
};

struct FullConfig {
  SolverConfig solver;
  RefineConfig refine;
  std::string endpoint;
  std::string model = "default";
};

FullConfig load_config(const CommonOpts& opts) {
  FullConfig cfg;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in)
      throw Error(ErrorCode::ConfigError,
                  "cannot read config file " + opts.config_path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
      throw Error(ErrorCode::ConfigError,
                  opts.config_path + ": not valid JSON");
    if (doc.contains("solver")) {
      const json& s = doc["solver"];
      if (s.contains("path")) cfg.solver.path = s["path"].get<std::string>();
      if (s.contains("args"))
        for (const auto& a : s["args"])
          cfg.solver.args.push_back(a.get<std::string>());
      if (s.contains("timeout_ms")) cfg.solver.timeout_ms = s["timeout_ms"];
      if (s.contains("pool_size")) cfg.solver.pool_size = s["pool_size"];
      if (s.contains("logic")) cfg.solver.logic = s["logic"].get<std::string>();
    }
    if (doc.contains("gateway")) {
      const json& g = doc["gateway"];
      if (g.contains("endpoint"))
        cfg.endpoint = g["endpoint"].get<std::string>();
      if (g.contains("model")) cfg.model = g["model"].get<std::string>();
    }
    if (doc.contains("refine")) {
      const json& r = doc["refine"];
      if (r.contains("t_max")) cfg.refine.t_max = r["t_max"];
      if (r.contains("k_samples")) cfg.refine.k_samples = r["k_samples"];
      if (r.contains("consensus_threshold"))
        cfg.refine.consensus_threshold = r["consensus_threshold"];
      if (r.contains("n_judges")) cfg.refine.n_judges = r["n_judges"];
      if (r.contains("tau_acc")) cfg.refine.tau_acc = r["tau_acc"];
      if (r.contains("epsilon")) cfg.refine.epsilon = r["epsilon"];
      if (r.contains("repair_rounds"))
        cfg.refine.repair_rounds = r["repair_rounds"];
      if (r.contains("use_round_trip"))
        cfg.refine.use_round_trip = r["use_round_trip"];
    }
  }
  if (!opts.solver_path.empty()) cfg.solver.path = opts.solver_path;
  if (opts.timeout_ms > 0) cfg.solver.timeout_ms = opts.timeout_ms;
  cfg.solver = resolve_solver_config(cfg.solver);
  return cfg;
}

std::unique_ptr<Backend> make_backend(const CommonOpts& opts,
                                      const FullConfig& cfg) {
  if (opts.backend_name == "scripted") {
    if (opts.fixtures_path.empty())
      throw Error(ErrorCode::ConfigError,
                  "the scripted backend needs --fixtures <file>");
    return std::make_unique<ScriptedBackend>(
        ScriptedBackend::from_file(opts.fixtures_path));
  }
  if (opts.backend_name == "http") {
    if (cfg.endpoint.empty())
      throw Error(ErrorCode::ConfigError,
                  "the http backend needs gateway.endpoint in the config");
    return std::make_unique<HttpBackend>(cfg.endpoint, cfg.model);
  }
  throw Error(ErrorCode::ConfigError,
              "unknown backend '" + opts.backend_name + "'");
}

struct Problem {
  std::vector<std::string> context;
  std::string query;
};

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ConfigError, "cannot read problem file " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("query"))
    throw Error(ErrorCode::ConfigError, path + ": expected {context, query}");
  Problem p;
  if (doc.contains("context"))
    for (const auto& c : doc["context"])
      p.context.push_back(c.get<std::string>());
  p.query = doc["query"].get<std::string>();
  if (p.query.empty())
    throw Error(ErrorCode::ConfigError, path + ": query is empty");
  return p;
}

int run_one_problem(const std::string& path, const CommonOpts& opts,
                    const FullConfig& cfg, const std::string& trace_out) {
  Problem p = load_problem(path);
  auto backend = make_backend(opts, cfg);
  SolverSession solver(cfg.solver);

  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (!trace_out.empty()) {
    trace_file.open(trace_out);
    if (!trace_file)
      throw Error(ErrorCode::ConfigError, "cannot write trace to " + trace_out);
    trace = &trace_file;
  }

  Trajectory traj = run(p.context, p.query, cfg.refine, *backend, solver, trace);
  std::cout << "terminal: " << traj.terminal_reason << "\n";
  std::cout << "iterations: " << traj.iterations.size() << "\n";
  std::cout << "best score: " << traj.best_score << "\n";
  std::cout << "best answer: " << traj.best_answer << "\n";
  return traj.terminal_reason == "accepted" ? 0 : 2;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Claims for the standalone mcs command come from a script whose assertions
// carry :confidence attributes.
std::pair<std::vector<Claim>, std::vector<NamedAssertion>> claims_from_script(
    const Script& script) {
  std::vector<Claim> claims;
  std::vector<NamedAssertion> assertions;
  for (size_t i = 0; i < script.assertions.size(); ++i) {
    Claim c;
    c.index = static_cast<int>(i);
    c.text = script.assertions[i].label;
    auto it = script.confidences.find(script.assertions[i].label);
    c.confidence = it != script.confidences.end() ? it->second : 0.9;
    claims.push_back(std::move(c));
    NamedAssertion na = script.assertions[i];
    na.origin = AssertionOrigin::Claim;
    na.claim_index = static_cast<int>(i);
    assertions.push_back(std::move(na));
  }
  return {std::move(claims), std::move(assertions)};
}

int cmd_mcs(const std::string& context_path, const std::string& claims_path,
            bool exact, int limit, const CommonOpts& opts) {
  FullConfig cfg = load_config(opts);
  Script context_script = parse_script(read_file(context_path));
  Script claims_script = parse_script(read_file(claims_path));

  // one signature for both scripts: re-declare the claims script's extras
  Signature sig = context_script.sig;
  for (const auto& s : claims_script.sig.sorts())
    if (s.kind == SortKind::Uninterpreted && !sig.has_sort(s.name))
      sig.declare_sort(s.name);
  for (const auto& [n, srt] : claims_script.sig.constants())
    if (!sig.has_symbol(n)) sig.declare_constant(n, srt);
  for (const auto& fd : claims_script.sig.functions())
    if (!sig.find_func(fd.name))
      sig.declare_function(fd.name, fd.arg_sorts, fd.result_sort);

  auto [claims, assertions] = claims_from_script(claims_script);
  SolverSession solver(cfg.solver);

  CorrectionResult greedy = greedy_mcs(context_script.assertions, claims,
                                       assertions, sig, solver);
  auto label_of = [&](int idx) { return assertions[idx].label; };
  std::cout << "greedy sat calls: " << greedy.sat_calls << "\n";
  if (greedy.mcs.empty()) {
    std::cout << "MCS empty (all claims jointly satisfiable)\n";
  } else {
    std::cout << "MCS:";
    for (int i : greedy.mcs) std::cout << " " << label_of(i);
    std::cout << "\n";
  }
  std::cout << "MSS:";
  for (int i : greedy.mss) std::cout << " " << label_of(i);
  std::cout << "\n";
  if (!greedy.uncertain.empty()) {
    std::cout << "solver-uncertain:";
    for (int i : greedy.uncertain) std::cout << " " << label_of(i);
    std::cout << "\n";
  }

  if (exact) {
    CorrectionResult minimum = exact_min_mcs(
        context_script.assertions, claims, assertions, sig, solver, limit);
    std::cout << "exact minimum MCS (" << minimum.mcs.size() << "):";
    for (int i : minimum.mcs) std::cout << " " << label_of(i);
    std::cout << "\n";
    std::cout << "gap: greedy " << greedy.mcs.size() << " vs minimum "
              << minimum.mcs.size() << "\n";
  }
  return 0;
}

int cmd_equiv(const std::string& formula_a, const std::string& formula_b,
              const std::string& sig_path, const CommonOpts& opts) {
  FullConfig cfg = load_config(opts);
  Signature sig;
  if (!sig_path.empty()) sig = parse_script(read_file(sig_path)).sig;
  ParsedFormula a = parse_formula(formula_a, sig, true);
  ParsedFormula b = parse_formula(formula_b, sig, true);
  SolverSession solver(cfg.solver);
  auto start = std::chrono::steady_clock::now();
  Trilean verdict = equivalent(a.formula, b.formula, sig, solver);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  const char* name = verdict == Trilean::Yes   ? "yes"
                     : verdict == Trilean::No ? "no"
                                              : "unknown";
  std::cout << name << " (" << ms << " ms)\n";
  return 0;
}

int check_expectation(const json& expected, const Trajectory& traj) {
  int failures = 0;
  auto fail = [&](const std::string& msg) {
    std::cout << "MISMATCH: " << msg << "\n";
    ++failures;
  };
  if (expected.contains("terminal") &&
      traj.terminal_reason != expected["terminal"].get<std::string>())
    fail("terminal " + traj.terminal_reason + " != " +
         expected["terminal"].get<std::string>());
  if (expected.contains("final_score")) {
    double want = expected["final_score"];
    double tol = expected.value("score_tol", 1e-9);
    double got = traj.iterations.back().score.final_score;
    if (std::fabs(got - want) > tol)
      fail("final score " + std::to_string(got) + " != " +
           std::to_string(want));
  }
  if (expected.contains("iterations")) {
    const json& its = expected["iterations"];
    if (its.size() != traj.iterations.size())
      fail("iteration count " + std::to_string(traj.iterations.size()) +
           " != " + std::to_string(its.size()));
    for (size_t t = 0; t < its.size() && t < traj.iterations.size(); ++t) {
      const json& want = its[t];
      const IterationRecord& got = traj.iterations[t];
      std::string at = "iteration " + std::to_string(t + 1) + ": ";
      if (want.contains("statuses")) {
        const json& st = want["statuses"];
        if (st.size() != got.claims.size()) {
          fail(at + "claim count " + std::to_string(got.claims.size()) +
               " != " + std::to_string(st.size()));
        } else {
          for (size_t i = 0; i < got.claims.size(); ++i)
            if (st[i].get<std::string>() !=
                status_name(got.claims[i].status))
              fail(at + "claim " + std::to_string(i) + " status " +
                   status_name(got.claims[i].status) + " != " +
                   st[i].get<std::string>());
        }
      }
      if (want.contains("joint_sat") &&
          want["joint_sat"].get<bool>() != got.joint_sat)
        fail(at + "joint_sat " + (got.joint_sat ? "true" : "false"));
      if (want.contains("core_contains")) {
        for (const auto& label : want["core_contains"]) {
          std::string l = label.get<std::string>();
          bool found = got.core &&
                       std::find(got.core->begin(), got.core->end(), l) !=
                           got.core->end();
          if (!found) fail(at + "core missing label " + l);
        }
      }
      if (want.contains("mcs")) {
        std::vector<int> want_mcs = want["mcs"].get<std::vector<int>>();
        std::vector<int> got_mcs =
            got.correction ? got.correction->mcs : std::vector<int>{};
        std::sort(want_mcs.begin(), want_mcs.end());
        std::sort(got_mcs.begin(), got_mcs.end());
        if (want_mcs != got_mcs) fail(at + "mcs mismatch");
      }
    }
  }
  return failures;
}

int cmd_replay(const std::string& case_id, std::string fixtures_dir,
               const CommonOpts& opts) {
  if (fixtures_dir.empty()) {
    if (const char* env = std::getenv("VERGE_FIXTURES"); env && *env)
      fixtures_dir = env;
    else
      fixtures_dir = "fixtures";
  }
  std::string dir = fixtures_dir + "/" + case_id;
  FullConfig cfg = load_config(opts);

  Problem p = load_problem(dir + "/problem.json");
  ScriptedBackend backend = ScriptedBackend::from_file(dir + "/responses.json");
  SolverSession solver(cfg.solver);
  Trajectory traj = run(p.context, p.query, cfg.refine, backend, solver);

  json expected = json::parse(read_file(dir + "/expected.json"));
  int failures = check_expectation(expected, traj);
  if (failures == 0) {
    std::cout << "replay " << case_id << ": all expectations hold (terminal "
              << traj.terminal_reason << ", final score "
              << traj.iterations.back().score.final_score << ")\n";
    return 0;
  }
  std::cout << "replay " << case_id << ": " << failures << " mismatch(es)\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification-guided refinement kernel"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--config", opts.config_path, "JSON config file");
  app.add_option("--solver", opts.solver_path, "solver executable override");
  app.add_option("--timeout-ms", opts.timeout_ms, "per-query solver timeout");

  auto* refine_cmd = app.add_subcommand("refine", "run the refinement loop");
  std::vector<std::string> problem_paths;
  std::string trace_out;
  int jobs = 1;
  refine_cmd->add_option("problem", problem_paths, "problem file(s)")
      ->required();
  refine_cmd->add_option("--backend", opts.backend_name, "scripted or http");
  refine_cmd->add_option("--fixtures", opts.fixtures_path,
                         "fixture file for the scripted backend");
  refine_cmd->add_option("--trace-out", trace_out, "trace output path");
  refine_cmd->add_option("--jobs", jobs, "concurrent problems in batch mode");

  auto* mcs_cmd = app.add_subcommand("mcs", "correction-set analysis");
  std::string context_path, claims_path;
  bool exact = false;
  int limit = 12;
  mcs_cmd->add_option("context", context_path, "context script (.smt2)")
      ->required();
  mcs_cmd->add_option("claims", claims_path, "claims script (.smt2)")
      ->required();
  mcs_cmd->add_flag("--exact", exact, "also compute the exact minimum");
  mcs_cmd->add_option("--limit", limit, "claim cap for --exact");

  auto* equiv_cmd = app.add_subcommand("equiv", "semantic equivalence check");
  std::string formula_a, formula_b, sig_path;
  equiv_cmd->add_option("a", formula_a, "first formula")->required();
  equiv_cmd->add_option("b", formula_b, "second formula")->required();
  equiv_cmd->add_option("--sig", sig_path, "declarations script (.smt2)");

  auto* replay_cmd = app.add_subcommand("replay", "replay a bundled case study");
  std::string case_id, fixtures_dir;
  replay_cmd->add_option("case", case_id, "folio, zebra or arlsat")->required();
  replay_cmd->add_option("--fixtures-dir", fixtures_dir,
                         "directory holding the case-study fixtures");

  CLI11_PARSE(app, argc, argv);

  try {
    if (refine_cmd->parsed()) {
      FullConfig cfg = load_config(opts);
      if (problem_paths.size() == 1)
        return run_one_problem(problem_paths[0], opts, cfg, trace_out);
      // batch mode: worst exit code wins; per-problem traces get a suffix
      std::vector<int> codes(problem_paths.size(), 1);
      std::vector<std::thread> workers;
      int stride = jobs > 0 ? jobs : 1;
      for (int w = 0; w < stride; ++w) {
        workers.emplace_back([&, w] {
          for (size_t i = w; i < problem_paths.size(); i += stride) {
            std::string trace =
                trace_out.empty() ? ""
                                  : trace_out + "." + std::to_string(i);
            try {
              codes[i] = run_one_problem(problem_paths[i], opts, cfg, trace);
            } catch (const std::exception& e) {
              std::cerr << problem_paths[i] << ": " << e.what() << "\n";
              codes[i] = 1;
            }
          }
        });
      }
      for (auto& th : workers) th.join();
      int worst = 0;
      for (int c : codes) worst = std::max(worst, c);
      return worst;
    }
    if (mcs_cmd->parsed())
      return cmd_mcs(context_path, claims_path, exact, limit, opts);
    if (equiv_cmd->parsed())
      return cmd_equiv(formula_a, formula_b, sig_path, opts);
    if (replay_cmd->parsed()) return cmd_replay(case_id, fixtures_dir, opts);
  } catch (const verge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
