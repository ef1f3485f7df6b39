#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "verge/formula.hpp"

namespace verge {

struct SolverConfig {
  std::string path;                // solver executable
  std::vector<std::string> args;   // extra argv entries
  int timeout_ms = 2000;           // per query
  int pool_size = 2;
  std::string logic = "ALL";       // set-logic tag sent at session start
};

// Fills in the executable path when unset: the VERGE_SOLVER environment
// variable wins, then a verge-smt binary next to the running executable,
// then plain "verge-smt" resolved through PATH.
SolverConfig resolve_solver_config(SolverConfig cfg = {});

enum class Verdict { Sat, Unsat, Unknown };

const char* verdict_name(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<std::string> core;  // labels, only when verdict is Unsat
};

// One solver child process speaking SMT-LIB2 over stdin/stdout. Every query
// runs inside its own push/pop scope, so sessions carry no state between
// queries. A query that exceeds the timeout kills and respawns the child and
// reports Unknown. A crashed child is restarted once and the query replayed;
// a second crash raises Error(SolverCrashed).
class SolverSession {
 public:
  explicit SolverSession(SolverConfig cfg);
  ~SolverSession();

  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  CheckResult check(const Signature& sig,
                    const std::vector<NamedAssertion>& assertions,
                    bool want_core = false);

  const SolverConfig& config() const { return cfg_; }

 private:
  void spawn();
  void shutdown();
  void write_all(const std::string& text);
  // Reads until `lines` complete s-expressions / bare replies arrive or the
  // deadline passes. Returns false on timeout.
  bool read_reply(std::string& out, long long deadline_ms);
  CheckResult run_query(const Signature& sig,
                        const std::vector<NamedAssertion>& assertions,
                        bool want_core);

  SolverConfig cfg_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buf_;
};

// Fixed-size set of sessions handed out under exclusive leases.
class SessionPool {
 public:
  explicit SessionPool(SolverConfig cfg);

  class Lease {
   public:
    Lease(SessionPool* pool, SolverSession* s) : pool_(pool), s_(s) {}
    ~Lease();
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;
    Lease(Lease&& o) noexcept : pool_(o.pool_), s_(o.s_) {
      o.pool_ = nullptr;
      o.s_ = nullptr;
    }
    SolverSession& operator*() { return *s_; }
    SolverSession* operator->() { return s_; }

   private:
    SessionPool* pool_;
    SolverSession* s_;
  };

  Lease acquire();

 private:
  friend class Lease;
  void release(SolverSession* s);

  SolverConfig cfg_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::unique_ptr<SolverSession>> all_;
  std::vector<SolverSession*> free_;
};

}  // namespace verge
