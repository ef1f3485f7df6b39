#include "verge/solver_bridge.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>

#include "verge/sexpr.hpp"

namespace verge {

namespace {

long long now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(steady_clock::now().time_since_epoch())
      .count();
}

std::string self_dir() {
  char buf[4096];
  ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
  if (n <= 0) return {};
  buf[n] = '\0';
  return std::filesystem::path(buf).parent_path().string();
}

void ignore_sigpipe() {
  static bool done = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "sat";
    case Verdict::Unsat: return "unsat";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

SolverConfig resolve_solver_config(SolverConfig cfg) {
  if (const char* env = std::getenv("VERGE_SOLVER"); env && *env)
    cfg.path = env;
  if (cfg.path.empty()) {
    std::string dir = self_dir();
    if (!dir.empty()) {
      std::string candidate = dir + "/verge-smt";
      if (access(candidate.c_str(), X_OK) == 0) cfg.path = candidate;
    }
  }
  if (cfg.path.empty()) cfg.path = "verge-smt";
  return cfg;
}

SolverSession::SolverSession(SolverConfig cfg) : cfg_(std::move(cfg)) {
  ignore_sigpipe();
  spawn();
}

SolverSession::~SolverSession() { shutdown(); }

void SolverSession::spawn() {
  int to_pipe[2], from_pipe[2];
  if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0)
    throw Error(ErrorCode::SolverCrashed, "pipe: " + std::string(strerror(errno)));
  int pid = fork();
  if (pid < 0)
    throw Error(ErrorCode::SolverCrashed, "fork: " + std::string(strerror(errno)));
  if (pid == 0) {
    dup2(to_pipe[0], STDIN_FILENO);
    dup2(from_pipe[1], STDOUT_FILENO);
    close(to_pipe[0]);
    close(to_pipe[1]);
    close(from_pipe[0]);
    close(from_pipe[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(cfg_.path.c_str()));
    for (const auto& a : cfg_.args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(cfg_.path.c_str(), argv.data());
    std::fprintf(stderr, "exec %s: %s\n", cfg_.path.c_str(), strerror(errno));
    _exit(127);
  }
  close(to_pipe[0]);
  close(from_pipe[1]);
  pid_ = pid;
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];
  buf_.clear();
  write_all("(set-option :produce-unsat-cores true)\n(set-logic " + cfg_.logic +
            ")\n");
}

void SolverSession::shutdown() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }
}

void SolverSession::write_all(const std::string& text) {
  size_t off = 0;
  while (off < text.size()) {
    ssize_t n = write(to_child_, text.data() + off, text.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::SolverCrashed,
                  "write to solver: " + std::string(strerror(errno)));
    }
    off += static_cast<size_t>(n);
  }
}

namespace {

// A bare-atom reply like "sat" is only complete once its trailing newline
// arrived; a list reply is complete when its parens balance.
bool reply_complete(const std::string& buf) {
  size_t s = buf.find_first_not_of(" \t\r\n");
  if (s == std::string::npos) return false;
  if (buf[s] == '(') return sexpr_complete(buf);
  return buf.find_first_of(" \t\r\n", s) != std::string::npos;
}

}  // namespace

bool SolverSession::read_reply(std::string& out, long long deadline_ms) {
  for (;;) {
    if (reply_complete(buf_)) {
      size_t consumed = 0;
      // take the first complete reply off the buffer
      SExpr e = parse_sexpr(buf_, &consumed);
      out = std::string(buf_.begin(), buf_.begin() + consumed);
      // trim leading whitespace
      size_t s = out.find_first_not_of(" \t\r\n");
      out = s == std::string::npos ? "" : out.substr(s);
      buf_.erase(0, consumed);
      if (out.empty()) continue;
      return true;
    }
    long long remain = deadline_ms - now_ms();
    if (remain <= 0) return false;
    pollfd pfd{from_child_, POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(remain));
    if (pr < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::SolverCrashed,
                  "poll: " + std::string(strerror(errno)));
    }
    if (pr == 0) return false;
    char chunk[4096];
    ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::SolverCrashed,
                  "read from solver: " + std::string(strerror(errno)));
    }
    if (n == 0)
      throw Error(ErrorCode::SolverCrashed, "solver closed its output");
    buf_.append(chunk, static_cast<size_t>(n));
  }
}

CheckResult SolverSession::run_query(const Signature& sig,
                                     const std::vector<NamedAssertion>& assertions,
                                     bool want_core) {
  RenderOptions opts;
  opts.include_prelude = false;
  std::string payload = "(push 1)\n";
  payload += render_smtlib(assertions, sig, opts);
  payload += "(check-sat)\n";
  long long deadline = now_ms() + cfg_.timeout_ms;
  write_all(payload);

  std::string reply;
  if (!read_reply(reply, deadline)) {
    shutdown();
    spawn();
    return {Verdict::Unknown, {}};
  }
  CheckResult result;
  if (reply == "sat") {
    result.verdict = Verdict::Sat;
  } else if (reply == "unsat") {
    result.verdict = Verdict::Unsat;
  } else if (reply == "unknown") {
    result.verdict = Verdict::Unknown;
  } else {
    shutdown();
    spawn();
    throw Error(ErrorCode::ProtocolError, "unexpected solver reply: " + reply);
  }

  if (result.verdict == Verdict::Unsat && want_core) {
    write_all("(get-unsat-core)\n");
    if (!read_reply(reply, deadline)) {
      shutdown();
      spawn();
      return {Verdict::Unknown, {}};
    }
    SExpr core = parse_sexpr(reply);
    if (core.is_atom || (core.size() > 0 && core[0].is_atom &&
                         core[0].atom == "error")) {
      shutdown();
      spawn();
      throw Error(ErrorCode::ProtocolError, "unexpected core reply: " + reply);
    }
    for (const auto& item : core.items) {
      if (!item.is_atom)
        throw Error(ErrorCode::ProtocolError, "malformed core entry");
      result.core.push_back(item.atom);
    }
  }
  write_all("(pop 1)\n");
  return result;
}

CheckResult SolverSession::check(const Signature& sig,
                                 const std::vector<NamedAssertion>& assertions,
                                 bool want_core) {
  try {
    return run_query(sig, assertions, want_core);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SolverCrashed) throw;
    shutdown();
    spawn();
    return run_query(sig, assertions, want_core);  // second crash propagates
  }
}

SessionPool::SessionPool(SolverConfig cfg) : cfg_(resolve_solver_config(std::move(cfg))) {
  int n = cfg_.pool_size > 0 ? cfg_.pool_size : 1;
  for (int i = 0; i < n; ++i) {
    all_.push_back(std::make_unique<SolverSession>(cfg_));
    free_.push_back(all_.back().get());
  }
}

SessionPool::Lease SessionPool::acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return !free_.empty(); });
  SolverSession* s = free_.back();
  free_.pop_back();
  return Lease(this, s);
}

void SessionPool::release(SolverSession* s) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    free_.push_back(s);
  }
  cv_.notify_one();
}

SessionPool::Lease::~Lease() {
  if (pool_ && s_) pool_->release(s_);
}

}  // namespace verge
