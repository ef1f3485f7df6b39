#include "verge/mcs.hpp"

#include <algorithm>
#include <numeric>

namespace verge {

namespace {

std::vector<size_t> confidence_order(const std::vector<Claim>& claims) {
  std::vector<size_t> order(claims.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (claims[a].confidence != claims[b].confidence)
      return claims[a].confidence > claims[b].confidence;
    return claims[a].index < claims[b].index;
  });
  return order;
}

}  // namespace

CorrectionResult greedy_mcs(const std::vector<NamedAssertion>& context,
                            const std::vector<Claim>& claims,
                            const std::vector<NamedAssertion>& claim_assertions,
                            const Signature& sig, SolverSession& solver) {
  CorrectionResult result;
  std::vector<NamedAssertion> kept = context;
  for (size_t pos : confidence_order(claims)) {
    result.order_used.push_back(claims[pos].index);
    std::vector<NamedAssertion> trial = kept;
    trial.push_back(claim_assertions[pos]);
    CheckResult r = solver.check(sig, trial, false);
    ++result.sat_calls;
    if (r.verdict == Verdict::Sat) {
      kept = std::move(trial);
      result.mss.push_back(claims[pos].index);
    } else {
      result.mcs.push_back(claims[pos].index);
      if (r.verdict == Verdict::Unknown)
        result.uncertain.push_back(claims[pos].index);
    }
  }
  return result;
}

CorrectionResult exact_min_mcs(const std::vector<NamedAssertion>& context,
                               const std::vector<Claim>& claims,
                               const std::vector<NamedAssertion>& claim_assertions,
                               const Signature& sig, SolverSession& solver,
                               int n_limit) {
  size_t n = claims.size();
  if (n > static_cast<size_t>(n_limit))
    throw Error(ErrorCode::LimitExceeded,
                std::to_string(n) + " claims exceed the exact-search limit of " +
                    std::to_string(n_limit));

  // positions sorted by ascending claim index for the lexicographic order
  std::vector<size_t> by_index(n);
  std::iota(by_index.begin(), by_index.end(), 0);
  std::sort(by_index.begin(), by_index.end(), [&](size_t a, size_t b) {
    return claims[a].index < claims[b].index;
  });

  CorrectionResult result;
  for (size_t k = 0; k <= n; ++k) {
    // combinations of k removal slots out of n, lexicographic
    std::vector<bool> select(n, false);
    std::fill(select.begin(), select.begin() + k, true);
    do {
      std::vector<NamedAssertion> trial = context;
      std::vector<int> removed, kept_idx;
      for (size_t i = 0; i < n; ++i) {
        size_t pos = by_index[i];
        if (select[i]) {
          removed.push_back(claims[pos].index);
        } else {
          trial.push_back(claim_assertions[pos]);
          kept_idx.push_back(claims[pos].index);
        }
      }
      CheckResult r = solver.check(sig, trial, false);
      ++result.sat_calls;
      if (r.verdict == Verdict::Sat) {
        result.mcs = std::move(removed);
        result.mss = std::move(kept_idx);
        return result;
      }
    } while (std::prev_permutation(select.begin(), select.end()));
  }
  // even removing everything fails: the context itself is unsatisfiable
  throw Error(ErrorCode::InconsistentContext,
              "context unsatisfiable on its own");
}

std::vector<FeedbackItem> format_feedback(
    const CorrectionResult& result,
    const std::optional<std::vector<std::string>>& core,
    const std::vector<Claim>& claims) {
  std::vector<FeedbackItem> items;
  for (int idx : result.mcs) {
    FeedbackItem item;
    item.claim_index = idx;
    for (const auto& c : claims)
      if (c.index == idx) item.claim_text = c.text;
    if (core) item.core_labels = *core;
    item.solver_uncertain =
        std::find(result.uncertain.begin(), result.uncertain.end(), idx) !=
        result.uncertain.end();
    item.directive =
        item.solver_uncertain
            ? "The solver could not validate this claim (solver-uncertain); "
              "restate it more precisely or remove it."
            : "This claim conflicts with the context and the claims kept "
              "above; rewrite it so the conflict disappears.";
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace verge
