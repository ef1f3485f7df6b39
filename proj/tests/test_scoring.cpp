#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "verge/scoring.hpp"

using namespace verge;

TEST_CASE("per-status scores") {
  CHECK(claim_score(VerificationStatus::Entailed) == 1.0);
  CHECK(claim_score(VerificationStatus::Supported) == 0.9);
  CHECK(claim_score(VerificationStatus::Possible) == 0.7);
  CHECK(claim_score(VerificationStatus::Plausible) == 0.7);
  CHECK(claim_score(VerificationStatus::Contradictory) == 0.0);
  CHECK(claim_score(VerificationStatus::Unknown) == 0.0);
  CHECK(claim_score(VerificationStatus::Unsupported) == 0.0);
  CHECK(claim_score(VerificationStatus::Uncertain) == 0.0);
}

TEST_CASE("aggregation hand-checked values") {
  SUBCASE("uniform scores carry no penalty") {
    auto s = aggregate({1.0, 1.0}, true);
    CHECK(s.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.std_dev == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.penalty == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.final_score == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("single claim") {
    CHECK(aggregate({1.0}, true).final_score == doctest::Approx(1.0));
    CHECK(aggregate({0.7}, true).final_score == doctest::Approx(0.7));
  }
  SUBCASE("clamp engages on one-hot vectors") {
    // mean 0.25, std sqrt(3)/4 ~ 0.433, raw penalty 1 - std/0.26 < 0.5
    auto s = aggregate({1.0, 0.0, 0.0, 0.0}, false);
    CHECK(s.penalty == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.final_score == doctest::Approx(0.125).epsilon(1e-12));
  }
  SUBCASE("mixed vector") {
    // mean 0.9, std 0.1, penalty 1 - 0.1/0.91
    auto s = aggregate({1.0, 0.8}, true);
    CHECK(s.mean == doctest::Approx(0.9));
    CHECK(s.std_dev == doctest::Approx(0.1));
    CHECK(s.final_score == doctest::Approx(0.9 * (1.0 - 0.1 / 0.91)).epsilon(1e-12));
  }
  SUBCASE("all zeros") {
    auto s = aggregate({0.0, 0.0, 0.0}, true);
    CHECK(s.final_score == doctest::Approx(0.0));
    CHECK(s.penalty == doctest::Approx(1.0));
  }
  SUBCASE("empty is an error") {
    CHECK_THROWS_AS(aggregate({}, true), Error);
  }
}

TEST_CASE("aggregation invariants") {
  std::vector<std::vector<double>> vectors{
      {1.0, 0.7, 0.9}, {0.7, 0.7, 0.7, 0.7}, {1.0, 0.0},
      {0.9, 0.9, 0.7, 1.0, 0.0}, {0.5, 0.5, 1.0}};
  for (auto v : vectors) {
    auto s = aggregate(v, true);
    CHECK(s.final_score >= 0.0);
    CHECK(s.final_score <= s.mean + 1e-12);
    CHECK(s.penalty >= 0.5);
    CHECK(s.penalty <= 1.0);
    std::sort(v.begin(), v.end());
    auto s2 = aggregate(v, true);
    CHECK(s2.final_score == doctest::Approx(s.final_score).epsilon(1e-12));
  }
}

TEST_CASE("acceptance requires both the threshold and joint satisfiability") {
  auto good = aggregate({1.0, 1.0}, true);
  CHECK(accept(good, 0.75));
  CHECK(accept(good, 1.0));  // inclusive comparison
  auto unsat = aggregate({1.0, 1.0}, false);
  CHECK_FALSE(accept(unsat, 0.75));
  auto weak = aggregate({0.7, 0.7}, true);
  CHECK_FALSE(accept(weak, 0.75));
  CHECK(accept(weak, 0.7));
}
