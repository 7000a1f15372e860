#pragma once

#include <string>
#include <vector>

#include "engelnq/nq.hpp"
#include "engelnq/oracle.hpp"

namespace engelnq {

struct VerifyOptions {
  int max_class = 0;  // 0 = run to stabilization
  int depth = 0;
  unsigned long long seed = 0;
  long long power_samples = 100000;
  long long engel_samples = 10000;
  long oracle_bound = 4096;
  Budget budget;
};

struct CheckResult {
  std::string desc;
  std::string anchor;  // stable claim identifier, machine-diffable
  std::string expected;
  std::string observed;
  bool pass = true;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  bool truncated = false;
  bool budget_exceeded = false;
  long runtime_ms = 0;

  bool overall_pass() const;
  // canonical section: deterministic, no timing
  std::string canonical_json() const;
  // canonical section wrapped in an envelope carrying runtime_ms
  std::string full_json() const;
  std::string text() const;
};

// Flagship scenario: builds the three-generator group with the exponent-4
// law and the [b^2,x,x] law, checks order 2^41 / class 7 / triviality of
// [a,b,b,c,c], runs the randomized law audit, and a control run without the
// second law.
ScenarioReport verify_lemma_witness(const VerifyOptions& opt = {});

// Small-quotient scenario (n = 2 only): the two-involution group with the
// exponent-4 and both Engel laws, checked exhaustively through the oracle.
ScenarioReport verify_small_quotients(int n = 2, const VerifyOptions& opt = {});

// Presentation sources shared by the scenarios, the CLI corpus and tests.
std::string lemma_witness_source();
std::string lemma_witness_control_source();
std::string small_quotient_source();
std::vector<std::pair<std::string, std::string>> corpus_presentations();

}  // namespace engelnq
