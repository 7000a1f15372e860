#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "engelnq/common.hpp"
#include "engelnq/intlin.hpp"
#include "engelnq/pcp.hpp"
#include "engelnq/words.hpp"

namespace engelnq {

struct NqOptions {
  int max_class = 0;  // 0 = iterate until the quotient tower stabilizes
  int depth = 0;      // law instantiation: 0 = all normal words within the
                      // weight bound (default); 1 = generator tuples only;
                      // d >= 2 adds products of up to d distinct generators
  bool thorough_consistency = false;  // harvest with the unrestricted
                                      // weight-bounded overlap set
  Budget budget;
};

struct ClassStats {
  int cls = 0;
  int tails_added = 0;
  long long law_instances = 0;
  long long rows_collected = 0;
  int tails_survived = 0;
  std::string order;  // group order after the step ("0" = infinite)
};

// The engine state: current pc presentation, the epimorphism from the
// finitely presented group, and the per-class run log.
struct NqState {
  Presentation pres;
  PcPresentation p;
  std::vector<std::string> gen_names;
  std::map<std::string, ExponentVector> images;
  std::map<std::string, int> defining_gen;  // fp generator -> pc generator
  int cls = 0;
  bool truncated = false;
  std::vector<ClassStats> log;
};

struct LawInstance {
  int law_index = 0;
  std::map<std::string, ExponentVector> substitution;  // over the tailed pcp
  SparseRow row;  // relation over tail columns (0-based)
};

NqState initial_state(const Presentation& pres);

// One class step c -> c+1: add central tails, harvest consistency tests,
// relators and law instances as rows over the tails, eliminate, rebuild.
// Returns the new state and the number of surviving tails.
std::pair<NqState, int> extend_one_class(const NqState& s,
                                         const NqOptions& opt = {});

NqState abelian_quotient(const Presentation& pres, const NqOptions& opt = {});
NqState nilpotent_quotient(const Presentation& pres, const NqOptions& opt = {});

// The law instances the next class step would evaluate, with their relation
// rows over the tail columns; deterministic, canonically ordered.
std::vector<LawInstance> instantiate_laws(const NqState& s, int depth);

// Evaluate a variable-free word under the epimorphism.
ExponentVector image_of(const NqState& s, const AbstractWord& w);

// Discard all generators of weight > c (the class-c truncation).
PcPresentation truncate_pcp(const PcPresentation& p, int c);

// Draw `samples` seeded-random substitutions for the law's variables and
// count violations in the current quotient. Zero is the only sound answer.
long long law_audit(const NqState& s, const Law& law, long long samples,
                    unsigned long long seed);

std::string run_log_json(const NqState& s);

}  // namespace engelnq
