#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "engelnq/common.hpp"
#include "engelnq/words.hpp"

namespace engelnq {

// Sparse vector over pc generators: strictly ascending 1-based indices,
// nonzero coefficients. Used for stored relation right-hand sides.
using SparseVec = std::vector<std::pair<int, Int>>;

// Normal-form element g_1^{e[1]} ... g_n^{e[n]}. Slot 0 is unused padding so
// that indices match generator numbering.
struct ExponentVector {
  std::vector<Int> e;

  int n() const { return static_cast<int>(e.size()) - 1; }
  bool operator==(const ExponentVector& o) const = default;
};

enum class DefKind { None, Power, Commutator };

struct Definition {
  DefKind kind = DefKind::None;
  int a = 0;  // Power: base generator; Commutator: j of [g_j, g_i]
  int b = 0;  // Commutator: i of [g_j, g_i], with a > b

  bool operator==(const Definition& o) const = default;
};

// Weighted power-commutator presentation:
//   g_i^{rel_order[i]} = power_tail[i]           (when rel_order[i] > 0)
//   [g_j, g_i]         = comm_tail(j, i)         (j > i; absent = trivial)
// Tails are supported on higher generators only; the presentation is
// nilpotent with class = max weight. Immutable after construction; every
// operation below is read-only.
struct PcPresentation {
  int n = 0;
  std::vector<int> weight;                // size n+1, non-decreasing
  std::vector<Int> rel_order;             // size n+1; 0 = infinite
  std::vector<SparseVec> power_tail;      // size n+1
  std::vector<std::vector<SparseVec>> comm;  // comm[j][i] for j > i >= 1
  std::vector<Definition> definition;     // size n+1

  void resize(int new_n);
  int cls() const;

  const SparseVec& comm_tail(int j, int i) const;
  SparseVec& comm_tail_mut(int j, int i);

  // Structural invariant check; throws InputError on violation.
  void validate() const;

  bool operator==(const PcPresentation& o) const = default;
};

// Raw letter sequence g^{e} g'^{e'} ... over generator indices.
using RawWord = std::vector<std::pair<int, Int>>;

ExponentVector identity_element(const PcPresentation& p);
bool is_identity(const ExponentVector& u);
SparseVec to_sparse(const std::vector<Int>& dense);
std::vector<Int> to_dense(const SparseVec& sv, int n);

// Collection from the left: rewrites words over the pc generators into
// normal form, always consuming the leftmost pending letter. Not shareable
// across threads (it memoizes inverse-conjugate words); create one per
// thread or per call.
class Collector {
 public:
  explicit Collector(const PcPresentation& p);

  // ev := normal form of ev * w, for the various word shapes.
  void mul_raw(std::vector<Int>& ev, const RawWord& w) const;
  void mul_nf(std::vector<Int>& ev, const std::vector<Int>& v) const;
  void mul_nf_inverse(std::vector<Int>& ev, const std::vector<Int>& v) const;
  void mul_sparse(std::vector<Int>& ev, const SparseVec& v) const;
  void mul_letter(std::vector<Int>& ev, int g, const Int& e) const;

  // Whole-element arithmetic sharing this collector's caches.
  ExponentVector mul(const ExponentVector& u, const ExponentVector& v) const;
  ExponentVector inv(const ExponentVector& u) const;
  ExponentVector pow(const ExponentVector& u, const Int& k) const;
  ExponentVector comm(const ExponentVector& u, const ExponentVector& v) const;
  ExponentVector evaluate(
      const AbstractWord& w,
      const std::map<std::string, ExponentVector>& assignment) const;

  const PcPresentation& presentation() const { return p_; }

 private:
  struct Letter {
    int g;
    Int e;
  };
  using Pend = std::vector<Letter>;  // back = next letter to process

  void run(std::vector<Int>& ev, Pend& pend) const;
  void merge(std::vector<Int>& ev, Pend& pend, int g, const Int& e) const;
  void push_word(Pend& pend, const SparseVec& w) const;
  void push_word_inverse(Pend& pend, const SparseVec& w) const;
  void push_word_power(Pend& pend, const SparseVec& w, const Int& q) const;
  bool word_central(const SparseVec& w) const;
  const SparseVec& inverse_conjugate(int j, int g) const;

  const PcPresentation& p_;
  std::vector<char> central_;
  mutable std::map<std::pair<int, int>, SparseVec> invconj_;
};

// Group arithmetic on normal forms.
ExponentVector collect(const PcPresentation& p, const RawWord& w);
ExponentVector multiply(const PcPresentation& p, const ExponentVector& u,
                        const ExponentVector& v);
ExponentVector inverse(const PcPresentation& p, const ExponentVector& u);
ExponentVector power(const PcPresentation& p, const ExponentVector& u,
                     const Int& k);
ExponentVector commutator(const PcPresentation& p, const ExponentVector& u,
                          const ExponentVector& v);
ExponentVector conjugate(const PcPresentation& p, const ExponentVector& u,
                         const ExponentVector& v);

// Structure queries.
Int group_order(const PcPresentation& p);  // 0 = infinite
int nilpotency_class(const PcPresentation& p);
Int element_order(const PcPresentation& p, const ExponentVector& u,
                  long cap = 1000000);

// Evaluate an expression at group elements; assignment is keyed by atom name
// (generator and variable names are disjoint by construction).
ExponentVector evaluate_word(
    const PcPresentation& p, const AbstractWord& w,
    const std::map<std::string, ExponentVector>& assignment);

// Consistency checking. Bounded restricts overlap tests to tuples of total
// weight <= class+1 (the standard weighted test set); Full removes the weight
// restriction; EngineFast is the reduced set used inside the quotient engine
// (first argument of weight 1), valid for presentations whose higher
// generators are commutator-defined.
enum class ConsistencyMode { Bounded, Full, EngineFast };

struct Violation {
  std::string description;
  ExponentVector lhs, rhs;
};

// gen_limit restricts test words to generators <= gen_limit (0 = all); the
// engine uses it to skip tuples involving the freshly added central tails,
// whose overlaps are trivially consistent.
void for_each_consistency_defect(
    const PcPresentation& p, ConsistencyMode mode,
    const std::function<void(const std::string& desc,
                             const std::vector<Int>& lhs,
                             const std::vector<Int>& rhs)>& cb,
    int gen_limit = 0);

std::vector<Violation> consistency_violations(const PcPresentation& p,
                                              bool full = false);

// Canonical JSON interchange (keys sorted, coefficients as decimal strings).
std::string pcp_to_json(const PcPresentation& p,
                        const std::map<std::string, ExponentVector>* images =
                            nullptr);
struct PcpWithImages {
  PcPresentation p;
  std::map<std::string, ExponentVector> images;
};
PcpWithImages pcp_from_json(const std::string& text);

}  // namespace engelnq
