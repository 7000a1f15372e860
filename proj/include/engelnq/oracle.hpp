#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "engelnq/pcp.hpp"

namespace engelnq {

// Fully enumerated finite group with an O(1) multiplication table, built
// from a consistent pc presentation (or as a quotient of another
// FiniteGroup). Elements are indexed; index 0 is the identity, and for
// enumerated groups the index order is the lexicographic order of the
// exponent vectors.
class FiniteGroup {
 public:
  // All elements of the group presented by p. Guarded: the default bound is
  // 2^12, and table memory caps the bound at 2^13.
  static FiniteGroup enumerate(const PcPresentation& p, long bound = 4096);

  long order() const { return order_; }
  int mult(int x, int y) const { return table_[size_t(x) * order_ + y]; }
  int inv(int x) const { return inv_[x]; }
  int conj(int u, int g) const { return mult(mult(inv(g), u), g); }
  int comm(int a, int b) const { return mult(mult(mult(inv(a), inv(b)), a), b); }

  const ExponentVector& element(int idx) const { return elements_[idx]; }
  int index_of(const ExponentVector& v) const;
  const PcPresentation& origin() const { return *origin_; }

  long element_order(int x) const;
  Int exponent() const;

  friend FiniteGroup quotient(const FiniteGroup& g,
                              const struct SubgroupWitness& n);

 private:
  FiniteGroup() = default;
  std::shared_ptr<const PcPresentation> origin_;
  std::vector<ExponentVector> elements_;
  std::vector<uint16_t> inv_;
  std::vector<uint16_t> table_;
  long order_ = 0;
};

struct SubgroupWitness {
  std::vector<int> members;     // sorted element indices, always contains 0
  std::vector<int> generators;  // greedy generating subset
  bool is_subgroup = false;
  bool is_normal = false;
  int nilpotency_class = 0;   // 0 for the trivial subgroup
  int derived_length = 0;     // 0 for the trivial subgroup
};

std::vector<int> subgroup_closure(const FiniteGroup& g,
                                  const std::vector<int>& gens);

// Builds the witness for a member set: verifies closure and normality
// exhaustively and computes the subgroup's class and derived length.
SubgroupWitness make_witness(const FiniteGroup& g, std::vector<int> members);

// R2(G) = { a : [a,x,x] = 1 for all x }, by the O(|G|^2) scan.
SubgroupWitness right_2_engel_set(const FiniteGroup& g);

// Coset group with lexicographically minimal representatives; multiplication
// is verified to be independent of the choice of representatives.
FiniteGroup quotient(const FiniteGroup& g, const SubgroupWitness& n);

std::vector<int> involutions(const FiniteGroup& g);
bool is_left_2_engel(const FiniteGroup& g, int u);
SubgroupWitness normal_closure(const FiniteGroup& g, int u);
bool is_abelian(const FiniteGroup& g, const std::vector<int>& members);

int derived_length(const FiniteGroup& g, const std::vector<int>& members);
int nilpotency_class_of_subgroup(const FiniteGroup& g,
                                 const std::vector<int>& members);

struct LemmaReport {
  Int order = 0;
  Int exponent = 0;
  long r2_order = 0;
  long quotient_order = 0;
  long involution_count = 0;  // involutions of the quotient
  bool pass = false;
  // failing pairs (u, x) with u an involution of the quotient that is not
  // left 2-Engel, witnessed by x; elements given by coset representatives
  std::vector<std::pair<ExponentVector, ExponentVector>> witnesses;
};

// Checks that every involution of G/R2(G) is left 2-Engel there. The
// hypothesis (exponent divides 4) is checked first and its failure is a
// guard error, not a lemma failure.
LemmaReport check_lemma(const FiniteGroup& g);

std::string lemma_report_json(const std::string& group_name,
                              const LemmaReport& r);
std::string r2_report_json(const std::string& group_name,
                           const FiniteGroup& g, const SubgroupWitness& r2);

}  // namespace engelnq
