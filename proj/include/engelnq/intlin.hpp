#pragma once

#include <map>
#include <utility>
#include <vector>

#include "engelnq/common.hpp"

namespace engelnq {

struct IntMatrix {
  long rows = 0;
  long cols = 0;
  std::vector<Int> a;  // row-major

  IntMatrix() = default;
  IntMatrix(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Int& at(long r, long c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Int& at(long r, long c) const {
    return a[static_cast<size_t>(r) * cols + c];
  }

  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

struct HnfResult {
  // One row per pivot: upper echelon, positive pivots, entries above each
  // pivot reduced into [0, pivot). Zero rows are dropped, so h.rows = rank.
  IntMatrix h;
  std::vector<long> pivot_cols;
};

// Sparse integer row: strictly ascending column indices, nonzero entries.
using SparseRow = std::vector<std::pair<long, Int>>;

SparseRow sparse_row_combine(const Int& alpha, const SparseRow& x,
                             const Int& beta, const SparseRow& y);

// Incremental row-lattice accumulator. Rows may be inserted in any order;
// finish() returns the Hermite normal form, which is unique per lattice, so
// the result does not depend on insertion order.
class RowEchelon {
 public:
  explicit RowEchelon(long cols) : cols_(cols) {}

  void add_row(SparseRow r);
  long rank() const { return static_cast<long>(rows_.size()); }
  long cols() const { return cols_; }
  HnfResult finish() const;

 private:
  long cols_;
  std::map<long, SparseRow> rows_;  // leading column -> row, lead coeff > 0
};

// Row Hermite normal form of m; the row lattice is preserved.
HnfResult hnf(const IntMatrix& m);

// Canonical residue of v modulo the row lattice of h: pivot-column entries
// land in [0, pivot), and the result is zero iff v is in the lattice.
std::vector<Int> reduce_vector(const HnfResult& h, std::vector<Int> v);

}  // namespace engelnq
