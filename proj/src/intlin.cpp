#include "engelnq/intlin.hpp"

#include <algorithm>

namespace engelnq {

// alpha*x + beta*y, merged by column; zero results dropped.
SparseRow sparse_row_combine(const Int& alpha, const SparseRow& x,
                             const Int& beta, const SparseRow& y) {
  SparseRow out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      Int v = alpha * x[i].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      Int v = beta * y[j].second;
      if (v != 0) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      Int v = alpha * x[i].second + beta * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

static void negate_row(SparseRow& r) {
  for (auto& [c, v] : r) v = -v;
}

void RowEchelon::add_row(SparseRow r) {
  // Defensive canonicalization: strip zeros (callers normally pre-strip).
  r.erase(std::remove_if(r.begin(), r.end(),
                         [](const auto& p) { return p.second == 0; }),
          r.end());
  while (!r.empty()) {
    long c = r.front().first;
    if (c < 0 || c >= cols_) throw InputError("row column index out of range");
    auto it = rows_.find(c);
    if (it == rows_.end()) {
      if (r.front().second < 0) negate_row(r);
      rows_.emplace(c, std::move(r));
      return;
    }
    SparseRow& p = it->second;
    const Int& a = p.front().second;  // > 0
    const Int& b = r.front().second;
    if (fdiv_r(b, a) == 0) {
      r = sparse_row_combine(1, r, -(b / a), p);
    } else {
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
                 b.get_mpz_t());
      // [s t; -b/g a/g] is unimodular: replace the pivot row by the gcd
      // combination and eliminate column c from r.
      SparseRow np = sparse_row_combine(s, p, t, r);
      SparseRow nr = sparse_row_combine(-(b / g), p, a / g, r);
      p = std::move(np);
      r = std::move(nr);
    }
  }
}

HnfResult RowEchelon::finish() const {
  std::vector<SparseRow> rows;
  std::vector<long> pivots;
  rows.reserve(rows_.size());
  for (const auto& [c, row] : rows_) {
    pivots.push_back(c);
    rows.push_back(row);
  }
  // Reduce entries above each pivot into [0, pivot). Rows are echelon, so
  // processing later pivots in ascending column order leaves earlier
  // pivot-column entries untouched.
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      long cj = pivots[j];
      const Int& pj = rows[j].front().second;
      auto pos = std::lower_bound(
          rows[i].begin(), rows[i].end(), cj,
          [](const auto& p, long col) { return p.first < col; });
      if (pos == rows[i].end() || pos->first != cj) continue;
      Int q = fdiv_q(pos->second, pj);
      if (q != 0) rows[i] = sparse_row_combine(1, rows[i], -q, rows[j]);
    }
  }

  HnfResult res;
  res.pivot_cols = pivots;
  res.h = IntMatrix(static_cast<long>(rows.size()), cols_);
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [c, v] : rows[i]) res.h.at(static_cast<long>(i), c) = v;
  return res;
}

HnfResult hnf(const IntMatrix& m) {
  RowEchelon e(m.cols);
  for (long r = 0; r < m.rows; ++r) {
    SparseRow row;
    for (long c = 0; c < m.cols; ++c)
      if (m.at(r, c) != 0) row.emplace_back(c, m.at(r, c));
    e.add_row(std::move(row));
  }
  return e.finish();
}

std::vector<Int> reduce_vector(const HnfResult& h, std::vector<Int> v) {
  if (static_cast<long>(v.size()) != h.h.cols)
    throw InputError("reduce_vector: dimension mismatch");
  for (long i = 0; i < h.h.rows; ++i) {
    long c = h.pivot_cols[i];
    const Int& p = h.h.at(i, c);
    Int q = fdiv_q(v[c], p);
    if (q == 0) continue;
    for (long k = c; k < h.h.cols; ++k)
      if (h.h.at(i, k) != 0) v[k] -= q * h.h.at(i, k);
  }
  return v;
}

}  // namespace engelnq
