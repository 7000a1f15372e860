#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engelnq/intlin.hpp"

using namespace engelnq;

namespace {

IntMatrix make(long rows, long cols, std::initializer_list<long> vals) {
  IntMatrix m(rows, cols);
  auto it = vals.begin();
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m.at(r, c) = Int(*it++);
  return m;
}

// Independent determinant oracle: Bareiss fraction-free elimination.
Int det_bareiss(IntMatrix m) {
  REQUIRE(m.rows == m.cols);
  const long n = m.rows;
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (long k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      long piv = -1;
      for (long r = k + 1; r < n; ++r)
        if (m.at(r, k) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
      for (long c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(piv, c));
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j < n; ++j)
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign == 1 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

bool in_lattice(const HnfResult& h, std::vector<Int> v) {
  for (const auto& x : reduce_vector(h, std::move(v)))
    if (x != 0) return false;
  return true;
}

std::vector<Int> row_of(const IntMatrix& m, long r) {
  std::vector<Int> v(m.cols);
  for (long c = 0; c < m.cols; ++c) v[c] = m.at(r, c);
  return v;
}

}  // namespace

TEST_CASE("hnf of the hand-reduced 2x2 example") {
  auto h = hnf(make(2, 2, {2, 4, 6, 8}));
  CHECK(h.h == make(2, 2, {2, 0, 0, 4}));
  CHECK(h.pivot_cols == std::vector<long>{0, 1});
  // both row lattices contain each other and |det| = 8 is preserved
  CHECK(in_lattice(h, {2, 4}));
  CHECK(in_lattice(h, {6, 8}));
  auto orig = hnf(make(2, 2, {2, 4, 6, 8}));
  CHECK(in_lattice(orig, {2, 0}));
  CHECK(in_lattice(orig, {0, 4}));
  CHECK(abs(det_bareiss(make(2, 2, {2, 4, 6, 8}))) == 8);
  CHECK(h.h.at(0, 0) * h.h.at(1, 1) == 8);
}

TEST_CASE("hnf fixes the identity and the empty matrix") {
  auto id = hnf(make(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  CHECK(id.h == make(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  IntMatrix empty(0, 5);
  auto h = hnf(empty);
  CHECK(h.h.rows == 0);
  CHECK(h.h.cols == 5);
  CHECK(h.pivot_cols.empty());
}

TEST_CASE("reduce_vector canonical residues") {
  auto h = hnf(make(2, 2, {2, 0, 0, 4}));
  CHECK(reduce_vector(h, {Int(0), Int(0)}) == std::vector<Int>{0, 0});
  CHECK(reduce_vector(h, {Int(2), Int(4)}) == std::vector<Int>{0, 0});
  CHECK(reduce_vector(h, {Int(1), Int(5)}) == std::vector<Int>{1, 1});
  CHECK_THROWS_AS(reduce_vector(h, {Int(1)}), InputError);
}

TEST_CASE("reduce_vector minimal residue agrees with brute-force search") {
  // smallest nonnegative residue of (1,5) modulo the lattice <(2,0),(0,4)>
  auto h = hnf(make(2, 2, {2, 0, 0, 4}));
  auto red = reduce_vector(h, {Int(1), Int(5)});
  bool found_smaller = false;
  for (long a = -6; a <= 6; ++a)
    for (long b = -6; b <= 6; ++b) {
      long x = 1 + 2 * a, y = 5 + 4 * b;
      if (x < 0 || y < 0) continue;
      if (Int(x) < red[0] || (Int(x) == red[0] && Int(y) < red[1]))
        found_smaller = true;
    }
  CHECK_FALSE(found_smaller);
}

TEST_CASE("seeded random battery: idempotence, lattices, determinants") {
  std::mt19937_64 rng(12345);
  auto draw = [&](long lo, long hi) {
    return static_cast<long>(lo + static_cast<long>(rng() % (hi - lo + 1)));
  };
  int fullrank_checked = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    long rows = draw(0, 8), cols = draw(1, 8);
    IntMatrix m(rows, cols);
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c) m.at(r, c) = Int(draw(-20, 20));

    auto h = hnf(m);

    // mutual row-lattice membership
    for (long r = 0; r < rows; ++r) CHECK(in_lattice(h, row_of(m, r)));
    auto back = hnf(h.h);
    for (long r = 0; r < h.h.rows; ++r) CHECK(in_lattice(back, row_of(h.h, r)));

    // idempotence
    CHECK(back.h == h.h);
    CHECK(back.pivot_cols == h.pivot_cols);

    // |det| preservation for full-rank square inputs
    if (rows == cols && rows > 0) {
      Int d = det_bareiss(m);
      if (d != 0) {
        ++fullrank_checked;
        Int prod = 1;
        for (long r = 0; r < h.h.rows; ++r) prod *= h.h.at(r, h.pivot_cols[r]);
        CHECK(abs(d) == prod);
      }
    }

    // residues are invariant under adding lattice rows
    if (h.h.rows > 0) {
      std::vector<Int> v(cols);
      for (long c = 0; c < cols; ++c) v[c] = Int(draw(-40, 40));
      std::vector<Int> shifted = v;
      for (long r = 0; r < h.h.rows; ++r) {
        long k = draw(-3, 3);
        for (long c = 0; c < cols; ++c) shifted[c] += Int(k) * h.h.at(r, c);
      }
      CHECK(reduce_vector(h, v) == reduce_vector(h, shifted));
    }
  }
  CHECK(fullrank_checked > 50);
}

TEST_CASE("hnf output shape invariants") {
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 200; ++iter) {
    long rows = 1 + static_cast<long>(rng() % 6);
    long cols = 1 + static_cast<long>(rng() % 6);
    IntMatrix m(rows, cols);
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c)
        m.at(r, c) = Int(static_cast<long>(rng() % 21) - 10);
    auto h = hnf(m);
    for (long r = 0; r < h.h.rows; ++r) {
      long pc = h.pivot_cols[r];
      if (r > 0) CHECK(pc > h.pivot_cols[r - 1]);
      CHECK(h.h.at(r, pc) > 0);
      for (long c = 0; c < pc; ++c) CHECK(h.h.at(r, c) == 0);
      for (long rr = 0; rr < r; ++rr) {
        CHECK(h.h.at(rr, pc) >= 0);
        CHECK(h.h.at(rr, pc) < h.h.at(r, pc));
      }
    }
  }
}
