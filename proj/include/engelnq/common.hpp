#pragma once

#include <gmpxx.h>

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace engelnq {

// Exact integer type used throughout. Relative orders at the top class of a
// quotient tower are genuinely infinite (order 0) and lattice reduction can
// produce large intermediates, so everything is arbitrary precision.
using Int = mpz_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Source-text errors from the presentation parser, with position info.
struct ParseError : Error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

// Bad arguments, missing substitutions, dimension mismatches.
struct InputError : Error {
  using Error::Error;
};

// A configured size or iteration guard was exceeded.
struct GuardError : Error {
  using Error::Error;
};

// A resource budget (wall time, matrix rows, instances) was exceeded.
struct BudgetError : Error {
  using Error::Error;
};

// Internal invariant failure: signals a bug in the engine, never user error.
struct EngineError : Error {
  using Error::Error;
};

// Floor division and remainder. mpz_class operator/ truncates toward zero,
// which is the wrong convention for reducing exponents into [0, m).
inline Int fdiv_q(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int fdiv_r(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Resource budget for engine runs. Exceeding a cap raises BudgetError; the
// engine never truncates silently.
struct Budget {
  double wall_seconds = 7200.0;
  long long max_rows = 100000000;
  long long max_instances = 100000000;

  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  void restart() { started = std::chrono::steady_clock::now(); }

  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         started)
        .count();
  }

  void check_time() const {
    if (wall_seconds > 0 && elapsed_seconds() > wall_seconds)
      throw BudgetError("wall-time budget of " + std::to_string(wall_seconds) +
                        "s exceeded");
  }

  void check_rows(long long rows) const {
    if (max_rows > 0 && rows > max_rows)
      throw BudgetError("row budget of " + std::to_string(max_rows) +
                        " exceeded");
  }

  void check_instances(long long count) const {
    if (max_instances > 0 && count > max_instances)
      throw BudgetError("law-instance budget of " +
                        std::to_string(max_instances) + " exceeded");
  }
};

// Deterministic uniform draw in [0, m) by rejection sampling on the raw
// 64-bit stream; avoids std::uniform_int_distribution, whose output is
// implementation-defined.
template <class Rng>
Int uniform_below(Rng& rng, const Int& m) {
  if (m <= 0) throw InputError("uniform_below requires a positive modulus");
  if (!m.fits_ulong_p())
    throw GuardError("uniform_below modulus does not fit in 64 bits");
  unsigned long mm = m.get_ui();
  if ((mm & (mm - 1)) == 0) return Int(rng() & (mm - 1));
  unsigned long limit = ~0UL - (~0UL % mm + 1) % mm;
  for (;;) {
    unsigned long v = rng();
    if (v <= limit) return Int(v % mm);
  }
}

}  // namespace engelnq
