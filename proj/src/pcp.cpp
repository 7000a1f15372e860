#include "engelnq/pcp.hpp"

#include <algorithm>
#include <sstream>

namespace engelnq {

static const SparseVec kEmptyVec;

void PcPresentation::resize(int new_n) {
  n = new_n;
  weight.resize(n + 1, 1);
  weight[0] = 0;  // slot 0 is unused padding
  rel_order.resize(n + 1, Int(0));
  power_tail.resize(n + 1);
  comm.resize(n + 1);
  for (int j = 0; j <= n; ++j) comm[j].resize(j > 0 ? j : 0);
  definition.resize(n + 1);
}

int PcPresentation::cls() const {
  int c = 0;
  for (int i = 1; i <= n; ++i) c = std::max(c, weight[i]);
  return c;
}

const SparseVec& PcPresentation::comm_tail(int j, int i) const {
  if (j <= i) throw InputError("comm_tail requires j > i");
  if (j > n || i < 1) throw InputError("generator index out of range");
  return comm[j][i];
}

SparseVec& PcPresentation::comm_tail_mut(int j, int i) {
  if (j <= i) throw InputError("comm_tail requires j > i");
  if (j > n || i < 1) throw InputError("generator index out of range");
  return comm[j][i];
}

static void validate_sparse(const SparseVec& v, int n, int min_index,
                            const PcPresentation& p, int min_weight,
                            const std::string& what) {
  int prev = 0;
  for (const auto& [g, c] : v) {
    if (g <= min_index || g > n)
      throw InputError(what + ": support index " + std::to_string(g) +
                       " out of range");
    if (g <= prev) throw InputError(what + ": support not ascending");
    prev = g;
    if (c == 0) throw InputError(what + ": zero coefficient stored");
    if (p.rel_order[g] > 0 && (c < 0 || c >= p.rel_order[g]))
      throw InputError(what + ": coefficient out of range for torsion");
    if (min_weight > 0 && p.weight[g] < min_weight)
      throw InputError(what + ": support below required weight");
  }
}

void PcPresentation::validate() const {
  if (static_cast<int>(weight.size()) != n + 1 ||
      static_cast<int>(rel_order.size()) != n + 1 ||
      static_cast<int>(power_tail.size()) != n + 1 ||
      static_cast<int>(comm.size()) != n + 1 ||
      static_cast<int>(definition.size()) != n + 1)
    throw InputError("pcp: array sizes inconsistent with n");
  for (int i = 1; i <= n; ++i) {
    if (weight[i] < 1) throw InputError("pcp: weights must be positive");
    if (i > 1 && weight[i] < weight[i - 1])
      throw InputError("pcp: weights must be non-decreasing");
    if (rel_order[i] < 0 || rel_order[i] == 1)
      throw InputError("pcp: relative orders are 0 (infinite) or >= 2");
    validate_sparse(power_tail[i], n, i, *this, 0, "power tail");
  }
  for (int j = 1; j <= n; ++j) {
    if (static_cast<int>(comm[j].size()) != j)
      throw InputError("pcp: commutator table shape is wrong");
    for (int i = 1; i < j; ++i)
      validate_sparse(comm[j][i], n, j, *this, weight[i] + weight[j],
                      "commutator tail");
  }
  for (int k = 1; k <= n; ++k) {
    const Definition& d = definition[k];
    if (d.kind == DefKind::Power) {
      if (d.a < 1 || d.a >= k) throw InputError("pcp: bad power definition");
    } else if (d.kind == DefKind::Commutator) {
      if (!(d.a > d.b && d.b >= 1 && d.a < k))
        throw InputError("pcp: bad commutator definition");
    }
  }
}

ExponentVector identity_element(const PcPresentation& p) {
  ExponentVector v;
  v.e.assign(p.n + 1, Int(0));
  return v;
}

bool is_identity(const ExponentVector& u) {
  for (const auto& x : u.e)
    if (x != 0) return false;
  return true;
}

SparseVec to_sparse(const std::vector<Int>& dense) {
  SparseVec out;
  for (int i = 1; i < static_cast<int>(dense.size()); ++i)
    if (dense[i] != 0) out.emplace_back(i, dense[i]);
  return out;
}

std::vector<Int> to_dense(const SparseVec& sv, int n) {
  std::vector<Int> out(n + 1, Int(0));
  for (const auto& [g, c] : sv) out[g] = c;
  return out;
}

// ---- collector -------------------------------------------------------------

namespace {
constexpr long long kStepGuard = 4000000000LL;
constexpr long kRepeatGuard = 1000000;
}  // namespace

Collector::Collector(const PcPresentation& p) : p_(p) {
  central_.assign(p_.n + 1, 1);
  for (int j = 1; j <= p_.n; ++j)
    for (int i = 1; i < j; ++i)
      if (!p_.comm[j][i].empty()) central_[i] = central_[j] = 0;
}

bool Collector::word_central(const SparseVec& w) const {
  for (const auto& [g, c] : w)
    if (!central_[g]) return false;
  return true;
}

void Collector::push_word(Pend& pend, const SparseVec& w) const {
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    pend.push_back({it->first, it->second});
}

void Collector::push_word_inverse(Pend& pend, const SparseVec& w) const {
  for (const auto& [g, c] : w) pend.push_back({g, -c});
}

void Collector::push_word_power(Pend& pend, const SparseVec& w,
                                const Int& q) const {
  if (q == 0 || w.empty()) return;
  if (w.size() == 1) {
    pend.push_back({w.front().first, w.front().second * q});
    return;
  }
  if (word_central(w)) {
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      pend.push_back({it->first, it->second * q});
    return;
  }
  Int aq = abs(q);
  if (aq > kRepeatGuard)
    throw GuardError("collection: oversized power of a non-central tail");
  long reps = aq.get_si();
  for (long r = 0; r < reps; ++r) {
    if (q > 0)
      push_word(pend, w);
    else
      push_word_inverse(pend, w);
  }
}

// [g_j, g^{-1}] = g * [g_j, g]^{-1} * g^{-1}, collected to normal form.
// Needed only when an infinite-order generator is moved with a negative
// exponent; memoized per (j, g). The recursion stays inside pairs with a
// strictly larger first index, so it terminates.
const SparseVec& Collector::inverse_conjugate(int j, int g) const {
  auto key = std::make_pair(j, g);
  auto it = invconj_.find(key);
  if (it != invconj_.end()) return it->second;
  const SparseVec& w = p_.comm_tail(j, g);
  std::vector<Int> ev(p_.n + 1, Int(0));
  Pend pend;
  pend.push_back({g, Int(-1)});
  for (const auto& [k, c] : w) pend.push_back({k, -c});
  pend.push_back({g, Int(1)});
  run(ev, pend);
  SparseVec res = to_sparse(ev);
  if (!res.empty() && res.front().first <= j)
    throw EngineError("inverse conjugate has support at or below the pair");
  return invconj_.emplace(key, std::move(res)).first->second;
}

void Collector::merge(std::vector<Int>& ev, Pend& pend, int g,
                      const Int& e) const {
  ev[g] += e;
  const Int& r = p_.rel_order[g];
  if (r == 0) return;
  if (ev[g] >= r) {
    ev[g] -= r;
    push_word(pend, p_.power_tail[g]);
  } else if (ev[g] < 0) {
    ev[g] += r;
    push_word_inverse(pend, p_.power_tail[g]);
  }
}

void Collector::run(std::vector<Int>& ev, Pend& pend) const {
  long long steps = 0;
  while (!pend.empty()) {
    if (++steps > kStepGuard)
      throw EngineError("collection exceeded its step guard");
    Letter L = std::move(pend.back());
    pend.pop_back();
    if (L.e == 0) continue;
    const int g = L.g;
    const Int& r = p_.rel_order[g];

    // Reduce the letter exponent into [0, r): g^e = g^{e mod r} * (g^r)^q.
    if (r != 0 && (L.e < 0 || L.e >= r)) {
      Int q = fdiv_q(L.e, r);
      Int rem = L.e - q * r;
      push_word_power(pend, p_.power_tail[g], q);
      if (rem != 0) pend.push_back({g, std::move(rem)});
      continue;
    }

    bool conflict = false;
    for (int j = g + 1; j <= p_.n; ++j)
      if (ev[j] != 0 && !p_.comm[j][g].empty()) {
        conflict = true;
        break;
      }

    if (!conflict) {
      merge(ev, pend, g, L.e);
      continue;
    }

    // Move a single unit of g past the dirty suffix B:
    //   A * B * g^u * rest  =  A * g^u * B^{g^u} * rest.
    const int unit = (L.e > 0) ? 1 : -1;
    {
      Int remn = L.e - unit;
      if (remn != 0) pend.push_back({g, std::move(remn)});
    }

    std::vector<std::pair<int, Int>> suffix;
    for (int j = g + 1; j <= p_.n; ++j)
      if (ev[j] != 0) {
        suffix.emplace_back(j, ev[j]);
        ev[j] = 0;
      }

    Pend word;  // B^{g^u} in reading order
    for (const auto& [j, b] : suffix) {
      const SparseVec& w = p_.comm[j][g];
      if (w.empty()) {
        word.push_back({j, b});
        continue;
      }
      const SparseVec& c = (unit == 1) ? w : inverse_conjugate(j, g);
      if (word_central(c)) {
        // (g_j * c)^b = g_j^b * c^b when c is central.
        word.push_back({j, b});
        for (const auto& [k, ck] : c) word.push_back({k, ck * b});
        continue;
      }
      Int ab = abs(b);
      if (ab > kRepeatGuard)
        throw GuardError("collection: oversized conjugated run");
      long reps = ab.get_si();
      for (long t = 0; t < reps; ++t) {
        if (b > 0) {
          word.push_back({j, Int(1)});
          for (const auto& [k, ck] : c) word.push_back({k, ck});
        } else {
          for (auto it = c.rbegin(); it != c.rend(); ++it)
            word.push_back({it->first, -it->second});
          word.push_back({j, Int(-1)});
        }
      }
    }
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      pend.push_back(std::move(*it));
    merge(ev, pend, g, Int(unit));
  }
}

void Collector::mul_letter(std::vector<Int>& ev, int g, const Int& e) const {
  if (g < 1 || g > p_.n)
    throw InputError("generator index " + std::to_string(g) +
                     " out of range 1.." + std::to_string(p_.n));
  Pend pend;
  pend.push_back({g, e});
  run(ev, pend);
}

void Collector::mul_raw(std::vector<Int>& ev, const RawWord& w) const {
  Pend pend;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->first < 1 || it->first > p_.n)
      throw InputError("generator index " + std::to_string(it->first) +
                       " out of range 1.." + std::to_string(p_.n));
    pend.push_back({it->first, it->second});
  }
  run(ev, pend);
}

void Collector::mul_nf(std::vector<Int>& ev, const std::vector<Int>& v) const {
  Pend pend;
  for (int i = p_.n; i >= 1; --i)
    if (v[i] != 0) pend.push_back({i, v[i]});
  run(ev, pend);
}

void Collector::mul_nf_inverse(std::vector<Int>& ev,
                               const std::vector<Int>& v) const {
  Pend pend;
  for (int i = 1; i <= p_.n; ++i)
    if (v[i] != 0) pend.push_back({i, -v[i]});
  run(ev, pend);
}

void Collector::mul_sparse(std::vector<Int>& ev, const SparseVec& v) const {
  Pend pend;
  push_word(pend, v);
  run(ev, pend);
}

ExponentVector Collector::mul(const ExponentVector& u,
                              const ExponentVector& v) const {
  ExponentVector out = u;
  mul_nf(out.e, v.e);
  return out;
}

ExponentVector Collector::inv(const ExponentVector& u) const {
  ExponentVector out = identity_element(p_);
  mul_nf_inverse(out.e, u.e);
  return out;
}

ExponentVector Collector::pow(const ExponentVector& u, const Int& k) const {
  if (k < 0) return pow(inv(u), -k);
  ExponentVector result = identity_element(p_);
  ExponentVector base = u;
  Int kk = k;
  while (kk > 0) {
    if (mpz_odd_p(kk.get_mpz_t())) mul_nf(result.e, base.e);
    kk >>= 1;
    if (kk > 0) {
      ExponentVector sq = base;
      mul_nf(sq.e, base.e);
      base = std::move(sq);
    }
  }
  return result;
}

ExponentVector Collector::comm(const ExponentVector& u,
                               const ExponentVector& v) const {
  ExponentVector out = identity_element(p_);
  mul_nf_inverse(out.e, u.e);
  mul_nf_inverse(out.e, v.e);
  mul_nf(out.e, u.e);
  mul_nf(out.e, v.e);
  return out;
}

ExponentVector Collector::evaluate(
    const AbstractWord& w,
    const std::map<std::string, ExponentVector>& assignment) const {
  switch (w.kind) {
    case WordKind::Identity:
      return identity_element(p_);
    case WordKind::Atom: {
      auto it = assignment.find(w.atom.name);
      if (it == assignment.end())
        throw InputError("evaluate_word: no assignment for '" + w.atom.name +
                         "'");
      if (it->second.n() != p_.n)
        throw InputError("element has wrong length for this presentation");
      return it->second;
    }
    case WordKind::Product: {
      ExponentVector acc = identity_element(p_);
      for (const auto& c : w.children) mul_nf(acc.e, evaluate(c, assignment).e);
      return acc;
    }
    case WordKind::Power:
      return pow(evaluate(w.children.front(), assignment), w.exponent);
    case WordKind::Commutator: {
      ExponentVector acc = comm(evaluate(w.children[0], assignment),
                                evaluate(w.children[1], assignment));
      for (size_t i = 2; i < w.children.size(); ++i)
        acc = comm(acc, evaluate(w.children[i], assignment));
      return acc;
    }
  }
  return identity_element(p_);
}

// ---- arithmetic -------------------------------------------------------------

ExponentVector collect(const PcPresentation& p, const RawWord& w) {
  Collector c(p);
  ExponentVector out = identity_element(p);
  c.mul_raw(out.e, w);
  return out;
}

static void check_element(const PcPresentation& p, const ExponentVector& u) {
  if (u.n() != p.n)
    throw InputError("element has wrong length for this presentation");
}

ExponentVector multiply(const PcPresentation& p, const ExponentVector& u,
                        const ExponentVector& v) {
  check_element(p, u);
  check_element(p, v);
  return Collector(p).mul(u, v);
}

ExponentVector inverse(const PcPresentation& p, const ExponentVector& u) {
  check_element(p, u);
  return Collector(p).inv(u);
}

ExponentVector power(const PcPresentation& p, const ExponentVector& u,
                     const Int& k) {
  check_element(p, u);
  return Collector(p).pow(u, k);
}

ExponentVector commutator(const PcPresentation& p, const ExponentVector& u,
                          const ExponentVector& v) {
  check_element(p, u);
  check_element(p, v);
  return Collector(p).comm(u, v);
}

ExponentVector conjugate(const PcPresentation& p, const ExponentVector& u,
                         const ExponentVector& v) {
  check_element(p, u);
  check_element(p, v);
  Collector c(p);
  ExponentVector out = identity_element(p);
  c.mul_nf_inverse(out.e, v.e);
  c.mul_nf(out.e, u.e);
  c.mul_nf(out.e, v.e);
  return out;
}

Int group_order(const PcPresentation& p) {
  Int order = 1;
  for (int i = 1; i <= p.n; ++i) {
    if (p.rel_order[i] == 0) return 0;
    order *= p.rel_order[i];
  }
  return order;
}

int nilpotency_class(const PcPresentation& p) { return p.cls(); }

Int element_order(const PcPresentation& p, const ExponentVector& u, long cap) {
  check_element(p, u);
  Collector c(p);
  ExponentVector x = u;
  for (long k = 1; k <= cap; ++k) {
    if (is_identity(x)) return Int(k);
    c.mul_nf(x.e, u.e);
  }
  throw GuardError("element_order: iteration cap reached (infinite order?)");
}

ExponentVector evaluate_word(
    const PcPresentation& p, const AbstractWord& w,
    const std::map<std::string, ExponentVector>& assignment) {
  return Collector(p).evaluate(w, assignment);
}

// ---- consistency -------------------------------------------------------------

void for_each_consistency_defect(
    const PcPresentation& p, ConsistencyMode mode,
    const std::function<void(const std::string& desc,
                             const std::vector<Int>& lhs,
                             const std::vector<Int>& rhs)>& cb,
    int gen_limit) {
  Collector c(p);
  const int top = (gen_limit > 0 && gen_limit <= p.n) ? gen_limit : p.n;
  const int bound = p.cls() + 1;
  const bool weight_bounded = (mode != ConsistencyMode::Full);

  auto fmt = [](const char* pat, int a, int b, int k) {
    std::ostringstream os;
    os << pat << "(g" << a << ",g" << b;
    if (k) os << ",g" << k;
    os << ")";
    return os.str();
  };

  // Associativity overlaps g_k (g_j g_i) = (g_k g_j) g_i, k > j > i.
  for (int i = 1; i <= top; ++i) {
    if (mode == ConsistencyMode::EngineFast && p.weight[i] != 1) continue;
    for (int j = i + 1; j <= top; ++j) {
      for (int k = j + 1; k <= top; ++k) {
        if (weight_bounded &&
            p.weight[i] + p.weight[j] + p.weight[k] > bound)
          continue;
        std::vector<Int> lhs(p.n + 1, Int(0));
        c.mul_raw(lhs, {{k, 1}, {j, 1}, {i, 1}});
        std::vector<Int> inner(p.n + 1, Int(0));
        c.mul_raw(inner, {{j, 1}, {i, 1}});
        std::vector<Int> rhs(p.n + 1, Int(0));
        rhs[k] = 1;
        c.mul_nf(rhs, inner);
        cb(fmt("assoc", k, j, i), lhs, rhs);
      }
    }
  }

  // Power overlaps: (g_j^{e_j}) g_i = g_j^{e_j-1} (g_j g_i)  for j > i,
  //                 g_j (g_i^{e_i}) = (g_j g_i) g_i^{e_i-1}  for j > i,
  //                 g_i^{e_i} g_i = g_i g_i^{e_i}.
  for (int j = 1; j <= top; ++j) {
    if (p.rel_order[j] == 0) continue;
    for (int i = 1; i < j; ++i) {
      if (weight_bounded && p.weight[i] + p.weight[j] > bound) continue;
      std::vector<Int> lhs(p.n + 1, Int(0));
      c.mul_raw(lhs, {{j, p.rel_order[j]}, {i, 1}});
      std::vector<Int> inner(p.n + 1, Int(0));
      c.mul_raw(inner, {{j, 1}, {i, 1}});
      std::vector<Int> rhs(p.n + 1, Int(0));
      c.mul_letter(rhs, j, p.rel_order[j] - 1);
      c.mul_nf(rhs, inner);
      cb(fmt("power-left", j, i, 0), lhs, rhs);
    }
  }
  for (int i = 1; i <= top; ++i) {
    if (p.rel_order[i] == 0) continue;
    for (int j = i + 1; j <= top; ++j) {
      if (weight_bounded && p.weight[i] + p.weight[j] > bound) continue;
      std::vector<Int> lhs(p.n + 1, Int(0));
      lhs[j] = 1;
      c.mul_sparse(lhs, p.power_tail[i]);
      std::vector<Int> rhs(p.n + 1, Int(0));
      c.mul_raw(rhs, {{j, 1}, {i, 1}, {i, p.rel_order[i] - 1}});
      cb(fmt("power-right", j, i, 0), lhs, rhs);
    }
    std::vector<Int> lhs(p.n + 1, Int(0));
    c.mul_raw(lhs, {{i, p.rel_order[i]}, {i, 1}});
    std::vector<Int> rhs(p.n + 1, Int(0));
    rhs[i] = 1;
    c.mul_sparse(rhs, p.power_tail[i]);
    cb(fmt("power-self", i, i, 0), lhs, rhs);
  }
}

std::vector<Violation> consistency_violations(const PcPresentation& p,
                                              bool full) {
  std::vector<Violation> out;
  for_each_consistency_defect(
      p, full ? ConsistencyMode::Full : ConsistencyMode::Bounded,
      [&](const std::string& desc, const std::vector<Int>& lhs,
          const std::vector<Int>& rhs) {
        if (lhs != rhs)
          out.push_back(Violation{desc, ExponentVector{lhs},
                                  ExponentVector{rhs}});
      });

  // Definition coherence: a generator introduced for a relation must still
  // appear as the leading term of that relation's tail.
  for (int k = 1; k <= p.n; ++k) {
    const Definition& d = p.definition[k];
    if (d.kind == DefKind::Commutator) {
      const SparseVec& t = p.comm_tail(d.a, d.b);
      if (t.empty() || t.front().first != k || t.front().second != 1) {
        Violation v;
        v.description = "definition of g" + std::to_string(k) + " as [g" +
                        std::to_string(d.a) + ",g" + std::to_string(d.b) +
                        "] is not realized by the commutator tail";
        v.lhs = ExponentVector{to_dense(t, p.n)};
        ExponentVector want = identity_element(p);
        want.e[k] = 1;
        v.rhs = want;
        out.push_back(std::move(v));
      }
    } else if (d.kind == DefKind::Power) {
      const SparseVec& t = p.power_tail[d.a];
      if (t.empty() || t.front().first != k || t.front().second != 1) {
        Violation v;
        v.description = "definition of g" + std::to_string(k) + " as g" +
                        std::to_string(d.a) + "^" +
                        p.rel_order[d.a].get_str() +
                        " is not realized by the power tail";
        v.lhs = ExponentVector{to_dense(t, p.n)};
        ExponentVector want = identity_element(p);
        want.e[k] = 1;
        v.rhs = want;
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

}  // namespace engelnq
