#include "engelnq/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace engelnq {

FiniteGroup FiniteGroup::enumerate(const PcPresentation& p, long bound) {
  Int ord = group_order(p);
  if (ord == 0) throw GuardError("enumerate: the group is infinite");
  if (bound > 8192)
    throw GuardError("enumerate: bound exceeds the table-based oracle limit");
  if (ord > bound)
    throw GuardError("enumerate: group order " + ord.get_str() +
                     " exceeds the bound " + std::to_string(bound));

  FiniteGroup g;
  g.origin_ = std::make_shared<PcPresentation>(p);
  g.order_ = static_cast<long>(ord.get_si());
  const long N = g.order_;
  const int n = p.n;

  // Mixed-radix strides: index of an element is its rank in lexicographic
  // exponent-vector order.
  std::vector<long> stride(n + 2, 1);
  for (int i = n - 1; i >= 1; --i)
    stride[i] = stride[i + 1] * p.rel_order[i + 1].get_si();

  g.elements_.reserve(N);
  {
    ExponentVector cur = identity_element(p);
    for (long idx = 0; idx < N; ++idx) {
      g.elements_.push_back(cur);
      int i = n;
      while (i >= 1) {
        cur.e[i] += 1;
        if (cur.e[i] < p.rel_order[i]) break;
        cur.e[i] = 0;
        --i;
      }
    }
  }

  auto index_of_dense = [&](const std::vector<Int>& e) -> long {
    long idx = 0;
    for (int i = 1; i <= n; ++i) idx += e[i].get_si() * stride[i];
    return idx;
  };

  // Per-generator right-multiplication steps, then the full table by
  // composing steps along the mixed-radix decomposition of y.
  Collector coll(p);
  std::vector<std::vector<uint16_t>> step(n + 1);
  for (int gen = 1; gen <= n; ++gen) {
    step[gen].resize(N);
    for (long x = 0; x < N; ++x) {
      std::vector<Int> ev = g.elements_[x].e;
      coll.mul_letter(ev, gen, Int(1));
      step[gen][x] = static_cast<uint16_t>(index_of_dense(ev));
    }
  }

  g.table_.assign(static_cast<size_t>(N) * N, 0);
  // last_gen[y] = largest i with nonzero digit; pred[y] = y with that digit
  // decremented, so y = pred * g_i and T[x][y] = step_i[T[x][pred]].
  std::vector<int> last_gen(N, 0);
  std::vector<long> pred(N, 0);
  for (long y = 1; y < N; ++y) {
    const auto& e = g.elements_[y].e;
    int i = n;
    while (e[i] == 0) --i;
    last_gen[y] = i;
    pred[y] = y - stride[i];
  }
  for (long x = 0; x < N; ++x) {
    uint16_t* row = &g.table_[static_cast<size_t>(x) * N];
    row[0] = static_cast<uint16_t>(x);
    for (long y = 1; y < N; ++y)
      row[y] = step[last_gen[y]][row[pred[y]]];
  }

  g.inv_.resize(N);
  for (long x = 0; x < N; ++x) {
    ExponentVector iv = coll.inv(g.elements_[x]);
    g.inv_[x] = static_cast<uint16_t>(index_of_dense(iv.e));
  }
  return g;
}

int FiniteGroup::index_of(const ExponentVector& v) const {
  auto it = std::lower_bound(
      elements_.begin(), elements_.end(), v,
      [](const ExponentVector& a, const ExponentVector& b) {
        return std::lexicographical_compare(a.e.begin() + 1, a.e.end(),
                                            b.e.begin() + 1, b.e.end());
      });
  if (it == elements_.end() || !(*it == v))
    throw InputError("index_of: element is not in the group");
  return static_cast<int>(it - elements_.begin());
}

long FiniteGroup::element_order(int x) const {
  long k = 1;
  int cur = x;
  while (cur != 0) {
    cur = mult(cur, x);
    ++k;
    if (k > order_) throw EngineError("element order exceeds group order");
  }
  return k;
}

Int FiniteGroup::exponent() const {
  Int ex = 1;
  for (long x = 0; x < order_; ++x) {
    Int o(element_order(static_cast<int>(x)));
    mpz_lcm(ex.get_mpz_t(), ex.get_mpz_t(), o.get_mpz_t());
  }
  return ex;
}

std::vector<int> subgroup_closure(const FiniteGroup& g,
                                  const std::vector<int>& gens) {
  std::vector<char> in(g.order(), 0);
  std::vector<int> work;
  in[0] = 1;
  work.push_back(0);
  for (size_t head = 0; head < work.size(); ++head) {
    int x = work[head];
    for (int gen : gens) {
      int y = g.mult(x, gen);
      if (!in[y]) {
        in[y] = 1;
        work.push_back(y);
      }
      int z = g.mult(x, g.inv(gen));
      if (!in[z]) {
        in[z] = 1;
        work.push_back(z);
      }
    }
  }
  std::sort(work.begin(), work.end());
  return work;
}

static std::vector<int> commutator_generators(const FiniteGroup& g,
                                              const std::vector<int>& a,
                                              const std::vector<int>& b) {
  std::set<int> out;
  for (int x : a)
    for (int y : b) {
      int c = g.comm(x, y);
      if (c != 0) out.insert(c);
    }
  return {out.begin(), out.end()};
}

int derived_length(const FiniteGroup& g, const std::vector<int>& members) {
  std::vector<int> cur = members;
  int len = 0;
  while (cur.size() > 1) {
    ++len;
    if (len > 64) throw EngineError("derived series does not terminate");
    cur = subgroup_closure(g, commutator_generators(g, cur, cur));
  }
  return len;
}

int nilpotency_class_of_subgroup(const FiniteGroup& g,
                                 const std::vector<int>& members) {
  std::vector<int> cur = members;
  int cls = 0;
  while (cur.size() > 1) {
    ++cls;
    if (cls > 64) throw EngineError("lower central series does not terminate");
    cur = subgroup_closure(g, commutator_generators(g, cur, members));
  }
  return cls;
}

SubgroupWitness make_witness(const FiniteGroup& g, std::vector<int> members) {
  SubgroupWitness w;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  w.members = std::move(members);

  std::vector<char> in(g.order(), 0);
  for (int x : w.members) in[x] = 1;
  if (w.members.empty() || !in[0]) {
    w.is_subgroup = false;
    return w;
  }
  w.is_subgroup = true;
  for (int x : w.members) {
    if (!in[g.inv(x)]) {
      w.is_subgroup = false;
      break;
    }
    for (int y : w.members)
      if (!in[g.mult(x, y)]) {
        w.is_subgroup = false;
        break;
      }
    if (!w.is_subgroup) break;
  }
  if (!w.is_subgroup) return w;

  w.is_normal = true;
  for (long gg = 0; gg < g.order() && w.is_normal; ++gg)
    for (int s : w.members)
      if (!in[g.conj(s, static_cast<int>(gg))]) {
        w.is_normal = false;
        break;
      }

  // greedy generating subset
  std::vector<int> gens;
  std::vector<char> have(g.order(), 0);
  have[0] = 1;
  long covered = 1;
  for (int x : w.members) {
    if (have[x]) continue;
    gens.push_back(x);
    for (int y : subgroup_closure(g, gens))
      if (!have[y]) {
        have[y] = 1;
        ++covered;
      }
    if (covered == static_cast<long>(w.members.size())) break;
  }
  w.generators = std::move(gens);

  w.nilpotency_class = nilpotency_class_of_subgroup(g, w.members);
  w.derived_length = derived_length(g, w.members);
  return w;
}

SubgroupWitness right_2_engel_set(const FiniteGroup& g) {
  if (g.order() > 4096)
    throw GuardError("right_2_engel_set: size guard (2^12) exceeded");
  std::vector<int> members;
  for (long a = 0; a < g.order(); ++a) {
    bool ok = true;
    for (long x = 0; x < g.order(); ++x) {
      int c = g.comm(g.comm(static_cast<int>(a), static_cast<int>(x)),
                     static_cast<int>(x));
      if (c != 0) {
        ok = false;
        break;
      }
    }
    if (ok) members.push_back(static_cast<int>(a));
  }
  return make_witness(g, std::move(members));
}

FiniteGroup quotient(const FiniteGroup& g, const SubgroupWitness& n) {
  if (!n.is_subgroup || !n.is_normal)
    throw InputError("quotient: the witness is not a normal subgroup");
  const long N = g.order();
  std::vector<int> rep(N);
  for (long x = 0; x < N; ++x) {
    int m = static_cast<int>(x);
    for (int s : n.members) m = std::min(m, g.mult(static_cast<int>(x), s));
    rep[x] = m;
  }
  for (long x = 0; x < N; ++x)
    for (int s : n.members)
      if (rep[g.mult(static_cast<int>(x), s)] != rep[x])
        throw EngineError("quotient: cosets are not well defined");

  std::vector<int> reps;
  for (long x = 0; x < N; ++x)
    if (rep[x] == x) reps.push_back(static_cast<int>(x));
  std::vector<int> qidx(N, -1);
  for (size_t i = 0; i < reps.size(); ++i) qidx[reps[i]] = static_cast<int>(i);

  FiniteGroup q;
  q.origin_ = g.origin_;
  q.order_ = static_cast<long>(reps.size());
  for (int r : reps) q.elements_.push_back(g.element(r));
  q.table_.assign(static_cast<size_t>(q.order_) * q.order_, 0);
  for (long a = 0; a < q.order_; ++a)
    for (long b = 0; b < q.order_; ++b)
      q.table_[static_cast<size_t>(a) * q.order_ + b] =
          static_cast<uint16_t>(qidx[rep[g.mult(reps[a], reps[b])]]);
  q.inv_.resize(q.order_);
  for (long a = 0; a < q.order_; ++a)
    q.inv_[a] = static_cast<uint16_t>(qidx[rep[g.inv(reps[a])]]);

  // representative independence of the product, exhaustively
  for (long a = 0; a < q.order_; ++a)
    for (int s1 : n.members) {
      int xa = g.mult(reps[a], s1);
      for (long b = 0; b < q.order_; ++b) {
        int want = rep[g.mult(reps[a], reps[b])];
        for (int s2 : n.members)
          if (rep[g.mult(xa, g.mult(reps[b], s2))] != want)
            throw EngineError(
                "quotient: product depends on coset representatives");
      }
    }
  return q;
}

std::vector<int> involutions(const FiniteGroup& g) {
  std::vector<int> out;
  for (long u = 1; u < g.order(); ++u)
    if (g.mult(static_cast<int>(u), static_cast<int>(u)) == 0)
      out.push_back(static_cast<int>(u));
  return out;
}

bool is_left_2_engel(const FiniteGroup& g, int u) {
  for (long x = 0; x < g.order(); ++x)
    if (g.comm(g.comm(static_cast<int>(x), u), u) != 0) return false;
  return true;
}

SubgroupWitness normal_closure(const FiniteGroup& g, int u) {
  std::set<int> orbit;
  for (long x = 0; x < g.order(); ++x)
    orbit.insert(g.conj(u, static_cast<int>(x)));
  std::vector<int> gens(orbit.begin(), orbit.end());
  return make_witness(g, subgroup_closure(g, gens));
}

bool is_abelian(const FiniteGroup& g, const std::vector<int>& members) {
  for (size_t i = 0; i < members.size(); ++i)
    for (size_t j = i + 1; j < members.size(); ++j)
      if (g.comm(members[i], members[j]) != 0) return false;
  return true;
}

LemmaReport check_lemma(const FiniteGroup& g) {
  LemmaReport rep;
  rep.order = Int(g.order());
  rep.exponent = g.exponent();
  if (rep.exponent != 1 && rep.exponent != 2 && rep.exponent != 4)
    throw GuardError("check_lemma: hypothesis violated, exponent is " +
                     rep.exponent.get_str() + " (must divide 4)");
  SubgroupWitness r2 = right_2_engel_set(g);
  rep.r2_order = static_cast<long>(r2.members.size());
  FiniteGroup q = quotient(g, r2);
  rep.quotient_order = q.order();
  std::vector<int> invs = involutions(q);
  rep.involution_count = static_cast<long>(invs.size());
  rep.pass = true;
  for (int u : invs) {
    for (long x = 0; x < q.order(); ++x) {
      if (q.comm(q.comm(static_cast<int>(x), u), u) != 0) {
        rep.pass = false;
        rep.witnesses.emplace_back(q.element(u),
                                   q.element(static_cast<int>(x)));
        break;
      }
    }
  }
  return rep;
}

static nlohmann::json vec_json(const ExponentVector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 1; i <= v.n(); ++i) a.push_back(v.e[i].get_str());
  return a;
}

std::string lemma_report_json(const std::string& group_name,
                              const LemmaReport& r) {
  nlohmann::json j;
  j["group"] = group_name;
  j["order"] = r.order.get_str();
  j["exponent"] = r.exponent.get_str();
  j["r2_order"] = r.r2_order;
  j["quotient_order"] = r.quotient_order;
  j["involution_count"] = r.involution_count;
  j["lemma_pass"] = r.pass;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& [u, x] : r.witnesses)
    w.push_back(nlohmann::json{{"u", vec_json(u)}, {"x", vec_json(x)}});
  j["witnesses"] = w;
  return j.dump();
}

std::string r2_report_json(const std::string& group_name, const FiniteGroup& g,
                           const SubgroupWitness& r2) {
  nlohmann::json j;
  j["group"] = group_name;
  j["order"] = Int(g.order()).get_str();
  j["r2_order"] = static_cast<long>(r2.members.size());
  j["r2_is_subgroup"] = r2.is_subgroup;
  j["r2_is_normal"] = r2.is_normal;
  j["r2_nilpotency_class"] = r2.nilpotency_class;
  j["r2_derived_length"] = r2.derived_length;
  j["r2_generator_count"] = static_cast<long>(r2.generators.size());
  return j.dump();
}

}  // namespace engelnq
