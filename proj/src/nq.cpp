#include "engelnq/nq.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace engelnq {

namespace {

struct Tail {
  enum Kind { Image, Power, Comm } kind = Image;
  std::string image_name;  // Image
  int a = 0, b = 0;        // Power: a; Comm: (a, b) = (j, i), a > b
  bool candidate = false;  // allowed to survive as a new generator
  int pcp_index = 0;       // index in the tailed presentation
};

struct ExtensionPlan {
  PcPresentation tailed;
  std::map<std::string, ExponentVector> images;
  std::vector<Tail> tails;
  int old_n = 0;
  int new_class = 1;
};

// Tails in elimination order: epimorphism tails first, then power tails,
// then off-candidate commutator tails, then the candidates [g_j, g_i] with
// w(g_j) = class, w(g_i) = 1. Candidates on the smallest-index weight-1
// generator come last so they are the ones kept as definitions.
ExtensionPlan build_plan(const NqState& s) {
  ExtensionPlan plan;
  const PcPresentation& p = s.p;
  plan.old_n = p.n;
  plan.new_class = s.cls + 1;

  std::set<std::pair<int, int>> defined;       // commutator-defining pairs
  std::set<int> power_defining;                // i with some g_k := g_i^{e_i}
  for (int k = 1; k <= p.n; ++k) {
    if (p.definition[k].kind == DefKind::Commutator)
      defined.insert({p.definition[k].a, p.definition[k].b});
    if (p.definition[k].kind == DefKind::Power)
      power_defining.insert(p.definition[k].a);
  }

  std::vector<Tail> tails;
  for (const auto& name : s.gen_names) {
    if (s.defining_gen.count(name)) continue;
    Tail t;
    t.kind = Tail::Image;
    t.image_name = name;
    t.candidate = (plan.old_n == 0);
    tails.push_back(std::move(t));
  }
  for (int i = 1; i <= p.n; ++i) {
    if (p.rel_order[i] == 0) continue;
    if (power_defining.count(i)) continue;
    Tail t;
    t.kind = Tail::Power;
    t.a = i;
    tails.push_back(std::move(t));
  }
  for (int j = 2; j <= p.n; ++j)
    for (int i = 1; i < j; ++i) {
      if (p.weight[i] + p.weight[j] > plan.new_class) continue;
      if (defined.count({j, i})) continue;
      if (p.weight[i] == 1 && p.weight[j] == s.cls) continue;  // candidate
      Tail t;
      t.kind = Tail::Comm;
      t.a = j;
      t.b = i;
      tails.push_back(std::move(t));
    }
  {
    int w1 = 0;
    while (w1 + 1 <= p.n && p.weight[w1 + 1] == 1) ++w1;
    for (int i = w1; i >= 1; --i)
      for (int j = i + 1; j <= p.n; ++j) {
        if (p.weight[j] != s.cls) continue;
        if (defined.count({j, i})) continue;
        Tail t;
        t.kind = Tail::Comm;
        t.a = j;
        t.b = i;
        t.candidate = true;
        tails.push_back(std::move(t));
      }
  }

  const int T = static_cast<int>(tails.size());
  PcPresentation tp = p;
  tp.resize(p.n + T);
  for (int t = 0; t < T; ++t) {
    int idx = plan.old_n + 1 + t;
    tails[t].pcp_index = idx;
    tp.weight[idx] = plan.new_class;
    tp.rel_order[idx] = 0;
    tp.definition[idx] = Definition{};
  }
  for (const auto& name : s.gen_names) {
    ExponentVector v;
    v.e.assign(tp.n + 1, Int(0));
    auto it = s.images.find(name);
    if (it != s.images.end())
      for (int i = 1; i <= p.n; ++i) v.e[i] = it->second.e[i];
    plan.images[name] = std::move(v);
  }
  for (const auto& t : tails) {
    switch (t.kind) {
      case Tail::Image:
        plan.images[t.image_name].e[t.pcp_index] = 1;
        break;
      case Tail::Power:
        tp.power_tail[t.a].emplace_back(t.pcp_index, Int(1));
        break;
      case Tail::Comm:
        tp.comm_tail_mut(t.a, t.b).emplace_back(t.pcp_index, Int(1));
        break;
    }
  }
  plan.tailed = std::move(tp);
  plan.tails = std::move(tails);
  return plan;
}

// Abelianized exponent sum of variable `v` in `w`.
Int variable_exponent_sum(const AbstractWord& w, const Atom& v) {
  switch (w.kind) {
    case WordKind::Identity:
      return 0;
    case WordKind::Atom:
      return w.atom == v ? 1 : 0;
    case WordKind::Product: {
      Int s = 0;
      for (const auto& c : w.children) s += variable_exponent_sum(c, v);
      return s;
    }
    case WordKind::Power:
      return w.exponent * variable_exponent_sum(w.children.front(), v);
    case WordKind::Commutator:
      return 0;
  }
  return 0;
}

struct InstanceCandidate {
  ExponentVector element;
  int weight = 0;
  std::string desc;
};

// Elements substituted for law variables.
//
// depth 1 instantiates single pc generators and depth 2 adds products of two
// distinct generators; both are kept as cross-check modes, and both are
// demonstrably too weak for exponent laws (the two-involution group with the
// x^4 law comes out of order 16 instead of 8 at depth 1, and the
// two-generator exponent-4 group leaves class 5 with extra tails at depth 2).
// The default (depth 0) substitutes every normal word g_{i1}^{e1}...g_{ik}^{ek}
// of letter weight sum(e_j * w_{i_j}) <= weight_bound, the instance set used
// for exponent enforcement in quotient practice; the weight bound keeps the
// set finite even over infinite relative orders.
std::vector<InstanceCandidate> instance_candidates(const Collector& coll,
                                                   int old_n, int depth,
                                                   int weight_bound) {
  const PcPresentation& tp = coll.presentation();
  std::vector<InstanceCandidate> out;
  if (depth >= 1) {
    for (int i = 1; i <= old_n; ++i) {
      InstanceCandidate c;
      c.element = identity_element(tp);
      c.element.e[i] = 1;
      c.weight = tp.weight[i];
      c.desc = "g" + std::to_string(i);
      out.push_back(std::move(c));
    }
    if (depth < 2) return out;
    std::vector<int> combo;
    auto rec = [&](auto&& self, int start, int wsum) -> void {
      if (static_cast<int>(combo.size()) >= 2) {
        InstanceCandidate c;
        std::vector<Int> ev(tp.n + 1, Int(0));
        for (int g : combo) coll.mul_letter(ev, g, Int(1));
        c.element.e = std::move(ev);
        c.weight = wsum;
        std::string d;
        for (int g : combo) d += (d.empty() ? "g" : "*g") + std::to_string(g);
        c.desc = std::move(d);
        out.push_back(std::move(c));
      }
      if (static_cast<int>(combo.size()) == depth) return;
      for (int g = start; g <= old_n; ++g) {
        int w = wsum + tp.weight[g];
        if (w > weight_bound) continue;
        combo.push_back(g);
        self(self, g + 1, w);
        combo.pop_back();
      }
    };
    rec(rec, 1, 0);
    return out;
  }

  // full normal-word enumeration; elements are built incrementally from the
  // parent word's collected form
  struct Frame {
    std::vector<Int> ev;
    std::string desc;
  };
  auto rec = [&](auto&& self, int start, int wsum, const Frame& parent) -> void {
    for (int g = start; g <= old_n; ++g) {
      const int w = tp.weight[g];
      if (wsum + w > weight_bound) continue;
      const Int& r = tp.rel_order[g];
      long max_e = (weight_bound - wsum) / w;
      if (r != 0 && r - 1 < max_e) max_e = static_cast<long>(r.get_si()) - 1;
      for (long sgn = 0; sgn < 2; ++sgn) {
        if (sgn == 1 && r != 0) break;  // negatives only for infinite orders
        for (long e = 1; e <= max_e; ++e) {
          Frame f;
          f.ev = parent.ev;
          coll.mul_letter(f.ev, g, Int(sgn ? -e : e));
          f.desc = parent.desc + (parent.desc.empty() ? "g" : "*g") +
                   std::to_string(g) + "^" + std::to_string(sgn ? -e : e);
          InstanceCandidate c;
          c.element.e = f.ev;
          c.weight = wsum + static_cast<int>(e) * w;
          c.desc = f.desc;
          out.push_back(std::move(c));
          self(self, g + 1, wsum + static_cast<int>(e) * w, f);
        }
      }
    }
  };
  Frame root;
  root.ev.assign(tp.n + 1, Int(0));
  rec(rec, 1, 0, root);
  return out;
}

SparseRow value_row(const std::vector<Int>& value, int old_n, int m) {
  SparseRow row;
  for (int i = old_n + 1; i <= m; ++i)
    if (value[i] != 0) row.emplace_back(i - old_n - 1, value[i]);
  return row;
}

void check_old_part_zero(const std::vector<Int>& value, int old_n,
                         const std::string& what, bool engine_bug) {
  for (int i = 1; i <= old_n; ++i)
    if (value[i] != 0) {
      std::string msg = what + " does not lie in the new centre";
      if (engine_bug) throw EngineError(msg);
      throw GuardError(msg +
                       "; the law instantiation strategy is too weak at this "
                       "depth, rerun with a higher --depth");
    }
}

// Enumerate the law instances for one extension step.  `sink` receives each
// substitution together with the harvested row.
void enumerate_law_rows(
    const NqState& s, const ExtensionPlan& plan, const Collector& coll,
    const NqOptions& opt, long long& instances,
    const std::function<void(SparseRow)>& submit,
    const std::function<void(int, std::map<std::string, ExponentVector>,
                             const SparseRow&)>& sink) {
  const PcPresentation& tp = plan.tailed;
  const int old_n = plan.old_n;
  const int m = tp.n;
  std::vector<InstanceCandidate> cands =
      instance_candidates(coll, old_n, opt.depth, plan.new_class);

  for (size_t li = 0; li < s.pres.laws.size(); ++li) {
    const Law& law = s.pres.laws[li];

    // Base value at the all-identity substitution; for a central element t,
    // w(..., t, ...) = w(..., 1, ...) * t^e with e the abelianized exponent
    // of the variable, so each tail contributes one closed-form row.
    std::map<std::string, ExponentVector> asg = plan.images;
    for (const auto& v : law.variables) asg[v.name] = identity_element(tp);
    ExponentVector base = coll.evaluate(law.body, asg);
    check_old_part_zero(base.e, old_n, "law value at the identity", true);
    SparseRow base_row = value_row(base.e, old_n, m);
    if (!base_row.empty()) submit(base_row);
    for (const auto& v : law.variables) {
      Int ev = variable_exponent_sum(law.body, v);
      if (ev == 0) continue;
      for (const auto& t : plan.tails) {
        long col = t.pcp_index - old_n - 1;
        SparseRow r = sparse_row_combine(1, base_row, 1, {{col, ev}});
        submit(std::move(r));
      }
    }

    // Generator (and product) substitutions, odometer order, weight-bounded.
    const size_t k = law.variables.size();
    std::vector<size_t> pick(k, 0);
    if (cands.empty()) continue;
    for (;;) {
      int wsum = 0;
      for (size_t vi = 0; vi < k; ++vi) wsum += cands[pick[vi]].weight;
      if (wsum <= plan.new_class) {
        opt.budget.check_instances(++instances);
        if ((instances & 63) == 0) opt.budget.check_time();
        std::map<std::string, ExponentVector> sub;
        std::map<std::string, ExponentVector> assignment = plan.images;
        for (size_t vi = 0; vi < k; ++vi) {
          sub[law.variables[vi].name] = cands[pick[vi]].element;
          assignment[law.variables[vi].name] = cands[pick[vi]].element;
        }
        ExponentVector val = coll.evaluate(law.body, assignment);
        check_old_part_zero(val.e, old_n, "law instance value", false);
        SparseRow r = value_row(val.e, old_n, m);
        if (sink) sink(static_cast<int>(li), std::move(sub), r);
        submit(std::move(r));
      }
      // advance odometer, last variable fastest
      size_t vi = k;
      for (;;) {
        if (vi == 0) break;
        --vi;
        if (++pick[vi] < cands.size()) break;
        pick[vi] = 0;
        if (vi == 0) {
          vi = SIZE_MAX;
          break;
        }
      }
      if (vi == SIZE_MAX || k == 0) break;
    }
  }
}

void harvest(const NqState& s, const ExtensionPlan& plan, const NqOptions& opt,
             RowEchelon& ech, long long& rows, long long& instances) {
  const PcPresentation& tp = plan.tailed;
  const int old_n = plan.old_n;
  const int m = tp.n;
  Collector coll(tp);

  auto submit = [&](SparseRow r) {
    if (r.empty()) return;
    opt.budget.check_rows(++rows);
    ech.add_row(std::move(r));
  };

  long long tested = 0;
  for_each_consistency_defect(
      tp,
      opt.thorough_consistency ? ConsistencyMode::Bounded
                               : ConsistencyMode::EngineFast,
      [&](const std::string& desc, const std::vector<Int>& lhs,
          const std::vector<Int>& rhs) {
        if ((++tested & 63) == 0) opt.budget.check_time();
        SparseRow r;
        for (int i = 1; i <= old_n; ++i)
          if (lhs[i] != rhs[i])
            throw EngineError("consistency defect not central at " + desc);
        for (int i = old_n + 1; i <= m; ++i) {
          Int d = lhs[i] - rhs[i];
          if (d != 0) r.emplace_back(i - old_n - 1, std::move(d));
        }
        submit(std::move(r));
      },
      old_n);

  for (const auto& rel : s.pres.relators) {
    opt.budget.check_time();
    ExponentVector v = coll.evaluate(rel, plan.images);
    check_old_part_zero(v.e, old_n, "relator image", true);
    submit(value_row(v.e, old_n, m));
  }

  enumerate_law_rows(s, plan, coll, opt, instances, submit, nullptr);
}

struct Disposition {
  bool survives = false;
  Int order = 0;     // survivor: 0 or >= 2
  SparseVec expr;    // survivor: power tail; eliminated: its value
  int final_index = 0;
};

int eliminate(const ExtensionPlan& plan, const HnfResult& h,
              std::vector<Disposition>& disp) {
  const int T = static_cast<int>(plan.tails.size());
  std::vector<long> pivot_row(T, -1);
  for (long r = 0; r < h.h.rows; ++r) pivot_row[h.pivot_cols[r]] = r;

  disp.assign(T, Disposition{});
  int fi = plan.old_n;
  for (int t = 0; t < T; ++t) {
    long r = pivot_row[t];
    Int pv = (r < 0) ? Int(0) : h.h.at(r, t);
    bool surv = (pv == 0 || pv >= 2);
    disp[t].survives = surv;
    disp[t].order = surv ? pv : Int(1);
    if (surv) {
      if (!plan.tails[t].candidate) {
        const Tail& tl = plan.tails[t];
        std::string where =
            tl.kind == Tail::Image ? "image of " + tl.image_name
            : tl.kind == Tail::Power
                ? "power relation of g" + std::to_string(tl.a)
                : "[g" + std::to_string(tl.a) + ",g" + std::to_string(tl.b) +
                      "]";
        throw EngineError("temporary tail on " + where +
                          " survived elimination");
      }
      disp[t].final_index = ++fi;
    }
  }
  const int new_n = fi;

  std::vector<Int> forder(new_n + 1, Int(0));
  std::vector<const SparseVec*> fptail(new_n + 1, nullptr);
  for (int t = 0; t < T; ++t)
    if (disp[t].survives) forder[disp[t].final_index] = disp[t].order;

  auto normalize = [&](std::map<int, Int>& acc) {
    for (auto it = acc.begin(); it != acc.end(); ++it) {
      int g = it->first;
      if (g <= plan.old_n) continue;
      const Int& mo = forder[g];
      if (mo == 0) continue;
      Int q = fdiv_q(it->second, mo);
      if (q == 0) continue;
      it->second -= q * mo;
      if (fptail[g])
        for (const auto& [gg, cc] : *fptail[g]) acc[gg] += q * cc;
    }
  };

  for (int t = T - 1; t >= 0; --t) {
    long r = pivot_row[t];
    std::map<int, Int> acc;
    if (r >= 0) {
      // pv * t + sum a_u * u = 0 with all surviving u (entries over
      // eliminated columns were reduced to zero by the HNF normalization).
      for (int u = t + 1; u < T; ++u) {
        const Int& a = h.h.at(r, u);
        if (a == 0) continue;
        if (!disp[u].survives)
          throw EngineError("eliminated tail appears in a reduced relation");
        acc[disp[u].final_index] -= a;
      }
      normalize(acc);
    }
    SparseVec packed;
    for (auto& [g, c] : acc)
      if (c != 0) packed.emplace_back(g, c);
    disp[t].expr = std::move(packed);
    if (disp[t].survives) fptail[disp[t].final_index] = &disp[t].expr;
  }
  return new_n - plan.old_n;
}

NqState rebuild(const NqState& s, const ExtensionPlan& plan,
                const std::vector<Disposition>& disp, int survived) {
  const int old_n = plan.old_n;
  const int new_n = old_n + survived;

  NqState ns;
  ns.pres = s.pres;
  ns.gen_names = s.gen_names;
  ns.defining_gen = s.defining_gen;
  ns.cls = survived > 0 ? plan.new_class : s.cls;
  ns.log = s.log;

  PcPresentation np;
  np.resize(new_n);
  for (int i = 1; i <= old_n; ++i) {
    np.weight[i] = s.p.weight[i];
    np.rel_order[i] = s.p.rel_order[i];
    np.definition[i] = s.p.definition[i];
  }
  for (int t = 0; t < static_cast<int>(plan.tails.size()); ++t) {
    if (!disp[t].survives) continue;
    int fi = disp[t].final_index;
    np.weight[fi] = plan.new_class;
    np.rel_order[fi] = disp[t].order;
    np.power_tail[fi] = disp[t].expr;
    const Tail& tl = plan.tails[t];
    np.definition[fi] = tl.kind == Tail::Comm
                            ? Definition{DefKind::Commutator, tl.a, tl.b}
                            : Definition{};
  }

  auto normalize = [&](std::map<int, Int>& acc) {
    for (auto it = acc.begin(); it != acc.end(); ++it) {
      int g = it->first;
      if (g <= old_n) continue;
      const Int& mo = np.rel_order[g];
      if (mo == 0) continue;
      Int q = fdiv_q(it->second, mo);
      if (q == 0) continue;
      it->second -= q * mo;
      for (const auto& [gg, cc] : np.power_tail[g]) acc[gg] += q * cc;
    }
  };
  auto rewrite = [&](const SparseVec& v) -> SparseVec {
    std::map<int, Int> acc;
    for (const auto& [g, c] : v) {
      if (g <= old_n) {
        acc[g] += c;
        continue;
      }
      int t = g - old_n - 1;
      if (disp[t].survives)
        acc[disp[t].final_index] += c;
      else
        for (const auto& [gg, cc] : disp[t].expr) acc[gg] += c * cc;
    }
    normalize(acc);
    SparseVec out;
    for (auto& [g, c] : acc)
      if (c != 0) out.emplace_back(g, c);
    return out;
  };

  for (int i = 1; i <= old_n; ++i)
    np.power_tail[i] = rewrite(plan.tailed.power_tail[i]);
  for (int j = 2; j <= old_n; ++j)
    for (int i = 1; i < j; ++i)
      np.comm[j][i] = rewrite(plan.tailed.comm[j][i]);

  for (const auto& [name, img] : plan.images) {
    ExponentVector v;
    v.e.assign(new_n + 1, Int(0));
    for (const auto& [g, c] : rewrite(to_sparse(img.e))) v.e[g] = c;
    ns.images[name] = std::move(v);
  }
  if (old_n == 0) {
    for (int t = 0; t < static_cast<int>(plan.tails.size()); ++t)
      if (disp[t].survives && plan.tails[t].kind == Tail::Image)
        ns.defining_gen[plan.tails[t].image_name] = disp[t].final_index;
  }
  ns.p = std::move(np);
  return ns;
}

void final_law_check(const NqState& s, const NqOptions& opt) {
  if (s.pres.laws.empty() || s.p.n == 0) return;
  Collector coll(s.p);
  std::vector<InstanceCandidate> cands =
      instance_candidates(coll, s.p.n, opt.depth, s.cls + 1);
  for (const auto& law : s.pres.laws) {
    const size_t k = law.variables.size();
    std::vector<size_t> pick(k, 0);
    if (cands.empty()) break;
    for (;;) {
      int wsum = 0;
      for (size_t vi = 0; vi < k; ++vi) wsum += cands[pick[vi]].weight;
      if (wsum <= s.cls + 1) {
        std::map<std::string, ExponentVector> assignment = s.images;
        for (size_t vi = 0; vi < k; ++vi)
          assignment[law.variables[vi].name] = cands[pick[vi]].element;
        if (!is_identity(coll.evaluate(law.body, assignment)))
          throw EngineError("law instance " + print_word(law.body) +
                            " nontrivial in the finished quotient");
      }
      size_t vi = k;
      for (;;) {
        if (vi == 0) break;
        --vi;
        if (++pick[vi] < cands.size()) break;
        pick[vi] = 0;
        if (vi == 0) {
          vi = SIZE_MAX;
          break;
        }
      }
      if (vi == SIZE_MAX || k == 0) break;
    }
  }
}

}  // namespace

NqState initial_state(const Presentation& pres) {
  NqState s;
  s.pres = pres;
  s.p.resize(0);
  for (const auto& g : pres.generators) {
    s.gen_names.push_back(g.name);
    s.images[g.name] = identity_element(s.p);
  }
  return s;
}

std::pair<NqState, int> extend_one_class(const NqState& s,
                                         const NqOptions& opt) {
  opt.budget.check_time();
  ExtensionPlan plan = build_plan(s);
  const int T = static_cast<int>(plan.tails.size());

  RowEchelon ech(T);
  long long rows = 0, instances = 0;
  if (T > 0) harvest(s, plan, opt, ech, rows, instances);
  HnfResult h = ech.finish();

  std::vector<Disposition> disp;
  int survived = eliminate(plan, h, disp);
  NqState ns = rebuild(s, plan, disp, survived);

  ns.p.validate();
  if (survived == 0 && !(ns.p == s.p))
    throw EngineError("stable step changed the presentation");
  auto viol = consistency_violations(ns.p, false);
  if (!viol.empty())
    throw EngineError("presentation inconsistent after reduction: " +
                      viol.front().description);
  for (const auto& rel : s.pres.relators)
    if (!is_identity(image_of(ns, rel)))
      throw EngineError("relator image nontrivial after reduction");

  ClassStats st;
  st.cls = plan.new_class;
  st.tails_added = T;
  st.law_instances = instances;
  st.rows_collected = rows;
  st.tails_survived = survived;
  st.order = group_order(ns.p).get_str();
  ns.log.push_back(st);
  return {std::move(ns), survived};
}

NqState abelian_quotient(const Presentation& pres, const NqOptions& opt) {
  return extend_one_class(initial_state(pres), opt).first;
}

NqState nilpotent_quotient(const Presentation& pres, const NqOptions& opt) {
  NqOptions o = opt;
  o.budget.restart();
  NqState st = initial_state(pres);
  for (;;) {
    if (o.max_class > 0 && st.cls >= o.max_class) {
      st.truncated = true;
      break;
    }
    try {
      auto [ns, survived] = extend_one_class(st, o);
      st = std::move(ns);
      if (survived == 0) break;
    } catch (const BudgetError& e) {
      throw BudgetError(std::string(e.what()) + "; partial state: class " +
                        std::to_string(st.cls) + ", order " +
                        group_order(st.p).get_str() + ", " +
                        std::to_string(st.log.size()) + " class steps logged");
    }
  }
  final_law_check(st, o);
  return st;
}

std::vector<LawInstance> instantiate_laws(const NqState& s, int depth) {
  NqOptions opt;
  opt.depth = depth;
  ExtensionPlan plan = build_plan(s);
  Collector coll(plan.tailed);
  std::vector<LawInstance> out;
  long long instances = 0;
  enumerate_law_rows(
      s, plan, coll, opt, instances, [](SparseRow) {},
      [&](int law_index, std::map<std::string, ExponentVector> sub,
          const SparseRow& row) {
        LawInstance inst;
        inst.law_index = law_index;
        inst.substitution = std::move(sub);
        inst.row = row;
        out.push_back(std::move(inst));
      });
  return out;
}

ExponentVector image_of(const NqState& s, const AbstractWord& w) {
  if (!word_variables(w).empty())
    throw InputError("image_of requires a variable-free word");
  return evaluate_word(s.p, w, s.images);
}

PcPresentation truncate_pcp(const PcPresentation& p, int c) {
  int keep = 0;
  while (keep + 1 <= p.n && p.weight[keep + 1] <= c) ++keep;
  PcPresentation np;
  np.resize(keep);
  auto cut = [&](const SparseVec& v) {
    SparseVec o;
    for (const auto& [g, cc] : v)
      if (g <= keep) o.emplace_back(g, cc);
    return o;
  };
  for (int i = 1; i <= keep; ++i) {
    np.weight[i] = p.weight[i];
    np.rel_order[i] = p.rel_order[i];
    np.definition[i] = p.definition[i];
    np.power_tail[i] = cut(p.power_tail[i]);
  }
  for (int j = 2; j <= keep; ++j)
    for (int i = 1; i < j; ++i) np.comm[j][i] = cut(p.comm[j][i]);
  return np;
}

long long law_audit(const NqState& s, const Law& law, long long samples,
                    unsigned long long seed) {
  for (int i = 1; i <= s.p.n; ++i)
    if (s.p.rel_order[i] == 0)
      throw GuardError("law_audit requires a finite quotient");
  std::mt19937_64 rng(seed);
  Collector coll(s.p);
  long long failures = 0;
  for (long long k = 0; k < samples; ++k) {
    std::map<std::string, ExponentVector> asg = s.images;
    for (const auto& v : law.variables) {
      ExponentVector x = identity_element(s.p);
      for (int i = 1; i <= s.p.n; ++i)
        x.e[i] = uniform_below(rng, s.p.rel_order[i]);
      asg[v.name] = std::move(x);
    }
    if (!is_identity(coll.evaluate(law.body, asg))) ++failures;
  }
  return failures;
}

std::string run_log_json(const NqState& s) {
  nlohmann::json j;
  j["class"] = s.cls;
  j["order"] = group_order(s.p).get_str();
  j["truncated"] = s.truncated;
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& st : s.log) {
    nlohmann::json e;
    e["class"] = st.cls;
    e["law_instances"] = st.law_instances;
    e["order"] = st.order;
    e["rows_collected"] = st.rows_collected;
    e["tails_added"] = st.tails_added;
    e["tails_survived"] = st.tails_survived;
    classes.push_back(e);
  }
  j["classes"] = classes;
  return j.dump();
}

}  // namespace engelnq
