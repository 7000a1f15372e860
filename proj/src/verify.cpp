#include "engelnq/verify.hpp"

#include <json.hpp>

#include <chrono>
#include <set>
#include <sstream>

namespace engelnq {

std::string lemma_witness_source() {
  return "group N { gens a, b, c; laws { $x^4; [b^2,$x,$x]; } }";
}

std::string lemma_witness_control_source() {
  return "group Nc { gens a, b, c; laws { $x^4; } }";
}

std::string small_quotient_source() {
  return "group H2 { gens x1, x2; rels x1^2, x2^2; "
         "laws { $x^4; [$y,x1,x1]; [$y,x2,x2]; } }";
}

std::vector<std::pair<std::string, std::string>> corpus_presentations() {
  return {
      {"C4", "group C4 { gens a; laws { $x^4; } }"},
      {"B24", "group B24 { gens a, b; laws { $x^4; } }"},
      {"D4", "group D4 { gens a, b; rels a^2, b^2, (a*b)^4; }"},
      {"H2", small_quotient_source()},
  };
}

bool ScenarioReport::overall_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

static nlohmann::json report_canonical(const ScenarioReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["truncated"] = r.truncated;
  j["budget_exceeded"] = r.budget_exceeded;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json e;
    e["desc"] = c.desc;
    e["anchor"] = c.anchor;
    e["expected"] = c.expected;
    e["observed"] = c.observed;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

std::string ScenarioReport::canonical_json() const {
  return report_canonical(*this).dump();
}

std::string ScenarioReport::full_json() const {
  nlohmann::json j;
  j["report"] = report_canonical(*this);
  j["runtime_ms"] = runtime_ms;
  return j.dump();
}

std::string ScenarioReport::text() const {
  std::ostringstream os;
  os << "scenario " << scenario << (truncated ? " (truncated)" : "") << "\n";
  for (const auto& c : checks)
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.desc
       << "  expected: " << c.expected << "  observed: " << c.observed << "\n";
  os << (overall_pass() ? "PASS" : "FAIL") << " (" << runtime_ms << " ms)\n";
  return os.str();
}

namespace {

class Timer {
 public:
  long ms() const {
    return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0_)
                                 .count());
  }

 private:
  std::chrono::steady_clock::time_point t0_ =
      std::chrono::steady_clock::now();
};

void add_check(ScenarioReport& rep, std::string desc, std::string anchor,
               std::string expected, std::string observed, bool pass) {
  rep.checks.push_back(CheckResult{std::move(desc), std::move(anchor),
                                   std::move(expected), std::move(observed),
                                   pass});
}

std::string pow2_str(const Int& v) {
  // decimal, with a power-of-two annotation when exact
  size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
  Int probe = Int(1) << (bits - 1);
  if (v == probe) return v.get_str() + " (=2^" + std::to_string(bits - 1) + ")";
  return v.get_str();
}

}  // namespace

ScenarioReport verify_lemma_witness(const VerifyOptions& opt) {
  Timer timer;
  ScenarioReport rep;
  rep.scenario = "paper";
  try {
    Presentation pres = parse_presentation(lemma_witness_source());
    NqOptions no;
    no.max_class = opt.max_class;
    no.depth = opt.depth;
    no.budget = opt.budget;
    NqState st = nilpotent_quotient(pres, no);
    rep.truncated = st.truncated;

    const Int order = group_order(st.p);
    const Int want_order = Int(1) << 41;

    // (i) the left-normed commutator [a,b,b,c,c] maps to the identity;
    // meaningful in every truncation.
    AbstractWord w = left_normed(
        {AbstractWord::generator("a"), AbstractWord::generator("b"),
         AbstractWord::generator("b"), AbstractWord::generator("c"),
         AbstractWord::generator("c")});
    bool comm_trivial = is_identity(image_of(st, w));
    add_check(rep, "image of [a,b,b,c,c] is the identity",
              "claim:comm-abbcc-trivial", "identity",
              comm_trivial ? "identity" : "nontrivial", comm_trivial);

    // (ii) order and class of the full quotient
    if (!rep.truncated) {
      add_check(rep, "group order equals 2^41", "claim:order-2pow41",
                pow2_str(want_order), pow2_str(order), order == want_order);
      add_check(rep, "nilpotency class equals 7", "claim:class-7", "7",
                std::to_string(st.cls), st.cls == 7);
    } else {
      add_check(rep, "group order equals 2^41", "claim:order-2pow41",
                "not applicable (run truncated)",
                "truncated at class " + std::to_string(st.cls) + ", order " +
                    pow2_str(order),
                true);
      add_check(rep, "nilpotency class equals 7", "claim:class-7",
                "not applicable (run truncated)",
                "truncated at class " + std::to_string(st.cls), true);
    }

    // (iii) final presentation is consistent
    auto viol = consistency_violations(st.p);
    add_check(rep, "final power-commutator presentation is consistent",
              "claim:pcp-consistent", "no violations",
              viol.empty() ? "no violations"
                           : std::to_string(viol.size()) + " violations",
              viol.empty());

    // diagnostic: in this 2-group workload every elimination pivot, hence
    // every relative order, should come out a power of two; recorded
    // observationally rather than assumed anywhere upstream
    {
      bool two_powers = true;
      std::set<std::string> seen;
      for (int i = 1; i <= st.p.n; ++i) {
        const Int& r = st.p.rel_order[i];
        seen.insert(r.get_str());
        if (r == 0) {
          two_powers = false;
          continue;
        }
        Int v = r;
        while (v > 1 && fdiv_r(v, 2) == 0) v /= 2;
        if (v != 1) two_powers = false;
      }
      std::string obs = std::to_string(st.p.n) + " generators, orders {";
      bool first = true;
      for (const auto& s : seen) {
        obs += (first ? "" : ", ") + s;
        first = false;
      }
      obs += "}";
      add_check(rep, "all relative orders are powers of two (diagnostic)",
                "diag:rel-orders-two-powers", "powers of two", obs,
                two_powers);
    }

    // (iv) randomized law audit, seeded
    if (!st.pres.laws.empty()) {
      long long f1 =
          law_audit(st, st.pres.laws[0], opt.power_samples, opt.seed);
      add_check(rep,
                "law x^4 holds for " + std::to_string(opt.power_samples) +
                    " seeded-random elements",
                "claim:law-audit-exponent", "0 failures",
                std::to_string(f1) + " failures", f1 == 0);
      long long f2 =
          law_audit(st, st.pres.laws[1], opt.engel_samples, opt.seed + 1);
      add_check(rep,
                "law [b^2,x,x] holds for " + std::to_string(opt.engel_samples) +
                    " seeded-random elements",
                "claim:law-audit-engel", "0 failures",
                std::to_string(f2) + " failures", f2 == 0);
    }

    // (v) control experiment: dropping the second law must change the
    // quotient tower (compared at a desk-scale class cap).
    // the two towers agree up to class 3 and separate at class 4, so the
    // control needs at least a class-4 run
    {
      int cap = std::min(4, st.cls);
      if (cap >= 4) {
        Presentation control = parse_presentation(lemma_witness_control_source());
        NqOptions co = no;
        co.max_class = cap;
        NqState cs = nilpotent_quotient(control, co);
        Int corder = group_order(cs.p);
        Int torder = group_order(truncate_pcp(st.p, cap));
        add_check(rep,
                  "control: removing the second law changes the class-" +
                      std::to_string(cap) + " quotient",
                  "control:law-dropped",
                  "orders differ",
                  "control " + pow2_str(corder) + " vs " + pow2_str(torder),
                  corder != torder);
      } else {
        add_check(rep,
                  "control: removing the second law changes the quotient",
                  "control:law-dropped", "not applicable below class 4",
                  "run reached class " + std::to_string(st.cls), true);
      }
    }

    // The unboundedness of derived lengths across the quotient family rests
    // on non-solvability results cited from the literature; it is not
    // computable at any scale. The checks above are the computable
    // substitute.
    add_check(rep,
              "unbounded derived length of the quotient family: cited, not "
              "verified; the checks in this report are the computable "
              "substitute",
              "claim:unbounded-derived-length-cited", "cited, not verified",
              "cited, not verified", true);
  } catch (const BudgetError& e) {
    rep.truncated = true;
    rep.budget_exceeded = true;
    add_check(rep, std::string("scenario inconclusive: ") + e.what(),
              "note:budget", "completed within budget", "budget exceeded",
              true);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

ScenarioReport verify_small_quotients(int n, const VerifyOptions& opt) {
  Timer timer;
  ScenarioReport rep;
  rep.scenario = "small";
  if (n != 2)
    throw InputError(
        "verify_small_quotients is guarded to n = 2; larger n needs an "
        "explicit budget override and is out of scope");
  try {
    Presentation pres = parse_presentation(small_quotient_source());
    NqOptions no;
    no.max_class = opt.max_class;
    no.depth = opt.depth;
    no.budget = opt.budget;
    NqState st = nilpotent_quotient(pres, no);
    rep.truncated = st.truncated;

    const Int order = group_order(st.p);
    // Derived beforehand: two involutions generate a dihedral group, and
    // exponent 4 caps it at the dihedral group of order 8, class 2; both
    // Engel laws already hold there.
    add_check(rep, "order of the two-generator quotient", "claim:h2-order",
              "8", order.get_str(), order == 8);
    add_check(rep, "class of the two-generator quotient", "claim:h2-class",
              "2", std::to_string(st.cls), st.cls == 2);

    auto viol = consistency_violations(st.p);
    add_check(rep, "presentation is consistent", "claim:h2-consistent",
              "no violations",
              viol.empty() ? "no violations"
                           : std::to_string(viol.size()) + " violations",
              viol.empty());

    if (order != 0 && order <= opt.oracle_bound) {
      FiniteGroup g = FiniteGroup::enumerate(st.p, opt.oracle_bound);

      // condition (1): the generator images are involutions
      bool cond1 = true;
      for (const auto& name : st.gen_names) {
        int u = g.index_of(st.images.at(name));
        if (u == 0 || g.mult(u, u) != 0) cond1 = false;
      }
      add_check(rep, "generator images are involutions", "claim:cond1",
                "both nontrivial with square 1", cond1 ? "verified" : "failed",
                cond1);

      // condition (2): each generator image has an abelian normal closure,
      // equivalently is left 2-Engel; both routes computed independently
      bool cond2 = true;
      for (const auto& name : st.gen_names) {
        int u = g.index_of(st.images.at(name));
        bool engel = is_left_2_engel(g, u);
        SubgroupWitness nc = normal_closure(g, u);
        bool abelian = is_abelian(g, nc.members);
        if (engel != abelian || !engel) cond2 = false;
      }
      add_check(rep,
                "generator images are left 2-Engel with abelian normal "
                "closure (both routes agree)",
                "claim:cond2", "verified", cond2 ? "verified" : "failed",
                cond2);

      // condition (3): exponent divides 4
      Int ex = g.exponent();
      add_check(rep, "group exponent divides 4", "claim:cond3",
                "1, 2 or 4", ex.get_str(), ex == 1 || ex == 2 || ex == 4);

      // condition (4) on the quotient by R2: every involution left 2-Engel
      SubgroupWitness r2 = right_2_engel_set(g);
      FiniteGroup q = quotient(g, r2);
      bool cond4 = true;
      for (int u : involutions(q))
        if (!is_left_2_engel(q, u)) cond4 = false;
      add_check(rep,
                "every involution of the quotient by R2 is left 2-Engel "
                "(|R2| = " + std::to_string(r2.members.size()) +
                    ", quotient order " + std::to_string(q.order()) + ")",
                "claim:cond4-quotient", "verified",
                cond4 ? "verified" : "failed", cond4);

      LemmaReport lr = check_lemma(g);
      add_check(rep, "key-lemma check on the full group", "claim:lemma",
                "pass", lr.pass ? "pass" : "fail", lr.pass);
    } else {
      add_check(rep,
                "oracle checks skipped: order exceeds the oracle bound, "
                "presentation-level checks only",
                "note:oracle-guard", "order <= bound", order.get_str(), true);
    }
  } catch (const BudgetError& e) {
    rep.truncated = true;
    rep.budget_exceeded = true;
    add_check(rep, std::string("scenario inconclusive: ") + e.what(),
              "note:budget", "completed within budget", "budget exceeded",
              true);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

}  // namespace engelnq
