#include "engelnq/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "engelnq/nq.hpp"
#include "engelnq/oracle.hpp"
#include "engelnq/pcp.hpp"
#include "engelnq/verify.hpp"
#include "engelnq/words.hpp"

namespace engelnq {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Presentation load_presentation(const RunConfig& cfg) {
  auto all = parse_presentations(read_file(cfg.input_path));
  if (cfg.group_name.empty()) {
    if (all.size() != 1)
      throw InputError("file contains " + std::to_string(all.size()) +
                       " groups; pick one with --group");
    return all.front();
  }
  for (auto& p : all)
    if (p.name == cfg.group_name) return p;
  throw InputError("no group named '" + cfg.group_name + "' in " +
                   cfg.input_path);
}

// words like "g1^3*g2^-1*g1"
RawWord parse_raw_word(const std::string& text) {
  RawWord out;
  size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError("bad collect word: " + msg);
  };
  while (pos < text.size()) {
    if (text[pos] == '*') {
      ++pos;
      continue;
    }
    if (text[pos] != 'g') fail("expected 'g<index>' at position " +
                               std::to_string(pos));
    ++pos;
    size_t start = pos;
    while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (start == pos) fail("missing generator index");
    int gen = std::stoi(text.substr(start, pos - start));
    Int exp = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      size_t es = pos;
      if (pos < text.size() && text[pos] == '-') ++pos;
      while (pos < text.size() &&
             isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
      if (es == pos) fail("missing exponent");
      exp = Int(text.substr(es, pos - es));
    }
    out.emplace_back(gen, exp);
  }
  if (out.empty()) fail("empty word");
  return out;
}

NqOptions nq_options(const RunConfig& cfg) {
  NqOptions o;
  o.max_class = cfg.max_class;
  o.depth = cfg.depth;
  o.budget.wall_seconds = cfg.budget_seconds;
  o.budget.max_rows = cfg.budget_rows;
  return o;
}

int cmd_nq(const RunConfig& cfg, std::ostream& out) {
  Presentation pres = load_presentation(cfg);
  NqState st = nilpotent_quotient(pres, nq_options(cfg));
  if (cfg.json) {
    nlohmann::json j;
    j["log"] = nlohmann::json::parse(run_log_json(st));
    j["pcp"] = nlohmann::json::parse(pcp_to_json(st.p, &st.images));
    out << j.dump() << "\n";
  } else {
    out << "group " << pres.name << ": order " << group_order(st.p).get_str()
        << ", class " << st.cls << ", " << st.p.n << " pc generators"
        << (st.truncated ? " (truncated)" : "") << "\n";
    for (const auto& c : st.log)
      out << "  class " << c.cls << ": +" << c.tails_added << " tails, "
          << c.rows_collected << " rows, " << c.law_instances
          << " law instances, " << c.tails_survived
          << " survived, order " << c.order << "\n";
  }
  return 0;
}

int cmd_consistency(const RunConfig& cfg, std::ostream& out) {
  PcpWithImages in = pcp_from_json(read_file(cfg.input_path));
  auto viol = consistency_violations(in.p, cfg.full);
  if (cfg.json) {
    nlohmann::json j;
    j["violations"] = nlohmann::json::array();
    for (const auto& v : viol) j["violations"].push_back(v.description);
    j["consistent"] = viol.empty();
    out << j.dump() << "\n";
  } else {
    if (viol.empty()) {
      out << "consistent (" << (cfg.full ? "full" : "weight-bounded")
          << " overlap set)\n";
    } else {
      for (const auto& v : viol) out << "violation: " << v.description << "\n";
    }
  }
  return viol.empty() ? 0 : 1;
}

int cmd_collect(const RunConfig& cfg, std::ostream& out) {
  PcpWithImages in = pcp_from_json(read_file(cfg.input_path));
  ExponentVector v = collect(in.p, parse_raw_word(cfg.word));
  if (cfg.json) {
    nlohmann::json j = nlohmann::json::array();
    for (int i = 1; i <= in.p.n; ++i) j.push_back(v.e[i].get_str());
    out << nlohmann::json{{"normal_form", j}}.dump() << "\n";
  } else {
    bool first = true;
    for (int i = 1; i <= in.p.n; ++i) {
      if (v.e[i] == 0) continue;
      out << (first ? "" : "*") << "g" << i;
      if (v.e[i] != 1) out << "^" << v.e[i].get_str();
      first = false;
    }
    out << (first ? "1" : "") << "\n";
  }
  return 0;
}

std::string stem_of(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

int cmd_oracle_lemma(const RunConfig& cfg, std::ostream& out) {
  PcpWithImages in = pcp_from_json(read_file(cfg.input_path));
  FiniteGroup g = FiniteGroup::enumerate(in.p, cfg.bound);
  LemmaReport rep = check_lemma(g);
  out << lemma_report_json(stem_of(cfg.input_path), rep) << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_oracle_r2(const RunConfig& cfg, std::ostream& out) {
  PcpWithImages in = pcp_from_json(read_file(cfg.input_path));
  FiniteGroup g = FiniteGroup::enumerate(in.p, cfg.bound);
  SubgroupWitness r2 = right_2_engel_set(g);
  out << r2_report_json(stem_of(cfg.input_path), g, r2) << "\n";
  return (r2.is_subgroup && r2.is_normal) ? 0 : 1;
}

VerifyOptions verify_options(const RunConfig& cfg) {
  VerifyOptions o;
  o.max_class = cfg.max_class;
  o.depth = cfg.depth;
  o.seed = cfg.seed;
  o.oracle_bound = cfg.bound;
  o.budget.wall_seconds = cfg.budget_seconds;
  o.budget.max_rows = cfg.budget_rows;
  return o;
}

int report_exit(const ScenarioReport& rep, const RunConfig& cfg,
                std::ostream& out) {
  out << (cfg.json ? rep.full_json() + "\n" : rep.text());
  if (rep.budget_exceeded) return 3;
  return rep.overall_pass() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("ENGEL_NQ_BUDGET_SECONDS"))
    cfg.budget_seconds = std::atof(env);

  CLI::App app{
      "engel-nq: maximal nilpotent quotients of finitely presented groups "
      "subject to laws, with a brute-force finite-group oracle"};
  app.require_subcommand(1);
  app.fallthrough();

  bool budget_given = false;
  app.add_option("--budget-seconds", cfg.budget_seconds,
                 "wall-time budget in seconds")
      ->each([&](const std::string&) { budget_given = true; });
  app.add_option("--budget-rows", cfg.budget_rows, "relation-row budget");
  app.add_option("--seed", cfg.seed, "seed for randomized audits");
  app.add_flag("--json", cfg.json, "emit canonical JSON");

  auto* nq = app.add_subcommand("nq", "compute a maximal nilpotent quotient");
  nq->fallthrough();
  nq->add_option("file", cfg.input_path, "presentation file (.grp)")
      ->required();
  nq->add_option("--group", cfg.group_name, "group name in a multi-group file");
  nq->add_option("--max-class", cfg.max_class, "class cap (0 = none)");
  nq->add_option("--depth", cfg.depth, "law instantiation depth");

  auto* cons = app.add_subcommand("consistency",
                                  "check a pc presentation for consistency");
  cons->fallthrough();
  cons->add_option("file", cfg.input_path, "pcp JSON file")->required();
  cons->add_flag("--full", cfg.full, "drop the weight bound on overlap tests");

  auto* col = app.add_subcommand("collect", "collect a word to normal form");
  col->fallthrough();
  col->add_option("file", cfg.input_path, "pcp JSON file")->required();
  col->add_option("word", cfg.word, "word, e.g. g2^3*g1^-1")->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force group oracle");
  oracle->fallthrough();
  oracle->require_subcommand(1);
  auto* lemma = oracle->add_subcommand("check-lemma",
                                       "key-lemma check on a finite group");
  lemma->fallthrough();
  lemma->add_option("file", cfg.input_path, "pcp JSON file")->required();
  lemma->add_option("--bound", cfg.bound, "enumeration guard");
  auto* r2 = oracle->add_subcommand("r2", "right 2-Engel subgroup report");
  r2->fallthrough();
  r2->add_option("file", cfg.input_path, "pcp JSON file")->required();
  r2->add_option("--bound", cfg.bound, "enumeration guard");

  auto* verify = app.add_subcommand("verify", "scripted verification runs");
  verify->fallthrough();
  verify->require_subcommand(1);
  auto* vp = verify->add_subcommand("paper", "flagship reproduction run");
  vp->fallthrough();
  vp->add_option("--max-class", cfg.max_class, "class cap (0 = none)");
  vp->add_option("--depth", cfg.depth, "law instantiation depth");
  auto* vs = verify->add_subcommand("small", "two-generator quotient run");
  vs->fallthrough();
  vs->add_option("--max-class", cfg.max_class, "class cap (0 = none)");
  vs->add_option("--depth", cfg.depth, "law instantiation depth");
  vs->add_option("--bound", cfg.bound, "oracle enumeration guard");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    app.exit(e, out, err);
    return 2;
  }
  if (cfg.budget_seconds <= 0 || cfg.budget_rows <= 0) {
    err << "error: budgets must be positive\n";
    return 2;
  }

  try {
    if (*nq) return cmd_nq(cfg, out);
    if (*cons) return cmd_consistency(cfg, out);
    if (*col) return cmd_collect(cfg, out);
    if (*lemma) return cmd_oracle_lemma(cfg, out);
    if (*r2) return cmd_oracle_r2(cfg, out);
    if (*vp) return report_exit(verify_lemma_witness(verify_options(cfg)), cfg,
                                out);
    if (*vs)
      return report_exit(verify_small_quotients(2, verify_options(cfg)), cfg,
                         out);
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return 2;
  } catch (const EngineError& e) {
    err << "engine error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace engelnq
