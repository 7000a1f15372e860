#include "engelnq/words.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace engelnq {

AbstractWord AbstractWord::generator(std::string name) {
  AbstractWord w;
  w.kind = WordKind::Atom;
  w.atom = Atom{AtomKind::Generator, std::move(name)};
  return w;
}

AbstractWord AbstractWord::variable(std::string name) {
  AbstractWord w;
  w.kind = WordKind::Atom;
  w.atom = Atom{AtomKind::Variable, std::move(name)};
  return w;
}

AbstractWord AbstractWord::product(std::vector<AbstractWord> ws) {
  if (ws.empty()) return identity();
  if (ws.size() == 1) return std::move(ws.front());
  AbstractWord w;
  w.kind = WordKind::Product;
  w.children = std::move(ws);
  return w;
}

AbstractWord AbstractWord::power(AbstractWord base, Int k) {
  AbstractWord w;
  w.kind = WordKind::Power;
  w.children.push_back(std::move(base));
  w.exponent = std::move(k);
  return w;
}

AbstractWord AbstractWord::commutator(std::vector<AbstractWord> ws) {
  if (ws.size() < 2)
    throw InputError("commutator requires at least two arguments");
  AbstractWord w;
  w.kind = WordKind::Commutator;
  w.children = std::move(ws);
  return w;
}

bool AbstractWord::operator==(const AbstractWord& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case WordKind::Identity:
      return true;
    case WordKind::Atom:
      return atom == o.atom;
    case WordKind::Power:
      return exponent == o.exponent && children == o.children;
    case WordKind::Product:
    case WordKind::Commutator:
      return children == o.children;
  }
  return false;
}

AbstractWord left_normed(std::vector<AbstractWord> ws) {
  if (ws.size() < 2)
    throw InputError("left_normed requires at least two words");
  AbstractWord acc = AbstractWord::commutator(
      {std::move(ws[0]), std::move(ws[1])});
  for (size_t i = 2; i < ws.size(); ++i)
    acc = AbstractWord::commutator({std::move(acc), std::move(ws[i])});
  return acc;
}

// ---- free words ----------------------------------------------------------

static void free_push(FreeWord& out, const std::string& sym, const Int& exp) {
  if (exp == 0) return;
  if (!out.empty() && out.back().first == sym) {
    out.back().second += exp;
    if (out.back().second == 0) out.pop_back();
    return;
  }
  out.emplace_back(sym, exp);
}

FreeWord free_mul(const FreeWord& a, const FreeWord& b) {
  FreeWord out = a;
  for (const auto& [sym, exp] : b) free_push(out, sym, exp);
  return out;
}

FreeWord free_inverse(const FreeWord& a) {
  FreeWord out;
  out.reserve(a.size());
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    out.emplace_back(it->first, -it->second);
  return out;
}

FreeWord free_power(const FreeWord& a, const Int& k) {
  if (k == 0 || a.empty()) return {};
  if (k < 0) return free_power(free_inverse(a), -k);
  if (a.size() == 1) return {{a.front().first, a.front().second * k}};
  if (k > 100000) throw GuardError("free_power: exponent too large to expand");
  FreeWord out;
  unsigned long reps = k.get_ui();
  for (unsigned long i = 0; i < reps; ++i)
    for (const auto& [sym, exp] : a) free_push(out, sym, exp);
  return out;
}

static FreeWord free_comm(const FreeWord& u, const FreeWord& v) {
  return free_mul(free_mul(free_mul(free_inverse(u), free_inverse(v)), u), v);
}

FreeWord flatten(const AbstractWord& w, const std::map<Atom, FreeWord>& subst) {
  switch (w.kind) {
    case WordKind::Identity:
      return {};
    case WordKind::Atom: {
      auto it = subst.find(w.atom);
      if (it != subst.end()) return it->second;
      if (w.atom.kind == AtomKind::Generator)
        return {{w.atom.name, Int(1)}};
      throw InputError("flatten: no substitution for variable $" + w.atom.name);
    }
    case WordKind::Product: {
      FreeWord out;
      for (const auto& c : w.children) out = free_mul(out, flatten(c, subst));
      return out;
    }
    case WordKind::Power:
      return free_power(flatten(w.children.front(), subst), w.exponent);
    case WordKind::Commutator: {
      FreeWord acc = free_comm(flatten(w.children[0], subst),
                               flatten(w.children[1], subst));
      for (size_t i = 2; i < w.children.size(); ++i)
        acc = free_comm(acc, flatten(w.children[i], subst));
      return acc;
    }
  }
  return {};
}

FreeWord flatten(const AbstractWord& w) { return flatten(w, {}); }

std::vector<Atom> word_variables(const AbstractWord& w) {
  std::vector<Atom> vars;
  auto visit = [&](auto&& self, const AbstractWord& node) -> void {
    if (node.kind == WordKind::Atom) {
      if (node.atom.kind == AtomKind::Variable &&
          std::find(vars.begin(), vars.end(), node.atom) == vars.end())
        vars.push_back(node.atom);
      return;
    }
    for (const auto& c : node.children) self(self, c);
  };
  visit(visit, w);
  return vars;
}

// ---- parser ---------------------------------------------------------------

namespace {

enum class Tok { Name, Integer, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Int value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        bump();
      tok_.kind = Tok::Name;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        bump();
      tok_.kind = Tok::Integer;
      tok_.text = src_.substr(start, pos_ - start);
      tok_.value = Int(tok_.text);
      return;
    }
    static const std::string symbols = "{}()[],;*^$-";
    if (symbols.find(c) != std::string::npos) {
      tok_.kind = Tok::Sym;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        bump();
      if (pos_ < src_.size() && src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
        continue;
      }
      return;
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  std::vector<Presentation> parse_file() {
    std::vector<Presentation> out;
    while (lex_.peek().kind != Tok::End) out.push_back(parse_group());
    if (out.empty()) throw ParseError("no group block found", 1, 1);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lex_.peek().line, lex_.peek().col);
  }

  void expect_sym(const std::string& s) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Sym || t.text != s) fail("expected '" + s + "'");
    lex_.take();
  }

  void expect_keyword(const std::string& kw) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Name || t.text != kw) fail("expected '" + kw + "'");
    lex_.take();
  }

  bool at_keyword(const std::string& kw) const {
    return lex_.peek().kind == Tok::Name && lex_.peek().text == kw;
  }

  bool at_sym(const std::string& s) const {
    return lex_.peek().kind == Tok::Sym && lex_.peek().text == s;
  }

  std::string take_name() {
    if (lex_.peek().kind != Tok::Name) fail("expected a name");
    return lex_.take().text;
  }

  Presentation parse_group() {
    expect_keyword("group");
    Presentation p;
    p.name = take_name();
    expect_sym("{");
    expect_keyword("gens");
    for (;;) {
      Token t = lex_.peek();
      std::string g = take_name();
      if (gens_.count(g))
        throw ParseError("duplicate generator '" + g + "'", t.line, t.col);
      gens_.insert(g);
      p.generators.push_back(Atom{AtomKind::Generator, g});
      if (at_sym(",")) {
        lex_.take();
        continue;
      }
      break;
    }
    expect_sym(";");
    if (at_keyword("rels")) {
      lex_.take();
      for (;;) {
        p.relators.push_back(parse_word(/*allow_vars=*/false, nullptr));
        if (at_sym(",")) {
          lex_.take();
          continue;
        }
        break;
      }
      expect_sym(";");
    }
    if (at_keyword("laws")) {
      lex_.take();
      expect_sym("{");
      do {
        Token at = lex_.peek();
        Law law;
        std::vector<Atom> vars;
        law.body = parse_word(/*allow_vars=*/true, &vars);
        if (vars.empty())
          throw ParseError(
              "law contains no variable (a variable-free word is a relator)",
              at.line, at.col);
        law.variables = std::move(vars);
        p.laws.push_back(std::move(law));
        expect_sym(";");
      } while (!at_sym("}"));
      expect_sym("}");
    }
    expect_sym("}");
    gens_.clear();
    return p;
  }

  AbstractWord parse_word(bool allow_vars, std::vector<Atom>* vars) {
    std::vector<AbstractWord> terms;
    terms.push_back(parse_term(allow_vars, vars));
    while (at_sym("*")) {
      lex_.take();
      terms.push_back(parse_term(allow_vars, vars));
    }
    return AbstractWord::product(std::move(terms));
  }

  AbstractWord parse_term(bool allow_vars, std::vector<Atom>* vars) {
    AbstractWord f = parse_factor(allow_vars, vars);
    if (at_sym("^")) {
      lex_.take();
      bool neg = false;
      if (at_sym("-")) {
        lex_.take();
        neg = true;
      }
      if (lex_.peek().kind != Tok::Integer) fail("expected integer exponent");
      Int k = lex_.take().value;
      if (neg) k = -k;
      return AbstractWord::power(std::move(f), std::move(k));
    }
    return f;
  }

  AbstractWord parse_factor(bool allow_vars, std::vector<Atom>* vars) {
    Token t = lex_.peek();
    if (t.kind == Tok::Integer) {
      lex_.take();
      if (t.value != 1)
        throw ParseError("only the identity literal '1' is a valid factor",
                         t.line, t.col);
      return AbstractWord::identity();
    }
    if (t.kind == Tok::Name) {
      lex_.take();
      if (!gens_.count(t.text))
        throw ParseError("undeclared identifier '" + t.text + "'", t.line,
                         t.col);
      return AbstractWord::generator(t.text);
    }
    if (t.kind == Tok::Sym && t.text == "$") {
      lex_.take();
      Token nt = lex_.peek();
      std::string v = take_name();
      if (!allow_vars)
        throw ParseError("variable $" + v + " used outside a law", nt.line,
                         nt.col);
      if (gens_.count(v))
        throw ParseError("variable $" + v + " clashes with a generator name",
                         nt.line, nt.col);
      Atom a{AtomKind::Variable, v};
      if (vars && std::find(vars->begin(), vars->end(), a) == vars->end())
        vars->push_back(a);
      return AbstractWord::variable(v);
    }
    if (t.kind == Tok::Sym && t.text == "(") {
      lex_.take();
      AbstractWord w = parse_word(allow_vars, vars);
      expect_sym(")");
      return w;
    }
    if (t.kind == Tok::Sym && t.text == "[") {
      lex_.take();
      std::vector<AbstractWord> args;
      args.push_back(parse_word(allow_vars, vars));
      while (at_sym(",")) {
        lex_.take();
        args.push_back(parse_word(allow_vars, vars));
      }
      expect_sym("]");
      if (args.size() < 2)
        throw ParseError("commutator needs at least two arguments", t.line,
                         t.col);
      return AbstractWord::commutator(std::move(args));
    }
    fail("expected a word factor");
  }

  Lexer lex_;
  std::set<std::string> gens_;
};

}  // namespace

std::vector<Presentation> parse_presentations(const std::string& source) {
  return Parser(source).parse_file();
}

Presentation parse_presentation(const std::string& source) {
  auto all = parse_presentations(source);
  if (all.size() != 1)
    throw InputError("expected exactly one group block, found " +
                     std::to_string(all.size()));
  return std::move(all.front());
}

// ---- printer ----------------------------------------------------------------

static void print_word_rec(std::ostringstream& os, const AbstractWord& w,
                           bool as_factor) {
  switch (w.kind) {
    case WordKind::Identity:
      os << "1";
      return;
    case WordKind::Atom:
      if (w.atom.kind == AtomKind::Variable) os << "$";
      os << w.atom.name;
      return;
    case WordKind::Power: {
      const AbstractWord& base = w.children.front();
      bool base_is_factor =
          base.kind == WordKind::Atom || base.kind == WordKind::Identity ||
          base.kind == WordKind::Commutator;
      if (!base_is_factor) {
        os << "(";
        print_word_rec(os, base, false);
        os << ")";
      } else {
        print_word_rec(os, base, true);
      }
      os << "^" << w.exponent.get_str();
      return;
    }
    case WordKind::Product: {
      if (as_factor) os << "(";
      bool first = true;
      for (const auto& c : w.children) {
        if (!first) os << "*";
        first = false;
        bool child_needs_parens = c.kind == WordKind::Product;
        if (child_needs_parens) {
          os << "(";
          print_word_rec(os, c, false);
          os << ")";
        } else {
          print_word_rec(os, c, false);
        }
      }
      if (as_factor) os << ")";
      return;
    }
    case WordKind::Commutator: {
      os << "[";
      bool first = true;
      for (const auto& c : w.children) {
        if (!first) os << ",";
        first = false;
        print_word_rec(os, c, false);
      }
      os << "]";
      return;
    }
  }
}

std::string print_word(const AbstractWord& w) {
  std::ostringstream os;
  print_word_rec(os, w, false);
  return os.str();
}

std::string print_presentation(const Presentation& p) {
  std::ostringstream os;
  os << "group " << p.name << " {\n  gens ";
  for (size_t i = 0; i < p.generators.size(); ++i) {
    if (i) os << ", ";
    os << p.generators[i].name;
  }
  os << ";\n";
  if (!p.relators.empty()) {
    os << "  rels ";
    for (size_t i = 0; i < p.relators.size(); ++i) {
      if (i) os << ", ";
      os << print_word(p.relators[i]);
    }
    os << ";\n";
  }
  if (!p.laws.empty()) {
    os << "  laws {\n";
    for (const auto& law : p.laws) os << "    " << print_word(law.body) << ";\n";
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace engelnq
