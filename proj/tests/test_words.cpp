#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engelnq/words.hpp"

using namespace engelnq;

TEST_CASE("parsing the three reference sources") {
  Presentation n = parse_presentation(
      "group N { gens a,b,c; laws { $x^4; [b^2,$x,$x]; } }");
  CHECK(n.name == "N");
  CHECK(n.generators.size() == 3);
  CHECK(n.relators.empty());
  CHECK(n.laws.size() == 2);
  CHECK(n.laws[0].variables.size() == 1);
  CHECK(n.laws[0].variables[0].name == "x");
  CHECK(n.laws[1].variables.size() == 1);

  Presentation t = parse_presentation("group T { gens a; }");
  CHECK(t.generators.size() == 1);
  CHECK(t.relators.empty());
  CHECK(t.laws.empty());

  Presentation b =
      parse_presentation("group B { gens a,b; rels a^2, b^2, (a*b)^4; }");
  CHECK(b.generators.size() == 2);
  CHECK(b.relators.size() == 3);
  CHECK(b.laws.empty());
}

TEST_CASE("comments, whitespace and multiple groups") {
  auto all = parse_presentations(
      "# a comment\ngroup A { gens a; }\n# another\ngroup B { gens b; }\n");
  CHECK(all.size() == 2);
  CHECK(all[0].name == "A");
  CHECK(all[1].name == "B");
  CHECK_THROWS_AS(parse_presentation("group A { gens a; } group B { gens b; }"),
                  InputError);
}

TEST_CASE("parse errors carry positions and reasons") {
  CHECK_THROWS_AS(parse_presentation("group G { gens a; rels b; }"),
                  ParseError);  // undeclared identifier
  CHECK_THROWS_AS(parse_presentation("group G { gens a; laws { a^4; } }"),
                  ParseError);  // law without variables
  CHECK_THROWS_AS(parse_presentation("group G { gens a; rels $x; }"),
                  ParseError);  // variable outside a law
  CHECK_THROWS_AS(parse_presentation("group G { gens a; laws { $a^4; } }"),
                  ParseError);  // variable clashes with a generator
  CHECK_THROWS_AS(parse_presentation("group G { gens a, a; }"),
                  ParseError);  // duplicate generator
  CHECK_THROWS_AS(parse_presentation("group G { gens a; rels [a]; }"),
                  ParseError);  // unary commutator
  CHECK_THROWS_AS(parse_presentation("group G { gens a; rels 2; }"),
                  ParseError);  // bad integer literal factor
  try {
    parse_presentation("group G { gens a;\n rels b; }");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col > 0);
  }
}

TEST_CASE("identity literal, powers and nesting") {
  Presentation p = parse_presentation(
      "group G { gens a,b; rels 1, a^-1, (a*b^2)^-3, [a,b,[b,a]]; }");
  CHECK(p.relators.size() == 4);
  CHECK(p.relators[0].kind == WordKind::Identity);
  CHECK(p.relators[1].kind == WordKind::Power);
  CHECK(p.relators[1].exponent == -1);
  CHECK(p.relators[2].exponent == -3);
  CHECK(p.relators[3].kind == WordKind::Commutator);
  CHECK(p.relators[3].children.size() == 3);
}

TEST_CASE("flatten: commutator expansion and free reduction") {
  AbstractWord xy = AbstractWord::commutator(
      {AbstractWord::generator("x"), AbstractWord::generator("y")});
  FreeWord w = flatten(xy);
  FreeWord expect = {{"x", -1}, {"y", -1}, {"x", 1}, {"y", 1}};
  CHECK(w == expect);

  AbstractWord xx = AbstractWord::commutator(
      {AbstractWord::generator("x"), AbstractWord::generator("x")});
  CHECK(flatten(xx).empty());

  AbstractWord red = AbstractWord::product(
      {AbstractWord::generator("a"),
       AbstractWord::power(AbstractWord::generator("a"), -1),
       AbstractWord::generator("b")});
  FreeWord b = {{"b", 1}};
  CHECK(flatten(red) == b);
}

TEST_CASE("flatten substitutes variables and rejects missing ones") {
  AbstractWord body = AbstractWord::commutator(
      {AbstractWord::variable("x"), AbstractWord::generator("u")});
  CHECK_THROWS_AS(flatten(body), InputError);
  std::map<Atom, FreeWord> subst;
  subst[Atom{AtomKind::Variable, "x"}] = {{"u", 1}};
  CHECK(flatten(body, subst).empty());  // [u,u] = 1
}

TEST_CASE("left_normed base case and nesting") {
  CHECK_THROWS_AS(left_normed({AbstractWord::generator("a")}), InputError);

  AbstractWord ab = left_normed(
      {AbstractWord::generator("a"), AbstractWord::generator("b")});
  CHECK(ab.kind == WordKind::Commutator);
  CHECK(ab.children.size() == 2);

  // [a,b,b,c,c] = [[[[a,b],b],c],c]
  AbstractWord w = left_normed(
      {AbstractWord::generator("a"), AbstractWord::generator("b"),
       AbstractWord::generator("b"), AbstractWord::generator("c"),
       AbstractWord::generator("c")});
  const AbstractWord* cur = &w;
  std::vector<std::string> rights;
  while (cur->kind == WordKind::Commutator && cur->children.size() == 2 &&
         cur->children[1].kind == WordKind::Atom) {
    rights.push_back(cur->children[1].atom.name);
    cur = &cur->children[0];
  }
  CHECK(rights == std::vector<std::string>{"c", "c", "b", "b"});
  CHECK(cur->atom.name == "a");

  // [x,u,u] = [[x,u],u]
  AbstractWord e = left_normed({AbstractWord::variable("x"),
                                AbstractWord::generator("u"),
                                AbstractWord::generator("u")});
  CHECK(e.children[0].kind == WordKind::Commutator);
  CHECK(e.children[1].atom.name == "u");
}

namespace {

AbstractWord random_word(std::mt19937_64& rng, int depth) {
  static const char* gens[3] = {"a", "b", "c"};
  int pick = static_cast<int>(rng() % (depth <= 0 ? 2 : 5));
  switch (pick) {
    case 0:
      return AbstractWord::identity();
    case 1:
      return AbstractWord::generator(gens[rng() % 3]);
    case 2: {
      std::vector<AbstractWord> cs;
      int k = 2 + static_cast<int>(rng() % 2);
      for (int i = 0; i < k; ++i) cs.push_back(random_word(rng, depth - 1));
      return AbstractWord::product(std::move(cs));
    }
    case 3:
      return AbstractWord::power(random_word(rng, depth - 1),
                                 Int(static_cast<long>(rng() % 7) - 3));
    default: {
      std::vector<AbstractWord> cs;
      int k = 2 + static_cast<int>(rng() % 2);
      for (int i = 0; i < k; ++i) cs.push_back(random_word(rng, depth - 1));
      return AbstractWord::commutator(std::move(cs));
    }
  }
}

AbstractWord word_from_free(const FreeWord& w) {
  std::vector<AbstractWord> parts;
  for (const auto& [sym, exp] : w)
    parts.push_back(AbstractWord::power(AbstractWord::generator(sym), exp));
  return AbstractWord::product(std::move(parts));
}

}  // namespace

TEST_CASE("property: free reduction is idempotent") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 300; ++i) {
    FreeWord w = flatten(random_word(rng, 3));
    for (size_t k = 0; k < w.size(); ++k) {
      CHECK(w[k].second != 0);
      if (k) CHECK(w[k].first != w[k - 1].first);
    }
    CHECK(flatten(word_from_free(w)) == w);
  }
}

TEST_CASE("property: w * w^-1 flattens to the empty word") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 300; ++i) {
    AbstractWord w = random_word(rng, 3);
    AbstractWord prod =
        AbstractWord::product({w, AbstractWord::power(w, -1)});
    CHECK(flatten(prod).empty());
  }
}

TEST_CASE("property: n-ary commutators agree with iterated binary ones") {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 200; ++i) {
    int k = 2 + static_cast<int>(rng() % 3);
    std::vector<AbstractWord> ws;
    for (int j = 0; j < k; ++j) ws.push_back(random_word(rng, 2));
    AbstractWord nary = AbstractWord::commutator(ws);
    AbstractWord nested = left_normed(ws);
    CHECK(flatten(nary) == flatten(nested));
  }
}

TEST_CASE("property: parse of print is the identity") {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 200; ++i) {
    Presentation p;
    p.name = "G";
    p.generators = {Atom{AtomKind::Generator, "a"},
                    Atom{AtomKind::Generator, "b"},
                    Atom{AtomKind::Generator, "c"}};
    int nr = static_cast<int>(rng() % 3);
    for (int r = 0; r < nr; ++r) p.relators.push_back(random_word(rng, 3));
    int nl = static_cast<int>(rng() % 3);
    for (int l = 0; l < nl; ++l) {
      AbstractWord body = AbstractWord::product(
          {random_word(rng, 2),
           AbstractWord::power(AbstractWord::variable("x"), 4)});
      Law law;
      law.body = body;
      law.variables = word_variables(body);
      p.laws.push_back(law);
    }
    Presentation q = parse_presentation(print_presentation(p));
    CHECK(q.name == p.name);
    CHECK(q.generators == p.generators);
    REQUIRE(q.relators.size() == p.relators.size());
    for (size_t r = 0; r < p.relators.size(); ++r)
      CHECK(q.relators[r] == p.relators[r]);
    REQUIRE(q.laws.size() == p.laws.size());
    for (size_t l = 0; l < p.laws.size(); ++l) {
      CHECK(q.laws[l].body == p.laws[l].body);
      CHECK(q.laws[l].variables == p.laws[l].variables);
    }
  }
}
