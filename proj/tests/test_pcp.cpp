#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engelnq/pcp.hpp"

using namespace engelnq;

namespace {

// C4 realized on two generators: g1^2 = g2, g2^2 = 1, [g2,g1] = 1.
PcPresentation c4_two_gen() {
  PcPresentation p;
  p.resize(2);
  p.weight = {0, 1, 2};
  p.rel_order = {Int(0), Int(2), Int(2)};
  p.power_tail[1] = {{2, Int(1)}};
  p.definition[2] = Definition{DefKind::Power, 1, 0};
  p.validate();
  return p;
}

// C4 on a single generator of order 4.
PcPresentation c4_one_gen() {
  PcPresentation p;
  p.resize(1);
  p.weight = {0, 1};
  p.rel_order = {Int(0), Int(4)};
  p.validate();
  return p;
}

// Dihedral group of order 8 on two involutions: g3 = [g2,g1] central.
PcPresentation d4() {
  PcPresentation p;
  p.resize(3);
  p.weight = {0, 1, 1, 2};
  p.rel_order = {Int(0), Int(2), Int(2), Int(2)};
  p.comm_tail_mut(2, 1) = {{3, Int(1)}};
  p.definition[3] = Definition{DefKind::Commutator, 2, 1};
  p.validate();
  return p;
}

// Free nilpotent group of class 2 on two generators (integer Heisenberg).
PcPresentation heisenberg() {
  PcPresentation p;
  p.resize(3);
  p.weight = {0, 1, 1, 2};
  p.rel_order = {Int(0), Int(0), Int(0), Int(0)};
  p.comm_tail_mut(2, 1) = {{3, Int(1)}};
  p.definition[3] = Definition{DefKind::Commutator, 2, 1};
  p.validate();
  return p;
}

ExponentVector ev3(const PcPresentation& p, long a, long b, long c) {
  ExponentVector v = identity_element(p);
  v.e[1] = a;
  v.e[2] = b;
  v.e[3] = c;
  return v;
}

// Independent model of the dihedral group of order 8: pairs (rotation, flip)
// with (r1,f1)(r2,f2) = (r1 + r2 or r1 - r2, f1 xor f2).
struct Dih {
  int r = 0, f = 0;
  friend Dih operator*(Dih a, Dih b) {
    return Dih{((a.f ? a.r - b.r : a.r + b.r) % 4 + 4) % 4, a.f ^ b.f};
  }
  friend bool operator==(Dih a, Dih b) { return a.r == b.r && a.f == b.f; }
};

Dih dih_pow(Dih x, long k) {
  Dih acc{0, 0};
  for (long i = 0; i < k; ++i) acc = acc * x;
  return acc;
}

// g1 -> the reflection s, g2 -> the reflection through the adjacent axis.
Dih dih_of(const ExponentVector& v) {
  Dih s{0, 1}, t{1, 1};
  Dih st = s * t;                    // rotation by one step
  Dih c = dih_pow(st, 2);            // [g2,g1] comes out as the half turn
  Dih acc{0, 0};
  acc = dih_pow(s, v.e[1].get_si());
  acc = acc * dih_pow(t, v.e[2].get_si());
  acc = acc * dih_pow(c, v.e[3].get_si());
  return acc;
}

}  // namespace

TEST_CASE("collect: identity, power folding and range errors") {
  PcPresentation p = c4_two_gen();
  CHECK(is_identity(collect(p, {})));
  // g1^3 * g1 = g1^4 = g2^2 = 1
  ExponentVector v = collect(p, {{1, Int(3)}, {1, Int(1)}});
  CHECK(is_identity(v));
  ExponentVector w = collect(p, {{1, Int(2)}});
  CHECK(w.e[1] == 0);
  CHECK(w.e[2] == 1);
  CHECK_THROWS_AS(collect(p, {{3, Int(1)}}), InputError);
  CHECK_THROWS_AS(collect(p, {{0, Int(1)}}), InputError);
}

TEST_CASE("collect agrees with the hand-built dihedral model on all words") {
  PcPresentation p = d4();
  // every normal form against the independent model, via the product map
  for (long a = 0; a < 2; ++a)
    for (long b = 0; b < 2; ++b)
      for (long c = 0; c < 2; ++c) {
        ExponentVector u = ev3(p, a, b, c);
        for (long d = 0; d < 2; ++d)
          for (long e = 0; e < 2; ++e)
            for (long f = 0; f < 2; ++f) {
              ExponentVector v = ev3(p, d, e, f);
              ExponentVector prod = multiply(p, u, v);
              CHECK(dih_of(prod) == dih_of(u) * dih_of(v));
            }
      }
  // swapping g2 past g1 applies the commutator tail
  ExponentVector x = collect(p, {{2, Int(1)}, {1, Int(1)}});
  CHECK(x.e[1] == 1);
  CHECK(x.e[2] == 1);
  CHECK(x.e[3] == 1);
}

TEST_CASE("normal forms are fixed points of collection") {
  for (const PcPresentation& p : {c4_two_gen(), d4()}) {
    std::vector<ExponentVector> all;
    std::vector<Int> digits(p.n + 1, Int(0));
    for (;;) {
      ExponentVector v = identity_element(p);
      for (int i = 1; i <= p.n; ++i) v.e[i] = digits[i];
      all.push_back(v);
      int i = p.n;
      while (i >= 1) {
        digits[i] += 1;
        if (digits[i] < p.rel_order[i]) break;
        digits[i] = 0;
        --i;
      }
      if (i < 1) break;
    }
    for (const auto& v : all) {
      RawWord w;
      for (int i = 1; i <= p.n; ++i)
        if (v.e[i] != 0) w.emplace_back(i, v.e[i]);
      CHECK(collect(p, w) == v);
    }
  }
}

TEST_CASE("group axioms hold exhaustively on the dihedral group") {
  PcPresentation p = d4();
  std::vector<ExponentVector> all;
  for (long a = 0; a < 2; ++a)
    for (long b = 0; b < 2; ++b)
      for (long c = 0; c < 2; ++c) all.push_back(ev3(p, a, b, c));
  for (const auto& u : all) {
    CHECK(is_identity(multiply(p, u, inverse(p, u))));
    CHECK(is_identity(commutator(p, u, u)));
    for (const auto& v : all)
      for (const auto& w : all)
        CHECK(multiply(p, multiply(p, u, v), w) ==
              multiply(p, u, multiply(p, v, w)));
  }
}

TEST_CASE("heisenberg arithmetic matches the closed formula") {
  PcPresentation p = heisenberg();
  // (a,b,c)(d,e,f) = (a+d, b+e, c+f+b*d); exercises negative exponents and
  // inverse conjugation on infinite-order generators
  std::mt19937_64 rng(99);
  auto draw = [&]() { return static_cast<long>(rng() % 21) - 10; };
  for (int iter = 0; iter < 300; ++iter) {
    long a = draw(), b = draw(), c = draw();
    long d = draw(), e = draw(), f = draw();
    ExponentVector u = ev3(p, a, b, c), v = ev3(p, d, e, f);
    ExponentVector prod = multiply(p, u, v);
    CHECK(prod.e[1] == a + d);
    CHECK(prod.e[2] == b + e);
    CHECK(prod.e[3] == c + f + b * d);
    // inverse: (a,b,c)^-1 = (-a,-b,-c+ab)
    ExponentVector iv = inverse(p, u);
    CHECK(iv.e[1] == -a);
    CHECK(iv.e[2] == -b);
    CHECK(iv.e[3] == -c + a * b);
    CHECK(is_identity(multiply(p, u, iv)));
    CHECK(is_identity(multiply(p, iv, u)));
  }
  // commutator of the generators is the stored tail
  ExponentVector g1 = ev3(p, 1, 0, 0), g2 = ev3(p, 2, 0, 0);
  ExponentVector c12 = commutator(p, ev3(p, 0, 1, 0), g1);
  CHECK(c12 == ev3(p, 0, 0, 1));
}

TEST_CASE("power uses square-and-multiply consistently") {
  PcPresentation p = heisenberg();
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    ExponentVector u = ev3(p, static_cast<long>(rng() % 7) - 3,
                           static_cast<long>(rng() % 7) - 3,
                           static_cast<long>(rng() % 7) - 3);
    long k = static_cast<long>(rng() % 15) - 7;
    ExponentVector by_power = power(p, u, Int(k));
    ExponentVector by_mult = identity_element(p);
    ExponentVector step = k >= 0 ? u : inverse(p, u);
    for (long i = 0; i < std::abs(k); ++i) by_mult = multiply(p, by_mult, step);
    CHECK(by_power == by_mult);
  }
}

TEST_CASE("orders, classes and element orders") {
  CHECK(group_order(c4_one_gen()) == 4);
  CHECK(nilpotency_class(c4_one_gen()) == 1);
  CHECK(group_order(c4_two_gen()) == 4);
  CHECK(group_order(d4()) == 8);
  CHECK(nilpotency_class(d4()) == 2);
  CHECK(group_order(heisenberg()) == 0);  // infinite

  PcPresentation c4 = c4_two_gen();
  ExponentVector g1 = identity_element(c4);
  g1.e[1] = 1;
  CHECK(element_order(c4, g1) == 4);

  PcPresentation dd = d4();
  ExponentVector ab = collect(dd, {{1, Int(1)}, {2, Int(1)}});
  CHECK(element_order(dd, ab) == 4);
  ExponentVector h = ev3(heisenberg(), 1, 0, 0);
  CHECK_THROWS_AS(element_order(heisenberg(), h, 100), GuardError);
}

TEST_CASE("weight grading of commutators") {
  PcPresentation p = d4();
  for (long a = 0; a < 2; ++a)
    for (long b = 0; b < 2; ++b)
      for (long c = 0; c < 2; ++c)
        for (long d = 0; d < 2; ++d)
          for (long e = 0; e < 2; ++e)
            for (long f = 0; f < 2; ++f) {
              ExponentVector u = ev3(p, a, b, c), v = ev3(p, d, e, f);
              ExponentVector cm = commutator(p, u, v);
              CHECK(cm.e[1] == 0);  // weight-2 support only
              CHECK(cm.e[2] == 0);
            }
}

TEST_CASE("evaluate_word evaluates expression trees over elements") {
  PcPresentation p = d4();
  std::map<std::string, ExponentVector> asg;
  asg["a"] = ev3(p, 1, 0, 0);
  asg["b"] = ev3(p, 0, 1, 0);

  CHECK(is_identity(evaluate_word(p, AbstractWord::identity(), {})));

  // [x,u,u] with u = identity
  std::map<std::string, ExponentVector> asg2 = asg;
  asg2["u"] = identity_element(p);
  AbstractWord engel = left_normed({AbstractWord::generator("a"),
                                    AbstractWord::generator("u"),
                                    AbstractWord::generator("u")});
  CHECK(is_identity(evaluate_word(p, engel, asg2)));

  AbstractWord comm_ab = AbstractWord::commutator(
      {AbstractWord::generator("a"), AbstractWord::generator("b")});
  CHECK(evaluate_word(p, comm_ab, asg) ==
        commutator(p, asg["a"], asg["b"]));

  AbstractWord pw = AbstractWord::power(AbstractWord::generator("a"), -3);
  CHECK(evaluate_word(p, pw, asg) == power(p, asg["a"], -3));

  CHECK_THROWS_AS(evaluate_word(p, AbstractWord::generator("z"), asg),
                  InputError);

  // evaluation is independent of the association of products
  AbstractWord left = AbstractWord::product(
      {AbstractWord::product(
           {AbstractWord::generator("a"), AbstractWord::generator("b")}),
       AbstractWord::generator("a")});
  AbstractWord right = AbstractWord::product(
      {AbstractWord::generator("a"),
       AbstractWord::product(
           {AbstractWord::generator("b"), AbstractWord::generator("a")})});
  CHECK(evaluate_word(p, left, asg) == evaluate_word(p, right, asg));
}

TEST_CASE("consistency: clean presentations pass, corrupted ones are caught") {
  CHECK(consistency_violations(c4_two_gen()).empty());
  CHECK(consistency_violations(c4_one_gen()).empty());
  CHECK(consistency_violations(d4()).empty());
  CHECK(consistency_violations(d4(), /*full=*/true).empty());
  CHECK(consistency_violations(heisenberg()).empty());

  // zeroed commutator tail: the definition of g3 is no longer realized
  PcPresentation broken = d4();
  broken.comm_tail_mut(2, 1).clear();
  auto viol = consistency_violations(broken);
  REQUIRE(!viol.empty());
  CHECK(viol.front().description.find("definition") != std::string::npos);

  // order mutation: overlap tests detect the inconsistency
  PcPresentation bad = d4();
  bad.rel_order[3] = 4;
  CHECK(!consistency_violations(bad).empty());
}

TEST_CASE("validate rejects malformed presentations") {
  PcPresentation p = d4();
  p.rel_order[2] = 1;
  CHECK_THROWS_AS(p.validate(), InputError);

  PcPresentation q = d4();
  q.comm_tail_mut(3, 1) = {{2, Int(1)}};  // support below the pair
  CHECK_THROWS_AS(q.validate(), InputError);

  PcPresentation r = d4();
  r.weight[3] = 1;  // commutator tail below required weight
  CHECK_THROWS_AS(r.validate(), InputError);

  PcPresentation s = d4();
  s.power_tail[1] = {{1, Int(1)}};  // power tail not above the generator
  CHECK_THROWS_AS(s.validate(), InputError);
}

TEST_CASE("canonical json round-trips and stays canonical") {
  PcPresentation p = d4();
  std::map<std::string, ExponentVector> images;
  images["a"] = ev3(p, 1, 0, 0);
  images["b"] = ev3(p, 0, 1, 0);
  std::string text = pcp_to_json(p, &images);
  PcpWithImages back = pcp_from_json(text);
  CHECK(back.p == p);
  CHECK(back.images.at("a") == images.at("a"));
  CHECK(back.images.at("b") == images.at("b"));
  CHECK(pcp_to_json(back.p, &back.images) == text);

  CHECK_THROWS_AS(pcp_from_json("{"), InputError);
  CHECK_THROWS_AS(pcp_from_json("{\"n\": 1}"), InputError);
}

TEST_CASE("free abelian arithmetic with negative entries") {
  PcPresentation p;
  p.resize(2);
  p.weight = {0, 1, 1};
  p.rel_order = {Int(0), Int(0), Int(0)};
  p.validate();
  ExponentVector u = identity_element(p), v = identity_element(p);
  u.e[1] = -5;
  u.e[2] = 3;
  v.e[1] = 2;
  v.e[2] = -7;
  ExponentVector s = multiply(p, u, v);
  CHECK(s.e[1] == -3);
  CHECK(s.e[2] == -4);
  CHECK(is_identity(commutator(p, u, v)));
}
