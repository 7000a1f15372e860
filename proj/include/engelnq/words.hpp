#pragma once

#include <map>
#include <string>
#include <vector>

#include "engelnq/common.hpp"

namespace engelnq {

enum class AtomKind { Generator, Variable };

struct Atom {
  AtomKind kind = AtomKind::Generator;
  std::string name;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend auto operator<=>(const Atom& a, const Atom& b) = default;
};

enum class WordKind { Identity, Atom, Product, Power, Commutator };

// Expression tree over atoms: products, integer powers, and commutators.
// A commutator node of arity k >= 2 always denotes the left-normed
// commutator [[...[w1,w2],w3]...,wk] with [u,v] = u^-1 v^-1 u v.
struct AbstractWord {
  WordKind kind = WordKind::Identity;
  Atom atom;                          // Atom
  std::vector<AbstractWord> children; // Product, Commutator, Power (1 child)
  Int exponent = 0;                   // Power

  static AbstractWord identity() { return AbstractWord{}; }
  static AbstractWord generator(std::string name);
  static AbstractWord variable(std::string name);
  static AbstractWord product(std::vector<AbstractWord> ws);
  static AbstractWord power(AbstractWord w, Int k);
  static AbstractWord commutator(std::vector<AbstractWord> ws);

  bool operator==(const AbstractWord& o) const;
};

struct Law {
  AbstractWord body;
  std::vector<Atom> variables;  // order of first occurrence; never empty
};

struct Presentation {
  std::string name;
  std::vector<Atom> generators;
  std::vector<AbstractWord> relators;  // variable-free
  std::vector<Law> laws;
};

// Left-normed commutator [[...[w1,w2],w3]...,wk] as a nested binary tree.
AbstractWord left_normed(std::vector<AbstractWord> ws);

// Freely reduced word over named symbols: runs of a symbol with nonzero
// exponent, adjacent symbols distinct.
using FreeLetter = std::pair<std::string, Int>;
using FreeWord = std::vector<FreeLetter>;

FreeWord free_mul(const FreeWord& a, const FreeWord& b);
FreeWord free_inverse(const FreeWord& a);
FreeWord free_power(const FreeWord& a, const Int& k);

// Expand w into a freely reduced letter sequence. Fixed generators map to
// themselves when absent from subst; a variable without an image is an error.
FreeWord flatten(const AbstractWord& w, const std::map<Atom, FreeWord>& subst);
FreeWord flatten(const AbstractWord& w);

// Parse presentation source text (grammar in the README). parse_presentations
// accepts any number of group blocks; parse_presentation requires exactly one.
std::vector<Presentation> parse_presentations(const std::string& source);
Presentation parse_presentation(const std::string& source);

std::string print_word(const AbstractWord& w);
std::string print_presentation(const Presentation& p);

// Collect the distinct variables of a word in order of first occurrence.
std::vector<Atom> word_variables(const AbstractWord& w);

}  // namespace engelnq
