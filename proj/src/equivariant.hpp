#pragma once

#include <string>
#include <vector>

#include "action.hpp"
#include "presentation.hpp"

namespace eqp {

// A group presentation whose generators come in gamma orbits. In finite mode
// the relations are the gamma translates of r0. In weak mode each orbit also
// carries a gamma element (iota) for its base symbol, and the translates are
// supplemented by the conjugation relations s t s^-1 (^s t)^-1.
struct EquivariantPresentation {
  std::string name;
  bool weak = false;
  ActionContext ctx;
  std::vector<Word> r0;
};

struct RelatorOrigin {
  enum class Kind { orbit, conj };
  Kind kind = Kind::orbit;
  std::size_t gamma_elem = 0;  // orbit kind: translating element
  std::size_t r0_index = 0;    // orbit kind: which base relator
  SymbolRef s{};               // conj kind: the pair
  SymbolRef t{};
};

struct ExpandedPresentation {
  std::vector<Word> relators;
  std::vector<RelatorOrigin> origins;
};

// Gamma translates of r0 (every element, BFS order, then r0 order),
// deduplicated as exact reduced words keeping first occurrences; in weak
// mode followed by the conjugation relations.
ExpandedPresentation expand_R(const EquivariantPresentation& ep);

struct ConjRelator {
  SymbolRef s;
  SymbolRef t;
  Word word;
};

// The words s t s^-1 (^s t)^-1 over ordered symbol pairs in linear order,
// with freely trivial ones dropped. ^s t acts through iota extended over the
// orbit of s. Weak mode only.
std::vector<ConjRelator> conj_relators(const EquivariantPresentation& ep);

std::string symbol_name(const ActionContext& ctx, SymbolRef s);

FlatWord flatten(const ActionContext& ctx, const Word& w);

// Regular realization of the presented group: coset table of the expanded
// relators, one permutation per symbol, and the permutation group they
// generate with symbols as generator names. The group's BFS element order is
// the canonical element indexing used downstream.
struct Realization {
  CosetTable table;
  std::vector<Permutation> images;
  PermGroup group;
};

Realization realize(const EquivariantPresentation& ep, std::size_t max_cosets = 1000000);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::size_t realized_order = 0;
  bool all_passed() const {
    for (const CheckResult& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Fixed check order: orbit transitivity, action homomorphism property,
// (weak: iota equivariance, iota normality), realization, relators hold in
// the realization, symbol images generate, (weak: realization agrees with
// the subgroup of gamma generated by the iota images).
ValidationReport validate(const EquivariantPresentation& ep, std::size_t max_cosets = 1000000);

}  // namespace eqp
