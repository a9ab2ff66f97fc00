#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace eqp {

// Permutation of {0, ..., degree-1} stored as an image table.
// Composition is left-to-right everywhere: compose(p, q) applies p first,
// then q, so compose(p, q)[x] = q[p[x]]. Words over generators evaluate
// left-to-right under the same rule.
struct Permutation {
  std::vector<std::uint32_t> img;

  static Permutation identity(std::uint32_t degree);
  std::uint32_t degree() const { return static_cast<std::uint32_t>(img.size()); }
  std::uint32_t apply(std::uint32_t x) const { return img.at(x); }
  bool is_identity() const;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);

// Validates that img is a bijection on {0..degree-1}.
Permutation make_permutation(std::vector<std::uint32_t> img);

using GenLetter = std::pair<std::string, int>;  // (generator name, exponent +1/-1)
using GenWord = std::vector<GenLetter>;

// Finite permutation group given by named generators of a common degree.
// Element enumeration is breadth-first over right products with the declared
// generators (identity first), which fixes the element order used everywhere
// downstream; exceeding element_cap raises cap_exceeded.
class PermGroup {
 public:
  PermGroup(std::uint32_t degree, std::vector<std::pair<std::string, Permutation>> generators,
            std::size_t element_cap = 100000);

  std::uint32_t degree() const { return degree_; }
  const std::vector<std::pair<std::string, Permutation>>& generators() const { return gens_; }
  std::size_t element_cap() const { return element_cap_; }

  const Permutation& generator(const std::string& name) const;
  bool has_generator(const std::string& name) const;

  // BFS element list; cached after the first call.
  const std::vector<Permutation>& enumerate_elements() const;
  std::size_t order() const { return enumerate_elements().size(); }
  // Index of an element in the enumeration; not_in_group if absent.
  std::size_t element_index(const Permutation& p) const;
  bool contains(const Permutation& p) const;

  // Orbit of a point under the generators, sorted ascending.
  std::vector<std::uint32_t> orbit(std::uint32_t point) const;

  // Schreier generators of the stabilizer of point, deduplicated, identity
  // dropped, in first-encountered BFS order.
  std::vector<Permutation> stabilizer_generators(std::uint32_t point) const;

  // Shortest word in generators-and-inverses evaluating (left-to-right) to
  // target; among shortest words the lexicographically least under generator
  // declaration order with +1 before -1. Empty word for the identity.
  GenWord word_for_element(const Permutation& target) const;

  Permutation evaluate(const GenWord& w) const;

 private:
  std::uint32_t degree_;
  std::vector<std::pair<std::string, Permutation>> gens_;
  std::size_t element_cap_;
  mutable std::vector<Permutation> elements_;  // BFS order cache
};

// Order of the subgroup generated by the given permutations (BFS closure).
std::size_t subgroup_order(std::uint32_t degree, const std::vector<Permutation>& gens,
                           std::size_t element_cap = 100000);

// BFS closure of a generating set; identity first, right products with the
// generators in the given order.
std::vector<Permutation> enumerate_closure(std::uint32_t degree,
                                           const std::vector<Permutation>& gens,
                                           std::size_t element_cap);

}  // namespace eqp
