#include <string>

#include "doctest.h"
#include "action.hpp"

using eqp::ActionContext;
using eqp::GenWord;
using eqp::Letter;
using eqp::make_permutation;
using eqp::OrbitSpec;
using eqp::PermGroup;
using eqp::Permutation;
using eqp::RawWord;
using eqp::SymbolRef;
using eqp::Word;

namespace {

Permutation perm(std::vector<uint32_t> img) { return make_permutation(std::move(img)); }

// Sym(3) with a 3-cycle and a transposition, acting on one orbit of three
// symbols. Declared arrays are the inverse images, which is the assignment
// that satisfies the element-table compatibility relation.
ActionContext natural_sym3() {
  PermGroup gamma(3, {{"c", perm({1, 2, 0})}, {"t", perm({1, 0, 2})}});
  OrbitSpec orb;
  orb.name = "s";
  orb.size = 3;
  orb.base = 0;
  orb.gen_arrays["c"] = {2, 0, 1};
  orb.gen_arrays["t"] = {1, 0, 2};
  return ActionContext(std::move(gamma), {orb});
}

// Same group, but the array for c is an involution. No assignment extending
// it can satisfy c^3 = 1, so the element table cannot be consistent.
ActionContext twisted_sym3() {
  PermGroup gamma(3, {{"c", perm({1, 2, 0})}, {"t", perm({1, 0, 2})}});
  OrbitSpec orb;
  orb.name = "s";
  orb.size = 3;
  orb.base = 0;
  orb.gen_arrays["c"] = {1, 0, 2};
  orb.gen_arrays["t"] = {1, 0, 2};
  return ActionContext(std::move(gamma), {orb});
}

// Degree-4 shift-and-flip group over two signed letters with a two-symbol
// orbit carrying an iota assignment on the base symbol.
ActionContext flip_context() {
  Permutation c = perm({2, 3, 0, 1});
  Permutation t = perm({1, 0, 2, 3});
  PermGroup gamma(4, {{"c", c}, {"t", t}});
  OrbitSpec orb;
  orb.name = "s";
  orb.size = 2;
  orb.base = 0;
  orb.gen_arrays["c"] = {1, 0};
  orb.gen_arrays["t"] = {0, 1};
  orb.iota = perm({1, 0, 2, 3});
  OrbitSpec solo;
  solo.name = "u";
  solo.size = 1;
  solo.base = 0;
  solo.gen_arrays["c"] = {0};
  solo.gen_arrays["t"] = {0};
  return ActionContext(std::move(gamma), {orb, solo});
}

}  // namespace

TEST_CASE("element tables compose like the group") {
  ActionContext ctx = natural_sym3();
  REQUIRE(ctx.check_action_well_defined());

  const PermGroup& g = ctx.gamma();
  const auto& elems = g.enumerate_elements();
  for (std::size_t e = 0; e < elems.size(); ++e)
    for (std::size_t f = 0; f < elems.size(); ++f) {
      std::size_t ef = g.element_index(eqp::compose(elems[e], elems[f]));
      for (uint32_t p = 0; p < 3; ++p)
        CHECK(ctx.act_point(ef, 0, p) == ctx.act_point(e, 0, ctx.act_point(f, 0, p)));
    }

  // identity element acts trivially
  for (uint32_t p = 0; p < 3; ++p) CHECK(ctx.act_point(0, 0, p) == p);
}

TEST_CASE("inconsistent generator arrays are detected") {
  ActionContext ctx = twisted_sym3();
  std::string msg;
  CHECK_FALSE(ctx.check_action_well_defined(&msg));
  CHECK_FALSE(msg.empty());
}

TEST_CASE("symbol enumeration and letterwise action") {
  ActionContext ctx = flip_context();
  auto syms = ctx.symbols();
  REQUIRE(syms.size() == 3);
  CHECK(syms[0] == SymbolRef{0, 0});
  CHECK(syms[1] == SymbolRef{0, 1});
  CHECK(syms[2] == SymbolRef{1, 0});
  for (std::size_t i = 0; i < syms.size(); ++i) CHECK(ctx.symbol_linear_index(syms[i]) == i);
  CHECK(ctx.symbol_count() == 3);
  CHECK(ctx.orbit_index("u") == 1);

  std::size_t c = ctx.gamma_element_of({{"c", 1}});
  CHECK(ctx.act_symbol(c, SymbolRef{0, 0}) == SymbolRef{0, 1});
  CHECK(ctx.act_symbol(c, SymbolRef{1, 0}) == SymbolRef{1, 0});

  RawWord raw{Letter{SymbolRef{0, 0}, 1}, Letter{SymbolRef{0, 1}, -1}, Letter{SymbolRef{1, 0}, 1}};
  RawWord moved = ctx.act_raw(c, raw);
  REQUIRE(moved.size() == 3);
  CHECK(moved[0] == Letter{SymbolRef{0, 1}, 1});
  CHECK(moved[1] == Letter{SymbolRef{0, 0}, -1});
  CHECK(moved[2] == Letter{SymbolRef{1, 0}, 1});
  CHECK(ctx.act_word(c, Word(raw)) == Word(moved));
}

TEST_CASE("gamma words name elements consistently with evaluation") {
  ActionContext ctx = natural_sym3();
  const PermGroup& g = ctx.gamma();
  std::vector<GenWord> words = {
      {}, {{"c", 1}}, {{"c", -1}}, {{"t", 1}}, {{"c", 1}, {"t", 1}}, {{"t", 1}, {"c", -1}, {"t", 1}}};
  for (const GenWord& w : words) CHECK(ctx.gamma_element_of(w) == g.element_index(g.evaluate(w)));
  CHECK(ctx.gamma_element_of({}) == 0);
}

TEST_CASE("orbit words reach their point and peel by one letter") {
  ActionContext ctx = natural_sym3();
  REQUIRE(ctx.orbit_transitive(0));
  uint32_t base = ctx.orbit_base(0);
  for (uint32_t p = 0; p < ctx.orbit_size(0); ++p) {
    const GenWord& w = ctx.orbit_word(0, p);
    CHECK(ctx.act_point(ctx.gamma_element_of(w), 0, base) == p);
    CHECK(ctx.transversal_element(0, p) == ctx.gamma_element_of(w));
    if (p == base) {
      CHECK(w.empty());
      continue;
    }
    REQUIRE_FALSE(w.empty());
    GenWord tail(w.begin() + 1, w.end());
    uint32_t q = ctx.act_point(ctx.gamma_element_of(tail), 0, base);
    CHECK(tail == ctx.orbit_word(0, q));
    CHECK(ctx.act_point(ctx.gamma_element_of({w.front()}), 0, q) == p);
  }
}

TEST_CASE("iota extends over the orbit by transversal conjugation") {
  ActionContext ctx = flip_context();
  REQUIRE(ctx.has_iota(0));
  CHECK_FALSE(ctx.has_iota(1));

  const auto& elems = ctx.gamma().enumerate_elements();
  CHECK(elems[ctx.iota_element(0, 0)] == perm({1, 0, 2, 3}));
  CHECK(elems[ctx.iota_element(0, 1)] == perm({0, 1, 3, 2}));

  // formula: transversal conjugate of the seed
  for (uint32_t p = 0; p < 2; ++p) {
    const Permutation& t = elems[ctx.transversal_element(0, p)];
    const Permutation& seed = elems[ctx.iota_element(0, 0)];
    Permutation expect = eqp::compose(eqp::compose(t, seed), eqp::inverse(t));
    CHECK(ctx.iota_element(0, p) == ctx.gamma().element_index(expect));
  }

  CHECK_THROWS_AS((void)ctx.iota_element(1, 0), eqp::error);
}

TEST_CASE("stabilizers fix their point and have the right size") {
  ActionContext ctx = natural_sym3();
  for (uint32_t p = 0; p < 3; ++p) {
    auto stab = ctx.stabilizer_elements(0, p);
    const auto& elems = ctx.gamma().enumerate_elements();
    std::vector<Permutation> perms;
    for (std::size_t e : stab) {
      CHECK(ctx.act_point(e, 0, p) == p);
      CHECK(e != 0);
      perms.push_back(elems[e]);
    }
    CHECK(eqp::subgroup_order(3, perms) == ctx.gamma_order() / ctx.orbit_size(0));
  }
  CHECK_THROWS_AS((void)ctx.stabilizer_elements(0, 7), eqp::error);
}

TEST_CASE("constructor rejects malformed orbit data") {
  PermGroup gamma(3, {{"c", perm({1, 2, 0})}});
  OrbitSpec orb;
  orb.name = "s";
  orb.size = 2;
  orb.base = 0;

  SUBCASE("array is not a bijection") {
    orb.gen_arrays["c"] = {0, 0};
    CHECK_THROWS_AS(ActionContext(gamma, {orb}), eqp::error);
  }
  SUBCASE("array for an undeclared generator") {
    orb.gen_arrays["c"] = {1, 0};
    orb.gen_arrays["x"] = {1, 0};
    CHECK_THROWS_AS(ActionContext(gamma, {orb}), eqp::error);
  }
  SUBCASE("missing array for a declared generator") {
    CHECK_THROWS_AS(ActionContext(gamma, {orb}), eqp::error);
  }
  SUBCASE("base outside the domain") {
    orb.gen_arrays["c"] = {1, 0};
    orb.base = 5;
    CHECK_THROWS_AS(ActionContext(gamma, {orb}), eqp::error);
  }
}
