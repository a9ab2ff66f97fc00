#include <string>
#include <vector>

#include "doctest.h"
#include "homology.hpp"
#include "io.hpp"

using eqp::ActionContext;
using eqp::EquivariantPresentation;
using eqp::Int;
using eqp::IntMatrix;
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

using Factors = std::vector<Int>;

PermGroup cyclic(uint32_t n) {
  std::vector<uint32_t> img(n);
  for (uint32_t i = 0; i < n; ++i) img[i] = (i + 1) % n;
  return PermGroup(n, {{"r", perm(img)}});
}

// direct product of two cyclics on disjoint points
PermGroup cyclic_pair(uint32_t m, uint32_t n) {
  std::vector<uint32_t> a(m + n), b(m + n);
  for (uint32_t i = 0; i < m + n; ++i) a[i] = b[i] = i;
  for (uint32_t i = 0; i < m; ++i) a[i] = (i + 1) % m;
  for (uint32_t i = 0; i < n; ++i) b[m + i] = m + (i + 1) % n;
  return PermGroup(m + n, {{"a", perm(a)}, {"b", perm(b)}});
}

PermGroup elementary_abelian_222() {
  return PermGroup(6, {{"a", perm({1, 0, 2, 3, 4, 5})},
                       {"b", perm({0, 1, 3, 2, 4, 5})},
                       {"c", perm({0, 1, 2, 3, 5, 4})}});
}

PermGroup from_presentation(std::size_t nsyms, const std::vector<eqp::FlatWord>& rels,
                            std::vector<std::string> names) {
  auto images = eqp::regular_realization(eqp::todd_coxeter(nsyms, rels).table);
  std::vector<std::pair<std::string, Permutation>> gens;
  for (std::size_t i = 0; i < nsyms; ++i) gens.emplace_back(names.at(i), images[i]);
  return PermGroup(images[0].degree(), std::move(gens));
}

PermGroup quaternion8() {
  using FW = eqp::FlatWord;
  return from_presentation(
      2, {FW{{0, 4}}, FW{{0, 2}, {1, -2}}, FW{{1, -1}, {0, 1}, {1, 1}, {0, 1}}}, {"a", "b"});
}

// presentation with trivial gamma: every symbol sits in its own fixed orbit
EquivariantPresentation trivial_gamma(std::vector<std::string> orbit_names,
                                      std::vector<Word> relators) {
  PermGroup gamma(1, {});
  std::vector<OrbitSpec> orbits;
  for (auto& n : orbit_names) {
    OrbitSpec o;
    o.name = std::move(n);
    o.size = 1;
    o.base = 0;
    orbits.push_back(std::move(o));
  }
  return EquivariantPresentation{"trivial", false, ActionContext(std::move(gamma), orbits),
                                 std::move(relators)};
}

Word wpow(SymbolRef s, int k) {
  RawWord w(static_cast<std::size_t>(k), Letter{s, 1});
  return Word(w);
}

Word wcomm(SymbolRef a, SymbolRef b) {
  return Word(RawWord{Letter{a, 1}, Letter{b, 1}, Letter{a, -1}, Letter{b, -1}});
}

Word wprodpow(SymbolRef a, SymbolRef b, int k) {
  RawWord w;
  for (int i = 0; i < k; ++i) {
    w.push_back(Letter{a, 1});
    w.push_back(Letter{b, 1});
  }
  return Word(w);
}

// three commuting involutions with the gamma action stripped away
EquivariantPresentation z2cube_trivial_gamma() {
  SymbolRef a{0, 0}, b{1, 0}, c{2, 0};
  return trivial_gamma({"a", "b", "c"}, {wpow(a, 2), wpow(b, 2), wpow(c, 2), wcomm(a, b),
                                         wcomm(a, c), wcomm(b, c)});
}

// Coxeter presentation of the symmetric group on five letters
EquivariantPresentation coxeter_sym5() {
  std::vector<SymbolRef> t;
  for (uint32_t i = 0; i < 4; ++i) t.push_back(SymbolRef{i, 0});
  std::vector<Word> rels;
  for (int i = 0; i < 4; ++i) rels.push_back(wpow(t[i], 2));
  for (int i = 0; i + 1 < 4; ++i) rels.push_back(wprodpow(t[i], t[i + 1], 3));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 2; j < 4; ++j) rels.push_back(wprodpow(t[i], t[j], 2));
  return trivial_gamma({"t0", "t1", "t2", "t3"}, std::move(rels));
}

IntMatrix reduce_rows(IntMatrix m, const Factors& factors) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Int& e = m.at(i, j);
      e %= factors.at(i);
      if (e < 0) e += factors.at(i);
    }
  return m;
}

}  // namespace

TEST_CASE("bar resolution oracle reproduces classical multipliers") {
  CHECK(eqp::bar_h2_oracle(PermGroup(1, {})) == Factors{});
  CHECK(eqp::bar_h2_oracle(cyclic(2)) == Factors{});
  CHECK(eqp::bar_h2_oracle(cyclic(3)) == Factors{});
  CHECK(eqp::bar_h2_oracle(cyclic(6)) == Factors{});
  CHECK(eqp::bar_h2_oracle(cyclic_pair(2, 2)) == Factors{2});
  CHECK(eqp::bar_h2_oracle(cyclic_pair(2, 4)) == Factors{2});
  CHECK(eqp::bar_h2_oracle(cyclic_pair(3, 3)) == Factors{3});
  CHECK(eqp::bar_h2_oracle(elementary_abelian_222()) == Factors{2, 2, 2});

  // symmetric group on three letters
  PermGroup s3(3, {{"a", perm({1, 0, 2})}, {"b", perm({0, 2, 1})}});
  CHECK(eqp::bar_h2_oracle(s3) == Factors{});
  // dihedral group of the square
  PermGroup d4(4, {{"r", perm({1, 2, 3, 0})}, {"f", perm({3, 2, 1, 0})}});
  CHECK(eqp::bar_h2_oracle(d4) == Factors{2});
  CHECK(eqp::bar_h2_oracle(quaternion8()) == Factors{});
  // alternating group on four letters
  PermGroup a4(4, {{"x", perm({1, 2, 0, 3})}, {"y", perm({0, 2, 3, 1})}});
  CHECK(eqp::bar_h2_oracle(a4) == Factors{2});
  // symmetric group on four letters, exactly at the default cap
  PermGroup s4(4, {{"s", perm({1, 0, 2, 3})}, {"c", perm({1, 2, 3, 0})}});
  CHECK(eqp::bar_h2_oracle(s4) == Factors{2});

  CHECK_THROWS_AS((void)eqp::bar_h2_oracle(s4, 12), eqp::error);
  try {
    (void)eqp::bar_h2_oracle(s4, 12);
  } catch (const eqp::error& e) {
    CHECK(e.code() == eqp::errc::cap_exceeded);
  }
}

TEST_CASE("abelianized invariants of pinned relator sets") {
  using FW = eqp::FlatWord;
  eqp::AbelianInvariants kv = eqp::abelianization(
      2, {FW{{0, 2}}, FW{{1, 2}}, FW{{0, 1}, {1, 1}, {0, 1}, {1, 1}}});
  CHECK(kv.factors == Factors{2, 2});
  CHECK(kv.free_rank == 0);

  eqp::AbelianInvariants z = eqp::abelianization(2, {FW{{0, 1}, {1, -1}}});
  CHECK(z.factors.empty());
  CHECK(z.free_rank == 1);

  IntMatrix em = eqp::exponent_matrix(2, {FW{{0, 1}, {1, 1}, {0, 1}}, FW{{1, -2}}});
  REQUIRE(em.rows() == 2);
  REQUIRE(em.cols() == 2);
  CHECK(em.at(0, 0) == 2);
  CHECK(em.at(0, 1) == 1);
  CHECK(em.at(1, 0) == 0);
  CHECK(em.at(1, 1) == -2);
}

TEST_CASE("boundary columns vanish under augmentation and relator cycles are cycles") {
  EquivariantPresentation ep = eqp::builtin("z2sum", 2);
  eqp::Realization real = eqp::realize(ep);
  IntMatrix b1 = eqp::boundary1(real.group, real.images);
  std::size_t n = real.group.order(), s = real.images.size();
  REQUIRE(b1.rows() == n);
  REQUIRE(b1.cols() == n * s);
  for (std::size_t j = 0; j < b1.cols(); ++j) {
    Int sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += b1.at(i, j);
    CHECK(sum == 0);
  }

  eqp::ExpandedPresentation ex = eqp::expand_R(ep);
  for (const Word& r : ex.relators) {
    std::vector<Int> cycle = eqp::relator_cycle(real.group, real.images, eqp::flatten(ep.ctx, r));
    REQUIRE(cycle.size() == b1.cols());
    CHECK(eqp::matvec(b1, cycle) == std::vector<Int>(n, 0));
  }
}

TEST_CASE("relation module has the expected rank and stable coinvariants") {
  for (auto [name, nn] : std::vector<std::pair<std::string, int>>{{"z2sum", 2}, {"star", 3}}) {
    CAPTURE(name);
    EquivariantPresentation ep = eqp::builtin(name, nn);
    eqp::Realization real = eqp::realize(ep);
    eqp::RelationModuleCoinv rmc = eqp::relation_module_coinvariants(real.group, real.images);

    // rank of the kernel of the augmented boundary: n(s-1) + 1
    std::size_t n = real.group.order(), s = real.images.size();
    CHECK(rmc.k == n * (s - 1) + 1);
    CHECK(rmc.kernel.rows() == n * s);
    CHECK(rmc.kernel.cols() == rmc.k);

    // the coinvariance lattice is stable under every generator action and
    // lies inside the kernel of the symbol-sum map
    IntMatrix phi = eqp::phi_matrix(rmc, s);
    for (const auto& row : rmc.coinv.canonical_rows()) {
      CHECK(eqp::matvec(phi, row) == std::vector<Int>(s, 0));
      for (std::size_t t = 0; t < s; ++t) CHECK(rmc.coinv.contains(eqp::matvec(rmc.gen_action[t], row)));
    }

    // generator actions are unimodular
    for (std::size_t t = 0; t < s; ++t) {
      eqp::SmithForm sf = eqp::smith_normal_form(rmc.gen_action[t]);
      CHECK(sf.rank == rmc.k);
      CHECK(sf.diag == Factors(rmc.k, 1));
    }
  }
}

TEST_CASE("pipeline second homology matches the bar oracle on the built-ins") {
  auto factors_of = [](const EquivariantPresentation& ep) {
    eqp::Realization real = eqp::realize(ep);
    eqp::RelationModuleCoinv rmc = eqp::relation_module_coinvariants(real.group, real.images);
    eqp::H2Result h = eqp::h2(rmc, real.images.size());

    // representatives live in the kernel of phi and round-trip through the
    // quotient coordinates
    IntMatrix phi = eqp::phi_matrix(rmc, real.images.size());
    for (std::size_t i = 0; i < h.reps_k.size(); ++i) {
      CHECK(eqp::matvec(phi, h.reps_k[i]) == std::vector<Int>(real.images.size(), 0));
      std::vector<Int> unit(h.factors.size(), 0);
      unit[i] = 1;
      CHECK(eqp::h2_coords(h, h.reps_k[i]) == unit);
      CHECK(eqp::kernel_coords(rmc, h.reps_ambient[i]) == h.reps_k[i]);
    }
    return std::make_pair(h.factors, eqp::bar_h2_oracle(real.group));
  };

  auto [f22, o22] = factors_of(eqp::builtin("z2sum", 2));
  CHECK(f22 == Factors{2});
  CHECK(f22 == o22);
  auto [f23, o23] = factors_of(eqp::builtin("z2sum", 3));
  CHECK(f23 == Factors{2, 2, 2});
  CHECK(f23 == o23);
  auto [fs3, os3] = factors_of(eqp::builtin("star", 3));
  CHECK(fs3 == Factors{2});
  CHECK(fs3 == os3);
  auto [fh2, oh2] = factors_of(eqp::builtin("hyperoct", 2));
  CHECK(fh2 == Factors{2});
  CHECK(fh2 == oh2);
  auto [fh3, oh3] = factors_of(eqp::builtin("hyperoct", 3));
  CHECK(fh3 == Factors{2, 2, 2});
  CHECK(fh3 == oh3);
}

TEST_CASE("five term diagnostics pass on the built-ins") {
  for (auto [name, n] : std::vector<std::pair<std::string, int>>{
           {"z2sum", 2}, {"z2sum", 3}, {"z2sum", 4}, {"star", 3}, {"hyperoct", 2}, {"hyperoct", 3}}) {
    CAPTURE(name);
    CAPTURE(n);
    eqp::FiveTermDiagnostics d = eqp::five_term_check(eqp::builtin(name, n));
    for (const auto& c : d.checks) {
      CAPTURE(c.name);
      CHECK(c.passed);
    }
    CHECK(d.checks.size() >= 4);
  }
}

TEST_CASE("full homology report on three commuting involutions") {
  eqp::HomologyReport hr = eqp::homology_report(eqp::builtin("z2sum", 3));
  CHECK(hr.group_order == 8);
  CHECK(hr.h1.factors == Factors{2, 2, 2});
  CHECK(hr.h1.free_rank == 0);
  CHECK(hr.h2_factors == Factors{2, 2, 2});
  CHECK(hr.generation.rank == 1);
  CHECK(hr.generation.exact);
  CHECK(hr.generation.chosen.size() == 1);
  CHECK(hr.diagnostics.all_passed());
  REQUIRE(hr.action.matrices.size() == hr.action.gen_names.size());
  for (const IntMatrix& m : hr.action.matrices) {
    REQUIRE(m.rows() == 3);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        CHECK(m.at(i, j) >= 0);
        CHECK(m.at(i, j) < hr.h2_factors[i]);
      }
  }
}

TEST_CASE("stripping the symmetry raises the generator count to three") {
  eqp::HomologyReport hr = eqp::homology_report(z2cube_trivial_gamma());
  CHECK(hr.group_order == 8);
  CHECK(hr.h2_factors == Factors{2, 2, 2});
  CHECK(hr.generation.rank == 3);
  CHECK(hr.generation.exact);
  CHECK(hr.diagnostics.all_passed());
}

TEST_CASE("module generation rank on pinned matrix actions") {
  IntMatrix id2 = IntMatrix::identity(2);
  IntMatrix swap(2, 2);
  swap.at(0, 1) = 1;
  swap.at(1, 0) = 1;

  eqp::GenerationResult one = eqp::gamma_generation_rank({2, 2}, {id2, swap});
  CHECK(one.rank == 1);
  CHECK(one.exact);
  CHECK(one.chosen.size() == 1);

  eqp::GenerationResult two = eqp::gamma_generation_rank({2, 2}, {id2});
  CHECK(two.rank == 2);
  CHECK(two.exact);

  eqp::GenerationResult zero = eqp::gamma_generation_rank({}, {IntMatrix(0, 0)});
  CHECK(zero.rank == 0);
  CHECK(zero.chosen.empty());
}

TEST_CASE("element matrices are functorial under composition") {
  for (auto [name, n] : std::vector<std::pair<std::string, int>>{
           {"z2sum", 3}, {"star", 3}, {"hyperoct", 3}}) {
    CAPTURE(name);
    EquivariantPresentation ep = eqp::builtin(name, n);
    eqp::Realization real = eqp::realize(ep);
    eqp::RelationModuleCoinv rmc = eqp::relation_module_coinvariants(real.group, real.images);
    eqp::H2Result h = eqp::h2(rmc, real.images.size());
    eqp::GammaH2Action act = eqp::gamma_action_on_h2(ep, real, rmc, h);
    std::vector<IntMatrix> mats = eqp::gamma_element_matrices(ep.ctx.gamma(), act, h.factors);

    const auto& elems = ep.ctx.gamma().enumerate_elements();
    REQUIRE(mats.size() == elems.size());
    CHECK(mats[0] == IntMatrix::identity(h.factors.size()));
    for (std::size_t a = 0; a < elems.size(); ++a)
      for (std::size_t b = 0; b < elems.size(); ++b) {
        std::size_t ab = ep.ctx.gamma().element_index(eqp::compose(elems[a], elems[b]));
        CHECK(mats[ab] == reduce_rows(eqp::matmul(mats[a], mats[b]), h.factors));
      }
  }
}

TEST_CASE("induced automorphisms verify and reject") {
  EquivariantPresentation ep = eqp::builtin("star", 3);
  eqp::Realization real = eqp::realize(ep);
  const auto& elems = real.group.enumerate_elements();

  std::vector<std::size_t> alpha = eqp::induced_automorphism(real.group, real.images, {1, 0, 2});
  REQUIRE(alpha.size() == elems.size());
  CHECK(alpha[0] == 0);
  // multiplicative on every pair
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b) {
      std::size_t ab = real.group.element_index(eqp::compose(elems[a], elems[b]));
      CHECK(alpha[ab] == real.group.element_index(eqp::compose(elems[alpha[a]], elems[alpha[b]])));
    }

  EquivariantPresentation kv = eqp::builtin("z2sum", 2);
  eqp::Realization rkv = eqp::realize(kv);
  CHECK_THROWS_AS((void)eqp::induced_automorphism(rkv.group, rkv.images, {0, 0}), eqp::error);
  try {
    (void)eqp::induced_automorphism(rkv.group, rkv.images, {0, 0});
  } catch (const eqp::error& e) {
    CHECK(e.code() == eqp::errc::action_not_well_defined);
  }
}

TEST_CASE("two presentations of the degree-five symmetric group agree") {
  eqp::HomologyReport star = eqp::homology_report(eqp::builtin("star", 4));
  CHECK(star.group_order == 120);
  CHECK(star.h2_factors == Factors{2});
  CHECK(star.generation.rank == 1);
  CHECK(star.diagnostics.all_passed());

  eqp::HomologyReport cox = eqp::homology_report(coxeter_sym5());
  CHECK(cox.group_order == 120);
  CHECK(cox.h2_factors == Factors{2});
  CHECK(cox.diagnostics.all_passed());

  CHECK(star.h2_factors == cox.h2_factors);
}
