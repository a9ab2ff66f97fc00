#include "homology.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eqp {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

Int floormod(Int v, const Int& m) {
  Int r = v % m;
  if (r < 0) r += m;
  return r;
}

// Sorted element -> enumeration index lookup; PermGroup's own lookup is a
// linear scan, too slow for the inner loops here.
struct ElementIndex {
  explicit ElementIndex(const std::vector<Permutation>& elems) {
    for (std::size_t i = 0; i < elems.size(); ++i) by_perm_.emplace(elems[i], i);
  }
  std::size_t of(const Permutation& p) const {
    auto it = by_perm_.find(p);
    if (it == by_perm_.end()) fail(errc::not_in_group, "element is not in the group");
    return it->second;
  }
  std::map<Permutation, std::size_t> by_perm_;
};

// Matrix of a basis permutation i -> pi[i] restricted to the kernel:
// kernel_rows * P * kernel. Sound whenever the permuted kernel stays inside
// the kernel, which holds for every map used here because they commute with
// the boundary.
IntMatrix permuted_kernel_matrix(const IntMatrix& kernel, const IntMatrix& kernel_rows,
                                 const std::vector<std::size_t>& pi) {
  IntMatrix pb(kernel.rows(), kernel.cols());
  for (std::size_t i = 0; i < kernel.rows(); ++i)
    for (std::size_t j = 0; j < kernel.cols(); ++j) pb.at(pi[i], j) = kernel.at(i, j);
  return matmul(kernel_rows, pb);
}

IntMatrix reduce_mod_factors(IntMatrix m, const std::vector<Int>& factors) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = floormod(m.at(i, j), factors[i]);
  return m;
}

bool is_zero(const IntMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j) != 0) return false;
  return true;
}

}  // namespace

IntMatrix exponent_matrix(std::size_t n_symbols, const std::vector<FlatWord>& relators) {
  IntMatrix e(relators.size(), n_symbols);
  for (std::size_t r = 0; r < relators.size(); ++r)
    for (const FlatLetter& l : relators[r]) {
      if (l.sym >= n_symbols) fail(errc::unknown_symbol, "exponent_matrix: symbol out of range");
      e.at(r, l.sym) += l.exp;
    }
  return e;
}

AbelianInvariants abelianization(std::size_t n_symbols, const std::vector<FlatWord>& relators) {
  SmithForm sf = smith_normal_form(exponent_matrix(n_symbols, relators));
  AbelianInvariants out;
  for (const Int& d : sf.diag)
    if (d > 1) out.factors.push_back(d);
  out.free_rank = n_symbols - sf.rank;
  return out;
}

IntMatrix boundary1(const PermGroup& G, const std::vector<Permutation>& images) {
  const auto& elems = G.enumerate_elements();
  if (elems.empty() || !elems[0].is_identity())
    fail(errc::internal, "boundary1: element enumeration must start at the identity");
  for (const Permutation& p : images)
    if (p.degree() != G.degree()) fail(errc::degree_mismatch, "boundary1: image degree mismatch");
  const std::size_t n = elems.size(), s = images.size();
  ElementIndex idx(elems);
  IntMatrix b(n, n * s);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t t = 0; t < s; ++t) {
      const std::size_t to = idx.of(compose(elems[g], images[t]));
      b.at(to, g * s + t) += 1;
      b.at(g, g * s + t) -= 1;
    }
  return b;
}

std::vector<Int> relator_cycle(const PermGroup& G, const std::vector<Permutation>& images,
                               const FlatWord& relator) {
  const auto& elems = G.enumerate_elements();
  const std::size_t s = images.size();
  ElementIndex idx(elems);
  std::vector<Int> vec(elems.size() * s);
  Permutation cur = Permutation::identity(G.degree());
  std::size_t curi = 0;
  for (const FlatLetter& l : relator) {
    if (l.sym >= s) fail(errc::unknown_symbol, "relator_cycle: symbol out of range");
    if (l.exp == 0) fail(errc::invalid_input, "relator_cycle: zero exponent");
    const int steps = l.exp > 0 ? l.exp : -l.exp;
    for (int i = 0; i < steps; ++i) {
      if (l.exp > 0) {
        vec[curi * s + l.sym] += 1;
        cur = compose(cur, images[l.sym]);
        curi = idx.of(cur);
      } else {
        cur = compose(cur, inverse(images[l.sym]));
        curi = idx.of(cur);
        vec[curi * s + l.sym] -= 1;
      }
    }
  }
  if (curi != 0) fail(errc::invalid_input, "relator_cycle: word does not hold in the group");
  return vec;
}

RelationModuleCoinv relation_module_coinvariants(const PermGroup& G,
                                                 const std::vector<Permutation>& images,
                                                 const HomologyOptions& opts) {
  const std::size_t n = G.order(), s = images.size();
  if (n > opts.max_group) fail(errc::cap_exceeded, "group order exceeds the homology cap");
  if (s > opts.max_symbols) fail(errc::cap_exceeded, "symbol count exceeds the homology cap");

  RelationModuleCoinv rmc;
  IntMatrix b1 = boundary1(G, images);
  rmc.snf1 = smith_normal_form(b1, true);
  rmc.k = n * s - rmc.snf1.rank;
  if (rmc.k > opts.max_kernel_rank) fail(errc::cap_exceeded, "kernel rank exceeds the homology cap");
  rmc.kernel = kernel_basis(b1, rmc.snf1);
  rmc.kernel_rows = IntMatrix(rmc.k, n * s);
  for (std::size_t i = 0; i < rmc.k; ++i)
    for (std::size_t j = 0; j < n * s; ++j)
      rmc.kernel_rows.at(i, j) = rmc.snf1.vinv.at(rmc.snf1.rank + i, j);

  const auto& elems = G.enumerate_elements();
  ElementIndex idx(elems);
  for (std::size_t t = 0; t < s; ++t) {
    std::vector<std::size_t> pi(n * s);
    for (std::size_t g = 0; g < n; ++g) {
      const std::size_t hg = idx.of(compose(images[t], elems[g]));
      for (std::size_t u = 0; u < s; ++u) pi[g * s + u] = hg * s + u;
    }
    rmc.gen_action.push_back(permuted_kernel_matrix(rmc.kernel, rmc.kernel_rows, pi));
  }

  rmc.coinv = RowLattice(rmc.k);
  for (std::size_t t = 0; t < s; ++t)
    for (std::size_t j = 0; j < rmc.k; ++j) {
      std::vector<Int> row = rmc.gen_action[t].col(j);
      row[j] -= 1;
      rmc.coinv.add(std::move(row));
    }
  // Saturate under the generator action. A single generator pass already
  // spans the whole coinvariant lattice, so this settles immediately; the
  // loop is the stated contract, not a hot path.
  for (;;) {
    bool grew = false;
    for (const auto& row : rmc.coinv.canonical_rows())
      for (std::size_t t = 0; t < s; ++t)
        grew = rmc.coinv.add(matvec(rmc.gen_action[t], row)) || grew;
    if (!grew) break;
  }
  return rmc;
}

std::vector<Int> kernel_coords(const RelationModuleCoinv& rmc, const std::vector<Int>& ambient) {
  return kernel_coordinates(rmc.snf1, ambient);
}

IntMatrix phi_matrix(const RelationModuleCoinv& rmc, std::size_t n_symbols) {
  const std::size_t rows = rmc.kernel.rows();
  if (n_symbols == 0 || rows % n_symbols != 0)
    fail(errc::internal, "phi_matrix: basis size is not a multiple of the symbol count");
  IntMatrix phi(n_symbols, rmc.k);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rmc.k; ++j) phi.at(i % n_symbols, j) += rmc.kernel.at(i, j);
  return phi;
}

H2Result h2(const RelationModuleCoinv& rmc, std::size_t n_symbols) {
  H2Result h;
  IntMatrix phi = phi_matrix(rmc, n_symbols);
  h.snf_phi = smith_normal_form(phi, true);
  const std::size_t w = rmc.k - h.snf_phi.rank;
  h.w_basis = kernel_basis(phi, h.snf_phi);

  const auto lrows = rmc.coinv.canonical_rows();
  IntMatrix relwt(w, lrows.size());
  for (std::size_t j = 0; j < lrows.size(); ++j) {
    const std::vector<Int> y = kernel_coordinates(h.snf_phi, lrows[j]);
    for (std::size_t i = 0; i < w; ++i) relwt.at(i, j) = y[i];
  }
  h.snf_rel = smith_normal_form(relwt, true);
  if (h.snf_rel.rank < w)
    fail(errc::internal, "second homology of a finite group must be finite");

  for (std::size_t i = 0; i < h.snf_rel.rank; ++i)
    if (h.snf_rel.diag[i] > 1) {
      h.kept.push_back(i);
      h.factors.push_back(h.snf_rel.diag[i]);
    }
  for (std::size_t t = 0; t < h.kept.size(); ++t) {
    std::vector<Int> wv = h.snf_rel.uinv.col(h.kept[t]);
    std::vector<Int> kc = matvec(h.w_basis, wv);
    h.reps_ambient.push_back(matvec(rmc.kernel, kc));
    h.reps_k.push_back(std::move(kc));
  }
  // Round-trip: each representative must read back as its own unit vector.
  for (std::size_t t = 0; t < h.kept.size(); ++t) {
    const std::vector<Int> z = h2_coords(h, h.reps_k[t]);
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] != (i == t ? 1 : 0))
        fail(errc::internal, "h2: representative round-trip failed");
  }
  return h;
}

std::vector<Int> h2_coords(const H2Result& h, const std::vector<Int>& kcoords) {
  const std::vector<Int> y = kernel_coordinates(h.snf_phi, kcoords);
  std::vector<Int> z(h.kept.size());
  for (std::size_t t = 0; t < h.kept.size(); ++t) {
    Int acc = 0;
    for (std::size_t j = 0; j < y.size(); ++j) acc += h.snf_rel.u.at(h.kept[t], j) * y[j];
    z[t] = floormod(acc, h.factors[t]);
  }
  return z;
}

std::vector<std::size_t> induced_automorphism(const PermGroup& G,
                                              const std::vector<Permutation>& images,
                                              const std::vector<uint32_t>& symbol_map) {
  const auto& elems = G.enumerate_elements();
  const std::size_t n = elems.size(), s = images.size();
  if (symbol_map.size() != s)
    fail(errc::invalid_input, "induced_automorphism: symbol map size mismatch");
  for (uint32_t t : symbol_map)
    if (t >= s) fail(errc::unknown_symbol, "induced_automorphism: symbol map out of range");
  if (n == 0 || !elems[0].is_identity())
    fail(errc::internal, "induced_automorphism: enumeration must start at the identity");
  ElementIndex idx(elems);

  std::vector<std::size_t> alpha(n, npos);
  alpha[0] = 0;
  // BFS enumeration lists every element after one of its parents, so a single
  // ordered sweep both fills the table and checks every (element, generator)
  // product for consistency.
  for (std::size_t e = 0; e < n; ++e) {
    if (alpha[e] == npos) fail(errc::internal, "induced_automorphism: enumeration order broken");
    for (std::size_t t = 0; t < s; ++t) {
      const std::size_t f = idx.of(compose(elems[e], images[t]));
      const std::size_t cand = idx.of(compose(elems[alpha[e]], images[symbol_map[t]]));
      if (alpha[f] == npos)
        alpha[f] = cand;
      else if (alpha[f] != cand)
        fail(errc::action_not_well_defined,
             "symbol map does not induce a well-defined group automorphism");
    }
  }
  std::vector<char> seen(n, 0);
  for (std::size_t v : alpha) {
    if (v == npos || seen[v])
      fail(errc::action_not_well_defined, "induced map on the group is not a bijection");
    seen[v] = 1;
  }
  return alpha;
}

IntMatrix gamma_element_k_matrix(const EquivariantPresentation& ep, const Realization& real,
                                 const RelationModuleCoinv& rmc, std::size_t gamma_elem) {
  const ActionContext& ctx = ep.ctx;
  const std::size_t s = ctx.symbol_count();
  const auto syms = ctx.symbols();
  std::vector<uint32_t> symbol_map(s);
  for (std::size_t t = 0; t < s; ++t)
    symbol_map[t] =
        static_cast<uint32_t>(ctx.symbol_linear_index(ctx.act_symbol(gamma_elem, syms[t])));
  const std::vector<std::size_t> alpha =
      induced_automorphism(real.group, real.images, symbol_map);
  const std::size_t n = real.group.order();
  std::vector<std::size_t> pi(n * s);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t t = 0; t < s; ++t) pi[g * s + t] = alpha[g] * s + symbol_map[t];
  return permuted_kernel_matrix(rmc.kernel, rmc.kernel_rows, pi);
}

GammaH2Action gamma_action_on_h2(const EquivariantPresentation& ep, const Realization& real,
                                 const RelationModuleCoinv& rmc, const H2Result& h) {
  const ActionContext& ctx = ep.ctx;
  const std::size_t s = ctx.symbol_count();
  const auto syms = ctx.symbols();
  const IntMatrix phi = phi_matrix(rmc, s);
  const auto lrows = rmc.coinv.canonical_rows();
  const std::size_t hsz = h.factors.size();
  const auto& gelems = ctx.gamma().enumerate_elements();

  GammaH2Action out;
  auto h2_matrix_of = [&](std::size_t elem) {
    IntMatrix tk = gamma_element_k_matrix(ep, real, rmc, elem);
    for (const auto& row : lrows)
      if (!rmc.coinv.contains(matvec(tk, row)))
        fail(errc::action_not_well_defined,
             "gamma action does not preserve the coinvariant relations");
    // Column-sum map must intertwine with the symbol permutation.
    IntMatrix lhs = matmul(phi, tk);
    IntMatrix rhs(s, rmc.k);
    for (std::size_t t = 0; t < s; ++t) {
      const std::size_t tt = ctx.symbol_linear_index(ctx.act_symbol(elem, syms[t]));
      for (std::size_t j = 0; j < rmc.k; ++j) rhs.at(tt, j) = phi.at(t, j);
    }
    if (lhs != rhs)
      fail(errc::action_not_well_defined, "gamma action does not intertwine the symbol sums");
    IntMatrix m(hsz, hsz);
    for (std::size_t j = 0; j < hsz; ++j) {
      const std::vector<Int> z = h2_coords(h, matvec(tk, h.reps_k[j]));
      for (std::size_t i = 0; i < hsz; ++i) m.at(i, j) = z[i];
    }
    return std::pair(std::move(m), std::move(tk));
  };

  const IntMatrix ident = reduce_mod_factors(IntMatrix::identity(hsz), h.factors);
  for (const auto& [name, perm] : ctx.gamma().generators()) {
    const std::size_t elem = ctx.gamma_element_of({{name, 1}});
    auto [m, tk] = h2_matrix_of(elem);
    const std::size_t inv_elem = ctx.gamma().element_index(inverse(gelems[elem]));
    auto [mi, tki] = h2_matrix_of(inv_elem);
    if (reduce_mod_factors(matmul(m, mi), h.factors) != ident ||
        reduce_mod_factors(matmul(mi, m), h.factors) != ident)
      fail(errc::action_not_well_defined, "gamma generator is not invertible on second homology");
    out.gen_names.push_back(name);
    out.matrices.push_back(std::move(m));
    out.k_matrices.push_back(std::move(tk));
  }
  return out;
}

std::vector<IntMatrix> gamma_element_matrices(const PermGroup& gamma,
                                              const GammaH2Action& action,
                                              const std::vector<Int>& factors) {
  const auto& elems = gamma.enumerate_elements();
  const std::size_t n = elems.size(), hsz = factors.size();
  ElementIndex idx(elems);
  std::vector<IntMatrix> m(n);
  std::vector<char> done(n, 0);
  m[0] = reduce_mod_factors(IntMatrix::identity(hsz), factors);
  done[0] = 1;
  std::vector<std::size_t> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t e = queue[head];
    for (std::size_t gi = 0; gi < action.matrices.size(); ++gi) {
      const std::size_t f = idx.of(compose(elems[e], gamma.generators()[gi].second));
      if (done[f]) continue;
      m[f] = reduce_mod_factors(matmul(m[e], action.matrices[gi]), factors);
      done[f] = 1;
      queue.push_back(f);
    }
  }
  for (char d : done)
    if (!d) fail(errc::internal, "gamma_element_matrices: enumeration not reached by generators");
  return m;
}

GenerationResult gamma_generation_rank(const std::vector<Int>& factors,
                                       const std::vector<IntMatrix>& element_matrices) {
  const std::size_t hsz = factors.size();
  GenerationResult out;
  if (hsz == 0) return out;

  auto generates = [&](const std::vector<std::vector<Int>>& classes) {
    RowLattice span(hsz);
    for (std::size_t i = 0; i < hsz; ++i) {
      std::vector<Int> row(hsz);
      row[i] = factors[i];
      span.add(std::move(row));
    }
    for (const auto& v : classes)
      for (const IntMatrix& m : element_matrices) span.add(matvec(m, v));
    return span.is_full();
  };

  // The greedy over basis vectors is only an upper bound: whether a single
  // orbit spans depends on which coset representatives the Smith basis
  // happened to pick. Search module elements exhaustively while the module
  // and the subset count stay small, falling back to the greedy beyond that.
  Int size = 1;
  for (const Int& f : factors) size *= f;
  if (size <= 1024) {
    const std::size_t total = size.convert_to<std::size_t>();
    std::vector<std::vector<Int>> pool;
    for (std::size_t t = 1; t < total; ++t) {
      std::vector<Int> v(hsz);
      std::size_t rem = t;
      for (std::size_t j = hsz; j-- > 0;) {
        v[j] = rem % factors[j].convert_to<std::size_t>();
        rem /= factors[j].convert_to<std::size_t>();
      }
      pool.push_back(std::move(v));
    }
    std::size_t budget = 200000;
    for (std::size_t k = 1; k <= hsz; ++k) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      for (;;) {
        if (budget-- == 0) goto fallback;
        std::vector<std::vector<Int>> classes;
        for (std::size_t i : idx) classes.push_back(pool[i]);
        if (generates(classes)) {
          out.rank = k;
          out.chosen = std::move(classes);
          return out;
        }
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    fail(errc::internal, "generation search exhausted without finding a generating set");
  }

fallback:
  out.exact = false;
  RowLattice span(hsz);
  for (std::size_t i = 0; i < hsz; ++i) {
    std::vector<Int> row(hsz);
    row[i] = factors[i];
    span.add(std::move(row));
  }
  for (std::size_t j = 0; j < hsz; ++j) {
    std::vector<Int> unit(hsz);
    unit[j] = 1;
    if (span.contains(unit)) continue;
    for (const IntMatrix& m : element_matrices) span.add(m.col(j));
    out.chosen.emplace_back(std::move(unit));
  }
  out.rank = out.chosen.size();
  return out;
}

namespace {

struct Pipeline {
  Realization real;
  ExpandedPresentation expanded;
  std::vector<FlatWord> flat;
  RelationModuleCoinv rmc;
  H2Result h;
};

Pipeline run_pipeline(const EquivariantPresentation& ep, const HomologyOptions& opts) {
  Pipeline p{realize(ep, opts.max_cosets), expand_R(ep), {}, {}, {}};
  for (const Word& w : p.expanded.relators) p.flat.push_back(flatten(ep.ctx, w));
  p.rmc = relation_module_coinvariants(p.real.group, p.real.images, opts);
  p.h = h2(p.rmc, ep.ctx.symbol_count());
  return p;
}

FiveTermDiagnostics five_term_diagnostics(const EquivariantPresentation& ep, const Pipeline& p) {
  const ActionContext& ctx = ep.ctx;
  const std::size_t s = ctx.symbol_count();
  const IntMatrix phi = phi_matrix(p.rmc, s);
  FiveTermDiagnostics diag;

  {
    bool ok = true;
    std::string detail;
    if (!is_zero(matmul(phi, p.h.w_basis))) {
      ok = false;
      detail = "phi does not vanish on its computed kernel";
    }
    for (const auto& row : p.rmc.coinv.canonical_rows()) {
      const std::vector<Int> y = kernel_coordinates(p.h.snf_phi, row);
      if (matvec(p.h.w_basis, y) != row) {
        ok = false;
        detail = "a coinvariant relation does not lie in the kernel of phi";
        break;
      }
    }
    for (std::size_t t = 0; ok && t < p.h.reps_k.size(); ++t) {
      const std::vector<Int> img = matvec(phi, p.h.reps_k[t]);
      for (const Int& v : img)
        if (v != 0) {
          ok = false;
          detail = "a second homology representative is not a cycle under phi";
        }
    }
    diag.checks.push_back({"kernel_exactness", ok, detail});
  }

  {
    RowLattice image(s);
    for (std::size_t j = 0; j < p.rmc.k; ++j) image.add(phi.col(j));
    RowLattice expo(s);
    const IntMatrix e = exponent_matrix(s, p.flat);
    for (std::size_t r = 0; r < e.rows(); ++r) expo.add(e.row(r));
    const bool ok = lattices_equal(image, expo);
    diag.checks.push_back({"image_matches_relator_lattice", ok,
                           ok ? "" : "image of phi differs from the relator exponent lattice"});
  }

  {
    RowLattice image(s);
    for (std::size_t j = 0; j < p.rmc.k; ++j) image.add(phi.col(j));
    const QuotientStructure viaphi = quotient_structure(image.canonical_rows(), s);
    const AbelianInvariants ab = abelianization(s, p.flat);
    const bool ok = viaphi.invariant_factors == ab.factors && viaphi.free_rank == ab.free_rank;
    diag.checks.push_back({"h1_two_routes", ok,
                           ok ? "" : "cokernel of phi disagrees with the abelianization"});
  }

  {
    RowLattice lat(p.rmc.k);
    for (const auto& row : p.rmc.coinv.canonical_rows()) lat.add(row);
    for (const FlatWord& fw : p.flat)
      lat.add(kernel_coordinates(p.rmc.snf1, relator_cycle(p.real.group, p.real.images, fw)));
    const bool ok = lat.is_full();
    diag.checks.push_back({"relator_classes_span", ok,
                           ok ? "" : "expanded relator classes do not span the relation module"});
  }

  {
    std::vector<Word> seeds = ep.r0;
    if (ep.weak)
      for (const ConjRelator& cr : conj_relators(ep)) seeds.push_back(cr.word);
    RowLattice lat(p.rmc.k);
    for (const auto& row : p.rmc.coinv.canonical_rows()) lat.add(row);
    for (std::size_t e = 0; e < ctx.gamma_order(); ++e)
      for (const Word& seed : seeds) {
        const FlatWord fw = flatten(ctx, ctx.act_word(e, seed));
        if (fw.empty()) continue;
        lat.add(kernel_coordinates(p.rmc.snf1, relator_cycle(p.real.group, p.real.images, fw)));
      }
    const bool ok = lat.is_full();
    diag.checks.push_back({"orbit_classes_span", ok,
                           ok ? "" : "gamma orbit of the base relator classes does not span"});
  }

  {
    bool ok = true;
    std::string detail;
    const auto& gelems = ctx.gamma().enumerate_elements();
    std::size_t total = 0;
    for (std::size_t o = 0; o < ctx.orbit_count(); ++o) {
      total += ctx.orbit_size(o);
      if (!ctx.orbit_transitive(o)) {
        ok = false;
        detail = "orbit " + ctx.orbit_name(o) + " is not transitive";
        continue;
      }
      std::vector<Permutation> stab;
      for (std::size_t e : ctx.stabilizer_elements(o, ctx.orbit_base(o)))
        stab.push_back(gelems[e]);
      const std::size_t sord = subgroup_order(ctx.gamma().degree(), stab, ctx.gamma_order());
      if (sord == 0 || ctx.gamma_order() % sord != 0 ||
          ctx.gamma_order() / sord != ctx.orbit_size(o)) {
        ok = false;
        detail = "orbit " + ctx.orbit_name(o) + " violates the orbit-stabilizer identity";
      }
    }
    if (total != s) {
      ok = false;
      detail = "orbit sizes do not sum to the symbol count";
    }
    diag.checks.push_back({"orbit_stabilizer", ok, detail});
  }

  return diag;
}

}  // namespace

FiveTermDiagnostics five_term_check(const EquivariantPresentation& ep,
                                    const HomologyOptions& opts) {
  const Pipeline p = run_pipeline(ep, opts);
  return five_term_diagnostics(ep, p);
}

HomologyReport homology_report(const EquivariantPresentation& ep, const HomologyOptions& opts) {
  const Pipeline p = run_pipeline(ep, opts);
  HomologyReport rep;
  rep.group_order = p.real.group.order();
  rep.h1 = abelianization(ep.ctx.symbol_count(), p.flat);
  rep.h2_factors = p.h.factors;
  rep.h2_representatives = p.h.reps_ambient;
  rep.action = gamma_action_on_h2(ep, p.real, p.rmc, p.h);
  const std::vector<IntMatrix> elem_mats =
      gamma_element_matrices(ep.ctx.gamma(), rep.action, p.h.factors);
  rep.generation = gamma_generation_rank(p.h.factors, elem_mats);
  rep.diagnostics = five_term_diagnostics(ep, p);
  return rep;
}

// ---------------------------------------------------------------------------
// Bar resolution oracle.

namespace {

uint64_t submod(uint64_t x, uint64_t y, uint64_t m) { return (x + m - y % m) % m; }
uint64_t mulmod(uint64_t x, uint64_t y, uint64_t m) { return (x * y) % m; }

uint64_t to_u64_mod(const Int& v, uint64_t m) {
  Int r = v % Int(m);
  if (r < 0) r += m;
  return r.convert_to<uint64_t>();
}

int valuation(uint64_t x, uint64_t p) {
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

uint64_t modinv(uint64_t u, uint64_t m) {
  int64_t a = static_cast<int64_t>(u % m), b = static_cast<int64_t>(m), x0 = 1, x1 = 0;
  while (b != 0) {
    const int64_t q = a / b;
    a -= q * b;
    std::swap(a, b);
    x0 -= q * x1;
    std::swap(x0, x1);
  }
  if (a != 1) fail(errc::internal, "modinv: argument is not a unit");
  x0 %= static_cast<int64_t>(m);
  if (x0 < 0) x0 += static_cast<int64_t>(m);
  return static_cast<uint64_t>(x0);
}

// Incremental row echelon over Z/p^a with minimal-valuation pivots. Pivot
// rows are normalized so the pivot entry is exactly p^v.
struct ModEchelon {
  uint64_t p, pa;
  std::size_t ncols;
  std::vector<std::vector<uint64_t>> rows;  // indexed by pivot column; empty = none
  std::size_t npivots = 0;

  ModEchelon(uint64_t p_, uint64_t pa_, std::size_t ncols_)
      : p(p_), pa(pa_), ncols(ncols_), rows(ncols_) {}

  void normalize(std::vector<uint64_t>& r, std::size_t c) const {
    uint64_t x = r[c];
    uint64_t pv = 1;
    while (x % p == 0) {
      x /= p;
      pv *= p;
    }
    const uint64_t ui = modinv(x, pa);
    for (uint64_t& e : r) e = mulmod(e, ui, pa);
  }

  void insert(std::vector<uint64_t> r) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (r[c] % pa == 0) {
        r[c] = 0;
        continue;
      }
      if (rows[c].empty()) {
        normalize(r, c);
        rows[c] = std::move(r);
        ++npivots;
        return;
      }
      const int vp = valuation(rows[c][c], p), vr = valuation(r[c], p);
      if (vr < vp) {
        normalize(r, c);
        std::swap(r, rows[c]);
      }
      const uint64_t q = r[c] / rows[c][c];
      for (std::size_t j = c; j < ncols; ++j) r[j] = submod(r[j], mulmod(q, rows[c][j], pa), pa);
    }
  }
};

// Diagonal valuations of the Smith form over Z/p^a.
std::vector<int> smith_mod(std::vector<std::vector<uint64_t>> mat, uint64_t p, uint64_t pa) {
  std::vector<int> vals;
  const std::size_t r = mat.size(), c = r == 0 ? 0 : mat[0].size();
  for (std::size_t t = 0; t < r && t < c; ++t) {
    std::size_t bi = npos, bj = npos;
    int bestv = -1;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j)
        if (mat[i][j] != 0) {
          const int v = valuation(mat[i][j], p);
          if (bestv < 0 || v < bestv) {
            bestv = v;
            bi = i;
            bj = j;
          }
        }
    if (bestv < 0) break;
    std::swap(mat[t], mat[bi]);
    for (std::size_t i = 0; i < r; ++i) std::swap(mat[i][t], mat[i][bj]);
    uint64_t pv = 1;
    for (int i = 0; i < bestv; ++i) pv *= p;
    const uint64_t ui = modinv(mat[t][t] / pv, pa);
    for (std::size_t j = t; j < c; ++j) mat[t][j] = mulmod(mat[t][j], ui, pa);
    for (std::size_t i = t + 1; i < r; ++i) {
      if (mat[i][t] == 0) continue;
      const uint64_t q = mat[i][t] / pv;
      for (std::size_t j = t; j < c; ++j)
        mat[i][j] = submod(mat[i][j], mulmod(q, mat[t][j], pa), pa);
    }
    // Row t's remaining entries clear by column operations that touch no
    // other row, since column t is zero below the pivot.
    for (std::size_t j = t + 1; j < c; ++j) mat[t][j] = 0;
    vals.push_back(bestv);
  }
  return vals;
}

std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
  std::vector<std::pair<uint64_t, int>> out;
  for (uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      int a = 0;
      while (n % p == 0) {
        n /= p;
        ++a;
      }
      out.emplace_back(p, a);
    }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

uint64_t next_prime_above(uint64_t n) {
  for (uint64_t c = n + 1;; ++c) {
    bool prime = c > 1;
    for (uint64_t d = 2; d * d <= c; ++d)
      if (c % d == 0) {
        prime = false;
        break;
      }
    if (prime) return c;
  }
}

}  // namespace

std::vector<Int> bar_h2_oracle(const PermGroup& G, std::size_t max_order) {
  const std::size_t n = G.order();
  if (n > max_order) fail(errc::cap_exceeded, "group order exceeds the bar oracle cap");
  if (n <= 1) return {};
  const auto& elems = G.enumerate_elements();
  if (!elems[0].is_identity())
    fail(errc::internal, "bar_h2_oracle: enumeration must start at the identity");
  ElementIndex idx(elems);
  const std::size_t m = n - 1;

  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = idx.of(compose(elems[a], elems[b]));

  // Normalized boundary C2 -> C1: [g|h] -> [h] - [gh] + [g], identity bars
  // dropped.
  IntMatrix d2(m, m * m);
  for (std::size_t g = 1; g < n; ++g)
    for (std::size_t h = 1; h < n; ++h) {
      const std::size_t c = (g - 1) * m + (h - 1);
      d2.at(h - 1, c) += 1;
      d2.at(g - 1, c) += 1;
      const std::size_t gh = mul[g][h];
      if (gh != 0) d2.at(gh - 1, c) -= 1;
    }
  const SmithForm snf2 = smith_normal_form(d2, true);
  if (snf2.rank < m)
    fail(errc::internal, "bar_h2_oracle: abelianization of a finite group must be finite");
  std::vector<Int> h1_factors;
  for (const Int& d : snf2.diag)
    if (d > 1) h1_factors.push_back(d);
  const std::size_t k2 = m * m - snf2.rank;
  if (k2 == 0) return {};

  // Sparse columns of C3 -> C2 over nontrivial triples, visited in a fixed
  // order; fn receives (ambient column, exact kernel coordinates).
  auto for_each_image = [&](bool want_coords, auto&& fn) {
    std::vector<std::pair<std::size_t, int>> col;
    for (std::size_t g = 1; g < n; ++g)
      for (std::size_t h = 1; h < n; ++h)
        for (std::size_t k = 1; k < n; ++k) {
          col.clear();
          col.emplace_back((h - 1) * m + (k - 1), 1);
          const std::size_t gh = mul[g][h];
          if (gh != 0) col.emplace_back((gh - 1) * m + (k - 1), -1);
          const std::size_t hk = mul[h][k];
          if (hk != 0) col.emplace_back((g - 1) * m + (hk - 1), 1);
          col.emplace_back((g - 1) * m + (h - 1), -1);
          std::vector<Int> coords;
          if (want_coords) {
            coords.assign(k2, 0);
            for (std::size_t i = 0; i < k2; ++i) {
              Int acc = 0;
              for (const auto& [row, val] : col) acc += snf2.vinv.at(snf2.rank + i, row) * val;
              coords[i] = acc;
            }
          }
          fn(col, coords);
        }
  };

  // The image lattice must have full rank in the kernel (the quotient is
  // finite); checked over a prime not dividing |G|, where in-kernel exactness
  // is also verified once.
  const uint64_t p0 = next_prime_above(std::max<uint64_t>(n, 2));
  {
    ModEchelon ech(p0, p0, k2);
    for_each_image(true, [&](const auto& col, const std::vector<Int>& coords) {
      for (std::size_t i = 0; i < snf2.rank; ++i) {
        Int acc = 0;
        for (const auto& [row, val] : col) acc += snf2.vinv.at(i, row) * val;
        if (acc != 0)
          fail(errc::internal, "bar_h2_oracle: boundary image escapes the cycle lattice");
      }
      std::vector<uint64_t> r(k2);
      for (std::size_t i = 0; i < k2; ++i) r[i] = to_u64_mod(coords[i], p0);
      ech.insert(std::move(r));
    });
    if (ech.npivots != k2)
      fail(errc::internal, "bar_h2_oracle: image lattice is not full rank in the cycle lattice");
  }

  // Homology of a finite group is annihilated by its order, so the quotient
  // splits into p-parts computable modulo p^v_p(|G|).
  std::vector<std::vector<Int>> per_prime;
  for (const auto& [p, a] : factorize(n)) {
    uint64_t pa = 1;
    for (int i = 0; i < a; ++i) pa *= p;
    ModEchelon ech(p, pa, k2);
    for_each_image(true, [&](const auto&, const std::vector<Int>& coords) {
      std::vector<uint64_t> r(k2);
      for (std::size_t i = 0; i < k2; ++i) r[i] = to_u64_mod(coords[i], pa);
      ech.insert(std::move(r));
    });
    std::vector<std::vector<uint64_t>> pivot_rows;
    for (auto& r : ech.rows)
      if (!r.empty()) pivot_rows.push_back(std::move(r));
    const std::vector<int> vals = smith_mod(std::move(pivot_rows), p, pa);
    std::vector<Int> factors;
    for (int v : vals)
      if (v > 0) {
        Int f = 1;
        for (int i = 0; i < v; ++i) f *= p;
        factors.push_back(f);
      }
    for (std::size_t i = vals.size(); i < k2; ++i) factors.push_back(Int(pa));
    std::sort(factors.begin(), factors.end(), std::greater<Int>());
    per_prime.push_back(std::move(factors));

    // Mod-p dimension must match the universal-coefficients prediction from
    // the integral answer.
    std::size_t rank2p = 0;
    {
      ModEchelon e2(p, p, m);
      for (std::size_t c = 0; c < m * m; ++c) {
        std::vector<uint64_t> r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = to_u64_mod(d2.at(i, c), p);
        e2.insert(std::move(r));
      }
      rank2p = e2.npivots;
    }
    std::size_t rank3p = 0;
    {
      ModEchelon e3(p, p, m * m);
      for_each_image(false, [&](const auto& col, const auto&) {
        std::vector<uint64_t> r(m * m, 0);
        for (const auto& [row, val] : col) {
          if (val > 0)
            r[row] = (r[row] + static_cast<uint64_t>(val)) % p;
          else
            r[row] = submod(r[row], static_cast<uint64_t>(-val), p);
        }
        e3.insert(std::move(r));
      });
      rank3p = e3.npivots;
    }
    const std::size_t dim_h2p = (m * m - rank2p) - rank3p;
    std::size_t predicted = 0;
    for (const auto& f : per_prime.back())
      if (f % p == 0) ++predicted;
    for (const Int& f : h1_factors)
      if (f % p == 0) ++predicted;
    if (dim_h2p != predicted)
      fail(errc::internal, "bar_h2_oracle: mod-p dimension cross-check failed");
  }

  std::size_t chain_len = 0;
  for (const auto& f : per_prime) chain_len = std::max(chain_len, f.size());
  std::vector<Int> out;
  for (std::size_t i = 0; i < chain_len; ++i) {
    Int d = 1;
    for (const auto& f : per_prime)
      if (i < f.size()) d *= f[i];
    out.push_back(d);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace eqp
