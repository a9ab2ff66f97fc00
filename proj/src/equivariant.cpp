#include "equivariant.hpp"

#include <set>
#include <sstream>

namespace eqp {

std::string symbol_name(const ActionContext& ctx, SymbolRef s) {
  return ctx.orbit_name(s.orbit) + "." + std::to_string(s.point);
}

FlatWord flatten(const ActionContext& ctx, const Word& w) {
  FlatWord out;
  out.reserve(w.size());
  for (const Letter& l : w.letters())
    out.push_back(FlatLetter{static_cast<uint32_t>(ctx.symbol_linear_index(l.sym)), l.exp});
  return out;
}

ExpandedPresentation expand_R(const EquivariantPresentation& ep) {
  ExpandedPresentation out;
  std::set<Word> seen;
  const std::size_t order = ep.ctx.gamma_order();
  for (std::size_t e = 0; e < order; ++e) {
    for (std::size_t i = 0; i < ep.r0.size(); ++i) {
      Word w = ep.ctx.act_word(e, ep.r0[i]);
      if (!seen.insert(w).second) continue;
      RelatorOrigin origin;
      origin.kind = RelatorOrigin::Kind::orbit;
      origin.gamma_elem = e;
      origin.r0_index = i;
      out.relators.push_back(std::move(w));
      out.origins.push_back(origin);
    }
  }
  if (ep.weak) {
    for (const ConjRelator& c : conj_relators(ep)) {
      if (!seen.insert(c.word).second) continue;
      RelatorOrigin origin;
      origin.kind = RelatorOrigin::Kind::conj;
      origin.s = c.s;
      origin.t = c.t;
      out.relators.push_back(c.word);
      out.origins.push_back(origin);
    }
  }
  return out;
}

std::vector<ConjRelator> conj_relators(const EquivariantPresentation& ep) {
  if (!ep.weak) fail(errc::mode_mismatch, "conjugation relations exist only in weak mode");
  std::vector<ConjRelator> out;
  const std::vector<SymbolRef> syms = ep.ctx.symbols();
  for (SymbolRef s : syms) {
    std::size_t g = ep.ctx.iota_element(s.orbit, s.point);
    for (SymbolRef t : syms) {
      SymbolRef ts = ep.ctx.act_symbol(g, t);
      Word w(RawWord{Letter{s, 1}, Letter{t, 1}, Letter{s, -1}, Letter{ts, -1}});
      if (w.empty()) continue;
      out.push_back(ConjRelator{s, t, std::move(w)});
    }
  }
  return out;
}

Realization realize(const EquivariantPresentation& ep, std::size_t max_cosets) {
  ExpandedPresentation ex = expand_R(ep);
  std::vector<FlatWord> flat;
  flat.reserve(ex.relators.size());
  for (const Word& w : ex.relators) flat.push_back(flatten(ep.ctx, w));
  ToddCoxeterResult tc = todd_coxeter(ep.ctx.symbol_count(), flat, max_cosets);
  std::vector<Permutation> images = regular_realization(tc.table);
  const std::vector<SymbolRef> syms = ep.ctx.symbols();
  std::vector<std::pair<std::string, Permutation>> gens;
  gens.reserve(syms.size());
  for (std::size_t i = 0; i < syms.size(); ++i)
    gens.emplace_back(symbol_name(ep.ctx, syms[i]), images[i]);
  const std::size_t n = tc.table.cosets();
  PermGroup group(static_cast<uint32_t>(n), std::move(gens), n);
  return Realization{std::move(tc.table), std::move(images), std::move(group)};
}

namespace {

// The subgroup of gamma generated by the extended iota images, as element
// permutations. Weak mode helper for the normality and agreement checks.
std::vector<Permutation> iota_images(const EquivariantPresentation& ep) {
  const std::vector<Permutation>& elems = ep.ctx.gamma().enumerate_elements();
  std::vector<Permutation> out;
  for (SymbolRef s : ep.ctx.symbols())
    out.push_back(elems[ep.ctx.iota_element(s.orbit, s.point)]);
  return out;
}

}  // namespace

ValidationReport validate(const EquivariantPresentation& ep, std::size_t max_cosets) {
  ValidationReport rep;
  auto add = [&](const std::string& name, bool passed, std::string detail = "") {
    rep.checks.push_back(CheckResult{name, passed, std::move(detail)});
  };

  bool transitive = true;
  {
    std::string bad;
    for (std::size_t o = 0; o < ep.ctx.orbit_count(); ++o) {
      if (!ep.ctx.orbit_transitive(o)) {
        transitive = false;
        if (!bad.empty()) bad += ", ";
        bad += "'" + ep.ctx.orbit_name(o) + "'";
      }
    }
    add("orbit_transitivity", transitive,
        transitive ? "" : "declared orbits are not single orbits: " + bad);
  }

  {
    std::string msg;
    bool ok = ep.ctx.check_action_well_defined(&msg);
    add("action_homomorphism", ok, msg);
  }

  const std::vector<Permutation>& gamma_elems = ep.ctx.gamma().enumerate_elements();

  bool all_iota = true;
  if (ep.weak)
    for (std::size_t o = 0; o < ep.ctx.orbit_count(); ++o)
      if (!ep.ctx.has_iota(o)) all_iota = false;

  if (ep.weak) {
    if (!transitive || !all_iota) {
      add("iota_equivariance", false,
          all_iota ? "skipped: orbits are not transitive" : "an orbit has no iota");
    } else {
      bool ok = true;
      std::string detail;
      for (std::size_t o = 0; o < ep.ctx.orbit_count() && ok; ++o) {
        uint32_t base = ep.ctx.orbit_base(o);
        const Permutation& seed = gamma_elems[ep.ctx.iota_element(o, base)];
        for (std::size_t se : ep.ctx.stabilizer_elements(o, base)) {
          const Permutation& sigma = gamma_elems[se];
          if (compose(compose(sigma, seed), inverse(sigma)) != seed) {
            ok = false;
            detail = "stabilizer of the base symbol of orbit '" + ep.ctx.orbit_name(o) +
                     "' moves its iota image";
            break;
          }
        }
      }
      add("iota_equivariance", ok, detail);
    }

    if (!transitive || !all_iota) {
      add("iota_normality", false, "skipped");
    } else {
      std::vector<Permutation> imgs = iota_images(ep);
      std::vector<Permutation> sub =
          enumerate_closure(ep.ctx.gamma().degree(), imgs, ep.ctx.gamma_order());
      std::set<Permutation> members(sub.begin(), sub.end());
      bool ok = true;
      std::string detail;
      for (const auto& [gname, gperm] : ep.ctx.gamma().generators()) {
        for (const Permutation& h : imgs) {
          if (!members.count(compose(compose(gperm, h), inverse(gperm)))) {
            ok = false;
            detail = "conjugate of an iota image by generator '" + gname +
                     "' leaves the generated subgroup";
            break;
          }
        }
        if (!ok) break;
      }
      add("iota_normality", ok, detail);
    }
  }

  if (ep.weak && (!transitive || !all_iota)) {
    add("realization", false, "skipped: conjugation relations are not computable");
    add("relators_hold", false, "skipped");
    add("generation", false, "skipped");
    add("iota_agreement", false, "skipped");
    return rep;
  }

  Realization real = realize(ep, max_cosets);
  const std::size_t n = real.table.cosets();
  rep.realized_order = n;
  add("realization", true, "order " + std::to_string(n));

  ExpandedPresentation ex = expand_R(ep);
  std::vector<FlatWord> flat;
  for (const Word& w : ex.relators) flat.push_back(flatten(ep.ctx, w));
  add("relators_hold", relators_hold(real.images, static_cast<uint32_t>(n), flat));

  {
    bool ok = false;
    std::string detail;
    // Permutations of n points need n words of memory each; beyond this size
    // fall back to transitivity, which bounds the order from below only.
    const std::size_t closure_limit = 4096;
    if (n <= closure_limit) {
      try {
        ok = real.group.order() == n;
        if (!ok) detail = "symbol images generate a group of a different order";
      } catch (const error& e) {
        detail = e.what();
      }
    } else {
      ok = real.group.orbit(0).size() == n;
      detail = ok ? "transitivity only; order too large for full closure"
                  : "symbol images do not act transitively";
    }
    add("generation", ok, detail);
  }

  if (ep.weak) {
    std::vector<Permutation> imgs = iota_images(ep);
    std::size_t sub_order =
        enumerate_closure(ep.ctx.gamma().degree(), imgs, ep.ctx.gamma_order()).size();
    bool orders = sub_order == n;
    bool rels = relators_hold(imgs, ep.ctx.gamma().degree(), flat);
    std::string detail;
    if (!orders)
      detail = "iota subgroup has order " + std::to_string(sub_order) + ", realization has " +
               std::to_string(n);
    else if (!rels)
      detail = "iota images violate an expanded relator";
    add("iota_agreement", orders && rels, detail);
  }

  return rep;
}

}  // namespace eqp
