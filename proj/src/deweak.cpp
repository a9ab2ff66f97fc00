#include "deweak.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace eqp {

void replay_step(RawWord& w, const TraceStep& st, const std::vector<Word>& r0prime,
                 const ActionContext& ctx) {
  switch (st.kind) {
    case TraceStep::Kind::free_reduce: {
      if (w.size() < 2 || st.pos > w.size() - 2)
        fail(errc::malformed_step, "free reduction position out of range");
      const Letter& a = w[st.pos];
      const Letter& b = w[st.pos + 1];
      if (a.sym != b.sym || a.exp + b.exp != 0)
        fail(errc::malformed_step, "letters at the reduction position are not an inverse pair");
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(st.pos),
              w.begin() + static_cast<std::ptrdiff_t>(st.pos + 2));
      return;
    }
    case TraceStep::Kind::free_expand: {
      if (st.pos > w.size()) fail(errc::malformed_step, "expansion position out of range");
      if (st.letter.exp != 1 && st.letter.exp != -1)
        fail(errc::malformed_step, "expansion letter exponent must be +1 or -1");
      ctx.symbol_linear_index(st.letter.sym);
      const Letter pair[2] = {st.letter, st.letter.inverse()};
      w.insert(w.begin() + static_cast<std::ptrdiff_t>(st.pos), pair, pair + 2);
      return;
    }
    case TraceStep::Kind::apply_relator: {
      if (st.r0p_index >= r0prime.size())
        fail(errc::malformed_step, "relator index out of range");
      if (st.gamma_elem >= ctx.gamma_order())
        fail(errc::malformed_step, "gamma element out of range");
      RawWord r = ctx.act_raw(st.gamma_elem, r0prime[st.r0p_index].letters());
      if (st.forward) {
        if (st.pos > w.size()) fail(errc::malformed_step, "insertion position out of range");
        w.insert(w.begin() + static_cast<std::ptrdiff_t>(st.pos), r.begin(), r.end());
      } else {
        if (st.pos + r.size() > w.size())
          fail(errc::malformed_step, "removal position out of range");
        for (std::size_t i = 0; i < r.size(); ++i)
          if (w[st.pos + i] != r[i])
            fail(errc::malformed_step, "word does not match the relator at the removal position");
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(st.pos),
                w.begin() + static_cast<std::ptrdiff_t>(st.pos + r.size()));
      }
      return;
    }
  }
  fail(errc::internal, "unhandled trace step kind");
}

bool check_trace(const DerivationTrace& trace, const std::vector<Word>& r0prime,
                 const ActionContext& ctx) {
  RawWord w = trace.start;
  for (const TraceStep& st : trace.steps) replay_step(w, st, r0prime, ctx);
  return w == trace.end;
}

namespace {

constexpr std::size_t npos = DeweakContext::npos;

// Accumulates steps while keeping the working word current; every step goes
// through the same replay engine the validator uses, so a construction bug
// surfaces here as malformed_step instead of as an invalid certificate.
struct TraceBuilder {
  explicit TraceBuilder(const DeweakContext& dc) : dc_(&dc) {}

  void apply(TraceStep st) {
    replay_step(cur, st, dc_->r0prime, dc_->ep.ctx);
    steps.push_back(st);
  }
  void free_reduce(std::size_t pos) {
    apply(TraceStep{TraceStep::Kind::free_reduce, pos, {}, 0, 0, true});
  }
  void free_expand(std::size_t pos, Letter l) {
    apply(TraceStep{TraceStep::Kind::free_expand, pos, l, 0, 0, true});
  }
  void relator(std::size_t gamma_elem, std::size_t idx, std::size_t pos, bool forward) {
    apply(TraceStep{TraceStep::Kind::apply_relator, pos, {}, gamma_elem, idx, forward});
  }

  RawWord cur;
  std::vector<TraceStep> steps;
  const DeweakContext* dc_;
};

TraceStep map_step(const TraceStep& st, std::size_t g, const ActionContext& ctx) {
  TraceStep m = st;
  if (st.kind == TraceStep::Kind::free_expand) m.letter.sym = ctx.act_symbol(g, st.letter.sym);
  if (st.kind == TraceStep::Kind::apply_relator) {
    const std::vector<Permutation>& elems = ctx.gamma().enumerate_elements();
    m.gamma_elem = ctx.gamma().element_index(compose(elems[g], elems[st.gamma_elem]));
  }
  return m;
}

// Replays the g-translate of a trace into the builder. Sound because the
// element action satisfies act(compose(a,b)) = act(a) after act(b), so a
// translated relator step inserts exactly the translate of the original.
void transport_into(TraceBuilder& b, const DerivationTrace& t, std::size_t g) {
  const ActionContext& ctx = b.dc_->ep.ctx;
  if (b.cur != ctx.act_raw(g, t.start))
    fail(errc::internal, "transport does not start at the translated word");
  for (const TraceStep& st : t.steps) b.apply(map_step(st, g, ctx));
  if (b.cur != ctx.act_raw(g, t.end))
    fail(errc::internal, "transported trace does not land on the translated end");
}

DerivationTrace transport_trace(const DerivationTrace& t, std::size_t g,
                                const DeweakContext& dc) {
  TraceBuilder b(dc);
  b.cur = dc.ep.ctx.act_raw(g, t.start);
  RawWord start = b.cur;
  transport_into(b, t, g);
  return DerivationTrace{std::move(start), std::move(b.steps), std::move(b.cur)};
}

// Same steps shifted right by offset, replayed in place.
void embed_into(TraceBuilder& b, const DerivationTrace& t, std::size_t offset) {
  if (offset + t.start.size() > b.cur.size() ||
      !std::equal(t.start.begin(), t.start.end(),
                  b.cur.begin() + static_cast<std::ptrdiff_t>(offset)))
    fail(errc::internal, "embedded trace does not match the working word");
  for (const TraceStep& st : t.steps) {
    TraceStep m = st;
    m.pos += offset;
    b.apply(m);
  }
}

// Inverse steps in reverse order: reductions become the expansion of the
// letter they removed, expansions become reductions, relator applications
// flip direction. The result is replayed once to certify it.
DerivationTrace reverse_trace(const DerivationTrace& t, const DeweakContext& dc) {
  const ActionContext& ctx = dc.ep.ctx;
  RawWord w = t.start;
  std::vector<TraceStep> inv;
  inv.reserve(t.steps.size());
  for (const TraceStep& st : t.steps) {
    TraceStep r = st;
    switch (st.kind) {
      case TraceStep::Kind::free_reduce:
        if (st.pos >= w.size()) fail(errc::malformed_step, "free reduction position out of range");
        r.kind = TraceStep::Kind::free_expand;
        r.letter = w[st.pos];
        break;
      case TraceStep::Kind::free_expand:
        r.kind = TraceStep::Kind::free_reduce;
        break;
      case TraceStep::Kind::apply_relator:
        r.forward = !st.forward;
        break;
    }
    replay_step(w, st, dc.r0prime, ctx);
    inv.push_back(r);
  }
  if (w != t.end) fail(errc::internal, "trace to reverse does not reach its recorded end");
  std::reverse(inv.begin(), inv.end());
  TraceBuilder b(dc);
  b.cur = t.end;
  for (const TraceStep& st : inv) b.apply(st);
  if (b.cur != t.start) fail(errc::internal, "reversed trace does not return to the start");
  return DerivationTrace{t.end, std::move(b.steps), std::move(b.cur)};
}

void append_into(TraceBuilder& b, const DerivationTrace& t) {
  if (b.cur != t.start) fail(errc::internal, "appended trace does not start at the working word");
  for (const TraceStep& st : t.steps) b.apply(st);
}

// Turns the single letter (^y x)^e at pos into witness^e using the witness
// relator for (y, x), untranslated. The relator stores the reduced form of
// (^y x) w^-1; when w ends in the letter ^y x that form loses its head, so
// the step pattern differs per case. pos advances past the rewritten block.
void rewrite_conjugated_letter(TraceBuilder& b, std::size_t& pos, std::size_t yi,
                               std::size_t xi, int e, const DeweakContext& dc) {
  const Word& w = dc.witnesses[yi][xi];
  const std::size_t m = w.size();
  const std::optional<std::size_t>& slot = dc.ppp_slot[yi * dc.x.size() + xi];
  if (!slot) {
    // freely trivial relator: the letter already is the witness word
    pos += m;
    return;
  }
  const RawWord& wl = w.letters();
  const SymbolRef head = b.cur.at(pos).sym;
  const bool cancels = m > 0 && wl[m - 1].sym == head && wl[m - 1].exp == 1;
  if (e == 1) {
    if (!cancels) {
      for (std::size_t j = m; j >= 1; --j)
        b.free_expand(pos + 1 + (m - j), wl[j - 1].inverse());
      b.relator(0, *slot, pos, false);
    } else {
      for (std::size_t j = 1; j + 1 <= m; ++j) b.free_expand(pos + (j - 1), wl[j - 1]);
      b.relator(0, *slot, pos + (m - 1), false);
    }
  } else {
    b.relator(0, *slot, pos + 1, true);
    if (!cancels) b.free_reduce(pos);
  }
  pos += m;
}

// Leftmost-first full free reduction, recorded as explicit steps.
void reduce_fully(TraceBuilder& b) {
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t i = 0; i + 1 < b.cur.size(); ++i) {
      if (b.cur[i].sym == b.cur[i + 1].sym && b.cur[i].exp + b.cur[i + 1].exp == 0) {
        b.free_reduce(i);
        again = true;
        break;
      }
    }
  }
}

// Trace from s0 u s0^-1 to the single letter ^{s0}u, with s0 the base symbol
// of orbit o: rewrite u to a word over x, split the conjugation across its
// letters, push s0 through each letter with the base conjugation relators,
// then run the iota-translated rewrite of u backwards.
DerivationTrace derive_base_conjugation(std::size_t o, SymbolRef u, const DeweakContext& dc) {
  const ActionContext& ctx = dc.ep.ctx;
  const SymbolRef s0{static_cast<uint32_t>(o), ctx.orbit_base(o)};
  const std::size_t iota_e = ctx.iota_element(o, ctx.orbit_base(o));
  DerivationTrace tu = derive_symbol_over_x(u, dc);

  TraceBuilder b(dc);
  b.cur = RawWord{Letter{s0, 1}, Letter{u, 1}, Letter{s0, -1}};
  RawWord start = b.cur;
  embed_into(b, tu, 1);

  const RawWord w = tu.end;
  const std::size_t n = w.size();
  if (n == 0) {
    b.free_reduce(0);
  } else {
    for (std::size_t i = n - 1; i >= 1; --i) b.free_expand(1 + i, Letter{s0, -1});
    for (std::size_t i = 0; i < n; ++i) {
      // groups left of i are single letters already, so this group is at i
      const std::size_t q = i;
      const Letter lt = w[i];
      const std::size_t xi = dc.x_of_symbol[ctx.symbol_linear_index(lt.sym)];
      if (xi == npos) fail(errc::internal, "rewritten word leaves the chosen generating set");
      const SymbolRef z = ctx.act_symbol(iota_e, lt.sym);
      const std::optional<std::size_t>& slot = dc.pp_slot[o * dc.x.size() + xi];
      const bool xs0 = lt.sym == s0;
      if (lt.exp == 1) {
        if (!slot) {
          b.free_reduce(q + 1);
        } else if (xs0) {
          b.free_reduce(q + 1);
          b.free_expand(q + 1, Letter{z, -1});
          b.relator(0, *slot, q, false);
        } else {
          b.free_expand(q + 3, Letter{z, -1});
          b.relator(0, *slot, q, false);
        }
      } else {
        if (!slot) {
          b.free_reduce(q);
        } else if (xs0) {
          b.free_reduce(q);
          b.relator(0, *slot, q + 1, true);
          b.free_reduce(q);
        } else {
          b.relator(0, *slot, q + 3, true);
          b.free_reduce(q + 2);
          b.free_reduce(q + 1);
          b.free_reduce(q);
        }
      }
    }
  }

  DerivationTrace back = reverse_trace(transport_trace(tu, iota_e, dc), dc);
  append_into(b, back);
  RawWord want{Letter{ctx.act_symbol(iota_e, u), 1}};
  if (b.cur != want) fail(errc::internal, "conjugation push does not end at the acted symbol");
  return DerivationTrace{std::move(start), std::move(b.steps), std::move(b.cur)};
}

}  // namespace

std::vector<SymbolRef> choose_X(const EquivariantPresentation& ep, const Realization& real) {
  const ActionContext& ctx = ep.ctx;
  std::vector<SymbolRef> x;
  std::vector<Permutation> gens;
  std::vector<char> taken(ctx.symbol_count(), 0);
  for (std::size_t o = 0; o < ctx.orbit_count(); ++o) {
    SymbolRef s{static_cast<uint32_t>(o), ctx.orbit_base(o)};
    std::size_t li = ctx.symbol_linear_index(s);
    x.push_back(s);
    taken[li] = 1;
    gens.push_back(real.images[li]);
  }
  if (gens.empty()) fail(errc::invalid_input, "presentation has no generator symbols");
  const std::uint32_t deg = gens.front().degree();
  const std::size_t target = real.group.order();
  std::size_t cur = subgroup_order(deg, gens, target);
  const std::vector<SymbolRef> all = ctx.symbols();
  for (std::size_t i = 0; i < all.size() && cur < target; ++i) {
    if (taken[i]) continue;
    gens.push_back(real.images[i]);
    std::size_t grown = subgroup_order(deg, gens, target);
    if (grown > cur) {
      cur = grown;
      x.push_back(all[i]);
      taken[i] = 1;
    } else {
      gens.pop_back();
    }
  }
  if (cur != target)
    fail(errc::internal, "greedy scan did not reach the full realized group");
  return x;
}

std::vector<std::size_t> symmetric_Y(const PermGroup& gamma) {
  std::vector<std::size_t> y;
  auto add = [&](const Permutation& p) {
    std::size_t e = gamma.element_index(p);
    if (std::find(y.begin(), y.end(), e) == y.end()) y.push_back(e);
  };
  for (const auto& [name, perm] : gamma.generators()) {
    add(perm);
    add(inverse(perm));
  }
  return y;
}

std::vector<std::vector<Word>> witness_words(const EquivariantPresentation& ep,
                                             const Realization& real,
                                             const std::vector<SymbolRef>& x,
                                             const std::vector<std::size_t>& y) {
  const ActionContext& ctx = ep.ctx;
  std::vector<std::pair<std::string, Permutation>> gens;
  std::map<std::string, SymbolRef> by_name;
  for (SymbolRef s : x) {
    std::string nm = symbol_name(ctx, s);
    gens.emplace_back(nm, real.images[ctx.symbol_linear_index(s)]);
    by_name.emplace(std::move(nm), s);
  }
  if (gens.empty()) fail(errc::invalid_input, "presentation has no generator symbols");
  PermGroup gx(gens.front().second.degree(), gens, real.group.order());
  std::vector<std::vector<Word>> wt(y.size(), std::vector<Word>(x.size()));
  for (std::size_t yi = 0; yi < y.size(); ++yi) {
    for (std::size_t xi = 0; xi < x.size(); ++xi) {
      SymbolRef cs = ctx.act_symbol(y[yi], x[xi]);
      GenWord gw = gx.word_for_element(real.images[ctx.symbol_linear_index(cs)]);
      RawWord rw;
      rw.reserve(gw.size());
      for (const auto& [nm, e] : gw) {
        if (e != 1 && e != -1)
          fail(errc::internal, "generator word letter with non-unit exponent");
        rw.push_back(Letter{by_name.at(nm), static_cast<std::int8_t>(e)});
      }
      wt[yi][xi] = Word(std::move(rw));
    }
  }
  return wt;
}

DeweakContext make_deweak_context(const EquivariantPresentation& ep, std::size_t max_cosets) {
  if (!ep.weak) fail(errc::mode_mismatch, "deweakification needs a weak mode presentation");
  ValidationReport vr = validate(ep, max_cosets);
  if (!vr.all_passed()) {
    for (const CheckResult& c : vr.checks)
      if (!c.passed)
        fail(errc::invalid_input, "input presentation failed validation: " + c.name +
                                      (c.detail.empty() ? "" : " (" + c.detail + ")"));
  }

  DeweakContext dc{ep, realize(ep, max_cosets)};
  const ActionContext& ctx = dc.ep.ctx;
  dc.x = choose_X(dc.ep, dc.real);
  dc.x_of_symbol.assign(ctx.symbol_count(), npos);
  for (std::size_t i = 0; i < dc.x.size(); ++i)
    dc.x_of_symbol[ctx.symbol_linear_index(dc.x[i])] = i;
  dc.y = symmetric_Y(ctx.gamma());
  dc.witnesses = witness_words(dc.ep, dc.real, dc.x, dc.y);

  const std::size_t nx = dc.x.size();
  dc.pp_slot.assign(ctx.orbit_count() * nx, std::nullopt);
  for (std::size_t o = 0; o < ctx.orbit_count(); ++o) {
    const SymbolRef s0{static_cast<uint32_t>(o), ctx.orbit_base(o)};
    const std::size_t iota_e = ctx.iota_element(o, ctx.orbit_base(o));
    for (std::size_t xi = 0; xi < nx; ++xi) {
      const SymbolRef xs = dc.x[xi];
      const SymbolRef z = ctx.act_symbol(iota_e, xs);
      Word rel(RawWord{Letter{s0, 1}, Letter{xs, 1}, Letter{s0, -1}, Letter{z, -1}});
      if (rel.empty()) continue;
      dc.pp_slot[o * nx + xi] = dc.r0prime.size();
      dc.r0prime.push_back(std::move(rel));
    }
  }
  dc.pp_count = dc.r0prime.size();

  dc.ppp_slot.assign(dc.y.size() * nx, std::nullopt);
  for (std::size_t yi = 0; yi < dc.y.size(); ++yi) {
    for (std::size_t xi = 0; xi < nx; ++xi) {
      const SymbolRef cs = ctx.act_symbol(dc.y[yi], dc.x[xi]);
      RawWord rw{Letter{cs, 1}};
      RawWord winv = invert_raw(dc.witnesses[yi][xi].letters());
      rw.insert(rw.end(), winv.begin(), winv.end());
      Word rel(std::move(rw));
      if (rel.empty()) continue;
      dc.ppp_slot[yi * nx + xi] = dc.r0prime.size();
      dc.r0prime.push_back(std::move(rel));
    }
  }

  dc.parent_letter.assign(ctx.orbit_count(), {});
  dc.parent_point.assign(ctx.orbit_count(), {});
  for (std::size_t o = 0; o < ctx.orbit_count(); ++o) {
    const uint32_t size = ctx.orbit_size(o);
    dc.parent_letter[o].assign(size, npos);
    dc.parent_point[o].assign(size, 0);
    std::vector<char> seen(size, 0);
    std::vector<uint32_t> layer{ctx.orbit_base(o)};
    seen[ctx.orbit_base(o)] = 1;
    // letter-major expansion keeps each layer sorted by word, so the first
    // discovery is the lex-least shortest word with the prefix-peel shape
    while (!layer.empty()) {
      std::vector<uint32_t> next;
      for (std::size_t yi = 0; yi < dc.y.size(); ++yi) {
        for (uint32_t p : layer) {
          uint32_t q = ctx.act_point(dc.y[yi], o, p);
          if (seen[q]) continue;
          seen[q] = 1;
          dc.parent_letter[o][q] = yi;
          dc.parent_point[o][q] = p;
          next.push_back(q);
        }
      }
      layer = std::move(next);
    }
    for (uint32_t p = 0; p < size; ++p)
      if (!seen[p]) fail(errc::internal, "validated orbit is not reachable over Y");
  }
  return dc;
}

DerivationTrace derive_symbol_over_x(SymbolRef u, const DeweakContext& dc) {
  const ActionContext& ctx = dc.ep.ctx;
  if (dc.x_of_symbol[ctx.symbol_linear_index(u)] != npos) {
    RawWord w{Letter{u, 1}};
    return DerivationTrace{w, {}, w};
  }
  const std::size_t yi = dc.parent_letter[u.orbit][u.point];
  if (yi == npos) fail(errc::internal, "symbol has no gamma word over Y");
  const std::size_t y_elem = dc.y[yi];
  const SymbolRef v{u.orbit, dc.parent_point[u.orbit][u.point]};
  if (ctx.act_symbol(y_elem, v) != u)
    fail(errc::internal, "parent letter does not map the parent symbol");

  DerivationTrace inner = derive_symbol_over_x(v, dc);
  TraceBuilder b(dc);
  b.cur = RawWord{Letter{u, 1}};
  RawWord start = b.cur;
  transport_into(b, inner, y_elem);
  std::size_t pos = 0;
  for (const Letter& lt : inner.end) {
    const std::size_t xi = dc.x_of_symbol[ctx.symbol_linear_index(lt.sym)];
    if (xi == npos) fail(errc::internal, "rewritten word leaves the chosen generating set");
    rewrite_conjugated_letter(b, pos, yi, xi, lt.exp, dc);
  }
  reduce_fully(b);
  return DerivationTrace{std::move(start), std::move(b.steps), std::move(b.cur)};
}

DerivationTrace derive_conjugation(SymbolRef s, SymbolRef t, const DeweakContext& dc) {
  const ActionContext& ctx = dc.ep.ctx;
  const std::size_t o = s.orbit;
  const std::vector<Permutation>& elems = ctx.gamma().enumerate_elements();
  Permutation g = elems[0];
  for (uint32_t p = s.point; p != ctx.orbit_base(o); p = dc.parent_point[o][p]) {
    const std::size_t yi = dc.parent_letter[o][p];
    if (yi == npos) fail(errc::internal, "symbol has no gamma word over Y");
    g = compose(g, elems[dc.y[yi]]);
  }
  const std::size_t gamma_e = ctx.gamma().element_index(g);
  const SymbolRef s0{static_cast<uint32_t>(o), ctx.orbit_base(o)};
  if (ctx.act_symbol(gamma_e, s0) != s)
    fail(errc::internal, "gamma word over Y does not reach the symbol");
  const SymbolRef u = ctx.act_symbol(ctx.gamma().element_index(inverse(g)), t);

  DerivationTrace out = transport_trace(derive_base_conjugation(o, u, dc), gamma_e, dc);
  const RawWord want_start{Letter{s, 1}, Letter{t, 1}, Letter{s, -1}};
  const RawWord want_end{Letter{ctx.act_symbol(ctx.iota_element(s.orbit, s.point), t), 1}};
  if (out.start != want_start || out.end != want_end)
    fail(errc::internal, "conjugation trace endpoints are wrong");
  return out;
}

DeweakResult deweakify(const EquivariantPresentation& ep, std::size_t max_cosets) {
  DeweakContext dc = make_deweak_context(ep, max_cosets);
  const ActionContext& ctx = dc.ep.ctx;

  DeweakResult res{EquivariantPresentation{ep.name, false, ep.ctx, ep.r0}, {}};
  for (const Word& w : dc.r0prime) res.output.r0.push_back(w);
  res.bundle.x = dc.x;
  res.bundle.y = dc.y;
  res.bundle.witnesses = dc.witnesses;
  res.bundle.r0prime = dc.r0prime;
  res.bundle.pp_slot = dc.pp_slot;
  res.bundle.ppp_slot = dc.ppp_slot;
  const std::vector<SymbolRef> syms = ctx.symbols();
  for (SymbolRef s : syms)
    for (SymbolRef t : syms) res.bundle.traces.push_back(derive_conjugation(s, t, dc));
  return res;
}

}  // namespace eqp
