#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

namespace eqp {

namespace {

using nlohmann::json;

constexpr std::size_t max_expanded_letters = 1000000;

struct Cursor {
  const std::string& text;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  [[noreturn]] void err(const std::string& msg) const {
    fail(errc::parse_error, "parse error at line " + std::to_string(line) + ", column " +
                                std::to_string(col) + ": " + msg);
  }
  char peek() const { return i < text.size() ? text[i] : '\0'; }
  char get() {
    char c = text[i++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  void skip_ws() {
    while (i < text.size() &&
           (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r'))
      get();
  }
  bool at_end() const { return i >= text.size(); }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string parse_ident(Cursor& c) {
  if (!ident_start(c.peek())) c.err("expected a name");
  std::string out;
  while (ident_char(c.peek())) out += c.get();
  return out;
}

long parse_int(Cursor& c) {
  bool neg = false;
  if (c.peek() == '-') {
    neg = true;
    c.get();
  }
  if (!std::isdigit(static_cast<unsigned char>(c.peek()))) c.err("expected digits");
  long v = 0;
  while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    v = v * 10 + (c.get() - '0');
    if (v > 1000000) c.err("number too large");
  }
  return neg ? -v : v;
}

Letter parse_symbol(Cursor& c, const ActionContext& ctx) {
  std::string name = parse_ident(c);
  if (c.peek() != '.') c.err("expected '.' after orbit name '" + name + "'");
  c.get();
  long p = parse_int(c);
  std::size_t o = ctx.orbit_index(name);
  if (p < 0 || p >= static_cast<long>(ctx.orbit_size(o)))
    fail(errc::unknown_symbol,
         "symbol '" + name + "." + std::to_string(p) + "' is outside its orbit");
  return Letter{SymbolRef{static_cast<uint32_t>(o), static_cast<uint32_t>(p)}, 1};
}

RawWord power(const RawWord& base, long e) {
  RawWord unit = e < 0 ? invert_raw(base) : base;
  std::size_t reps = static_cast<std::size_t>(e < 0 ? -e : e);
  if (base.size() * reps > max_expanded_letters)
    fail(errc::parse_error, "word expands to too many letters");
  RawWord out;
  out.reserve(unit.size() * reps);
  for (std::size_t k = 0; k < reps; ++k) out.insert(out.end(), unit.begin(), unit.end());
  return out;
}

RawWord parse_word_seq(Cursor& c, const ActionContext& ctx);

RawWord parse_atom(Cursor& c, const ActionContext& ctx) {
  c.skip_ws();
  char ch = c.peek();
  if (ch == '(') {
    c.get();
    RawWord w = parse_word_seq(c, ctx);
    c.skip_ws();
    if (c.peek() != ')') c.err("expected ')'");
    c.get();
    return w;
  }
  if (ch == '[') {
    c.get();
    RawWord a = parse_word_seq(c, ctx);
    c.skip_ws();
    if (c.peek() != ',') c.err("expected ',' inside '[...]'");
    c.get();
    RawWord b = parse_word_seq(c, ctx);
    c.skip_ws();
    if (c.peek() != ']') c.err("expected ']'");
    c.get();
    RawWord out = a;
    out.insert(out.end(), b.begin(), b.end());
    RawWord ai = invert_raw(a);
    RawWord bi = invert_raw(b);
    out.insert(out.end(), ai.begin(), ai.end());
    out.insert(out.end(), bi.begin(), bi.end());
    return out;
  }
  if (ident_start(ch)) return RawWord{parse_symbol(c, ctx)};
  c.err("expected a symbol, '(' or '['");
}

RawWord parse_term(Cursor& c, const ActionContext& ctx) {
  RawWord atom = parse_atom(c, ctx);
  if (c.peek() == '^') {
    c.get();
    return power(atom, parse_int(c));
  }
  return atom;
}

RawWord parse_word_seq(Cursor& c, const ActionContext& ctx) {
  RawWord out;
  for (;;) {
    c.skip_ws();
    char ch = c.peek();
    if (ch == '\0' || ch == ')' || ch == ']' || ch == ',') return out;
    RawWord t = parse_term(c, ctx);
    if (out.size() + t.size() > max_expanded_letters)
      fail(errc::parse_error, "word expands to too many letters");
    out.insert(out.end(), t.begin(), t.end());
  }
}

json json_int(const Int& v) {
  static const Int lo(std::numeric_limits<std::int64_t>::min());
  static const Int hi(std::numeric_limits<std::int64_t>::max());
  if (v >= lo && v <= hi) return v.convert_to<std::int64_t>();
  return v.str();
}

json json_int_vector(const std::vector<Int>& v) {
  json a = json::array();
  for (const Int& x : v) a.push_back(json_int(x));
  return a;
}

json json_matrix(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(json_int(m.at(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

json json_checks(const std::vector<CheckResult>& checks) {
  json a = json::array();
  for (const CheckResult& c : checks)
    a.push_back(json{{"detail", c.detail}, {"name", c.name}, {"passed", c.passed}});
  return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const json& need(const json& o, const char* key) {
  if (!o.is_object() || !o.contains(key))
    fail(errc::parse_error, std::string("missing field '") + key + "'");
  return o.at(key);
}

std::string need_string(const json& o, const char* key) {
  const json& v = need(o, key);
  if (!v.is_string()) fail(errc::parse_error, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t need_uint(const json& o, const char* key, std::uint64_t max) {
  const json& v = need(o, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    fail(errc::parse_error, std::string("field '") + key + "' must be a nonnegative integer");
  std::uint64_t u = v.get<std::uint64_t>();
  if (u > max)
    fail(errc::parse_error, std::string("field '") + key + "' is too large");
  return u;
}

std::vector<std::uint32_t> perm_array(const json& v, std::size_t degree, const std::string& what) {
  if (!v.is_array() || v.size() != degree)
    fail(errc::parse_error, what + " must be an array of length " + std::to_string(degree));
  std::vector<std::uint32_t> img(degree);
  std::vector<char> hit(degree, 0);
  for (std::size_t i = 0; i < degree; ++i) {
    const json& e = v.at(i);
    if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0))
      fail(errc::parse_error, what + " has a non-index entry");
    std::uint64_t u = e.get<std::uint64_t>();
    if (u >= degree) fail(errc::parse_error, what + " has an entry out of range");
    if (hit[u]) fail(errc::parse_error, what + " is not a bijection");
    hit[u] = 1;
    img[i] = static_cast<std::uint32_t>(u);
  }
  return img;
}

void reject_unknown_keys(const json& o, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = o.begin(); it != o.end(); ++it)
    if (!allowed.count(it.key()))
      fail(errc::parse_error, "unknown field '" + it.key() + "' in " + where);
}

// Lex-least shortest word over y for every gamma element, as index lists.
// Letter-major layered BFS with prepended letters, the same discipline the
// deweak module uses, so serialized gamma references are reproducible.
std::vector<std::vector<std::size_t>> y_word_table(const ActionContext& ctx,
                                                   const std::vector<std::size_t>& y) {
  const std::vector<Permutation>& elems = ctx.gamma().enumerate_elements();
  std::vector<std::vector<std::size_t>> words(elems.size());
  std::vector<char> seen(elems.size(), 0);
  std::vector<std::size_t> layer{0};
  seen[0] = 1;
  while (!layer.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t yi = 0; yi < y.size(); ++yi) {
      for (std::size_t e : layer) {
        if (y[yi] >= elems.size()) fail(errc::internal, "y element out of range");
        std::size_t f = ctx.gamma().element_index(compose(elems[y[yi]], elems[e]));
        if (seen[f]) continue;
        seen[f] = 1;
        words[f].reserve(words[e].size() + 1);
        words[f].push_back(yi);
        words[f].insert(words[f].end(), words[e].begin(), words[e].end());
        next.push_back(f);
      }
    }
    layer = std::move(next);
  }
  for (std::size_t e = 0; e < elems.size(); ++e)
    if (!seen[e]) fail(errc::internal, "y does not generate gamma");
  return words;
}

std::size_t element_of_y_word(const std::vector<std::size_t>& word,
                              const std::vector<std::size_t>& y, const ActionContext& ctx) {
  const std::vector<Permutation>& elems = ctx.gamma().enumerate_elements();
  Permutation p = elems[0];
  for (std::size_t idx : word) {
    if (idx >= y.size()) fail(errc::parse_error, "gamma word references a missing y entry");
    p = compose(p, elems[y[idx]]);
  }
  return ctx.gamma().element_index(p);
}

json trace_step_json(const TraceStep& st, const ActionContext& ctx,
                     const std::vector<std::vector<std::size_t>>& ywords) {
  switch (st.kind) {
    case TraceStep::Kind::free_reduce:
      return json{{"kind", "reduce"}, {"pos", st.pos}};
    case TraceStep::Kind::free_expand:
      return json{{"kind", "expand"}, {"letter", print_letter(st.letter, ctx)}, {"pos", st.pos}};
    case TraceStep::Kind::apply_relator:
      return json{{"forward", st.forward},
                  {"gamma", ywords.at(st.gamma_elem)},
                  {"index", st.r0p_index},
                  {"kind", "relator"},
                  {"pos", st.pos}};
  }
  fail(errc::internal, "unhandled trace step kind");
}

TraceStep trace_step_from_json(const json& j, const ActionContext& ctx,
                               const std::vector<std::size_t>& y) {
  TraceStep st;
  std::string kind = need_string(j, "kind");
  st.pos = static_cast<std::size_t>(need_uint(j, "pos", max_expanded_letters));
  if (kind == "reduce") {
    st.kind = TraceStep::Kind::free_reduce;
    reject_unknown_keys(j, {"kind", "pos"}, "a reduce step");
  } else if (kind == "expand") {
    st.kind = TraceStep::Kind::free_expand;
    st.letter = parse_letter(need_string(j, "letter"), ctx);
    reject_unknown_keys(j, {"kind", "letter", "pos"}, "an expand step");
  } else if (kind == "relator") {
    st.kind = TraceStep::Kind::apply_relator;
    const json& g = need(j, "gamma");
    if (!g.is_array()) fail(errc::parse_error, "field 'gamma' must be an array of y indices");
    std::vector<std::size_t> word;
    for (const json& e : g) {
      if (!e.is_number_unsigned())
        fail(errc::parse_error, "field 'gamma' must be an array of y indices");
      word.push_back(e.get<std::size_t>());
    }
    st.gamma_elem = element_of_y_word(word, y, ctx);
    st.r0p_index = static_cast<std::size_t>(need_uint(j, "index", 1u << 30));
    const json& f = need(j, "forward");
    if (!f.is_boolean()) fail(errc::parse_error, "field 'forward' must be a boolean");
    st.forward = f.get<bool>();
    reject_unknown_keys(j, {"forward", "gamma", "index", "kind", "pos"}, "a relator step");
  } else {
    fail(errc::parse_error, "unknown trace step kind '" + kind + "'");
  }
  return st;
}

json raw_word_json(const RawWord& w, const ActionContext& ctx) {
  json a = json::array();
  for (const Letter& l : w) a.push_back(print_letter(l, ctx));
  return a;
}

RawWord raw_word_from_json(const json& j, const ActionContext& ctx) {
  if (!j.is_array()) fail(errc::parse_error, "a raw word must be an array of letters");
  RawWord out;
  for (const json& e : j) {
    if (!e.is_string()) fail(errc::parse_error, "a raw word must be an array of letter strings");
    out.push_back(parse_letter(e.get<std::string>(), ctx));
  }
  return out;
}

std::vector<Permutation> flip_permutations(int n) {
  std::vector<Permutation> flips;
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint32_t> img(2 * static_cast<std::uint32_t>(n));
    for (std::uint32_t p = 0; p < img.size(); ++p) img[p] = p;
    img[static_cast<std::uint32_t>(i)] = static_cast<std::uint32_t>(n + i);
    img[static_cast<std::uint32_t>(n + i)] = static_cast<std::uint32_t>(i);
    flips.push_back(make_permutation(img));
  }
  return flips;
}

// Conjugation index array for one gamma generator over a family of
// pairwise distinct involutions: arr[i] = j with g f_i g^-1 = f_j.
std::vector<std::uint32_t> conjugation_array(const Permutation& g,
                                             const std::vector<Permutation>& family) {
  std::vector<std::uint32_t> arr(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    Permutation c = compose(compose(g, family[i]), inverse(g));
    bool found = false;
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (c == family[j]) {
        arr[i] = static_cast<std::uint32_t>(j);
        found = true;
        break;
      }
    }
    if (!found) fail(errc::invalid_input, "conjugation leaves the symbol family");
  }
  return arr;
}

std::vector<std::pair<std::string, Permutation>> symmetric_group_gens(int n) {
  std::vector<std::pair<std::string, Permutation>> gens;
  std::vector<std::uint32_t> cyc(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cyc[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>((i + 1) % n);
  if (n > 2) gens.emplace_back("c", make_permutation(cyc));
  std::vector<std::uint32_t> tr(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) tr[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
  tr[0] = 1;
  tr[1] = 0;
  gens.emplace_back("t", make_permutation(tr));
  return gens;
}

// Natural index action under the composition conventions: the per-point
// array of g is g^-1, which is what makes the element tables a genuine
// homomorphism (see the action module notes).
std::map<std::string, std::vector<std::uint32_t>> natural_orbit_arrays(
    const std::vector<std::pair<std::string, Permutation>>& gens) {
  std::map<std::string, std::vector<std::uint32_t>> arrays;
  for (const auto& [name, perm] : gens) arrays[name] = inverse(perm).img;
  return arrays;
}

EquivariantPresentation make_z2sum(int n) {
  auto gens = symmetric_group_gens(n);
  PermGroup gamma(static_cast<std::uint32_t>(n), gens);
  OrbitSpec orbit{"s", static_cast<std::uint32_t>(n), 0, natural_orbit_arrays(gens), {}};
  ActionContext ctx(std::move(gamma), {orbit});
  RawWord square{Letter{SymbolRef{0, 0}, 1}, Letter{SymbolRef{0, 0}, 1}};
  RawWord comm{Letter{SymbolRef{0, 0}, 1}, Letter{SymbolRef{0, 1}, 1},
               Letter{SymbolRef{0, 0}, -1}, Letter{SymbolRef{0, 1}, -1}};
  return EquivariantPresentation{"z2sum" + std::to_string(n), false, std::move(ctx),
                                 {Word(square), Word(comm)}};
}

EquivariantPresentation make_star(int n) {
  auto gens = symmetric_group_gens(n);
  PermGroup gamma(static_cast<std::uint32_t>(n), gens);
  OrbitSpec orbit{"s", static_cast<std::uint32_t>(n), 0, natural_orbit_arrays(gens), {}};
  ActionContext ctx(std::move(gamma), {orbit});
  RawWord square{Letter{SymbolRef{0, 0}, 1}, Letter{SymbolRef{0, 0}, 1}};
  RawWord pair;
  for (int k = 0; k < 3; ++k) {
    pair.push_back(Letter{SymbolRef{0, 0}, 1});
    pair.push_back(Letter{SymbolRef{0, 1}, 1});
  }
  // (s.0 s.1 s.0 s.2)^2; its orbit under a 3-transitive gamma completes the
  // classical star-transposition presentation of the symmetric group.
  RawWord triple;
  for (int k = 0; k < 2; ++k) {
    triple.push_back(Letter{SymbolRef{0, 0}, 1});
    triple.push_back(Letter{SymbolRef{0, 1}, 1});
    triple.push_back(Letter{SymbolRef{0, 0}, 1});
    triple.push_back(Letter{SymbolRef{0, 2}, 1});
  }
  return EquivariantPresentation{"star" + std::to_string(n), false, std::move(ctx),
                                 {Word(square), Word(pair), Word(triple)}};
}

EquivariantPresentation make_hyperoct(int n) {
  const std::uint32_t deg = 2 * static_cast<std::uint32_t>(n);
  // letter shift i -> i+n-1 mod n on both sign blocks, one sign flip
  std::vector<std::uint32_t> cimg(deg);
  for (int i = 0; i < n; ++i) {
    std::uint32_t to = static_cast<std::uint32_t>((i + n - 1) % n);
    cimg[static_cast<std::size_t>(i)] = to;
    cimg[static_cast<std::size_t>(n + i)] = static_cast<std::uint32_t>(n) + to;
  }
  std::vector<Permutation> flips = flip_permutations(n);
  std::vector<std::pair<std::string, Permutation>> gens;
  gens.emplace_back("c", make_permutation(cimg));
  gens.emplace_back("t", flips[0]);
  std::map<std::string, std::vector<std::uint32_t>> arrays;
  for (const auto& [name, perm] : gens) arrays[name] = conjugation_array(perm, flips);
  PermGroup gamma(deg, gens);
  OrbitSpec orbit{"s", static_cast<std::uint32_t>(n), 0, std::move(arrays), flips[0]};
  ActionContext ctx(std::move(gamma), {orbit});
  RawWord square{Letter{SymbolRef{0, 0}, 1}, Letter{SymbolRef{0, 0}, 1}};
  return EquivariantPresentation{"hyperoct" + std::to_string(n), true, std::move(ctx),
                                 {Word(square)}};
}

}  // namespace

Word parse_word(const std::string& text, const ActionContext& ctx) {
  Cursor c{text};
  RawWord raw = parse_word_seq(c, ctx);
  c.skip_ws();
  if (!c.at_end()) c.err(std::string("unexpected '") + c.peek() + "'");
  return Word(std::move(raw));
}

std::string print_word(const Word& w, const ActionContext& ctx) {
  const RawWord& ls = w.letters();
  std::string out;
  std::size_t i = 0;
  while (i < ls.size()) {
    std::size_t j = i;
    while (j < ls.size() && ls[j] == ls[i]) ++j;
    long e = static_cast<long>(ls[i].exp) * static_cast<long>(j - i);
    if (!out.empty()) out += ' ';
    out += symbol_name(ctx, ls[i].sym);
    if (e != 1) {
      out += '^';
      out += std::to_string(e);
    }
    i = j;
  }
  return out;
}

Letter parse_letter(const std::string& text, const ActionContext& ctx) {
  Cursor c{text};
  c.skip_ws();
  Letter l = parse_symbol(c, ctx);
  if (c.peek() == '^') {
    c.get();
    long e = parse_int(c);
    if (e != 1 && e != -1) c.err("letter exponent must be 1 or -1");
    l.exp = static_cast<std::int8_t>(e);
  }
  c.skip_ws();
  if (!c.at_end()) c.err("trailing text after letter");
  return l;
}

std::string print_letter(const Letter& l, const ActionContext& ctx) {
  std::string out = symbol_name(ctx, l.sym);
  if (l.exp != 1) out += "^-1";
  return out;
}

GenWord parse_gamma_word(const std::string& text) {
  Cursor c{text};
  GenWord out;
  for (;;) {
    c.skip_ws();
    if (c.at_end()) return out;
    std::string name = parse_ident(c);
    long e = 1;
    if (c.peek() == '^') {
      c.get();
      e = parse_int(c);
    }
    if (e > 1000 || e < -1000) c.err("gamma exponent too large");
    int step = e < 0 ? -1 : 1;
    for (long k = 0; k != e; k += step) out.emplace_back(name, step);
  }
}

std::string print_gamma_word(const GenWord& gw) {
  std::string out;
  std::size_t i = 0;
  while (i < gw.size()) {
    std::size_t j = i;
    while (j < gw.size() && gw[j] == gw[i]) ++j;
    long e = static_cast<long>(gw[i].second) * static_cast<long>(j - i);
    if (!out.empty()) out += ' ';
    out += gw[i].first;
    if (e != 1) {
      out += '^';
      out += std::to_string(e);
    }
    i = j;
  }
  return out;
}

EquivariantPresentation load_presentation(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(errc::parse_error, "presentation file must be a JSON object");
  reject_unknown_keys(j, {"gamma", "iota", "mode", "name", "orbits", "relators"},
                      "the presentation file");

  std::string name = need_string(j, "name");
  std::string mode = need_string(j, "mode");
  if (mode != "finite" && mode != "weak")
    fail(errc::parse_error, "mode must be \"finite\" or \"weak\"");
  const bool weak = mode == "weak";

  const json& jg = need(j, "gamma");
  reject_unknown_keys(jg, {"degree", "generators"}, "gamma");
  std::uint32_t degree = static_cast<std::uint32_t>(need_uint(jg, "degree", 100000));
  if (degree == 0) fail(errc::parse_error, "gamma degree must be positive");
  const json& jgens = need(jg, "generators");
  if (!jgens.is_object()) fail(errc::parse_error, "gamma generators must be an object");
  std::vector<std::pair<std::string, Permutation>> gens;
  for (auto it = jgens.begin(); it != jgens.end(); ++it)
    gens.emplace_back(it.key(),
                      make_permutation(perm_array(it.value(), degree,
                                                  "gamma generator '" + it.key() + "'")));
  PermGroup gamma(degree, gens);

  const json& jorbits = need(j, "orbits");
  if (!jorbits.is_array() || jorbits.empty())
    fail(errc::parse_error, "orbits must be a nonempty array");
  std::vector<OrbitSpec> orbits;
  std::set<std::string> orbit_names;
  for (const json& jo : jorbits) {
    reject_unknown_keys(jo, {"action", "base_point", "domain_size", "rep_name"}, "an orbit");
    OrbitSpec spec;
    spec.name = need_string(jo, "rep_name");
    {
      Cursor c{spec.name};
      if (spec.name.empty() || parse_ident(c) != spec.name || !c.at_end())
        fail(errc::parse_error, "orbit name '" + spec.name + "' is not an identifier");
    }
    if (!orbit_names.insert(spec.name).second)
      fail(errc::parse_error, "duplicate orbit name '" + spec.name + "'");
    spec.size = static_cast<std::uint32_t>(need_uint(jo, "domain_size", 100000));
    if (spec.size == 0) fail(errc::parse_error, "orbit domain_size must be positive");
    spec.base = static_cast<std::uint32_t>(need_uint(jo, "base_point", spec.size - 1));
    const json& ja = need(jo, "action");
    if (!ja.is_object()) fail(errc::parse_error, "orbit action must be an object");
    for (const auto& [gname, gperm] : gens) {
      if (!ja.contains(gname))
        fail(errc::parse_error,
             "orbit '" + spec.name + "' has no action array for generator '" + gname + "'");
      spec.gen_arrays[gname] =
          perm_array(ja.at(gname), spec.size, "action of '" + gname + "' on '" + spec.name + "'");
    }
    if (ja.size() != gens.size())
      fail(errc::parse_error, "orbit '" + spec.name + "' lists an undeclared generator");
    orbits.push_back(std::move(spec));
  }

  if (weak) {
    const json& ji = need(j, "iota");
    if (!ji.is_object()) fail(errc::parse_error, "iota must be an object");
    std::set<std::string> expected;
    for (OrbitSpec& spec : orbits) {
      std::string key = spec.name + "." + std::to_string(spec.base);
      expected.insert(key);
      if (!ji.contains(key))
        fail(errc::parse_error, "weak mode needs an iota entry for base symbol '" + key + "'");
      spec.iota = make_permutation(perm_array(ji.at(key), degree, "iota of '" + key + "'"));
    }
    reject_unknown_keys(ji, expected, "iota");
  } else if (j.contains("iota")) {
    fail(errc::parse_error, "iota is only allowed in weak mode");
  }

  ActionContext ctx(std::move(gamma), std::move(orbits));

  const json& jr = need(j, "relators");
  if (!jr.is_array()) fail(errc::parse_error, "relators must be an array");
  std::vector<Word> r0;
  for (const json& w : jr) {
    if (!w.is_string()) fail(errc::parse_error, "relators must be strings");
    r0.push_back(parse_word(w.get<std::string>(), ctx));
  }

  return EquivariantPresentation{std::move(name), weak, std::move(ctx), std::move(r0)};
}

std::string save_presentation(const EquivariantPresentation& ep) {
  const ActionContext& ctx = ep.ctx;
  json j;
  j["name"] = ep.name;
  j["mode"] = ep.weak ? "weak" : "finite";
  j["gamma"]["degree"] = ctx.gamma().degree();
  json jgens = json::object();
  for (const auto& [name, perm] : ctx.gamma().generators()) jgens[name] = perm.img;
  j["gamma"]["generators"] = std::move(jgens);
  json jorbits = json::array();
  for (std::size_t o = 0; o < ctx.orbit_count(); ++o) {
    const OrbitSpec& spec = ctx.orbit(o);
    json ja = json::object();
    for (const auto& [gname, arr] : spec.gen_arrays) ja[gname] = arr;
    jorbits.push_back(json{{"action", std::move(ja)},
                           {"base_point", spec.base},
                           {"domain_size", spec.size},
                           {"rep_name", spec.name}});
  }
  j["orbits"] = std::move(jorbits);
  json jr = json::array();
  for (const Word& w : ep.r0) jr.push_back(print_word(w, ctx));
  j["relators"] = std::move(jr);
  if (ep.weak) {
    json ji = json::object();
    for (std::size_t o = 0; o < ctx.orbit_count(); ++o) {
      const OrbitSpec& spec = ctx.orbit(o);
      if (!spec.iota) fail(errc::invalid_input, "weak presentation lacks iota");
      ji[spec.name + "." + std::to_string(spec.base)] = spec.iota->img;
    }
    j["iota"] = std::move(ji);
  }
  return dump(j);
}

EquivariantPresentation builtin(const std::string& name, int n) {
  if (name == "z2sum") {
    if (n < 2 || n > 4) fail(errc::invalid_input, "z2sum supports n = 2..4");
    return make_z2sum(n);
  }
  if (name == "star") {
    if (n < 3 || n > 4) fail(errc::invalid_input, "star supports n = 3..4");
    return make_star(n);
  }
  if (name == "hyperoct") {
    if (n < 2 || n > 3) fail(errc::invalid_input, "hyperoct supports n = 2..3");
    return make_hyperoct(n);
  }
  fail(errc::invalid_input,
       "unknown example '" + name + "' (available: z2sum, star, hyperoct)");
}

std::string validation_report_json(const ValidationReport& vr) {
  json j;
  j["all_passed"] = vr.all_passed();
  j["checks"] = json_checks(vr.checks);
  j["realized_order"] = vr.realized_order;
  return dump(j);
}

std::string homology_report_json(const HomologyReport& hr) {
  json j;
  j["group_order"] = hr.group_order;
  j["h1"] = json{{"factors", json_int_vector(hr.h1.factors)}, {"free_rank", hr.h1.free_rank}};
  json reps = json::array();
  for (const std::vector<Int>& r : hr.h2_representatives) reps.push_back(json_int_vector(r));
  j["h2"] = json{{"factors", json_int_vector(hr.h2_factors)}, {"representatives", std::move(reps)}};
  json mats = json::array();
  for (const IntMatrix& m : hr.action.matrices) mats.push_back(json_matrix(m));
  j["gamma_action"] = json{{"generators", hr.action.gen_names}, {"matrices", std::move(mats)}};
  json chosen = json::array();
  for (const auto& v : hr.generation.chosen) chosen.push_back(json_int_vector(v));
  j["generation"] = json{{"chosen", std::move(chosen)},
                         {"exact", hr.generation.exact},
                         {"rank", hr.generation.rank}};
  j["five_term"] = json{{"all_passed", hr.diagnostics.all_passed()},
                        {"checks", json_checks(hr.diagnostics.checks)}};
  return dump(j);
}

std::string abelianization_json(const AbelianInvariants& ab) {
  json j;
  j["factors"] = json_int_vector(ab.factors);
  j["free_rank"] = ab.free_rank;
  return dump(j);
}

std::string orbits_json(const ActionContext& ctx) {
  json j;
  j["gamma_order"] = ctx.gamma_order();
  j["symbol_count"] = ctx.symbol_count();
  json arr = json::array();
  for (std::size_t o = 0; o < ctx.orbit_count(); ++o) {
    json jo;
    jo["base_point"] = ctx.orbit_base(o);
    jo["name"] = ctx.orbit_name(o);
    jo["size"] = ctx.orbit_size(o);
    const bool transitive = ctx.orbit_transitive(o);
    jo["transitive"] = transitive;
    if (transitive) {
      jo["stabilizer_order"] = ctx.gamma_order() / ctx.orbit_size(o);
      json words = json::array();
      for (std::uint32_t p = 0; p < ctx.orbit_size(o); ++p)
        words.push_back(print_gamma_word(ctx.orbit_word(o, p)));
      jo["transversal_words"] = std::move(words);
    } else {
      jo["stabilizer_order"] = nullptr;
      jo["transversal_words"] = nullptr;
    }
    arr.push_back(std::move(jo));
  }
  j["orbits"] = std::move(arr);
  return dump(j);
}

std::string bundle_json(const CertificateBundle& b, const ActionContext& ctx) {
  std::vector<std::vector<std::size_t>> ywords = y_word_table(ctx, b.y);
  const std::vector<Permutation>& elems = ctx.gamma().enumerate_elements();
  json j;
  json jx = json::array();
  for (SymbolRef s : b.x) jx.push_back(symbol_name(ctx, s));
  j["x"] = std::move(jx);
  json jy = json::array();
  for (std::size_t e : b.y) jy.push_back(print_gamma_word(ctx.gamma().word_for_element(elems[e])));
  j["y"] = std::move(jy);
  json jw = json::array();
  for (const std::vector<Word>& row : b.witnesses) {
    json r = json::array();
    for (const Word& w : row) r.push_back(print_word(w, ctx));
    jw.push_back(std::move(r));
  }
  j["witnesses"] = std::move(jw);
  json jr = json::array();
  for (const Word& w : b.r0prime) jr.push_back(print_word(w, ctx));
  j["r0prime"] = std::move(jr);
  auto slots = [](const std::vector<std::optional<std::size_t>>& v) {
    json a = json::array();
    for (const std::optional<std::size_t>& s : v) {
      if (s)
        a.push_back(*s);
      else
        a.push_back(nullptr);
    }
    return a;
  };
  j["pp_slot"] = slots(b.pp_slot);
  j["ppp_slot"] = slots(b.ppp_slot);

  const std::vector<SymbolRef> syms = ctx.symbols();
  if (b.traces.size() != syms.size() * syms.size())
    fail(errc::internal, "bundle trace count does not cover the symbol pairs");
  json jt = json::array();
  std::size_t idx = 0;
  for (SymbolRef s : syms) {
    for (SymbolRef t : syms) {
      const DerivationTrace& tr = b.traces[idx++];
      json steps = json::array();
      for (const TraceStep& st : tr.steps) steps.push_back(trace_step_json(st, ctx, ywords));
      jt.push_back(json{{"end", raw_word_json(tr.end, ctx)},
                        {"s", symbol_name(ctx, s)},
                        {"start", raw_word_json(tr.start, ctx)},
                        {"steps", std::move(steps)},
                        {"t", symbol_name(ctx, t)}});
    }
  }
  j["traces"] = std::move(jt);
  return dump(j);
}

CertificateBundle parse_bundle(const std::string& json_text, const ActionContext& ctx) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(errc::parse_error, "certificate bundle must be a JSON object");
  reject_unknown_keys(
      j, {"pp_slot", "ppp_slot", "r0prime", "traces", "witnesses", "x", "y"},
      "the certificate bundle");
  CertificateBundle b;

  const json& jx = need(j, "x");
  if (!jx.is_array()) fail(errc::parse_error, "x must be an array");
  for (const json& e : jx) {
    if (!e.is_string()) fail(errc::parse_error, "x entries must be symbol names");
    Letter l = parse_letter(e.get<std::string>(), ctx);
    if (l.exp != 1) fail(errc::parse_error, "x entries must be plain symbols");
    b.x.push_back(l.sym);
  }

  const json& jy = need(j, "y");
  if (!jy.is_array()) fail(errc::parse_error, "y must be an array");
  for (const json& e : jy) {
    if (!e.is_string()) fail(errc::parse_error, "y entries must be gamma words");
    b.y.push_back(ctx.gamma_element_of(parse_gamma_word(e.get<std::string>())));
  }

  const json& jw = need(j, "witnesses");
  if (!jw.is_array() || jw.size() != b.y.size())
    fail(errc::parse_error, "witnesses must have one row per y entry");
  for (const json& row : jw) {
    if (!row.is_array() || row.size() != b.x.size())
      fail(errc::parse_error, "witness rows must have one entry per x entry");
    std::vector<Word> r;
    for (const json& e : row) {
      if (!e.is_string()) fail(errc::parse_error, "witness entries must be words");
      r.push_back(parse_word(e.get<std::string>(), ctx));
    }
    b.witnesses.push_back(std::move(r));
  }

  const json& jr = need(j, "r0prime");
  if (!jr.is_array()) fail(errc::parse_error, "r0prime must be an array");
  for (const json& e : jr) {
    if (!e.is_string()) fail(errc::parse_error, "r0prime entries must be words");
    b.r0prime.push_back(parse_word(e.get<std::string>(), ctx));
  }

  auto slots = [&](const char* key, std::size_t expected) {
    const json& v = need(j, key);
    if (!v.is_array() || v.size() != expected)
      fail(errc::parse_error, std::string("field '") + key + "' has the wrong length");
    std::vector<std::optional<std::size_t>> out;
    for (const json& e : v) {
      if (e.is_null()) {
        out.emplace_back(std::nullopt);
      } else if (e.is_number_unsigned() && e.get<std::size_t>() < b.r0prime.size()) {
        out.emplace_back(e.get<std::size_t>());
      } else {
        fail(errc::parse_error, std::string("field '") + key + "' has an invalid slot");
      }
    }
    return out;
  };
  b.pp_slot = slots("pp_slot", ctx.orbit_count() * b.x.size());
  b.ppp_slot = slots("ppp_slot", b.y.size() * b.x.size());

  const json& jt = need(j, "traces");
  if (!jt.is_array()) fail(errc::parse_error, "traces must be an array");
  std::vector<SymbolRef> symbols = ctx.symbols();
  if (jt.size() != symbols.size() * symbols.size())
    fail(errc::parse_error, "there must be one trace per ordered symbol pair");
  for (std::size_t i = 0; i < jt.size(); ++i) {
    const json& e = jt[i];
    if (!e.is_object()) fail(errc::parse_error, "traces must be objects");
    reject_unknown_keys(e, {"end", "s", "start", "steps", "t"}, "a trace");
    // Trace order is fixed (s-major over the symbol list); the s/t labels are
    // redundant but must agree with the position.
    if (need_string(e, "s") != symbol_name(ctx, symbols[i / symbols.size()]) ||
        need_string(e, "t") != symbol_name(ctx, symbols[i % symbols.size()]))
      fail(errc::parse_error, "trace labels do not match the ordered-pair position");
    DerivationTrace tr;
    tr.start = raw_word_from_json(need(e, "start"), ctx);
    tr.end = raw_word_from_json(need(e, "end"), ctx);
    const json& js = need(e, "steps");
    if (!js.is_array()) fail(errc::parse_error, "trace steps must be an array");
    for (const json& st : js) tr.steps.push_back(trace_step_from_json(st, ctx, b.y));
    b.traces.push_back(std::move(tr));
  }
  return b;
}

}  // namespace eqp
