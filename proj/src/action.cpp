#include "action.hpp"

#include <deque>
#include <set>
#include <sstream>

namespace eqp {

namespace {

std::vector<uint32_t> invert_array(const std::vector<uint32_t>& a) {
  std::vector<uint32_t> inv(a.size());
  for (uint32_t p = 0; p < a.size(); ++p) inv[a[p]] = p;
  return inv;
}

}  // namespace

ActionContext::ActionContext(PermGroup gamma, std::vector<OrbitSpec> orbits)
    : gamma_(std::move(gamma)), orbits_(std::move(orbits)) {
  const auto& gens = gamma_.generators();
  for (std::size_t o = 0; o < orbits_.size(); ++o) {
    const OrbitSpec& spec = orbits_[o];
    if (spec.name.empty()) fail(errc::invalid_input, "orbit name must be nonempty");
    if (!orbit_by_name_.emplace(spec.name, o).second)
      fail(errc::invalid_input, "duplicate orbit name '" + spec.name + "'");
    if (spec.size == 0)
      fail(errc::invalid_input, "orbit '" + spec.name + "' must have at least one point");
    if (spec.base >= spec.size)
      fail(errc::point_out_of_range, "orbit '" + spec.name + "' base point out of range");
    for (const auto& [gname, arr] : spec.gen_arrays) {
      if (!gamma_.has_generator(gname))
        fail(errc::unknown_generator,
             "orbit '" + spec.name + "' names unknown generator '" + gname + "'");
      if (arr.size() != spec.size)
        fail(errc::invalid_input,
             "orbit '" + spec.name + "' action array for '" + gname + "' has wrong length");
      std::vector<char> seen(spec.size, 0);
      for (uint32_t img : arr) {
        if (img >= spec.size || seen[img])
          fail(errc::invalid_input,
               "orbit '" + spec.name + "' action array for '" + gname + "' is not a bijection");
        seen[img] = 1;
      }
    }
    for (const auto& [gname, perm] : gens)
      if (!spec.gen_arrays.count(gname))
        fail(errc::invalid_input,
             "orbit '" + spec.name + "' is missing the action array for '" + gname + "'");
    orbit_offset_.push_back(total_points_);
    total_points_ += spec.size;
  }

  const std::vector<Permutation>& elems = gamma_.enumerate_elements();
  if (!elems[0].is_identity()) fail(errc::internal, "element enumeration must start at identity");

  data_.resize(orbits_.size());
  for (std::size_t o = 0; o < orbits_.size(); ++o) {
    const OrbitSpec& spec = orbits_[o];
    OrbitData& d = data_[o];

    // Element tables by BFS over right products: table(e*g) = table(e) after a_g.
    d.elem_act.assign(elems.size(), {});
    std::vector<uint32_t> id_row(spec.size);
    for (uint32_t p = 0; p < spec.size; ++p) id_row[p] = p;
    d.elem_act[0] = std::move(id_row);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      std::size_t e = queue.front();
      queue.pop_front();
      for (const auto& [gname, gperm] : gens) {
        std::size_t f = gamma_.element_index(compose(elems[e], gperm));
        if (!d.elem_act[f].empty()) continue;
        const std::vector<uint32_t>& arr = spec.gen_arrays.at(gname);
        std::vector<uint32_t> row(spec.size);
        for (uint32_t p = 0; p < spec.size; ++p) row[p] = d.elem_act[e][arr[p]];
        d.elem_act[f] = std::move(row);
        queue.push_back(f);
      }
    }

    auto [words, order] = layered_orbit_bfs(o, spec.base);
    d.orbit_words = std::move(words);
    d.reachable.assign(spec.size, 0);
    for (uint32_t p : order) d.reachable[p] = 1;
    d.transversal.assign(spec.size, npos);
    for (uint32_t p : order) d.transversal[p] = gamma_element_of(d.orbit_words[p]);

    if (spec.iota) {
      if (spec.iota->degree() != gamma_.degree())
        fail(errc::degree_mismatch, "orbit '" + spec.name + "' iota has the wrong degree");
      if (!gamma_.contains(*spec.iota))
        fail(errc::not_in_group, "orbit '" + spec.name + "' iota is not an element of gamma");
      d.iota_seed_elem = gamma_.element_index(*spec.iota);
    }
  }
}

std::pair<std::vector<GenWord>, std::vector<uint32_t>> ActionContext::layered_orbit_bfs(
    std::size_t o, uint32_t start) const {
  const OrbitSpec& spec = orbits_.at(o);
  std::vector<std::pair<GenLetter, std::vector<uint32_t>>> letters;
  for (const auto& [gname, perm] : gamma_.generators()) {
    const std::vector<uint32_t>& arr = spec.gen_arrays.at(gname);
    letters.emplace_back(GenLetter{gname, 1}, arr);
    letters.emplace_back(GenLetter{gname, -1}, invert_array(arr));
  }

  std::vector<GenWord> words(spec.size);
  std::vector<char> seen(spec.size, 0);
  std::vector<uint32_t> order{start};
  seen[start] = 1;
  std::vector<uint32_t> layer{start};
  while (!layer.empty()) {
    std::vector<uint32_t> next;
    // Letter-major order makes first discovery the lex-least among shortest:
    // candidate words at this depth are letter + parent word, and parents are
    // already listed in lex order of their words.
    for (const auto& [letter, arr] : letters) {
      for (uint32_t p : layer) {
        uint32_t q = arr[p];
        if (seen[q]) continue;
        seen[q] = 1;
        GenWord w;
        w.reserve(words[p].size() + 1);
        w.push_back(letter);
        w.insert(w.end(), words[p].begin(), words[p].end());
        words[q] = std::move(w);
        next.push_back(q);
        order.push_back(q);
      }
    }
    layer = std::move(next);
  }
  return {std::move(words), std::move(order)};
}

std::size_t ActionContext::orbit_index(const std::string& name) const {
  auto it = orbit_by_name_.find(name);
  if (it == orbit_by_name_.end()) fail(errc::unknown_symbol, "unknown orbit '" + name + "'");
  return it->second;
}

std::vector<SymbolRef> ActionContext::symbols() const {
  std::vector<SymbolRef> out;
  out.reserve(total_points_);
  for (uint32_t o = 0; o < orbits_.size(); ++o)
    for (uint32_t p = 0; p < orbits_[o].size; ++p) out.push_back(SymbolRef{o, p});
  return out;
}

std::size_t ActionContext::symbol_linear_index(SymbolRef s) const {
  if (s.orbit >= orbits_.size() || s.point >= orbits_[s.orbit].size)
    fail(errc::unknown_symbol, "symbol out of range");
  return orbit_offset_[s.orbit] + s.point;
}

uint32_t ActionContext::act_point(std::size_t gamma_elem, std::size_t o, uint32_t p) const {
  return data_.at(o).elem_act.at(gamma_elem).at(p);
}

SymbolRef ActionContext::act_symbol(std::size_t gamma_elem, SymbolRef s) const {
  return SymbolRef{s.orbit, act_point(gamma_elem, s.orbit, s.point)};
}

RawWord ActionContext::act_raw(std::size_t gamma_elem, const RawWord& w) const {
  RawWord out;
  out.reserve(w.size());
  for (const Letter& l : w) out.push_back(Letter{act_symbol(gamma_elem, l.sym), l.exp});
  return out;
}

Word ActionContext::act_word(std::size_t gamma_elem, const Word& w) const {
  return Word(act_raw(gamma_elem, w.letters()));
}

std::size_t ActionContext::gamma_element_of(const GenWord& gw) const {
  return gamma_.element_index(gamma_.evaluate(gw));
}

bool ActionContext::check_action_well_defined(std::string* msg) const {
  const std::vector<Permutation>& elems = gamma_.enumerate_elements();
  for (std::size_t o = 0; o < orbits_.size(); ++o) {
    const OrbitSpec& spec = orbits_[o];
    const OrbitData& d = data_[o];
    for (std::size_t e = 0; e < elems.size(); ++e) {
      for (const auto& [gname, gperm] : gamma_.generators()) {
        std::size_t f = gamma_.element_index(compose(elems[e], gperm));
        const std::vector<uint32_t>& arr = spec.gen_arrays.at(gname);
        for (uint32_t p = 0; p < spec.size; ++p) {
          if (d.elem_act[f][p] != d.elem_act[e][arr[p]]) {
            if (msg) {
              std::ostringstream os;
              os << "orbit '" << spec.name << "': generator '" << gname
                 << "' does not act compatibly with the group relations"
                 << " (element #" << e << ", point " << p << ")";
              *msg = os.str();
            }
            return false;
          }
        }
      }
    }
  }
  return true;
}

bool ActionContext::orbit_transitive(std::size_t o) const {
  for (char r : data_.at(o).reachable)
    if (!r) return false;
  return true;
}

const GenWord& ActionContext::orbit_word(std::size_t o, uint32_t p) const {
  const OrbitData& d = data_.at(o);
  if (p >= d.reachable.size() || !d.reachable[p])
    fail(errc::point_out_of_range, "orbit '" + orbits_[o].name + "' point " +
                                       std::to_string(p) + " is not reachable from the base point");
  return d.orbit_words[p];
}

std::size_t ActionContext::transversal_element(std::size_t o, uint32_t p) const {
  orbit_word(o, p);  // reachability check
  return data_[o].transversal[p];
}

std::size_t ActionContext::iota_element(std::size_t o, uint32_t p) const {
  const OrbitData& d = data_.at(o);
  if (!d.iota_seed_elem)
    fail(errc::missing_image, "orbit '" + orbits_[o].name + "' has no declared group element");
  const std::vector<Permutation>& elems = gamma_.enumerate_elements();
  const Permutation& t = elems[transversal_element(o, p)];
  const Permutation& seed = elems[*d.iota_seed_elem];
  return gamma_.element_index(compose(compose(t, seed), inverse(t)));
}

std::vector<std::size_t> ActionContext::stabilizer_elements(std::size_t o, uint32_t p) const {
  const OrbitSpec& spec = orbits_.at(o);
  if (p >= spec.size) fail(errc::point_out_of_range, "stabilizer point out of range");
  auto [words, order] = layered_orbit_bfs(o, p);
  const std::vector<Permutation>& elems = gamma_.enumerate_elements();
  std::vector<std::size_t> trans(spec.size, npos);
  for (uint32_t q : order) trans[q] = gamma_element_of(words[q]);

  std::vector<std::size_t> out;
  std::set<std::size_t> seen;
  for (uint32_t x : order) {
    for (const auto& [gname, gperm] : gamma_.generators()) {
      uint32_t y = spec.gen_arrays.at(gname)[x];
      Permutation u =
          compose(compose(inverse(elems[trans[y]]), gperm), elems[trans[x]]);
      std::size_t idx = gamma_.element_index(u);
      if (idx == 0) continue;
      if (seen.insert(idx).second) out.push_back(idx);
    }
  }
  return out;
}

}  // namespace eqp
