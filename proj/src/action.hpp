#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "permgroup.hpp"
#include "word.hpp"

namespace eqp {

// One orbit of generator symbols. Points are 0..size-1; gen_arrays[g][p] is
// the point of the symbol conjugated by the gamma generator g. base is the
// distinguished representative; iota, when present, is the gamma element
// assigned to the base symbol.
struct OrbitSpec {
  std::string name;
  uint32_t size = 0;
  uint32_t base = 0;
  std::map<std::string, std::vector<uint32_t>> gen_arrays;
  std::optional<Permutation> iota;
};

// Precomputed action of a fully enumerated gamma on the generator symbols.
//
// Convention: gamma words act with letters processed right to left, so that
// act(uv) = act(u) composed after act(v). Element tables are built by BFS
// from the identity; check_action_well_defined verifies the tables are
// consistent for every (element, generator) pair, which makes the table a
// genuine homomorphism from gamma into the symmetric group on each orbit.
class ActionContext {
 public:
  ActionContext(PermGroup gamma, std::vector<OrbitSpec> orbits);

  const PermGroup& gamma() const { return gamma_; }
  std::size_t gamma_order() const { return gamma_.order(); }

  std::size_t orbit_count() const { return orbits_.size(); }
  const OrbitSpec& orbit(std::size_t o) const { return orbits_.at(o); }
  uint32_t orbit_size(std::size_t o) const { return orbits_.at(o).size; }
  const std::string& orbit_name(std::size_t o) const { return orbits_.at(o).name; }
  std::size_t orbit_index(const std::string& name) const;

  // All symbols, orbit index ascending then point ascending. The linear
  // index of (o, p) in this list is used for matrix columns downstream.
  std::vector<SymbolRef> symbols() const;
  std::size_t symbol_count() const { return total_points_; }
  std::size_t symbol_linear_index(SymbolRef s) const;

  uint32_t act_point(std::size_t gamma_elem, std::size_t o, uint32_t p) const;
  SymbolRef act_symbol(std::size_t gamma_elem, SymbolRef s) const;
  RawWord act_raw(std::size_t gamma_elem, const RawWord& w) const;
  Word act_word(std::size_t gamma_elem, const Word& w) const;

  // Index of the gamma element named by a word over the declared generators.
  std::size_t gamma_element_of(const GenWord& gw) const;

  // True when the per-element tables satisfy the compatibility relation for
  // every enumerated element and declared generator. On failure, *msg (when
  // non-null) describes the first violation found.
  bool check_action_well_defined(std::string* msg = nullptr) const;

  uint32_t orbit_base(std::size_t o) const { return orbits_.at(o).base; }

  // True when every point of the orbit is reachable from the base point.
  bool orbit_transitive(std::size_t o) const;

  // Lex-least shortest gamma word w with act(w) taking the base point to p,
  // where letters range over (g,+1),(g,-1) in generator declaration order.
  // Words have the prefix-peeling property: orbit_word(p) = l + orbit_word(p')
  // with act(l) taking p' to p. Fails for unreachable points.
  const GenWord& orbit_word(std::size_t o, uint32_t p) const;
  std::size_t transversal_element(std::size_t o, uint32_t p) const;

  bool has_iota(std::size_t o) const { return orbits_.at(o).iota.has_value(); }
  // iota extended over the orbit: t_p * iota(base) * t_p^-1.
  std::size_t iota_element(std::size_t o, uint32_t p) const;

  // Schreier generators of the stabilizer of point p in its orbit, as gamma
  // element indices, identity dropped, deduplicated, discovery order.
  std::vector<std::size_t> stabilizer_elements(std::size_t o, uint32_t p) const;

 private:
  struct OrbitData {
    std::vector<std::vector<uint32_t>> elem_act;  // [gamma elem][point]
    std::vector<GenWord> orbit_words;             // from point 0; unreachable empty
    std::vector<std::size_t> transversal;         // gamma elem index; npos unreachable
    std::vector<char> reachable;
    std::optional<std::size_t> iota_seed_elem;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Words plus points in discovery order.
  std::pair<std::vector<GenWord>, std::vector<uint32_t>> layered_orbit_bfs(std::size_t o,
                                                                           uint32_t start) const;

  PermGroup gamma_;
  std::vector<OrbitSpec> orbits_;
  std::vector<OrbitData> data_;
  std::map<std::string, std::size_t> orbit_by_name_;
  std::vector<std::size_t> orbit_offset_;
  std::size_t total_points_ = 0;
};

}  // namespace eqp
