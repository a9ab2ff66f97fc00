#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "equivariant.hpp"

namespace eqp {

// One primitive rewriting step on an unreduced letter sequence.
//  free_reduce: remove the inverse pair at (pos, pos+1).
//  free_expand: insert letter, letter^-1 at pos.
//  apply_relator: act the gamma element on r0prime[r0p_index]; forward
//  inserts the translated word at pos, backward removes it there verbatim.
struct TraceStep {
  enum class Kind { free_reduce, free_expand, apply_relator };
  Kind kind = Kind::free_reduce;
  std::size_t pos = 0;
  Letter letter{};              // free_expand only
  std::size_t gamma_elem = 0;   // apply_relator only
  std::size_t r0p_index = 0;
  bool forward = true;
};

struct DerivationTrace {
  RawWord start;
  std::vector<TraceStep> steps;
  RawWord end;
};

// Replays one step in place; malformed_step on any structural violation.
void replay_step(RawWord& w, const TraceStep& st, const std::vector<Word>& r0prime,
                 const ActionContext& ctx);

// Mechanical replay of a whole trace; true iff the replay lands on end
// exactly. Structural violations raise malformed_step.
bool check_trace(const DerivationTrace& trace, const std::vector<Word>& r0prime,
                 const ActionContext& ctx);

// Everything fixed once per deweakification run: the generating data, the
// witness table, the added relators with their slot maps, and per-orbit BFS
// parents over Y used to peel gamma words.
struct DeweakContext {
  EquivariantPresentation ep;
  Realization real;
  std::vector<SymbolRef> x;
  std::vector<std::size_t> x_of_symbol;  // linear symbol index -> position in x, or npos
  std::vector<std::size_t> y;            // gamma element indices, declaration order
  std::vector<std::vector<Word>> witnesses;             // [y][x], words over x
  std::vector<Word> r0prime;                            // dense, nontrivial only
  std::vector<std::optional<std::size_t>> pp_slot;      // [orbit * |x| + xi]
  std::vector<std::optional<std::size_t>> ppp_slot;     // [yi * |x| + xi]
  std::size_t pp_count = 0;                             // dense entries from the pp family
  std::vector<std::vector<std::size_t>> parent_letter;  // [orbit][point] -> index into y
  std::vector<std::vector<uint32_t>> parent_point;      // [orbit][point]

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Greedy generating subset of the symbols: the base symbols, then each
// further symbol in linear order that strictly enlarges the generated
// subgroup, stopping at the full order.
std::vector<SymbolRef> choose_X(const EquivariantPresentation& ep, const Realization& real);

// Declared gamma generators followed by their inverses, deduplicated,
// as element indices in declaration order.
std::vector<std::size_t> symmetric_Y(const PermGroup& gamma);

// Shortest word over x (ties: lexicographic in x order, +1 before -1) whose
// evaluation matches each conjugated symbol ^y x.
std::vector<std::vector<Word>> witness_words(const EquivariantPresentation& ep,
                                             const Realization& real,
                                             const std::vector<SymbolRef>& x,
                                             const std::vector<std::size_t>& y);

DeweakContext make_deweak_context(const EquivariantPresentation& ep,
                                  std::size_t max_cosets = 1000000);

// Trace from [u] to a word over x, by induction on the Y-length of the
// translating element: peel one letter, transport the inner trace, rewrite
// each conjugated letter through its witness relator.
DerivationTrace derive_symbol_over_x(SymbolRef u, const DeweakContext& dc);

// Trace from s t s^-1 to the single letter ^s t.
DerivationTrace derive_conjugation(SymbolRef s, SymbolRef t, const DeweakContext& dc);

struct CertificateBundle {
  std::vector<SymbolRef> x;
  std::vector<std::size_t> y;
  std::vector<std::vector<Word>> witnesses;
  std::vector<Word> r0prime;
  std::vector<std::optional<std::size_t>> pp_slot;
  std::vector<std::optional<std::size_t>> ppp_slot;
  std::vector<DerivationTrace> traces;  // ordered pairs (s, t), s-major
};

struct DeweakResult {
  EquivariantPresentation output;  // finite mode, relators r0 + r0prime
  CertificateBundle bundle;
};

DeweakResult deweakify(const EquivariantPresentation& ep, std::size_t max_cosets = 1000000);

}  // namespace eqp
