#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "equivariant.hpp"
#include "intmatrix.hpp"

namespace eqp {

struct HomologyOptions {
  std::size_t max_cosets = 1000000;
  std::size_t max_group = 360;
  std::size_t max_symbols = 12;
  std::size_t max_kernel_rank = 2500;
};

struct AbelianInvariants {
  std::vector<Int> factors;  // invariant factors > 1, divisibility chain
  std::size_t free_rank = 0;
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

// Exponent-sum matrix of the relators, one row per relator.
IntMatrix exponent_matrix(std::size_t n_symbols, const std::vector<FlatWord>& relators);

// Invariant factors of the abelianized presentation.
AbelianInvariants abelianization(std::size_t n_symbols, const std::vector<FlatWord>& relators);

// Boundary of the augmented Cayley chain complex: column (g,s) at index
// g*|S|+s maps to (g*s) - g in the group basis (rows in element order).
IntMatrix boundary1(const PermGroup& G, const std::vector<Permutation>& images);

// The 1-cycle traced by walking a relator from the identity: one +-1 edge
// entry per unit letter, in boundary1's column indexing.
std::vector<Int> relator_cycle(const PermGroup& G, const std::vector<Permutation>& images,
                               const FlatWord& relator);

// Kernel of boundary1 (the abelianized relation module K) together with the
// lattice of coinvariant relations (g-1)K expressed in kernel coordinates,
// and the matrices of the generator actions on those coordinates.
struct RelationModuleCoinv {
  SmithForm snf1;                    // of boundary1, with transforms
  IntMatrix kernel;                  // columns: basis of K, ambient coordinates
  IntMatrix kernel_rows;             // trailing rows of vinv: ambient -> K coordinates
  std::size_t k = 0;                 // rank of K
  std::vector<IntMatrix> gen_action; // per symbol: K-coordinate action matrix
  RowLattice coinv;                  // relations presenting K_G = Z^k / coinv
};

RelationModuleCoinv relation_module_coinvariants(const PermGroup& G,
                                                 const std::vector<Permutation>& images,
                                                 const HomologyOptions& opts = {});

// K coordinates of an ambient kernel vector (fails if not in the kernel).
std::vector<Int> kernel_coords(const RelationModuleCoinv& rmc, const std::vector<Int>& ambient);

// phi: K_G -> Z^S, summing the group coordinates of each symbol. |S| x k.
IntMatrix phi_matrix(const RelationModuleCoinv& rmc, std::size_t n_symbols);

// H2 = ker(phi on K_G) = W/L with W the integer kernel of phi and L the
// coinvariant relations. Generators are the columns of uinv at positions
// whose invariant factor exceeds 1; moduli are those factors.
struct H2Result {
  std::vector<Int> factors;                      // moduli, divisibility chain
  std::vector<std::vector<Int>> reps_k;          // generators in K coordinates
  std::vector<std::vector<Int>> reps_ambient;    // the same, ambient coordinates
  IntMatrix w_basis;                             // k x w kernel of phi
  SmithForm snf_phi;                             // with transforms
  SmithForm snf_rel;                             // of (relations in W coords)^T
  std::vector<std::size_t> kept;                 // positions with factor > 1
};

H2Result h2(const RelationModuleCoinv& rmc, std::size_t n_symbols);

// Coordinates of a K-coordinate kernel-of-phi vector in the H2 generators,
// reduced modulo the factors.
std::vector<Int> h2_coords(const H2Result& h, const std::vector<Int>& kcoords);

// Automorphism of G induced by sending symbol s to symbol symbol_map[s],
// as an index map on the element enumeration. Built by BFS and verified on
// every (element, symbol) product; fails with action_not_well_defined.
std::vector<std::size_t> induced_automorphism(const PermGroup& G,
                                              const std::vector<Permutation>& images,
                                              const std::vector<uint32_t>& symbol_map);

// Per-gamma-generator data of the induced H2 action.
struct GammaH2Action {
  std::vector<std::string> gen_names;
  std::vector<IntMatrix> matrices;      // entries reduced mod the row's factor
  std::vector<IntMatrix> k_matrices;    // action on K coordinates (for tests)
};

GammaH2Action gamma_action_on_h2(const EquivariantPresentation& ep, const Realization& real,
                                 const RelationModuleCoinv& rmc, const H2Result& h);

// K-coordinate action matrix of one gamma element (by enumeration index).
IntMatrix gamma_element_k_matrix(const EquivariantPresentation& ep, const Realization& real,
                                 const RelationModuleCoinv& rmc, std::size_t gamma_elem);

// H2 action matrices for every enumerated gamma element, by BFS products of
// the generator matrices, entries reduced mod the factors.
std::vector<IntMatrix> gamma_element_matrices(const PermGroup& gamma,
                                              const GammaH2Action& action,
                                              const std::vector<Int>& factors);

// Minimal number of gamma-module generators of H2, with one witness set of
// generating classes in H2 coordinates. Small modules are searched
// exhaustively (subsets in enumeration order, so the result is canonical);
// past the work budget the basis-vector greedy supplies an upper bound
// instead. The span test seeds the moduli relations and closes each
// candidate under every element matrix.
struct GenerationResult {
  std::size_t rank = 0;
  bool exact = true;
  std::vector<std::vector<Int>> chosen;
};

GenerationResult gamma_generation_rank(const std::vector<Int>& factors,
                                       const std::vector<IntMatrix>& element_matrices);

struct FiveTermDiagnostics {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const CheckResult& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

FiveTermDiagnostics five_term_check(const EquivariantPresentation& ep,
                                    const HomologyOptions& opts = {});

// Independent H2 computation from the normalized bar resolution. Exact: the
// image lattice is processed per prime p | |G| modulo p^v_p(|G|) (group
// homology of G is annihilated by |G|), with a final dense Smith pass per
// prime and CRT reassembly; rational rank and mod-p dimensions are
// cross-checked internally.
std::vector<Int> bar_h2_oracle(const PermGroup& G, std::size_t max_order = 24);

// Everything the CLI h2 command reports.
struct HomologyReport {
  std::size_t group_order = 0;
  AbelianInvariants h1;
  std::vector<Int> h2_factors;
  std::vector<std::vector<Int>> h2_representatives;  // ambient coordinates
  GammaH2Action action;
  GenerationResult generation;
  FiveTermDiagnostics diagnostics;
};

HomologyReport homology_report(const EquivariantPresentation& ep, const HomologyOptions& opts = {});

}  // namespace eqp
