#pragma once

#include <cstdint>
#include <vector>

#include "common.hpp"
#include "permgroup.hpp"

namespace eqp {

// Letter over a flat generator id. Exponents of magnitude > 1 are expanded
// to unit steps where needed.
struct FlatLetter {
  uint32_t sym;
  int exp;
};
using FlatWord = std::vector<FlatLetter>;

// Complete coset table of a regular enumeration. Column 2s holds the image
// of a coset under generator s, column 2s+1 the image under its inverse.
class CosetTable {
 public:
  CosetTable() = default;
  CosetTable(std::size_t cosets, std::size_t symbols);

  std::size_t cosets() const { return rows_; }
  std::size_t symbols() const { return syms_; }

  uint32_t& entry(uint32_t coset, uint32_t col) { return data_[coset * 2 * syms_ + col]; }
  uint32_t entry(uint32_t coset, uint32_t col) const { return data_[coset * 2 * syms_ + col]; }
  uint32_t step(uint32_t coset, uint32_t sym, int exp) const;

 private:
  std::size_t rows_ = 0;
  std::size_t syms_ = 0;
  std::vector<uint32_t> data_;
};

struct ToddCoxeterResult {
  CosetTable table;  // table.cosets() is the order of the presented group
};

// Coset enumeration of the trivial subgroup by HLT scan-and-fill.
// Deterministic by construction: relators are scanned at the lowest live
// coset in declaration order, rows are then completed in column order,
// coincidences keep the smaller coset, and the final table is renumbered by
// definition order. Fails with cap_exceeded when more than max_cosets rows
// would be allocated.
ToddCoxeterResult todd_coxeter(std::size_t n_symbols, const std::vector<FlatWord>& relators,
                               std::size_t max_cosets = 1000000);

// One permutation of the cosets per symbol: s sends c to table entry (c, 2s).
std::vector<Permutation> regular_realization(const CosetTable& t);

// Left-to-right evaluation of a flat word through the given images.
Permutation evaluate_images(const std::vector<Permutation>& images, uint32_t degree,
                            const FlatWord& w);

bool relators_hold(const std::vector<Permutation>& images, uint32_t degree,
                   const std::vector<FlatWord>& relators);

}  // namespace eqp
