#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <map>
#include <vector>

#include "common.hpp"

namespace eqp {

using Int = boost::multiprecision::cpp_int;

// Dense integer matrix, row-major, arbitrary-precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  static IntMatrix identity(std::size_t n);
  std::vector<Int> row(std::size_t i) const;
  std::vector<Int> col(std::size_t j) const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b);
std::vector<Int> matvec(const IntMatrix& a, const std::vector<Int>& x);

// Smith normal form U*A*V = D with U, V unimodular and D diagonal with
// d_1 | d_2 | ... | d_r > 0 followed by zeros. diag lists only the nonzero
// invariant factors; rank = diag.size(). Transforms and their inverses are
// accumulated only when requested.
struct SmithForm {
  std::vector<Int> diag;
  std::size_t rank = 0;
  IntMatrix u, uinv, v, vinv;
  bool has_transforms = false;
};

SmithForm smith_normal_form(IntMatrix a, bool want_transforms = false);

// Basis of {x : A x = 0} as matrix columns (n x (n - rank)), from the
// trailing columns of the Smith V transform.
IntMatrix kernel_basis(const IntMatrix& a, const SmithForm& sf);

// Coordinates of a kernel vector in the kernel_basis columns; throws internal
// if x is not in the kernel.
std::vector<Int> kernel_coordinates(const SmithForm& sf, const std::vector<Int>& x);

// Row-span lattice of integer vectors in echelon form, supporting incremental
// insertion, membership, and a canonical Hermite-form snapshot. Pivot leading
// entries are positive; insertion keeps the echelon property.
class RowLattice {
 public:
  RowLattice() = default;
  explicit RowLattice(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return pivots_.size(); }

  // Inserts the vector; returns true iff the lattice strictly grew.
  bool add(std::vector<Int> row);
  bool contains(const std::vector<Int>& row) const;

  // True iff the lattice is all of Z^cols.
  bool is_full() const;

  // Canonical Hermite normal form rows (sorted by pivot column, entries above
  // each pivot reduced into [0, pivot)).
  std::vector<std::vector<Int>> canonical_rows() const;

 private:
  std::size_t cols_ = 0;
  std::map<std::size_t, std::vector<Int>> pivots_;  // pivot column -> row
};

bool lattices_equal(const RowLattice& a, const RowLattice& b);

// Invariant factors (nonzero, divisibility chain) of Z^cols / rowspan(rows),
// together with the free rank of the quotient.
struct QuotientStructure {
  std::vector<Int> invariant_factors;  // factors > 1 only
  std::size_t free_rank = 0;
};

QuotientStructure quotient_structure(const std::vector<std::vector<Int>>& rows, std::size_t cols);

}  // namespace eqp
