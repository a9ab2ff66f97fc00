#include "intmatrix.hpp"

#include <algorithm>
#include <utility>

namespace eqp {

namespace {

// gcd g = x*a + y*b with g >= 0.
void extgcd(Int a, Int b, Int& g, Int& x, Int& y) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = std::exchange(b, r);
    Int nx = x0 - q * x1;
    x0 = std::exchange(x1, nx);
    Int ny = y0 - q * y1;
    y0 = std::exchange(y1, ny);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  g = a;
  x = x0;
  y = y0;
}

Int floordiv(const Int& a, const Int& b) {
  Int q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
  std::vector<Int> r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

std::vector<Int> IntMatrix::col(std::size_t j) const {
  std::vector<Int> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) fail(errc::internal, "matmul: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

std::vector<Int> matvec(const IntMatrix& a, const std::vector<Int>& x) {
  if (a.cols() != x.size()) fail(errc::internal, "matvec: shape mismatch");
  std::vector<Int> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != 0 && x[j] != 0) y[i] += a.at(i, j) * x[j];
  return y;
}

SmithForm smith_normal_form(IntMatrix a, bool want_transforms) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm sf;
  sf.has_transforms = want_transforms;
  if (want_transforms) {
    sf.u = IntMatrix::identity(m);
    sf.uinv = IntMatrix::identity(m);
    sf.v = IntMatrix::identity(n);
    sf.vinv = IntMatrix::identity(n);
  }

  // Elementary operations applied consistently to a, U, Uinv, V, Vinv so the
  // invariant a_current = U * a_original * V holds throughout.
  auto row_axpy = [&](std::size_t i, std::size_t k, const Int& q) {  // row_i -= q*row_k
    for (std::size_t j = 0; j < n; ++j) a.at(i, j) -= q * a.at(k, j);
    if (want_transforms) {
      for (std::size_t j = 0; j < m; ++j) sf.u.at(i, j) -= q * sf.u.at(k, j);
      for (std::size_t r = 0; r < m; ++r) sf.uinv.at(r, k) += q * sf.uinv.at(r, i);
    }
  };
  auto col_axpy = [&](std::size_t j, std::size_t k, const Int& q) {  // col_j -= q*col_k
    for (std::size_t i = 0; i < m; ++i) a.at(i, j) -= q * a.at(i, k);
    if (want_transforms) {
      for (std::size_t r = 0; r < n; ++r) sf.v.at(r, j) -= q * sf.v.at(r, k);
      for (std::size_t c = 0; c < n; ++c) sf.vinv.at(k, c) += q * sf.vinv.at(j, c);
    }
  };
  auto row_swap = [&](std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(a.at(i, j), a.at(k, j));
    if (want_transforms) {
      for (std::size_t j = 0; j < m; ++j) std::swap(sf.u.at(i, j), sf.u.at(k, j));
      for (std::size_t r = 0; r < m; ++r) std::swap(sf.uinv.at(r, i), sf.uinv.at(r, k));
    }
  };
  auto col_swap = [&](std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(a.at(i, j), a.at(i, k));
    if (want_transforms) {
      for (std::size_t r = 0; r < n; ++r) std::swap(sf.v.at(r, j), sf.v.at(r, k));
      for (std::size_t c = 0; c < n; ++c) std::swap(sf.vinv.at(j, c), sf.vinv.at(k, c));
    }
  };
  auto row_negate = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) a.at(i, j) = -a.at(i, j);
    if (want_transforms) {
      for (std::size_t j = 0; j < m; ++j) sf.u.at(i, j) = -sf.u.at(i, j);
      for (std::size_t r = 0; r < m; ++r) sf.uinv.at(r, i) = -sf.uinv.at(r, i);
    }
  };

  std::size_t t = 0;
  while (t < m && t < n) {
    // Deterministic pivot: smallest nonzero absolute value, ties broken by
    // row-major position in the trailing submatrix.
    std::size_t pi = m, pj = n;
    Int best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const Int& x = a.at(i, j);
        if (x == 0) continue;
        Int ax = x < 0 ? Int(-x) : x;
        if (pi == m || ax < best) {
          best = ax;
          pi = i;
          pj = j;
        }
      }
    if (pi == m) break;  // trailing submatrix is zero
    row_swap(t, pi);
    col_swap(t, pj);

    for (;;) {
      bool restart = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a.at(i, t) == 0) continue;
        Int q = a.at(i, t) / a.at(t, t);
        if (q != 0) row_axpy(i, t, q);
        if (a.at(i, t) != 0) {
          row_swap(t, i);
          restart = true;
          break;
        }
      }
      if (restart) continue;
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a.at(t, j) == 0) continue;
        Int q = a.at(t, j) / a.at(t, t);
        if (q != 0) col_axpy(j, t, q);
        if (a.at(t, j) != 0) {
          col_swap(t, j);
          restart = true;
          break;
        }
      }
      if (restart) continue;
      // Row and column cleared; force the pivot to divide the rest so the
      // diagonal comes out as a divisibility chain.
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n && !fixed; ++j)
          if (a.at(i, j) % a.at(t, t) != 0) {
            row_axpy(t, i, Int(-1));
            fixed = true;
          }
      if (!fixed) break;
    }
    if (a.at(t, t) < 0) row_negate(t);
    ++t;
  }

  for (std::size_t i = 0; i < t; ++i) sf.diag.push_back(a.at(i, i));
  sf.rank = t;
  return sf;
}

IntMatrix kernel_basis(const IntMatrix& a, const SmithForm& sf) {
  if (!sf.has_transforms) fail(errc::internal, "kernel_basis needs transforms");
  const std::size_t n = a.cols();
  IntMatrix k(n, n - sf.rank);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = sf.rank; j < n; ++j) k.at(i, j - sf.rank) = sf.v.at(i, j);
  return k;
}

std::vector<Int> kernel_coordinates(const SmithForm& sf, const std::vector<Int>& x) {
  if (!sf.has_transforms) fail(errc::internal, "kernel_coordinates needs transforms");
  std::vector<Int> y = matvec(sf.vinv, x);
  for (std::size_t i = 0; i < sf.rank; ++i)
    if (y[i] != 0) fail(errc::internal, "kernel_coordinates: vector is not in the kernel");
  return std::vector<Int>(y.begin() + static_cast<std::ptrdiff_t>(sf.rank), y.end());
}

bool RowLattice::add(std::vector<Int> row) {
  if (row.size() != cols_) fail(errc::internal, "RowLattice::add: width mismatch");
  bool grew = false;
  std::size_t c = 0;
  for (;;) {
    while (c < cols_ && row[c] == 0) ++c;
    if (c == cols_) return grew;
    auto it = pivots_.find(c);
    if (it == pivots_.end()) {
      if (row[c] < 0)
        for (Int& x : row) x = -x;
      pivots_.emplace(c, std::move(row));
      return true;
    }
    std::vector<Int>& p = it->second;
    if (row[c] % p[c] == 0) {
      Int q = row[c] / p[c];
      for (std::size_t j = c; j < cols_; ++j) row[j] -= q * p[j];
    } else {
      grew = true;
      Int g, x, y;
      extgcd(p[c], row[c], g, x, y);
      Int lg = p[c] / g, rg = row[c] / g;
      std::vector<Int> newp(cols_);
      for (std::size_t j = c; j < cols_; ++j) {
        newp[j] = x * p[j] + y * row[j];
        Int nr = lg * row[j] - rg * p[j];
        row[j] = std::move(nr);
      }
      p = std::move(newp);
    }
  }
}

bool RowLattice::contains(const std::vector<Int>& vec) const {
  if (vec.size() != cols_) fail(errc::internal, "RowLattice::contains: width mismatch");
  std::vector<Int> row = vec;
  std::size_t c = 0;
  for (;;) {
    while (c < cols_ && row[c] == 0) ++c;
    if (c == cols_) return true;
    auto it = pivots_.find(c);
    if (it == pivots_.end()) return false;
    const std::vector<Int>& p = it->second;
    if (row[c] % p[c] != 0) return false;
    Int q = row[c] / p[c];
    for (std::size_t j = c; j < cols_; ++j) row[j] -= q * p[j];
  }
}

bool RowLattice::is_full() const {
  if (pivots_.size() != cols_) return false;
  for (const auto& [c, row] : pivots_)
    if (row[c] != 1) return false;
  return true;
}

std::vector<std::vector<Int>> RowLattice::canonical_rows() const {
  std::vector<std::size_t> cols;
  std::vector<std::vector<Int>> rows;
  for (const auto& [c, row] : pivots_) {
    cols.push_back(c);
    rows.push_back(row);
  }
  // Reduce entries above each pivot into [0, pivot).
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t r = 0; r < k; ++r) {
      Int q = floordiv(rows[r][cols[k]], rows[k][cols[k]]);
      if (q == 0) continue;
      for (std::size_t j = cols[k]; j < cols_; ++j) rows[r][j] -= q * rows[k][j];
    }
  }
  return rows;
}

bool lattices_equal(const RowLattice& a, const RowLattice& b) {
  return a.canonical_rows() == b.canonical_rows();
}

QuotientStructure quotient_structure(const std::vector<std::vector<Int>>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(errc::internal, "quotient_structure: width mismatch");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  }
  SmithForm sf = smith_normal_form(std::move(m), false);
  QuotientStructure q;
  for (const Int& d : sf.diag)
    if (d > 1) q.invariant_factors.push_back(d);
  q.free_rank = cols - sf.rank;
  return q;
}

}  // namespace eqp
