#include "presentation.hpp"

#include <limits>
#include <utility>

namespace eqp {

namespace {

constexpr uint32_t UNDEF = std::numeric_limits<uint32_t>::max();

// Working state of an HLT enumeration. Cosets are union-find classes; merges
// always keep the smaller id, so coset 0 survives to the end.
struct Enumerator {
  std::size_t nsyms;
  std::size_t cap;
  std::vector<uint32_t> table;  // rows_ * 2*nsyms, UNDEF for empty
  std::vector<uint32_t> parent;
  std::vector<uint32_t> dead_queue;

  explicit Enumerator(std::size_t n_symbols, std::size_t max_cosets)
      : nsyms(n_symbols), cap(max_cosets) {
    new_coset();
  }

  std::size_t rows() const { return parent.size(); }
  uint32_t& at(uint32_t c, uint32_t col) { return table[c * 2 * nsyms + col]; }

  uint32_t new_coset() {
    if (rows() >= cap) fail(errc::cap_exceeded, "coset limit exceeded");
    parent.push_back(static_cast<uint32_t>(rows()));
    table.resize(table.size() + 2 * nsyms, UNDEF);
    return parent.back();
  }

  uint32_t find(uint32_t c) {
    uint32_t r = c;
    while (parent[r] != r) r = parent[r];
    while (parent[c] != r) c = std::exchange(parent[c], r);
    return r;
  }
  bool live(uint32_t c) { return parent[c] == c; }

  void merge(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    dead_queue.push_back(b);
  }

  // Queue-draining coincidence processing. Rows of dead cosets are migrated
  // entry by entry; mirror entries are erased and reconnected through the
  // surviving representatives, queueing further merges on conflicts.
  void coincidence(uint32_t a, uint32_t b) {
    dead_queue.clear();
    merge(a, b);
    for (std::size_t ql = 0; ql < dead_queue.size(); ++ql) {
      uint32_t y = dead_queue[ql];
      for (uint32_t col = 0; col < 2 * nsyms; ++col) {
        uint32_t d = at(y, col);
        if (d == UNDEF) continue;
        at(d, col ^ 1) = UNDEF;
        uint32_t mu = find(y), nu = find(d);
        if (at(mu, col) != UNDEF) {
          merge(nu, find(at(mu, col)));
        } else if (at(nu, col ^ 1) != UNDEF) {
          merge(mu, find(at(nu, col ^ 1)));
        } else {
          at(mu, col) = nu;
          at(nu, col ^ 1) = mu;
        }
      }
    }
  }

  // Scan the relator (as unit-step columns) at coset c, filling the gap and
  // closing with a deduction or a coincidence.
  void scan_and_fill(uint32_t c, const std::vector<uint32_t>& cols) {
    uint32_t f = c, b = c;
    std::size_t i = 0, j = cols.size();
    while (i < j && at(f, cols[i]) != UNDEF) f = at(f, cols[i]), ++i;
    while (j > i && at(b, cols[j - 1] ^ 1) != UNDEF) b = at(b, cols[j - 1] ^ 1), --j;
    if (i == j) {
      if (f != b) coincidence(f, b);
      return;
    }
    while (i < j - 1) {
      uint32_t d = new_coset();
      at(f, cols[i]) = d;
      at(d, cols[i] ^ 1) = f;
      f = d;
      ++i;
    }
    at(f, cols[i]) = b;
    at(b, cols[i] ^ 1) = f;
  }
};

std::vector<uint32_t> relator_columns(std::size_t n_symbols, const FlatWord& w) {
  std::vector<uint32_t> cols;
  for (const FlatLetter& l : w) {
    if (l.sym >= n_symbols) fail(errc::unknown_symbol, "relator names an unknown generator");
    if (l.exp == 0) fail(errc::invalid_input, "relator letter with zero exponent");
    uint32_t col = 2 * l.sym + (l.exp > 0 ? 0 : 1);
    for (int k = 0; k < (l.exp > 0 ? l.exp : -l.exp); ++k) cols.push_back(col);
  }
  return cols;
}

}  // namespace

CosetTable::CosetTable(std::size_t cosets, std::size_t symbols)
    : rows_(cosets), syms_(symbols), data_(cosets * 2 * symbols, UNDEF) {}

uint32_t CosetTable::step(uint32_t coset, uint32_t sym, int exp) const {
  if (coset >= rows_ || sym >= syms_) fail(errc::internal, "coset table access out of range");
  return entry(coset, 2 * sym + (exp > 0 ? 0 : 1));
}

ToddCoxeterResult todd_coxeter(std::size_t n_symbols, const std::vector<FlatWord>& relators,
                               std::size_t max_cosets) {
  std::vector<std::vector<uint32_t>> rel_cols;
  rel_cols.reserve(relators.size());
  for (const FlatWord& r : relators) rel_cols.push_back(relator_columns(n_symbols, r));

  Enumerator en(n_symbols, max_cosets);
  for (uint32_t c = 0; c < en.rows(); ++c) {
    if (!en.live(c)) continue;
    for (const auto& cols : rel_cols) {
      en.scan_and_fill(c, cols);
      if (!en.live(c)) break;
    }
    if (!en.live(c)) continue;
    for (uint32_t col = 0; col < 2 * n_symbols; ++col) {
      if (en.at(c, col) != UNDEF) continue;
      uint32_t d = en.new_coset();
      en.at(c, col) = d;
      en.at(d, col ^ 1) = c;
    }
  }

  std::vector<uint32_t> renum(en.rows(), UNDEF);
  uint32_t live_count = 0;
  for (uint32_t c = 0; c < en.rows(); ++c)
    if (en.live(c)) renum[c] = live_count++;

  CosetTable t(live_count, n_symbols);
  for (uint32_t c = 0; c < en.rows(); ++c) {
    if (!en.live(c)) continue;
    for (uint32_t col = 0; col < 2 * n_symbols; ++col) {
      uint32_t d = en.at(c, col);
      if (d == UNDEF) fail(errc::internal, "coset enumeration left an incomplete row");
      t.entry(renum[c], col) = renum[en.find(d)];
    }
  }

  // Closure check: every relator must trace back to its base coset.
  for (uint32_t c = 0; c < live_count; ++c) {
    for (const auto& cols : rel_cols) {
      uint32_t x = c;
      for (uint32_t col : cols) x = t.entry(x, col);
      if (x != c) fail(errc::internal, "coset table is not closed under a relator");
    }
  }
  return ToddCoxeterResult{std::move(t)};
}

std::vector<Permutation> regular_realization(const CosetTable& t) {
  std::vector<Permutation> out;
  out.reserve(t.symbols());
  for (uint32_t s = 0; s < t.symbols(); ++s) {
    std::vector<uint32_t> img(t.cosets());
    for (uint32_t c = 0; c < t.cosets(); ++c) img[c] = t.step(c, s, 1);
    out.push_back(make_permutation(std::move(img)));
  }
  return out;
}

Permutation evaluate_images(const std::vector<Permutation>& images, uint32_t degree,
                            const FlatWord& w) {
  Permutation p = Permutation::identity(degree);
  for (const FlatLetter& l : w) {
    if (l.sym >= images.size()) fail(errc::unknown_symbol, "word names an unknown generator");
    if (l.exp == 0) fail(errc::invalid_input, "word letter with zero exponent");
    const Permutation& g = images[l.sym];
    Permutation gi = l.exp > 0 ? g : inverse(g);
    for (int k = 0; k < (l.exp > 0 ? l.exp : -l.exp); ++k) p = compose(p, gi);
  }
  return p;
}

bool relators_hold(const std::vector<Permutation>& images, uint32_t degree,
                   const std::vector<FlatWord>& relators) {
  for (const FlatWord& r : relators)
    if (!evaluate_images(images, degree, r).is_identity()) return false;
  return true;
}

}  // namespace eqp
