#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "common.hpp"

namespace eqp {

// A generator symbol, identified by the orbit it belongs to and a point of
// that orbit's domain. Ordering is lexicographic (orbit, point) and matches
// the global symbol enumeration order.
struct SymbolRef {
  std::uint32_t orbit = 0;
  std::uint32_t point = 0;
  friend auto operator<=>(const SymbolRef&, const SymbolRef&) = default;
};

// One letter of a word: a symbol with exponent +1 or -1.
struct Letter {
  SymbolRef sym;
  std::int8_t exp = 1;
  friend auto operator<=>(const Letter&, const Letter&) = default;
  Letter inverse() const { return Letter{sym, static_cast<std::int8_t>(-exp)}; }
};

using RawWord = std::vector<Letter>;

// Free reduction of a raw letter sequence (single stack pass).
RawWord free_reduce(const RawWord& raw);

// A word over the symbol alphabet, kept freely reduced at all times.
// Construction reduces; concat cancels across the seam.
class Word {
 public:
  Word() = default;
  explicit Word(RawWord raw) : letters_(free_reduce(raw)) {}

  const RawWord& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;

  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  RawWord letters_;
};

Word concat(const Word& a, const Word& b);

// Multiplicative extension of a symbol substitution: each letter s^e maps to
// images.at(s)^e. Throws missing_image if a symbol has no image.
Word substitute(const Word& w, const std::map<SymbolRef, Word>& images);

RawWord invert_raw(const RawWord& raw);

}  // namespace eqp
