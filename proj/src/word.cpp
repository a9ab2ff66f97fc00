#include "word.hpp"

namespace eqp {

RawWord free_reduce(const RawWord& raw) {
  RawWord out;
  out.reserve(raw.size());
  for (const Letter& l : raw) {
    if (l.exp != 1 && l.exp != -1) fail(errc::invalid_input, "letter exponent must be +1 or -1");
    if (!out.empty() && out.back().sym == l.sym && out.back().exp == -l.exp) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

RawWord invert_raw(const RawWord& raw) {
  RawWord out;
  out.reserve(raw.size());
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) out.push_back(it->inverse());
  return out;
}

Word Word::inverse() const {
  // Reversal of a reduced word is reduced; skip the reduction pass.
  Word w;
  w.letters_ = invert_raw(letters_);
  return w;
}

Word concat(const Word& a, const Word& b) {
  RawWord raw = a.letters();
  raw.insert(raw.end(), b.letters().begin(), b.letters().end());
  return Word(std::move(raw));
}

Word substitute(const Word& w, const std::map<SymbolRef, Word>& images) {
  RawWord raw;
  for (const Letter& l : w.letters()) {
    auto it = images.find(l.sym);
    if (it == images.end()) fail(errc::missing_image, "substitute: symbol has no image");
    const RawWord& img = it->second.letters();
    if (l.exp == 1) {
      raw.insert(raw.end(), img.begin(), img.end());
    } else {
      RawWord inv = invert_raw(img);
      raw.insert(raw.end(), inv.begin(), inv.end());
    }
  }
  return Word(std::move(raw));
}

}  // namespace eqp
