#pragma once

#include <string>

#include "deweak.hpp"
#include "homology.hpp"

namespace eqp {

// Word grammar:
//   word   := term*            (terms separated by whitespace)
//   term   := atom ('^' int)?  (the caret binds tightly, no space before it)
//   atom   := SYMBOL | '(' word ')' | '[' word ',' word ']'
//   SYMBOL := orbitname '.' digits
// [a,b] is sugar for a b a^-1 b^-1. Exponents expand to letter runs.
Word parse_word(const std::string& text, const ActionContext& ctx);
std::string print_word(const Word& w, const ActionContext& ctx);

// Single letters, for the unreduced words inside certificates.
Letter parse_letter(const std::string& text, const ActionContext& ctx);
std::string print_letter(const Letter& l, const ActionContext& ctx);

// Words over the gamma generators, e.g. "c^-1 t".
GenWord parse_gamma_word(const std::string& text);
std::string print_gamma_word(const GenWord& gw);

// Presentation files: JSON with fields name, mode ("finite" | "weak"),
// gamma {degree, generators}, orbits [{rep_name, domain_size, base_point,
// action}], relators, and (weak mode only) iota keyed by base symbol name.
// Every permutation array must be a bijection; orbit actions must list
// exactly the declared gamma generators.
EquivariantPresentation load_presentation(const std::string& json_text);
std::string save_presentation(const EquivariantPresentation& ep);

// Built-in example presentations:
//   z2sum n    (n = 2..4)  one orbit of n involutions, pairwise commuting
//   star n     (n = 3..4)  transposition star presentation of Sym_{n+1}
//   hyperoct n (n = 2..3)  weak mode: diagonal sign subgroup of the
//                          shift-and-flip group on n signed letters
EquivariantPresentation builtin(const std::string& name, int n);

// Reports. JSON, sorted keys, two-space indent, trailing newline; no
// wall-clock data, so identical inputs serialize identically.
std::string validation_report_json(const ValidationReport& vr);
std::string homology_report_json(const HomologyReport& hr);
std::string abelianization_json(const AbelianInvariants& ab);
std::string orbits_json(const ActionContext& ctx);

// Certificate bundles. Gamma elements inside traces are stored as words in
// the bundle's own Y list (indices into it); Y itself is stored as words in
// the declared gamma generators.
std::string bundle_json(const CertificateBundle& b, const ActionContext& ctx);
CertificateBundle parse_bundle(const std::string& json_text, const ActionContext& ctx);

}  // namespace eqp
