#pragma once

#include <string>
#include <string_view>

#include "zfm/logic.hpp"
#include "zfm/regex.hpp"

namespace zfm {

/// How formulas read the digit of g at the position of a marker t = F^p(c).
///  Uniform: the digit is restrict(g, t, t) in {0, t}; g is read as a word over
///           {0, c}, which is finite only when g is a {0, c}-value.
///  Unique:  the digit is the letter d with some h, R(h, F^p(d)), agreeing
///           with g below p + 1; exact when representations are unique.
enum class Reading { Uniform, Unique };

/// Unique when the nonzero digits are pairwise incongruent modulo F and none
/// lies in F(Z^r); Uniform otherwise.
Reading default_reading(const Presentation& p);

/// A regular expression over digit indices with the anchor letter c != 0.
struct AnchoredRegex {
  Regex regex;
  std::size_t anchor = 1;
};

/// Regex whose literals are digits: integers, [x, y] or <x, y>.
Regex parse_digit_regex(std::string_view text, const Presentation& p);
std::string digit_regex_text(const Regex& r, const Presentation& p);

/// Library predicate (g, t): the digit of g at t's position is `digit`.
std::string digit_predicate(const Presentation& p, Library& lib, Reading reading,
                            std::size_t anchor, std::size_t digit);

/// Library predicate (g, t): t's letter c is the last letter read from g.
std::string top_predicate(const Presentation& p, Library& lib, Reading reading, std::size_t anchor);

/// Library predicate (g, x, y) for x, y in I_{F,c}: the digits of g at the
/// positions [x, y[ spell a word of L. One definition per regex node.
std::string rho_segment(const Presentation& p, Library& lib, const AnchoredRegex& l,
                        Reading reading);

/// rho_L(g, x): g = [w c] with c at the top and w in 0^n L, x = F^n(c), where
/// w c is the word read from g.
Formula rho(const Presentation& p, Library& lib, const AnchoredRegex& l, Reading reading);

/// Defining formula (free g) of a unary value-saturated relation: g = 0 and
/// the empty word is in L, or g's reading up to its top letter lies in L.
/// Uniform readings take the disjunction over the anchors c in Sigma \ {0}
/// with L_c = representations of A over {0, c}.
Formula set_to_formula(const Structure& s, Library& lib, const Relation& a);
Formula set_to_formula(const Structure& s, Library& lib, const Relation& a, Reading reading);

}  // namespace zfm
