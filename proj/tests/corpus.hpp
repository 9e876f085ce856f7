// Automatic sets used by the round-trip tests and the acceptance run.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zfm/bridge.hpp"
#include "zfm/fsets.hpp"

namespace corpus {

struct NamedSet {
  std::string name;
  zfm::Relation rel;
};

inline zfm::Relation saturated(const zfm::Structure& s, const zfm::Dfa& words) {
  const std::size_t track[] = {0};
  return s.saturate(words, 1, track);
}

inline zfm::Relation from_regex(const zfm::Structure& s, const zfm::Regex& r) {
  return saturated(s, zfm::minimize(zfm::determinize(zfm::compile_regex(r, s.base()))));
}

/// First nonzero digit in digit order.
inline std::size_t first_digit(const zfm::Presentation& p) {
  for (std::size_t d : p.digits_in_order())
    if (!p.digit(d).isZero()) return d;
  return 1;
}

/// I_F, I_{F,a}, K(a,F), a translate, a finite set, an even-index support set,
/// the image of a random sparse language, {0}.
inline std::vector<NamedSet> roundtrip_sets(const zfm::Compiler& c, unsigned seed = 7) {
  using zfm::FSetExpr;
  using zfm::Regex;
  const zfm::Structure& s = c.structure();
  const zfm::Presentation& p = s.presentation();
  const std::size_t d = first_digit(p);
  const zfm::Element a = p.digit(d);
  std::vector<NamedSet> out;
  out.push_back({"I_F", s.in_IF()});
  out.push_back({"I_F,a", s.in_IFa(d)});
  out.push_back({"K(a,F)", zfm::fset_automaton(c, FSetExpr::kset(a))});
  out.push_back({"translate", zfm::fset_automaton(c, FSetExpr::translate(a + p.apply_F(a), FSetExpr::orbit(a)))});

  zfm::Regex finite = Regex::empty();
  for (const zfm::Element& e : {a, zfm::Element(-p.apply_F(a)), zfm::Element(a + p.apply_F(p.apply_F(a)))})
    finite = Regex::alt(finite, [&] {
      Regex w = Regex::epsilon();
      for (zfm::Symbol x : zfm::canonical_word(p, e)) w = Regex::cat(w, Regex::lit(x));
      return w;
    }());
  out.push_back({"finite", from_regex(s, finite)});

  Regex any = Regex::empty();
  for (zfm::Symbol x = 0; x < s.base(); ++x) any = Regex::alt(any, Regex::lit(x));
  out.push_back({"even-support",
                 from_regex(s, Regex::cat(Regex::star(Regex::cat(any, Regex::lit(0))), Regex::alt(any, Regex::epsilon())))});

  std::mt19937 rng(seed);
  for (;;) {
    const Regex r = oracle::random_regex(rng, 5, s.base());
    const zfm::Dfa w = zfm::minimize(zfm::determinize(zfm::compile_regex(r, s.base())));
    if (!zfm::is_sparse(w) || zfm::is_empty(w) || zfm::count_by_length(w, 6) < 3) continue;
    out.push_back({"sparse " + zfm::digit_regex_text(r, p), saturated(s, w)});
    break;
  }
  out.push_back({"{0}", s.zero()});
  return out;
}

}  // namespace corpus
