#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "zfm/logic.hpp"

namespace zfm {

/// Nonzero letters of a's canonical word: a = sum_i F^{n_i}(a_i).
struct Decomposition {
  std::vector<std::size_t> positions;  // n_0 < ... < n_m
  std::vector<std::size_t> digits;     // digit indices a_i
};
Decomposition decompose(const Presentation& p, const Element& a);

// Formula templates with the free variable g. Helper definitions they refer
// to are added to `lib`.

/// K(a, F) for a in Sigma \ {0}:
///   exists u in I_{F,a} (R(g,u) & V_F(g) ~ a & f(g,a) = a &
///     forall c in I_{F,a} (V_F(g) <=o c <o u -> g|[c F(c)[ in I_{F,a})).
Formula kset_formula(const Presentation& p, Library& lib, const Element& a);

/// Orb(a) = {F^m(a) : m >= 0}:
///   exists g_0..g_m (AND g_i in F^{n_i}(I_{F,a_i}) & g = sum g_i &
///     AND F^{n_{i+1}-n_i}(g_i) ~ g_{i+1}); g = 0 when a = 0.
Formula orbit_formula(const Presentation& p, Library& lib, const Element& a);

/// K(a; F^k) = {a + F^k(a) + ... + F^{kn}(a) : n >= 0}. For k = 1 and a whose
/// nonzero letters span l > 1 positions, K(a; F) is built as the sum of the
/// l sets K(F^i(a); F^l) with coupled term counts.
Formula kset_general(const Presentation& p, Library& lib, const Element& a, std::size_t k);

/// K(a; F^k) from per-letter digit chains with aligned tops (no sum split).
Formula kset_power(const Presentation& p, Library& lib, const Element& a, std::size_t k);

/// F-set expressions.
struct FSetExpr {
  enum class Kind { K, Orb, Translate, Sum, Union, Subgroup };
  Kind kind = Kind::Subgroup;
  Element a;                       // K, Orb, Translate
  std::size_t k = 1;               // K
  std::vector<Element> generators;  // Subgroup
  std::vector<FSetExpr> subs;

  static FSetExpr kset(Element a, std::size_t k = 1) { return {Kind::K, std::move(a), k, {}, {}}; }
  static FSetExpr orbit(Element a) { return {Kind::Orb, std::move(a), 1, {}, {}}; }
  static FSetExpr translate(Element c, FSetExpr e) { return {Kind::Translate, std::move(c), 1, {}, {std::move(e)}}; }
  static FSetExpr sum(FSetExpr a, FSetExpr b) { return {Kind::Sum, {}, 1, {}, {std::move(a), std::move(b)}}; }
  static FSetExpr unite(FSetExpr a, FSetExpr b) { return {Kind::Union, {}, 1, {}, {std::move(a), std::move(b)}}; }
  static FSetExpr subgroup(std::vector<Element> gens) { return {Kind::Subgroup, {}, 1, std::move(gens), {}}; }
};

/// Text syntax:
///   expr  := sum ('|' sum | 'U' sum | '∪' sum)*
///   sum   := atom ('+' atom)*
///   atom  := K(a=E [, k=N]) | Orb(E) | coset(E) | subgroup(E, ...) | (expr)
/// where E is an integer, an integer vector [x, y] or <x, y>. coset(c) is the
/// singleton {c}; in a sum it translates the other summands.
FSetExpr parse_fset(std::string_view text, const Presentation& p);
std::string to_string(const FSetExpr& e, const Presentation& p);

/// The defining formula of an expression (free variable g).
Formula fset_formula(const Presentation& p, Library& lib, const FSetExpr& e);

/// Unary automaton for the F-set. K and Orb use the word languages of the
/// partial sums (formula compilation when blocks overlap), Translate / Sum /
/// Union use the addition relation. Subgroups are the Z[F]-submodule spanned
/// by the generators: a coset automaton for finite index, otherwise a carry
/// automaton over cosets that throws ResourceCap above the carry bound.
Relation fset_automaton(const Compiler& c, const FSetExpr& e);

/// HNF basis (rows) of the smallest F-invariant subgroup containing gens.
IntMatrix invariant_subgroup(const Presentation& p, const std::vector<Element>& gens);

}  // namespace zfm
