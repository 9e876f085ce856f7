#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zfm/presentation.hpp"

namespace zfm {

/// Terms over {0, constants, +, -, F, V_F} plus applications of function
/// definitions (F^{-1}, f, restrictions, user macros).
struct Term {
  enum class Kind { Var, Zero, Const, Plus, Minus, Neg, F, VF, Apply };
  Kind kind = Kind::Zero;
  std::string name;  // variable or applied definition
  Element value;     // Const
  std::vector<Term> args;

  static Term var(std::string n) { return {Kind::Var, std::move(n), {}, {}}; }
  static Term zero() { return {Kind::Zero, "", {}, {}}; }
  static Term constant(Element e) { return {Kind::Const, "", std::move(e), {}}; }
  static Term plus(Term a, Term b) { return {Kind::Plus, "", {}, {std::move(a), std::move(b)}}; }
  static Term minus(Term a, Term b) { return {Kind::Minus, "", {}, {std::move(a), std::move(b)}}; }
  static Term neg(Term a) { return {Kind::Neg, "", {}, {std::move(a)}}; }
  static Term F(Term a) { return {Kind::F, "", {}, {std::move(a)}}; }
  static Term VF(Term a) { return {Kind::VF, "", {}, {std::move(a)}}; }
  static Term apply(std::string fn, std::vector<Term> args) {
    return {Kind::Apply, std::move(fn), {}, std::move(args)};
  }
};

/// First-order formulas. Pred covers the primitive predicates IF, IFa, R and
/// preceq as well as predicate definitions (eps, sim, prec, ...).
struct Formula {
  enum class Kind { True, False, Eq, Pred, Not, And, Or, Implies, Iff, Exists, Forall };
  Kind kind = Kind::True;
  std::string name;       // predicate name, or the bound variable
  std::size_t digit = 0;  // IFa
  std::vector<Term> terms;
  std::vector<Formula> subs;

  static Formula truth(bool v) { return {v ? Kind::True : Kind::False, "", 0, {}, {}}; }
  static Formula eq(Term a, Term b) { return {Kind::Eq, "", 0, {std::move(a), std::move(b)}, {}}; }
  static Formula pred(std::string n, std::vector<Term> args) {
    return {Kind::Pred, std::move(n), 0, std::move(args), {}};
  }
  static Formula in_IFa(std::size_t digit, Term t) { return {Kind::Pred, "IFa", digit, {std::move(t)}, {}}; }
  static Formula negate(Formula a) { return {Kind::Not, "", 0, {}, {std::move(a)}}; }
  static Formula conj(Formula a, Formula b) { return {Kind::And, "", 0, {}, {std::move(a), std::move(b)}}; }
  static Formula disj(Formula a, Formula b) { return {Kind::Or, "", 0, {}, {std::move(a), std::move(b)}}; }
  static Formula implies(Formula a, Formula b) {
    return {Kind::Implies, "", 0, {}, {std::move(a), std::move(b)}};
  }
  static Formula iff(Formula a, Formula b) { return {Kind::Iff, "", 0, {}, {std::move(a), std::move(b)}}; }
  static Formula exists(std::string v, Formula a) { return {Kind::Exists, std::move(v), 0, {}, {std::move(a)}}; }
  static Formula forall(std::string v, Formula a) { return {Kind::Forall, std::move(v), 0, {}, {std::move(a)}}; }
  /// Conjunction / disjunction of a list (True / False when empty).
  static Formula all(std::vector<Formula> parts);
  static Formula any(std::vector<Formula> parts);
};

// Shorthands used by the formula templates.
inline Formula operator&&(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }
inline Formula operator||(Formula a, Formula b) { return Formula::disj(std::move(a), std::move(b)); }
inline Formula operator!(Formula a) { return Formula::negate(std::move(a)); }
inline Term operator+(Term a, Term b) { return Term::plus(std::move(a), std::move(b)); }
inline Term operator-(Term a, Term b) { return Term::minus(std::move(a), std::move(b)); }

/// Named macro: a predicate, or a function whose graph has the result as the
/// last parameter.
struct Definition {
  std::string name;
  std::vector<std::string> params;
  Formula body;
  bool function = false;
};

/// Definitions available to the parser and the compiler. The standard library
/// holds the derived notions of the expansion: Sigma, sim, prec, eps, Finv,
/// f, f_literal, restrict (closed) and restrict_open (half-open).
class Library {
 public:
  static Library standard(const Presentation& p);
  void add(Definition d);
  const Definition* find(std::string_view name) const;
  const std::map<std::string, Definition, std::less<>>& all() const { return defs_; }

 private:
  std::map<std::string, Definition, std::less<>> defs_;
};

class FormulaSyntaxError : public std::runtime_error {
 public:
  FormulaSyntaxError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line(line),
        column(column) {}
  std::size_t line, column;
};

/// Parses the text syntax:
///   forall x,y. phi   exists x. phi   ~phi  !phi  phi & psi  phi | psi
///   phi -> psi  phi <-> psi  true  false  (phi)
///   t = s   t != s   t <=o s   t <o s   t ~ s
///   IF(t)  IFa[a](t)  R(t,s)  eps(u,g)  and any library predicate
/// Terms: variables (letters, digits, _, trailing primes), 0, integer or <a,b>
/// element literals, [d0,d1,...] digit words, t+s, t-s, -t, F(t), VF(t),
/// Finv(t), f(g,u) and any library function.
Formula parse_formula(std::string_view text, const Presentation& p, const Library& lib);
Term parse_term(std::string_view text, const Presentation& p, const Library& lib);

std::string to_string(const Term& t, const Presentation& p);
std::string to_string(const Formula& f, const Presentation& p);

std::set<std::string> free_variables(const Formula& f);
/// Capture-avoiding substitution of terms for free variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& s);
/// Inlines every library definition, leaving a formula over the base
/// language {+, F, V_F, R, I_F, preceq, I_{F,a}}.
Formula expand_macros(const Formula& f, const Library& lib);
/// Number of nodes, for size reports.
std::size_t formula_size(const Formula& f);

}  // namespace zfm
