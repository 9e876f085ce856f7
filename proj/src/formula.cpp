#include "zfm/formula.hpp"

#include <cctype>
#include <functional>

namespace zfm {

Formula Formula::all(std::vector<Formula> parts) {
  if (parts.empty()) return truth(true);
  Formula out = std::move(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) out = conj(std::move(out), std::move(parts[i]));
  return out;
}

Formula Formula::any(std::vector<Formula> parts) {
  if (parts.empty()) return truth(false);
  Formula out = std::move(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) out = disj(std::move(out), std::move(parts[i]));
  return out;
}

// ------------------------------------------------------------------ library

void Library::add(Definition d) {
  const std::string key = d.name;
  defs_.insert_or_assign(key, std::move(d));
}

const Definition* Library::find(std::string_view name) const {
  const auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

Library Library::standard(const Presentation& p) {
  Library lib;
  std::vector<Formula> in_sigma;
  for (std::size_t d = 0; d < p.num_digits(); ++d)
    in_sigma.push_back(Formula::eq(Term::var("x"), d == 0 ? Term::zero() : Term::constant(p.digit(d))));
  lib.add({"Sigma", {"x"}, Formula::any(std::move(in_sigma)), false});
  const auto def = [&](std::string name, std::vector<std::string> params, std::string_view body,
                       bool function) {
    lib.add({name, std::move(params), parse_formula(body, p, lib), function});
  };
  def("sim", {"u", "v"}, "u <=o v & v <=o u", false);
  def("prec", {"u", "v"}, "u <=o v & ~(v <=o u)", false);
  def("eps", {"u", "g"}, "IF(u) & (g = u | exists h. R(h, u) & prec(u, VF(g - h)))", false);
  def("Finv", {"u", "v"}, "IF(u) & ~Sigma(u) & F(v) = u", true);
  def("f", {"g", "u", "h"},
      "(prec(u, VF(g)) & h = 0) | (VF(g) <=o u & R(h, u) & prec(u, VF(g - h)))", true);
  def("f_literal", {"g", "u", "h"},
      "(prec(u, VF(g)) & h = 0) | "
      "(VF(g) <=o u & (exists w. IF(w) & w <=o u & R(h, w)) & prec(u, VF(g - h)))",
      true);
  def("restrict_open", {"g", "u1", "u2", "r"}, "r = f(g, u2) - f(g, u1)", true);
  def("restrict", {"g", "u1", "u2", "r"},
      "r = f(g, u2) - f(g, Finv(u1)) | (IF(u1) & Sigma(u1) & r = f(g, u2))", true);
  return lib;
}

// ------------------------------------------------------------------ parser

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1, column = 1;
};

std::vector<Token> tokenize(std::string_view s) {
  static const char* const symbols[] = {"<->", "<=o", "->", "!=", "<o", "(", ")", "[", "]", "<", ">",
                                        ",",   ".",   "&",  "|",  "~",  "!", "=", "+", "-"};
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::Sym, "", line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      while (j < s.size() && s[j] == '\'') ++j;
      t.kind = Tok::Ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* sym : symbols) {
      const std::string_view v(sym);
      if (s.substr(i, v.size()) != v) continue;
      // "<o" only as an operator, not as the start of "<o...>" identifiers.
      if (v == "<o" && i + 2 < s.size() &&
          (std::isalnum(static_cast<unsigned char>(s[i + 2])) || s[i + 2] == '_'))
        continue;
      t.text = std::string(v);
      advance(v.size());
      out.push_back(std::move(t));
      matched = true;
      break;
    }
    if (!matched) throw FormulaSyntaxError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(std::string_view s) {
  return s == "forall" || s == "exists" || s == "true" || s == "false";
}

bool is_primitive_pred(std::string_view s) { return s == "IF" || s == "IFa" || s == "R"; }

class Parser {
 public:
  Parser(std::string_view text, const Presentation& p, const Library& lib)
      : toks_(tokenize(text)), p_(p), lib_(lib) {}

  Formula formula_all() {
    Formula f = iff();
    expect_end();
    return f;
  }
  Term term_all() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(std::string_view sym) const { return peek().kind == Tok::Sym && peek().text == sym; }
  bool accept(std::string_view sym) {
    if (!at(sym)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormulaSyntaxError(msg, peek().line, peek().column);
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) fail("expected '" + std::string(sym) + "'");
  }
  void expect_end() const {
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
  }

  Formula iff() {
    Formula f = implies();
    while (accept("<->")) f = Formula::iff(std::move(f), implies());
    return f;
  }
  Formula implies() {
    Formula f = disj();
    if (accept("->")) return Formula::implies(std::move(f), implies());
    return f;
  }
  Formula disj() {
    Formula f = conj();
    while (accept("|")) f = Formula::disj(std::move(f), conj());
    return f;
  }
  Formula conj() {
    Formula f = unary();
    while (accept("&")) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Formula unary() {
    if (accept("~") || accept("!")) return Formula::negate(unary());
    const Token& t = peek();
    if (t.kind == Tok::Ident && (t.text == "forall" || t.text == "exists")) {
      const bool universal = t.text == "forall";
      ++pos_;
      std::vector<std::string> vars;
      do {
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected a variable");
        vars.push_back(peek().text);
        ++pos_;
      } while (accept(","));
      expect(".");
      Formula body = iff();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = universal ? Formula::forall(*it, std::move(body)) : Formula::exists(*it, std::move(body));
      return body;
    }
    if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false")) {
      ++pos_;
      return Formula::truth(t.text == "true");
    }
    if (t.kind == Tok::Ident && peek(1).kind == Tok::Sym && (peek(1).text == "(" || peek(1).text == "[")) {
      if (is_primitive_pred(t.text)) return primitive_atom();
      if (const Definition* d = lib_.find(t.text); d && !d->function) return defined_atom(*d);
    }
    if (at("(")) {
      const std::size_t save = pos_;
      try {
        return comparison();
      } catch (const FormulaSyntaxError&) {
        pos_ = save;
      }
      ++pos_;
      Formula f = iff();
      expect(")");
      return f;
    }
    return comparison();
  }

  std::vector<Term> arguments() {
    expect("(");
    std::vector<Term> args;
    if (!at(")")) {
      do args.push_back(term());
      while (accept(","));
    }
    expect(")");
    return args;
  }

  Formula primitive_atom() {
    const std::string name = peek().text;
    ++pos_;
    if (name == "IFa") {
      expect("[");
      const Element e = element_literal();
      const auto d = p_.digit_index(e);
      if (!d || *d == 0) fail("IFa needs a nonzero digit");
      expect("]");
      auto args = arguments();
      if (args.size() != 1) fail("IFa takes one argument");
      return Formula::in_IFa(*d, std::move(args[0]));
    }
    auto args = arguments();
    if (args.size() != (name == "R" ? 2u : 1u)) fail(name + ": wrong number of arguments");
    return Formula::pred(name, std::move(args));
  }

  Formula defined_atom(const Definition& d) {
    ++pos_;
    auto args = arguments();
    if (args.size() != d.params.size()) fail(d.name + ": wrong number of arguments");
    return Formula::pred(d.name, std::move(args));
  }

  Formula comparison() {
    Term a = term();
    if (accept("=")) return Formula::eq(std::move(a), term());
    if (accept("!=")) return Formula::negate(Formula::eq(std::move(a), term()));
    if (accept("<=o")) return Formula::pred("preceq", {std::move(a), term()});
    if (accept("<o")) return Formula::pred("prec", {std::move(a), term()});
    if (accept("~")) return Formula::pred("sim", {std::move(a), term()});
    fail("expected a comparison");
  }

  Term term() {
    Term t = signed_term();
    for (;;) {
      if (accept("+")) {
        t = Term::plus(std::move(t), signed_term());
      } else if (accept("-")) {
        t = Term::minus(std::move(t), signed_term());
      } else {
        return t;
      }
    }
  }
  Term signed_term() {
    if (accept("-")) return Term::neg(signed_term());
    return primary();
  }

  Element element_literal() {
    bool negative = accept("-");
    if (peek().kind == Tok::Int && p_.rank() == 1) {
      BigInt v(peek().text);
      ++pos_;
      Element e(1);
      e(0) = negative ? BigInt(-v) : v;
      return e;
    }
    if (negative || !accept("<")) fail("expected an element literal");
    Element e(static_cast<Eigen::Index>(p_.rank()));
    for (std::size_t i = 0; i < p_.rank(); ++i) {
      if (i) expect(",");
      const bool neg = accept("-");
      if (peek().kind != Tok::Int) fail("expected an integer");
      BigInt v(peek().text);
      ++pos_;
      e(static_cast<Eigen::Index>(i)) = neg ? BigInt(-v) : v;
    }
    expect(">");
    return e;
  }

  Term primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int || at("<")) {
      if (t.kind == Tok::Int && t.text.find_first_not_of('0') == std::string::npos) {
        ++pos_;
        return Term::zero();
      }
      if (t.kind == Tok::Int && p_.rank() != 1) fail("integer literal in rank > 1");
      return Term::constant(element_literal());
    }
    if (accept("[")) {
      std::vector<Element> letters;
      if (!at("]")) {
        do letters.push_back(element_literal());
        while (accept(","));
      }
      expect("]");
      Word w;
      try {
        w = p_.word_of(letters);
      } catch (const std::exception&) {
        fail("word letter not in Sigma");
      }
      const Element v = p_.eval(w);
      return v.isZero() ? Term::zero() : Term::constant(v);
    }
    if (accept("(")) {
      Term inner = term();
      expect(")");
      return inner;
    }
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a term");
    const std::string name = t.text;
    ++pos_;
    if (!at("(")) return Term::var(name);
    if (name == "F" || name == "VF") {
      auto args = arguments();
      if (args.size() != 1) fail(name + " takes one argument");
      return name == "F" ? Term::F(std::move(args[0])) : Term::VF(std::move(args[0]));
    }
    const Definition* d = lib_.find(name);
    if (!d || !d->function) fail("unknown function '" + name + "'");
    auto args = arguments();
    if (args.size() + 1 != d->params.size()) fail(name + ": wrong number of arguments");
    return Term::apply(name, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Presentation& p_;
  const Library& lib_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Presentation& p, const Library& lib) {
  return Parser(text, p, lib).formula_all();
}

Term parse_term(std::string_view text, const Presentation& p, const Library& lib) {
  return Parser(text, p, lib).term_all();
}

// ------------------------------------------------------------------ printing

std::string to_string(const Term& t, const Presentation& p) {
  const auto wrap = [&](const Term& s) {
    const bool compound = s.kind == Term::Kind::Plus || s.kind == Term::Kind::Minus ||
                          s.kind == Term::Kind::Neg ||
                          (s.kind == Term::Kind::Const && p.rank() == 1 && s.value(0) < 0);
    return compound ? "(" + to_string(s, p) + ")" : to_string(s, p);
  };
  const auto list = [&](const std::vector<Term>& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + to_string(args[i], p);
    return out + ")";
  };
  switch (t.kind) {
    case Term::Kind::Var: return t.name;
    case Term::Kind::Zero: return "0";
    case Term::Kind::Const: return to_string(t.value);
    case Term::Kind::Plus: return to_string(t.args[0], p) + " + " + wrap(t.args[1]);
    case Term::Kind::Minus: return to_string(t.args[0], p) + " - " + wrap(t.args[1]);
    case Term::Kind::Neg: return "-" + wrap(t.args[0]);
    case Term::Kind::F: return "F" + list(t.args);
    case Term::Kind::VF: return "VF" + list(t.args);
    case Term::Kind::Apply: return t.name + list(t.args);
  }
  return "";
}

namespace {

int precedence(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return 0;
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    default: return 5;
  }
}

std::string print(const Formula& f, const Presentation& p, int ctx) {
  std::string out;
  const auto binary = [&](const char* op, int l, int r) {
    out = print(f.subs[0], p, l) + " " + op + " " + print(f.subs[1], p, r);
  };
  const auto term = [&](std::size_t i) { return to_string(f.terms[i], p); };
  switch (f.kind) {
    case Formula::Kind::True: out = "true"; break;
    case Formula::Kind::False: out = "false"; break;
    case Formula::Kind::Eq: out = term(0) + " = " + term(1); break;
    case Formula::Kind::Pred:
      if (f.name == "preceq") {
        out = term(0) + " <=o " + term(1);
      } else if (f.name == "IFa") {
        out = "IFa[" + to_string(p.digit(f.digit)) + "](" + term(0) + ")";
      } else {
        out = f.name + "(";
        for (std::size_t i = 0; i < f.terms.size(); ++i) out += (i ? ", " : "") + term(i);
        out += ")";
      }
      break;
    case Formula::Kind::Not:
      if (f.subs[0].kind == Formula::Kind::Eq) {
        out = to_string(f.subs[0].terms[0], p) + " != " + to_string(f.subs[0].terms[1], p);
      } else {
        out = "~" + print(f.subs[0], p, 5);
      }
      break;
    case Formula::Kind::And: binary("&", 4, 5); break;
    case Formula::Kind::Or: binary("|", 3, 4); break;
    case Formula::Kind::Implies: binary("->", 3, 2); break;
    case Formula::Kind::Iff: binary("<->", 1, 2); break;
    case Formula::Kind::Exists: out = "exists " + f.name + ". " + print(f.subs[0], p, 0); break;
    case Formula::Kind::Forall: out = "forall " + f.name + ". " + print(f.subs[0], p, 0); break;
  }
  return precedence(f) < ctx ? "(" + out + ")" : out;
}

}  // namespace

std::string to_string(const Formula& f, const Presentation& p) { return print(f, p, 0); }

// ------------------------------------------------------------------ variables

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const auto& a : t.args) term_vars(a, out);
}

void all_vars(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms) term_vars(t, out);
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) out.insert(f.name);
  for (const auto& s : f.subs) all_vars(s, out);
}

std::string fresh_name(const std::string& hint, const std::set<std::string>& used) {
  std::string base = hint;
  while (!base.empty() && base.back() == '\'') base.pop_back();
  for (std::size_t k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!used.contains(cand)) return cand;
  }
}

Term substitute(const Term& t, const std::map<std::string, Term>& s) {
  if (t.kind == Term::Kind::Var) {
    const auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, s);
  return out;
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  for (const auto& t : f.terms) term_vars(t, out);
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) {
    auto inner = free_variables(f.subs[0]);
    inner.erase(f.name);
    out.merge(inner);
    return out;
  }
  for (const auto& s : f.subs) out.merge(free_variables(s));
  return out;
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& s) {
  if (s.empty()) return f;
  Formula out = f;
  for (auto& t : out.terms) t = substitute(t, s);
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) {
    std::map<std::string, Term> inner = s;
    inner.erase(f.name);
    std::set<std::string> range;
    for (const auto& [v, t] : inner) term_vars(t, range);
    if (range.contains(f.name)) {
      std::set<std::string> used = range;
      all_vars(f.subs[0], used);
      for (const auto& [v, t] : inner) used.insert(v);
      const std::string renamed = fresh_name(f.name, used);
      inner[f.name] = Term::var(renamed);
      out.name = renamed;
    }
    out.subs[0] = substitute(f.subs[0], inner);
    return out;
  }
  for (auto& sub : out.subs) sub = substitute(sub, s);
  return out;
}

namespace {

class Expander {
 public:
  Expander(const Library& lib, std::set<std::string> used) : lib_(lib), used_(std::move(used)) {}

  Formula run(const Formula& f) {
    if (f.kind == Formula::Kind::Eq || f.kind == Formula::Kind::Pred) {
      // Hoist applications of function definitions out of the atom.
      std::vector<std::pair<std::string, Term>> hoisted;
      Formula atom = f;
      for (auto& t : atom.terms) t = hoist(t, hoisted);
      Formula core = atom;
      if (const Definition* d = lib_.find(atom.name); atom.kind == Formula::Kind::Pred && d)
        core = instantiate(*d, atom.terms);
      for (auto it = hoisted.rbegin(); it != hoisted.rend(); ++it) {
        const Term& app = it->second;
        std::vector<Term> args = app.args;
        args.push_back(Term::var(it->first));
        core = Formula::exists(it->first, instantiate(*lib_.find(app.name), args) && core);
      }
      return core;
    }
    Formula out = f;
    for (auto& s : out.subs) s = run(s);
    return out;
  }

 private:
  Term hoist(const Term& t, std::vector<std::pair<std::string, Term>>& hoisted) {
    Term out = t;
    for (auto& a : out.args) a = hoist(a, hoisted);
    if (out.kind != Term::Kind::Apply) return out;
    std::string v = fresh_name("z", used_);
    used_.insert(v);
    hoisted.emplace_back(v, std::move(out));
    return Term::var(v);
  }

  Formula instantiate(const Definition& d, const std::vector<Term>& args) {
    std::map<std::string, Term> s;
    for (std::size_t i = 0; i < d.params.size(); ++i) s.emplace(d.params[i], args[i]);
    return run(substitute(d.body, s));
  }

  const Library& lib_;
  std::set<std::string> used_;
};

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& a : t.args) n += term_size(a);
  return n;
}

}  // namespace

Formula expand_macros(const Formula& f, const Library& lib) {
  std::set<std::string> used;
  all_vars(f, used);
  for (const auto& [name, d] : lib.all()) {
    used.insert(d.params.begin(), d.params.end());
    all_vars(d.body, used);
  }
  return Expander(lib, std::move(used)).run(f);
}

std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& t : f.terms) n += term_size(t);
  for (const auto& s : f.subs) n += formula_size(s);
  return n;
}

}  // namespace zfm
