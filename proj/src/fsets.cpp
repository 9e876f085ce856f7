#include "zfm/fsets.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "zfm/bridge.hpp"
#include "zfm/detail/hash.hpp"
#include "zfm/regex.hpp"

namespace zfm {

Decomposition decompose(const Presentation& p, const Element& a) {
  Decomposition d;
  if (a.isZero()) return d;
  const Word w = canonical_word(p, a);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) continue;
    d.positions.push_back(i);
    d.digits.push_back(w[i]);
  }
  return d;
}

namespace {

std::string name_of(const Element& e) {
  std::string out;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (i) out += "_";
    out += e(i) < 0 ? "m" + BigInt(-e(i)).str() : e(i).str();
  }
  return out;
}

std::string apply_F(std::size_t n, std::string x) {
  for (std::size_t i = 0; i < n; ++i) x = "F(" + x + ")";
  return x;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string indexed(const std::string& base, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(base + std::to_string(i));
  return join(out, ", ");
}

void require_nonzero_digit(const Presentation& p, const Element& a) {
  const auto d = p.digit_index(a);
  if (!d || *d == 0) throw std::invalid_argument(to_string(a) + " is not a nonzero digit");
}

/// kchain_A_k(g, u): g = a + F^k(a) + ... with top term a at u's position,
/// checked on the digits read from g.
std::string kchain(const Presentation& p, Library& lib, std::size_t digit, std::size_t k) {
  const Element& a = p.digit(digit);
  const std::string name = "kchain_" + name_of(a) + "_" + std::to_string(k);
  if (lib.find(name)) return name;
  const Reading reading = default_reading(p);
  const std::string A = to_string(a), Fk = apply_F(k, "c");
  const std::string dig = digit_predicate(p, lib, reading, digit, digit);
  const std::string zero = digit_predicate(p, lib, reading, digit, 0);
  const std::string body = "IFa[" + A + "](u) & " + top_predicate(p, lib, reading, digit) + "(g, u) & " + dig +
                           "(g, " + A + ") & forall c. (IFa[" + A + "](c) & c <o u & " + dig + "(g, c) -> " +
                           dig + "(g, " + Fk + ") & forall t. (IFa[" + A + "](t) & c <o t & t <o " + Fk +
                           " -> " + zero + "(g, t)))";
  lib.add({name, {"g", "u"}, parse_formula(body, p, lib), false});
  return name;
}

/// ktop_A_k(g, t): g in K(a; F^k) and t marks the position of the lowest
/// letter of the top term.
std::string ktop(const Presentation& p, Library& lib, const Element& a, std::size_t k) {
  const std::string name = "ktop_" + name_of(a) + "_" + std::to_string(k);
  if (lib.find(name)) return name;
  const Decomposition d = decompose(p, a);
  const std::size_t m = d.digits.size();
  std::vector<std::string> parts, sum;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string x = "x" + std::to_string(i), u = "u" + std::to_string(i);
    parts.push_back(kchain(p, lib, d.digits[i], k) + "(" + x + ", " + u + ")");
    if (i) parts.push_back(u + " ~ u0");
    sum.push_back(apply_F(d.positions[i], x));
  }
  parts.push_back("g = " + join(sum, " + "));
  parts.push_back("t = " + apply_F(d.positions[0], "u0"));
  const std::string body = "exists " + indexed("x", m) + ", " + indexed("u", m) + ". " + join(parts, " & ");
  lib.add({name, {"g", "t"}, parse_formula(body, p, lib), false});
  return name;
}

}  // namespace

Formula kset_formula(const Presentation& p, Library& lib, const Element& a) {
  require_nonzero_digit(p, a);
  const std::string A = to_string(a);
  const std::string text = "exists u. IFa[" + A + "](u) & R(g, u) & VF(g) ~ " + A + " & f(g, " + A +
                           ") = " + A + " & forall c. (IFa[" + A +
                           "](c) & VF(g) <=o c & c <o u -> IFa[" + A + "](restrict_open(g, c, F(c))))";
  return parse_formula(text, p, lib);
}

Formula orbit_formula(const Presentation& p, Library& lib, const Element& a) {
  if (a.isZero()) return parse_formula("g = 0", p, lib);
  const Decomposition d = decompose(p, a);
  const std::size_t m = d.digits.size();
  std::vector<std::string> parts, sum;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string gi = "g" + std::to_string(i), vi = "v" + std::to_string(i);
    parts.push_back("(exists " + vi + ". IFa[" + to_string(p.digit(d.digits[i])) + "](" + vi + ") & " +
                    gi + " = " + apply_F(d.positions[i], vi) + ")");
    sum.push_back(gi);
  }
  parts.push_back("g = " + join(sum, " + "));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    parts.push_back(apply_F(d.positions[i + 1] - d.positions[i], "g" + std::to_string(i)) + " ~ g" +
                    std::to_string(i + 1));
  }
  return parse_formula("exists " + indexed("g", m) + ". " + join(parts, " & "), p, lib);
}

Formula kset_power(const Presentation& p, Library& lib, const Element& a, std::size_t k) {
  if (a.isZero() || k == 0) throw std::invalid_argument("K(a; F^k) needs a != 0 and k >= 1");
  return parse_formula("exists t. " + ktop(p, lib, a, k) + "(g, t)", p, lib);
}

Formula kset_general(const Presentation& p, Library& lib, const Element& a, std::size_t k) {
  if (a.isZero() || k == 0) throw std::invalid_argument("K(a; F^k) needs a != 0 and k >= 1");
  const Decomposition d = decompose(p, a);
  const std::size_t l = d.positions.back() - d.positions.front() + 1;
  if (k != 1 || l == 1) return kset_power(p, lib, a, k);
  // a + F(a) + ... + F^N(a) = y_0 + ... + y_{l-1}, y_i in K(F^i(a); F^l) or 0.
  // Term counts drop by one at most once along i and vanish only after a
  // single term; t_i marks y_i's top term.
  std::vector<std::string> parts, ys;
  Element b = a;
  const auto y = [](std::size_t i) { return "y" + std::to_string(i); };
  const auto t = [](std::size_t i) { return "t" + std::to_string(i); };
  const auto drop = [&](std::size_t i) {
    return "(" + y(i) + " != 0 & " + apply_F(l - 1, t(i)) + " ~ " + t(i - 1) + ")";
  };
  for (std::size_t i = 0; i < l; ++i, b = p.apply_F(b)) {
    const std::string top = ktop(p, lib, b, l) + "(" + y(i) + ", " + t(i) + ")";
    ys.push_back(y(i));
    if (i == 0) {
      parts.push_back(top);
      continue;
    }
    parts.push_back("(" + y(i) + " = 0 | " + top + ")");
    parts.push_back("((" + y(i) + " != 0 & F(" + t(i - 1) + ") ~ " + t(i) + ") | " + drop(i) + " | " + y(i) +
                    " = 0)");
    parts.push_back("(" + y(i) + " = 0 -> y0 = " + to_string(a) + ")");
    if (i + 1 < l) parts.push_back("(" + y(i) + " = 0 -> " + y(i + 1) + " = 0)");
    for (std::size_t j = i + 1; j < l; ++j) {
      parts.push_back("~(" + drop(i) + " & " + drop(j) + ")");
      parts.push_back("~(" + drop(i) + " & " + y(j) + " = 0)");
    }
  }
  parts.push_back("g = " + join(ys, " + "));
  return parse_formula("exists " + indexed("y", l) + ", " + indexed("t", l) + ". " + join(parts, " & "), p,
                       lib);
}

// ------------------------------------------------------------------ text

namespace {

class FSetParser {
 public:
  FSetParser(std::string_view s, const Presentation& p) : s_(s), p_(p) {}

  FSetExpr run() {
    FSetExpr e = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("fset: " + msg + " at column " + std::to_string(i_ + 1));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool accept(std::string_view t) {
    skip();
    if (s_.substr(i_, t.size()) != t) return false;
    i_ += t.size();
    return true;
  }
  void expect(std::string_view t) {
    if (!accept(t)) fail("expected '" + std::string(t) + "'");
  }
  std::string ident() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }
  BigInt integer() {
    skip();
    const bool neg = accept("-");
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    BigInt v(std::string(s_.substr(start, i_ - start)));
    return neg ? BigInt(-v) : v;
  }
  Element element() {
    skip();
    std::vector<BigInt> coords;
    if (accept("[") || accept("<")) {
      const char close = s_[i_ - 1] == '[' ? ']' : '>';
      do coords.push_back(integer());
      while (accept(","));
      expect(std::string(1, close));
    } else {
      coords.push_back(integer());
    }
    if (coords.size() != p_.rank()) fail("element of wrong rank");
    Element e(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t j = 0; j < coords.size(); ++j) e(static_cast<Eigen::Index>(j)) = coords[j];
    return e;
  }

  FSetExpr expr() {
    FSetExpr e = sum();
    while (accept("|") || accept("\xE2\x88\xAA") || accept_word("U")) e = FSetExpr::unite(std::move(e), sum());
    return e;
  }
  bool accept_word(std::string_view w) {
    skip();
    const std::size_t save = i_;
    if (ident() == w) return true;
    i_ = save;
    return false;
  }

  FSetExpr sum() {
    std::optional<FSetExpr> acc;
    Element shift = p_.zero();
    bool shifted = false;
    do {
      skip();
      const std::size_t save = i_;
      if (ident() == "coset") {
        expect("(");
        shift += element();
        expect(")");
        shifted = true;
        continue;
      }
      i_ = save;
      FSetExpr a = atom();
      acc = acc ? FSetExpr::sum(std::move(*acc), std::move(a)) : std::move(a);
    } while (accept("+"));
    if (!acc) return FSetExpr::translate(shift, FSetExpr::subgroup({}));
    return shifted ? FSetExpr::translate(shift, std::move(*acc)) : std::move(*acc);
  }

  FSetExpr atom() {
    if (accept("(")) {
      FSetExpr e = expr();
      expect(")");
      return e;
    }
    const std::string name = ident();
    expect("(");
    FSetExpr out;
    if (name == "K") {
      accept("a=") || accept("a =");
      Element a = element();
      std::size_t k = 1;
      if (accept(",")) {
        accept("k=") || accept("k =");
        k = static_cast<std::size_t>(integer());
      }
      out = FSetExpr::kset(std::move(a), k);
    } else if (name == "Orb") {
      accept("a=");
      out = FSetExpr::orbit(element());
    } else if (name == "subgroup") {
      std::vector<Element> gens;
      skip();
      if (!accept(")")) {
        do gens.push_back(element());
        while (accept(","));
      } else {
        return FSetExpr::subgroup({});
      }
      out = FSetExpr::subgroup(std::move(gens));
    } else {
      fail("unknown F-set constructor '" + name + "'");
    }
    expect(")");
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  const Presentation& p_;
};

std::string element_text(const Element& e) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < e.size(); ++i) out += (i ? ", " : "") + e(i).str();
  return out + "]";
}

}  // namespace

FSetExpr parse_fset(std::string_view text, const Presentation& p) { return FSetParser(text, p).run(); }

std::string to_string(const FSetExpr& e, const Presentation& p) {
  switch (e.kind) {
    case FSetExpr::Kind::K:
      return "K(a=" + element_text(e.a) + (e.k == 1 ? "" : ", k=" + std::to_string(e.k)) + ")";
    case FSetExpr::Kind::Orb: return "Orb(" + element_text(e.a) + ")";
    case FSetExpr::Kind::Translate:
      if (e.subs[0].kind == FSetExpr::Kind::Subgroup && e.subs[0].generators.empty())
        return "coset(" + element_text(e.a) + ")";
      return "(" + to_string(e.subs[0], p) + ") + coset(" + element_text(e.a) + ")";
    case FSetExpr::Kind::Sum: return "(" + to_string(e.subs[0], p) + ") + (" + to_string(e.subs[1], p) + ")";
    case FSetExpr::Kind::Union: return to_string(e.subs[0], p) + " | " + to_string(e.subs[1], p);
    case FSetExpr::Kind::Subgroup: {
      std::vector<std::string> g;
      for (const auto& x : e.generators) g.push_back(element_text(x));
      return "subgroup(" + join(g, ", ") + ")";
    }
  }
  return "";
}

// ------------------------------------------------------------------ formulas

Formula fset_formula(const Presentation& p, Library& lib, const FSetExpr& e) {
  const auto rename = [](const Formula& f, const std::string& v) {
    return substitute(f, {{"g", Term::var(v)}});
  };
  switch (e.kind) {
    case FSetExpr::Kind::K: return kset_general(p, lib, e.a, e.k);
    case FSetExpr::Kind::Orb: return orbit_formula(p, lib, e.a);
    case FSetExpr::Kind::Translate:
      return Formula::exists("x", rename(fset_formula(p, lib, e.subs[0]), "x") &&
                                      Formula::eq(Term::var("g"), Term::var("x") + Term::constant(e.a)));
    case FSetExpr::Kind::Sum:
      return Formula::exists(
          "x", Formula::exists("y", rename(fset_formula(p, lib, e.subs[0]), "x") &&
                                        rename(fset_formula(p, lib, e.subs[1]), "y") &&
                                        Formula::eq(Term::var("g"), Term::var("x") + Term::var("y"))));
    case FSetExpr::Kind::Union: return fset_formula(p, lib, e.subs[0]) || fset_formula(p, lib, e.subs[1]);
    case FSetExpr::Kind::Subgroup: {
      if (invariant_subgroup(p, e.generators).rows() == 0) return parse_formula("g = 0", p, lib);
      const Structure s(p);
      const Library std_lib = Library::standard(p);
      const Compiler c(s, std_lib);
      return set_to_formula(s, lib, fset_automaton(c, e));
    }
  }
  return Formula::truth(false);
}

// ------------------------------------------------------------------ automata

IntMatrix invariant_subgroup(const Presentation& p, const std::vector<Element>& gens) {
  const auto r = static_cast<Eigen::Index>(p.rank());
  IntMatrix g(static_cast<Eigen::Index>(gens.size()), r);
  for (std::size_t i = 0; i < gens.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = gens[i].transpose();
  if (gens.empty()) return g;
  IntMatrix h = hermite_normal_form(g);
  for (;;) {
    if (h.rows() == 0) return h;
    IntMatrix both(2 * h.rows(), r);
    both << h, h * p.F().transpose();
    IntMatrix next = hermite_normal_form(both);
    if (next.rows() == h.rows() && next == h) return h;
    h = next;
  }
}

namespace {

Dfa word_language(const Presentation& p, const Regex& r) {
  return minimize(determinize(compile_regex(r, p.num_digits())));
}

Regex word_regex(const Word& w) {
  Regex r = Regex::epsilon();
  for (Symbol s : w) r = Regex::cat(r, Regex::lit(s));
  return r;
}

/// Canonical representatives of the cosets of the row lattice h (HNF).
class CosetReducer {
 public:
  explicit CosetReducer(const IntMatrix& h) : r_(static_cast<std::size_t>(h.cols())) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      SmallVec row(r_);
      std::size_t pivot = r_;
      for (std::size_t j = 0; j < r_; ++j) {
        row[j] = static_cast<std::int64_t>(h(i, static_cast<Eigen::Index>(j)));
        if (pivot == r_ && row[j] != 0) pivot = j;
      }
      rows_.push_back(std::move(row));
      pivots_.push_back(pivot);
    }
  }
  SmallVec operator()(SmallVec x) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t c = pivots_[i];
      std::int64_t q = x[c] / rows_[i][c];
      if (x[c] - q * rows_[i][c] < 0) --q;
      for (std::size_t j = c; j < r_; ++j) x[j] -= q * rows_[i][j];
    }
    return x;
  }
  const std::vector<SmallVec>& rows() const { return rows_; }

 private:
  std::size_t r_;
  std::vector<SmallVec> rows_;
  std::vector<std::size_t> pivots_;
};

/// Membership in a full-rank F-invariant subgroup H: the state is the
/// partial sum modulo H and F^i modulo H.
Dfa finite_index_subgroup(const Presentation& p, const IntMatrix& h, std::size_t cap) {
  const std::size_t r = p.rank(), n = p.num_digits();
  const CosetReducer reduce(h);
  // State vector: acc (r entries), then the images of e_0..e_{r-1} under F^i.
  SmallVec start(r + r * r, 0);
  for (std::size_t j = 0; j < r; ++j) {
    SmallVec e(r, 0);
    e[j] = 1;
    e = reduce(e);
    std::copy(e.begin(), e.end(), start.begin() + static_cast<std::ptrdiff_t>(r + j * r));
  }
  Dfa out;
  out.num_symbols = n;
  std::unordered_map<SmallVec, State, detail::VectorHash> ids;
  std::vector<SmallVec> todo;
  const auto id = [&](const SmallVec& s) {
    if (auto it = ids.find(s); it != ids.end()) return it->second;
    if (ids.size() >= cap) throw ResourceCap("subgroup automaton exceeds " + std::to_string(cap) + " states");
    bool zero = true;
    for (std::size_t i = 0; i < r; ++i) zero = zero && s[i] == 0;
    const State q = out.add_state(zero);
    ids.emplace(s, q);
    todo.push_back(s);
    return q;
  };
  out.initial = id(start);
  while (!todo.empty()) {
    const SmallVec s = todo.back();
    todo.pop_back();
    const State from = ids.at(s);
    SmallVec next_pow(r * r);
    for (std::size_t j = 0; j < r; ++j) {
      const SmallVec col(s.begin() + static_cast<std::ptrdiff_t>(r + j * r),
                         s.begin() + static_cast<std::ptrdiff_t>(r + j * r + r));
      const SmallVec img = reduce(p.small_F(col));
      std::copy(img.begin(), img.end(), next_pow.begin() + static_cast<std::ptrdiff_t>(j * r));
    }
    for (Symbol d = 0; d < n; ++d) {
      SmallVec acc(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(r));
      const SmallVec& digit = p.small_digits()[d];
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i) acc[i] += s[r + j * r + i] * digit[j];
      SmallVec t = reduce(acc);
      t.insert(t.end(), next_pow.begin(), next_pow.end());
      out.delta[static_cast<std::size_t>(from) * n + d] = id(t);
    }
  }
  return minimize(out);
}

/// Membership in any F-invariant subgroup H by carries modulo H: reading d in
/// carry c moves to every c' with F(c') = c + d (mod H); accept at carry 0.
Dfa carry_subgroup(const Presentation& p, const IntMatrix& h, std::size_t cap) {
  const std::size_t r = p.rank(), n = p.num_digits();
  const CosetReducer reduce(h);
  const auto det = static_cast<std::int64_t>(p.det());
  const IntMatrix adj_big = adjugate(p.F());
  std::vector<std::int64_t> adj(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      adj[i * r + j] = static_cast<std::int64_t>(adj_big(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  // Offsets sum_j lambda_j h_j with 0 <= lambda_j < |det| cover H modulo det H.
  std::vector<SmallVec> offsets{SmallVec(r, 0)};
  for (const auto& row : reduce.rows()) {
    std::vector<SmallVec> more;
    for (const auto& o : offsets)
      for (std::int64_t l = 0; l < std::abs(det); ++l) {
        SmallVec v = o;
        for (std::size_t j = 0; j < r; ++j) v[j] += l * row[j];
        more.push_back(std::move(v));
      }
    offsets = std::move(more);
  }
  Nfa out;
  out.num_symbols = n;
  std::unordered_map<SmallVec, State, detail::VectorHash> ids;
  std::vector<SmallVec> todo;
  const auto id = [&](const SmallVec& c) {
    if (auto it = ids.find(c); it != ids.end()) return it->second;
    if (ids.size() >= cap) throw ResourceCap("subgroup carry automaton exceeds " + std::to_string(cap) + " states");
    const bool zero = std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x == 0; });
    const State q = out.add_state(zero);
    ids.emplace(c, q);
    todo.push_back(c);
    return q;
  };
  out.initial = {id(SmallVec(r, 0))};
  while (!todo.empty()) {
    const SmallVec c = todo.back();
    todo.pop_back();
    const State from = ids.at(c);
    for (Symbol d = 0; d < n; ++d) {
      for (const auto& o : offsets) {
        SmallVec z(r), next(r, 0);
        for (std::size_t j = 0; j < r; ++j) z[j] = c[j] + p.small_digits()[d][j] + o[j];
        bool integral = true;
        for (std::size_t i = 0; i < r && integral; ++i) {
          std::int64_t acc = 0;
          for (std::size_t j = 0; j < r; ++j) acc += adj[i * r + j] * z[j];
          integral = acc % det == 0;
          next[i] = integral ? acc / det : 0;
        }
        if (integral) out.add_edge(from, d, id(reduce(next)));
      }
    }
  }
  return minimize(determinize(out));
}

Relation sum_of(const Structure& s, const Relation& a, const Relation& b) {
  // (x, y, g): x in a, y in b, x + y = g.
  const std::size_t x[] = {0}, y[] = {1}, add[] = {0, 1, 2};
  Relation both = combine(a, x, b, y, 3, BoolOp::And);
  both = combine(both, add, s.addition(), add, 3, BoolOp::And);
  return exists(exists(both, 0), 0);
}

}  // namespace

Relation fset_automaton(const Compiler& c, const FSetExpr& e) {
  const Structure& s = c.structure();
  const Presentation& p = s.presentation();
  const std::size_t track[] = {0};
  switch (e.kind) {
    case FSetExpr::Kind::K: {
      if (e.a.isZero() || e.k == 0) throw std::invalid_argument("K(a; F^k) needs a != 0 and k >= 1");
      const Word alpha = canonical_word(p, e.a);
      if (e.k < alpha.size()) {
        Library lib = c.library();
        const Compiler local(s, lib);
        return local.compile(kset_general(p, lib, e.a, e.k), {"g"});
      }
      const Word gap(e.k - alpha.size(), 0);
      Word block = gap;
      block.insert(block.end(), alpha.begin(), alpha.end());
      const Regex r = Regex::cat(word_regex(alpha), Regex::star(word_regex(block)));
      return s.saturate(word_language(p, r), 1, track);
    }
    case FSetExpr::Kind::Orb: {
      if (e.a.isZero()) return s.zero();
      const Regex r = Regex::cat(Regex::star(Regex::lit(0)), word_regex(canonical_word(p, e.a)));
      return s.saturate(word_language(p, r), 1, track);
    }
    case FSetExpr::Kind::Translate: {
      const Relation inner = fset_automaton(c, e.subs[0]);
      const Relation point = s.saturate(Dfa::word(s.base(), encode(p, e.a)), 1, track);
      return sum_of(s, inner, point);
    }
    case FSetExpr::Kind::Sum:
      return sum_of(s, fset_automaton(c, e.subs[0]), fset_automaton(c, e.subs[1]));
    case FSetExpr::Kind::Union: {
      const std::size_t id[] = {0};
      return combine(fset_automaton(c, e.subs[0]), id, fset_automaton(c, e.subs[1]), id, 1, BoolOp::Or);
    }
    case FSetExpr::Kind::Subgroup: {
      const IntMatrix h = invariant_subgroup(p, e.generators);
      if (h.rows() == 0) return s.zero();
      if (static_cast<std::size_t>(h.rows()) == p.rank())
        return Relation(s.base(), 1, finite_index_subgroup(p, h, p.carry_bound()));
      return Relation(s.base(), 1, carry_subgroup(p, h, p.carry_bound()));
    }
  }
  return Relation::constant(s.base(), 1, false);
}

}  // namespace zfm
