#include "zfm/regex.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace zfm {

Regex Regex::empty() { return Regex(std::make_shared<Node>(Node{Kind::Empty, 0, nullptr, nullptr})); }
Regex Regex::epsilon() { return Regex(std::make_shared<Node>(Node{Kind::Epsilon, 0, nullptr, nullptr})); }
Regex Regex::lit(Symbol s) { return Regex(std::make_shared<Node>(Node{Kind::Lit, s, nullptr, nullptr})); }

Regex Regex::alt(Regex a, Regex b) {
  return Regex(std::make_shared<Node>(Node{Kind::Union, 0, std::make_shared<Regex>(std::move(a)),
                                           std::make_shared<Regex>(std::move(b))}));
}

Regex Regex::cat(Regex a, Regex b) {
  return Regex(std::make_shared<Node>(Node{Kind::Concat, 0, std::make_shared<Regex>(std::move(a)),
                                           std::make_shared<Regex>(std::move(b))}));
}

Regex Regex::star(Regex a) {
  return Regex(std::make_shared<Node>(
      Node{Kind::Star, 0, std::make_shared<Regex>(std::move(a)), nullptr}));
}

std::size_t Regex::complexity() const {
  switch (kind()) {
    case Kind::Empty:
    case Kind::Epsilon:
    case Kind::Lit:
      return 0;
    case Kind::Star:
      return 1 + left().complexity();
    default:
      return 1 + left().complexity() + right().complexity();
  }
}

bool Regex::nullable() const {
  switch (kind()) {
    case Kind::Empty:
    case Kind::Lit:
      return false;
    case Kind::Epsilon:
    case Kind::Star:
      return true;
    case Kind::Union:
      return left().nullable() || right().nullable();
    case Kind::Concat:
      return left().nullable() && right().nullable();
  }
  return false;
}

bool Regex::is_empty_language() const {
  switch (kind()) {
    case Kind::Empty:
      return true;
    case Kind::Epsilon:
    case Kind::Lit:
    case Kind::Star:
      return false;
    case Kind::Union:
      return left().is_empty_language() && right().is_empty_language();
    case Kind::Concat:
      return left().is_empty_language() || right().is_empty_language();
  }
  return false;
}

std::size_t Regex::symbol_bound() const {
  switch (kind()) {
    case Kind::Lit:
      return symbol() + 1;
    case Kind::Star:
      return left().symbol_bound();
    case Kind::Union:
    case Kind::Concat:
      return std::max(left().symbol_bound(), right().symbol_bound());
    default:
      return 0;
  }
}

std::string Regex::to_string(const std::function<std::string(Symbol)>& name) const {
  switch (kind()) {
    case Kind::Empty:
      return "{}";
    case Kind::Epsilon:
      return "()";
    case Kind::Lit:
      return name(symbol());
    case Kind::Star: {
      const auto k = left().kind();
      const bool atomic = k == Kind::Lit || k == Kind::Empty || k == Kind::Epsilon;
      return atomic ? left().to_string(name) + "*" : "(" + left().to_string(name) + ")*";
    }
    case Kind::Union:
      return "(" + left().to_string(name) + "|" + right().to_string(name) + ")";
    case Kind::Concat:
      return left().to_string(name) + right().to_string(name);
  }
  return {};
}

std::string Regex::to_string() const {
  return to_string([](Symbol s) { return std::to_string(s); });
}

// ------------------------------------------------------------ Thompson

namespace {

struct Fragment {
  State in, out;
};

Fragment build(Nfa& n, const Regex& r) {
  const State in = n.add_state();
  const State out = n.add_state();
  switch (r.kind()) {
    case Regex::Kind::Empty:
      break;
    case Regex::Kind::Epsilon:
      n.add_eps(in, out);
      break;
    case Regex::Kind::Lit:
      if (r.symbol() >= n.num_symbols) {
        throw AlphabetMismatch("regex literal " + std::to_string(r.symbol()) +
                               " not in alphabet of size " + std::to_string(n.num_symbols));
      }
      n.add_edge(in, r.symbol(), out);
      break;
    case Regex::Kind::Union: {
      const auto a = build(n, r.left());
      const auto b = build(n, r.right());
      n.add_eps(in, a.in);
      n.add_eps(in, b.in);
      n.add_eps(a.out, out);
      n.add_eps(b.out, out);
      break;
    }
    case Regex::Kind::Concat: {
      const auto a = build(n, r.left());
      const auto b = build(n, r.right());
      n.add_eps(in, a.in);
      n.add_eps(a.out, b.in);
      n.add_eps(b.out, out);
      break;
    }
    case Regex::Kind::Star: {
      const auto a = build(n, r.left());
      n.add_eps(in, out);
      n.add_eps(in, a.in);
      n.add_eps(a.out, a.in);
      n.add_eps(a.out, out);
      break;
    }
  }
  return {in, out};
}

}  // namespace

Nfa compile_regex(const Regex& r, std::size_t num_symbols) {
  Nfa n(num_symbols);
  const auto f = build(n, r);
  n.initial = {f.in};
  n.accepting[f.out] = 1;
  return n;
}

// ---------------------------------------------------- state elimination

namespace {

using Edge = std::optional<Regex>;

Regex s_alt(const Regex& a, const Regex& b) {
  if (a.kind() == Regex::Kind::Empty) return b;
  if (b.kind() == Regex::Kind::Empty) return a;
  if (a.to_string() == b.to_string()) return a;
  return Regex::alt(a, b);
}

Regex s_cat(const Regex& a, const Regex& b) {
  if (a.kind() == Regex::Kind::Empty || b.kind() == Regex::Kind::Empty) return Regex::empty();
  if (a.kind() == Regex::Kind::Epsilon) return b;
  if (b.kind() == Regex::Kind::Epsilon) return a;
  return Regex::cat(a, b);
}

Regex s_star(const Regex& a) {
  if (a.kind() == Regex::Kind::Empty || a.kind() == Regex::Kind::Epsilon) return Regex::epsilon();
  if (a.kind() == Regex::Kind::Star) return a;
  return Regex::star(a);
}

void add_edge(Edge& e, const Regex& r) { e = e ? s_alt(*e, r) : r; }

}  // namespace

Regex to_regex(const Dfa& input) {
  const Dfa a = minimize(input);
  const auto use = useful_states(a);
  if (!use[a.initial]) return Regex::empty();

  // Nodes: useful states, then a fresh start and a fresh final.
  std::vector<State> id(a.num_states(), -1);
  std::size_t m = 0;
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (use[q]) id[q] = static_cast<State>(m++);
  }
  const std::size_t start = m, final = m + 1, total = m + 2;
  std::vector<std::vector<Edge>> g(total, std::vector<Edge>(total));
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (!use[q]) continue;
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const State t = a.next(static_cast<State>(q), s);
      if (use[t]) add_edge(g[id[q]][id[t]], Regex::lit(s));
    }
    if (a.accepting[q]) add_edge(g[id[q]][final], Regex::epsilon());
  }
  add_edge(g[start][id[a.initial]], Regex::epsilon());

  std::vector<char> alive(total, 1);
  for (std::size_t round = 0; round < m; ++round) {
    // Eliminate the node with the fewest in*out edges.
    std::size_t best = total, best_cost = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (!alive[k]) continue;
      std::size_t in = 0, out = 0;
      for (std::size_t j = 0; j < total; ++j) {
        if (!alive[j] || j == k) continue;
        in += g[j][k].has_value();
        out += g[k][j].has_value();
      }
      const std::size_t cost = in * out;
      if (best == total || cost < best_cost) {
        best = k;
        best_cost = cost;
      }
    }
    const std::size_t k = best;
    const Regex loop = g[k][k] ? s_star(*g[k][k]) : Regex::epsilon();
    for (std::size_t p = 0; p < total; ++p) {
      if (!alive[p] || p == k || !g[p][k]) continue;
      for (std::size_t q = 0; q < total; ++q) {
        if (!alive[q] || q == k || !g[k][q]) continue;
        add_edge(g[p][q], s_cat(s_cat(*g[p][k], loop), *g[k][q]));
      }
    }
    alive[k] = 0;
  }
  return g[start][final] ? *g[start][final] : Regex::empty();
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view t, const LiteralReader& lit) : text_(t), lit_(lit) {}

  Regex parse() {
    Regex r = alternation();
    skip();
    if (pos_ != text_.size()) throw RegexSyntaxError("unexpected character", pos_);
    return r;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  Regex alternation() {
    Regex r = concatenation();
    while (peek('|')) {
      ++pos_;
      r = Regex::alt(r, concatenation());
    }
    return r;
  }

  Regex concatenation() {
    std::optional<Regex> r;
    while (true) {
      skip();
      if (pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')') break;
      Regex p = postfix();
      r = r ? Regex::cat(*r, p) : p;
    }
    if (!r) throw RegexSyntaxError("empty expression", pos_);
    return *r;
  }

  Regex postfix() {
    Regex r = atom();
    while (true) {
      if (peek('*')) {
        ++pos_;
        r = Regex::star(r);
      } else if (peek('+')) {
        ++pos_;
        r = Regex::cat(r, Regex::star(r));
      } else if (peek('?')) {
        ++pos_;
        r = Regex::alt(Regex::epsilon(), r);
      } else {
        return r;
      }
    }
  }

  Regex atom() {
    skip();
    if (pos_ >= text_.size()) throw RegexSyntaxError("unexpected end", pos_);
    if (text_[pos_] == '(') {
      ++pos_;
      if (peek(')')) {
        ++pos_;
        return Regex::epsilon();
      }
      Regex r = alternation();
      if (!peek(')')) throw RegexSyntaxError("expected ')'", pos_);
      ++pos_;
      return r;
    }
    if (text_[pos_] == '{') {
      ++pos_;
      if (!peek('}')) throw RegexSyntaxError("expected '}'", pos_);
      ++pos_;
      return Regex::empty();
    }
    const auto l = lit_(text_.substr(pos_));
    if (!l || l->second == 0) throw RegexSyntaxError("unknown literal", pos_);
    pos_ += l->second;
    return Regex::lit(l->first);
  }

  std::string_view text_;
  const LiteralReader& lit_;
  std::size_t pos_ = 0;
};

}  // namespace

Regex parse_regex(std::string_view text, const LiteralReader& lit) {
  return Parser(text, lit).parse();
}

}  // namespace zfm
