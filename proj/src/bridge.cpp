#include "zfm/bridge.hpp"

#include <cctype>
#include <cstdint>
#include <sstream>

namespace zfm {

Reading default_reading(const Presentation& p) {
  for (std::size_t i = 0; i < p.num_digits(); ++i) {
    if (p.digit(i).isZero()) continue;
    if (p.in_image(p.digit(i))) return Reading::Uniform;
    for (std::size_t j = i + 1; j < p.num_digits(); ++j) {
      if (!p.digit(j).isZero() && p.in_image(p.digit(i) - p.digit(j))) return Reading::Uniform;
    }
  }
  return Reading::Unique;
}

Regex parse_digit_regex(std::string_view text, const Presentation& p) {
  const auto lit = [&](std::string_view s) -> std::optional<std::pair<Symbol, std::size_t>> {
    if (s.empty()) return std::nullopt;
    if (s[0] == '[' || s[0] == '<') {
      const std::size_t close = s.find(s[0] == '[' ? ']' : '>');
      if (close == std::string_view::npos) return std::nullopt;
      const auto e = parse_element("<" + std::string(s.substr(1, close - 1)) + ">", p.rank());
      if (!e) return std::nullopt;
      const auto d = p.digit_index(*e);
      if (!d) return std::nullopt;
      return std::pair{static_cast<Symbol>(*d), close + 1};
    }
    std::size_t n = s[0] == '-' ? 1 : 0;
    const std::size_t start = n;
    while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n;
    if (n == start || p.rank() != 1) return std::nullopt;
    // Longest integer that is a digit, else a single decimal character.
    for (std::size_t len : {n, start + 1}) {
      const auto e = parse_element(s.substr(0, len), 1);
      if (!e) continue;
      if (const auto d = p.digit_index(*e)) return std::pair{static_cast<Symbol>(*d), len};
    }
    return std::nullopt;
  };
  return parse_regex(text, lit);
}

std::string digit_regex_text(const Regex& r, const Presentation& p) {
  return r.to_string([&](Symbol s) { return to_string(p.digit(s)); });
}

namespace {

// 64-bit FNV-1a.
std::string hex_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

char tag(Reading r) { return r == Reading::Uniform ? 'u' : 'q'; }

void define(const Presentation& p, Library& lib, const std::string& name, std::vector<std::string> params,
            const std::string& body) {
  if (lib.find(name)) return;
  lib.add({name, std::move(params), parse_formula(body, p, lib), false});
}

class RhoBuilder {
 public:
  RhoBuilder(const Presentation& p, Library& lib, std::size_t anchor, Reading reading)
      : p_(p), lib_(lib), c_(anchor), reading_(reading), C_(to_string(p.digit(anchor))) {}

  std::string build(const Regex& r) {
    const std::string text = digit_regex_text(r, p_);
    const std::string name = std::string("rho_") + tag(reading_) + std::to_string(c_) + "_" + hex_hash(text);
    if (lib_.find(name)) return name;
    std::string body;
    switch (r.kind()) {
      case Regex::Kind::Empty: body = "false"; break;
      case Regex::Kind::Epsilon: body = "x = y"; break;
      case Regex::Kind::Lit: {
        const std::size_t d = r.symbol();
        if (reading_ == Reading::Uniform && d != 0 && d != c_) {
          body = "false";
        } else {
          body = "y = F(x) & " + digit_predicate(p_, lib_, reading_, c_, d) + "(g, x)";
        }
        break;
      }
      case Regex::Kind::Union:
        body = build(r.left()) + "(g, x, y) | " + build(r.right()) + "(g, x, y)";
        break;
      case Regex::Kind::Concat:
        body = "exists v. IFa[" + C_ + "](v) & x <=o v & v <=o y & " + build(r.left()) + "(g, x, v) & " +
               build(r.right()) + "(g, v, y)";
        break;
      case Regex::Kind::Star: {
        // Block starts are the positions where the marker h reads c.
        const std::string m = digit_predicate(p_, lib_, reading_, c_, c_);
        const std::string block = build(r.left());
        body = "x = y | (x <o y & exists h. " + m + "(h, x) & (forall t. " + m + "(h, t) -> x <=o t & t <o y) & " +
               "forall s, t. (" + m + "(h, s) & (" + m + "(h, t) | t = y) & IFa[" + C_ +
               "](t) & s <o t & ~(exists q. " + m + "(h, q) & s <o q & q <o t) -> " + block + "(g, s, t)))";
        break;
      }
    }
    define(p_, lib_, name, {"g", "x", "y"}, body);
    return name;
  }

 private:
  const Presentation& p_;
  Library& lib_;
  std::size_t c_;
  Reading reading_;
  std::string C_;
};

}  // namespace

std::string digit_predicate(const Presentation& p, Library& lib, Reading reading, std::size_t anchor,
                            std::size_t digit) {
  const std::string name =
      std::string("dig_") + tag(reading) + std::to_string(anchor) + "_" + std::to_string(digit);
  if (lib.find(name)) return name;
  const std::string C = to_string(p.digit(anchor));
  std::string body;
  if (reading == Reading::Uniform) {
    // restrict(g, t, t) in terms of f.
    const std::string r = digit == 0 ? "" : " + t";
    if (digit == 0 || digit == anchor) {
      body = "IFa[" + C + "](t) & ((Sigma(t) & f(g, t) = " + (digit == 0 ? "0" : "t") +
             ") | exists v. Finv(t) = v & f(g, t) = f(g, v)" + r + ")";
    } else {
      body = "false";
    }
  } else if (digit != 0) {
    body = "IFa[" + C + "](t) & exists h, r. IFa[" + to_string(p.digit(digit)) +
           "](r) & r ~ t & R(h, r) & (h = g | r <o VF(g - h))";
  } else {
    std::vector<std::string> any;
    for (std::size_t d = 1; d < p.num_digits(); ++d) any.push_back(digit_predicate(p, lib, reading, anchor, d) + "(g, t)");
    body = "IFa[" + C + "](t)";
    if (!any.empty()) {
      body += " & ~(";
      for (std::size_t i = 0; i < any.size(); ++i) body += (i ? " | " : "") + any[i];
      body += ")";
    }
  }
  define(p, lib, name, {"g", "t"}, body);
  return name;
}

std::string rho_segment(const Presentation& p, Library& lib, const AnchoredRegex& l, Reading reading) {
  if (l.anchor == 0 || l.anchor >= p.num_digits() || p.digit(l.anchor).isZero())
    throw std::invalid_argument("anchor must be a nonzero digit");
  return RhoBuilder(p, lib, l.anchor, reading).build(l.regex);
}

std::string top_predicate(const Presentation& p, Library& lib, Reading reading, std::size_t anchor) {
  const std::string name = std::string("top_") + tag(reading) + std::to_string(anchor);
  if (lib.find(name)) return name;
  const std::string dig = digit_predicate(p, lib, reading, anchor, anchor);
  define(p, lib, name, {"g", "t"},
         dig + "(g, t) & " + (reading == Reading::Uniform ? "f(g, t) = g" : "R(g, t)"));
  return name;
}

Formula rho(const Presentation& p, Library& lib, const AnchoredRegex& l, Reading reading) {
  const std::string seg = rho_segment(p, lib, l, reading);
  const std::string C = to_string(p.digit(l.anchor));
  const std::string zero = digit_predicate(p, lib, reading, l.anchor, 0);
  const std::string text = "IFa[" + C + "](x) & (forall t. IFa[" + C + "](t) & t <o x -> " + zero +
                           "(g, t)) & exists y. IFa[" + C + "](y) & x <=o y & " +
                           top_predicate(p, lib, reading, l.anchor) + "(g, y) & " + seg + "(g, x, y)";
  return parse_formula(text, p, lib);
}

namespace {

Dfa letters_only(std::size_t n, const std::vector<char>& allowed) {
  Dfa d;
  d.num_symbols = n;
  const State ok = d.add_state(true), dead = d.add_state(false);
  for (Symbol a = 0; a < n; ++a) {
    d.delta[static_cast<std::size_t>(ok) * n + a] = allowed[a] ? ok : dead;
    d.delta[static_cast<std::size_t>(dead) * n + a] = dead;
  }
  d.initial = ok;
  return d;
}

Dfa empty_or_nonzero_last(std::size_t n) {
  Dfa d;
  d.num_symbols = n;
  const State start = d.add_state(true), last0 = d.add_state(false), last = d.add_state(true);
  for (State q : {start, last0, last})
    for (Symbol a = 0; a < n; ++a) d.delta[static_cast<std::size_t>(q) * n + a] = a == 0 ? last0 : last;
  d.initial = start;
  return d;
}

}  // namespace

Formula set_to_formula(const Structure& s, Library& lib, const Relation& a) {
  return set_to_formula(s, lib, a, default_reading(s.presentation()));
}

Formula set_to_formula(const Structure& s, Library& lib, const Relation& a, Reading reading) {
  if (a.arity != 1) throw std::invalid_argument("set_to_formula expects a unary relation");
  const Presentation& p = s.presentation();
  const std::size_t n = p.num_digits();
  std::vector<std::size_t> anchors;
  for (std::size_t d = 1; d < n; ++d) {
    if (p.digit(d).isZero()) continue;
    anchors.push_back(d);
    if (reading == Reading::Unique) break;
  }
  const Dfa words = intersect(a.dfa, empty_or_nonzero_last(n));
  std::vector<Formula> parts;
  for (std::size_t c : anchors) {
    std::vector<char> allowed(n, 1);
    if (reading == Reading::Uniform)
      for (std::size_t d = 1; d < n; ++d) allowed[d] = d == c;
    const Regex l = to_regex(minimize(intersect(words, letters_only(n, allowed))));
    const std::string seg = rho_segment(p, lib, {l, c}, reading);
    const std::string C = to_string(p.digit(c));
    const std::string top = reading == Reading::Uniform
                                ? "IFa[" + C + "](u) & " + digit_predicate(p, lib, reading, c, c) +
                                      "(g, u) & f(g, u) = g & y = F(u)"
                                : "IF(u) & R(g, u) & F(u) ~ y";
    parts.push_back(parse_formula("(g = 0 & " + seg + "(g, " + C + ", " + C + ")) | (g != 0 & exists u, y. IFa[" +
                                      C + "](y) & " + top + " & " + seg + "(g, " + C + ", y))",
                                  p, lib));
  }
  return Formula::any(std::move(parts));
}

}  // namespace zfm
