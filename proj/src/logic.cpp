#include "zfm/logic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace zfm {

struct Compiler::Factor {
  std::vector<std::string> vars;
  Relation rel;
};

namespace {

using Factor = Compiler::Factor;

std::size_t index_of(std::vector<std::string>& vars, const std::string& v) {
  const auto it = std::find(vars.begin(), vars.end(), v);
  if (it != vars.end()) return static_cast<std::size_t>(it - vars.begin());
  vars.push_back(v);
  return vars.size() - 1;
}

Factor join(const Factor& a, const Factor& b, BoolOp op) {
  std::vector<std::string> vars = a.vars;
  std::vector<std::size_t> map_a(a.vars.size()), map_b;
  std::iota(map_a.begin(), map_a.end(), 0);
  for (const auto& v : b.vars) map_b.push_back(index_of(vars, v));
  Relation r = combine(a.rel, map_a, b.rel, map_b, vars.size(), op);
  return {std::move(vars), std::move(r)};
}

/// Factor over the distinct variables of `vars` (repeated arguments become
/// diagonals).
Factor make_factor(const std::vector<std::string>& vars, const Relation& r) {
  std::vector<std::string> out;
  std::vector<std::size_t> map;
  for (const auto& v : vars) map.push_back(index_of(out, v));
  if (out.size() == vars.size()) return {out, r};
  Relation m = remap(r, map, out.size());
  return {std::move(out), std::move(m)};
}

Factor drop(Factor f, const std::string& v) {
  const auto it = std::find(f.vars.begin(), f.vars.end(), v);
  if (it == f.vars.end()) return f;
  const auto i = static_cast<std::size_t>(it - f.vars.begin());
  f.rel = exists(f.rel, i);
  f.vars.erase(it);
  return f;
}

bool mentions(const Factor& f, const std::string& v) {
  return std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end();
}

Factor eliminate(std::vector<Factor> factors, std::vector<std::string> elim, std::size_t base) {
  while (!elim.empty()) {
    std::size_t best = 0, best_cost = SIZE_MAX;
    for (std::size_t e = 0; e < elim.size(); ++e) {
      std::vector<std::string> scope;
      bool used = false;
      for (const auto& f : factors) {
        if (!mentions(f, elim[e])) continue;
        used = true;
        for (const auto& v : f.vars) index_of(scope, v);
      }
      const std::size_t cost = used ? scope.size() : 0;
      if (cost < best_cost) {
        best_cost = cost;
        best = e;
      }
    }
    const std::string v = elim[best];
    elim.erase(elim.begin() + static_cast<std::ptrdiff_t>(best));
    std::vector<Factor> bucket, rest;
    for (auto& f : factors) (mentions(f, v) ? bucket : rest).push_back(std::move(f));
    if (bucket.empty()) {
      factors = std::move(rest);
      continue;
    }
    std::sort(bucket.begin(), bucket.end(),
              [](const Factor& a, const Factor& b) { return a.rel.arity < b.rel.arity; });
    Factor joined = std::move(bucket[0]);
    for (std::size_t i = 1; i < bucket.size(); ++i) joined = join(joined, bucket[i], BoolOp::And);
    rest.push_back(drop(std::move(joined), v));
    factors = std::move(rest);
  }
  if (factors.empty()) return {{}, Relation::constant(base, 0, true)};
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.rel.arity < b.rel.arity; });
  Factor out = std::move(factors[0]);
  for (std::size_t i = 1; i < factors.size(); ++i) out = join(out, factors[i], BoolOp::And);
  return out;
}

std::string key_of(const Definition& d, const Presentation& p) {
  std::string text = d.name + "(";
  for (const auto& v : d.params) text += v + ",";
  text += ")" + to_string(d.body, p);
  return d.name + "-" + std::to_string(std::hash<std::string>{}(text));
}

bool is_standard(const Definition& d, const Presentation& p) {
  static thread_local std::map<std::string, std::string> cache;
  const std::string key = p.to_text() + "\n" + d.name;
  auto it = cache.find(key);
  if (it == cache.end()) {
    const Library std_lib = Library::standard(p);
    const Definition* s = std_lib.find(d.name);
    it = cache.emplace(key, s ? key_of(*s, p) : std::string()).first;
  }
  return it->second == key_of(d, p);
}

}  // namespace

std::string Compiler::fresh() const { return "#" + std::to_string(counter_++); }

const Relation& Compiler::predicate(const Formula& f) const {
  if (f.name == "IF") return s_.in_IF();
  if (f.name == "IFa") return s_.in_IFa(f.digit);
  if (f.name == "R") return s_.rightmost();
  if (f.name == "preceq") return s_.preceq();
  const Definition* d = lib_.find(f.name);
  if (!d || d->function) throw std::invalid_argument("unknown predicate '" + f.name + "'");
  if (is_standard(*d, s_.presentation())) {
    if (f.name == "sim") return s_.sim();
    if (f.name == "prec") return s_.prec();
    if (f.name == "eps") return s_.occurs();
    if (f.name == "Sigma") return s_.sigma();
  }
  return s_.cached(key_of(*d, s_.presentation()), [&] { return definition(*d); });
}

const Relation& Compiler::function_graph(const std::string& name) const {
  const Definition* d = lib_.find(name);
  if (!d || !d->function) throw std::invalid_argument("unknown function '" + name + "'");
  if (is_standard(*d, s_.presentation())) {
    if (name == "Finv") return s_.f_inverse();
    if (name == "f") return s_.truncation();
    if (name == "f_literal") return s_.truncation_literal();
    if (name == "restrict") return s_.restriction(true);
    if (name == "restrict_open") return s_.restriction(false);
  }
  return s_.cached(key_of(*d, s_.presentation()), [&] { return definition(*d); });
}

Relation Compiler::definition(const Definition& d) const { return compile(d.body, d.params); }

std::string Compiler::flatten(const Term& t, std::vector<Factor>& factors,
                              std::vector<std::string>& elim) const {
  if (t.kind == Term::Kind::Var) return t.name;
  const std::string z = fresh();
  elim.push_back(z);
  std::vector<std::string> args;
  for (const auto& a : t.args) args.push_back(flatten(a, factors, elim));
  const Presentation& p = s_.presentation();
  switch (t.kind) {
    case Term::Kind::Zero: factors.push_back(make_factor({z}, s_.zero())); break;
    case Term::Kind::Const: {
      const Relation& c = s_.cached("const:" + to_string(t.value), [&] {
        const std::size_t track[] = {0};
        return s_.saturate(Dfa::word(s_.base(), encode(p, t.value)), 1, track);
      });
      factors.push_back(make_factor({z}, c));
      break;
    }
    case Term::Kind::Plus: factors.push_back(make_factor({args[0], args[1], z}, s_.addition())); break;
    case Term::Kind::Minus: factors.push_back(make_factor({z, args[1], args[0]}, s_.addition())); break;
    case Term::Kind::Neg: {
      const Relation& neg = s_.cached("neg", [&] {
        const Coefficient c[] = {Coefficient::Plus, Coefficient::Plus};
        return linear_relation(p, c, p.carry_bound());
      });
      factors.push_back(make_factor({args[0], z}, neg));
      break;
    }
    case Term::Kind::F: factors.push_back(make_factor({args[0], z}, s_.f_graph())); break;
    case Term::Kind::VF: factors.push_back(make_factor({args[0], z}, s_.valuation())); break;
    case Term::Kind::Apply: {
      args.push_back(z);
      factors.push_back(make_factor(args, function_graph(t.name)));
      break;
    }
    case Term::Kind::Var: break;
  }
  return z;
}

void Compiler::atom(const Formula& f, std::vector<Factor>& factors,
                    std::vector<std::string>& elim) const {
  std::vector<std::string> vars;
  for (const auto& t : f.terms) vars.push_back(flatten(t, factors, elim));
  if (f.kind == Formula::Kind::Eq) {
    if (vars[0] != vars[1]) factors.push_back(make_factor(vars, s_.equality()));
    return;
  }
  factors.push_back(make_factor(vars, predicate(f)));
}

void Compiler::gather(const Formula& f, std::vector<Factor>& factors,
                      std::vector<std::string>& elim) const {
  switch (f.kind) {
    case Formula::Kind::And:
      for (const auto& s : f.subs) gather(s, factors, elim);
      return;
    case Formula::Kind::Exists: {
      const std::string v = fresh();
      elim.push_back(v);
      gather(substitute(f.subs[0], {{f.name, Term::var(v)}}), factors, elim);
      return;
    }
    case Formula::Kind::Eq:
    case Formula::Kind::Pred: atom(f, factors, elim); return;
    default: factors.push_back(build(f));
  }
}

Compiler::Factor Compiler::build(const Formula& f) const {
  const std::size_t base = s_.base();
  switch (f.kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return {{}, Relation::constant(base, 0, f.kind == Formula::Kind::True)};
    case Formula::Kind::Not: {
      Factor a = build(f.subs[0]);
      a.rel = complement(a.rel);
      return a;
    }
    case Formula::Kind::Or: return join(build(f.subs[0]), build(f.subs[1]), BoolOp::Or);
    case Formula::Kind::Implies: {
      Factor a = join(build(f.subs[0]), build(f.subs[1]), BoolOp::AndNot);
      a.rel = complement(a.rel);
      return a;
    }
    case Formula::Kind::Iff: {
      Factor a = join(build(f.subs[0]), build(f.subs[1]), BoolOp::Xor);
      a.rel = complement(a.rel);
      return a;
    }
    case Formula::Kind::Forall: {
      Factor a = build(Formula::exists(f.name, Formula::negate(f.subs[0])));
      a.rel = complement(a.rel);
      return a;
    }
    default: {
      std::vector<Factor> factors;
      std::vector<std::string> elim;
      gather(f, factors, elim);
      return eliminate(std::move(factors), std::move(elim), base);
    }
  }
}

Relation Compiler::compile(const Formula& f, const std::vector<std::string>& free_vars) const {
  for (const auto& v : free_variables(f))
    if (std::find(free_vars.begin(), free_vars.end(), v) == free_vars.end())
      throw UnboundVariable("unbound variable '" + v + "'");
  const Factor r = build(f);
  std::vector<std::string> target = free_vars;
  std::vector<std::size_t> map;
  for (const auto& v : r.vars) map.push_back(index_of(target, v));
  if (target.size() != free_vars.size()) throw UnboundVariable("unbound variable");
  return remap(r.rel, map, free_vars.size());
}

// ------------------------------------------------------------------ queries

std::vector<Element> decode_tuple(const Presentation& p, std::span<const Symbol> word,
                                  std::size_t arity) {
  const TrackAlphabet alph{p.num_digits(), arity, Padding::Zero};
  std::vector<Element> out;
  for (const auto& t : deconvolve(word, alph)) {
    const Word w(t.begin(), t.end());
    out.push_back(p.eval(w));
  }
  return out;
}

Decision decide(const Compiler& c, const Formula& sentence) {
  if (const auto fv = free_variables(sentence); !fv.empty())
    throw UnboundVariable("unbound variable '" + *fv.begin() + "'");
  std::vector<std::string> block;
  const Formula* body = &sentence;
  while (body->kind == Formula::Kind::Exists) {
    if (std::find(block.begin(), block.end(), body->name) == block.end()) block.push_back(body->name);
    body = &body->subs[0];
  }
  Decision d;
  if (block.empty()) {
    d.truth = c.compile(sentence, {}).dfa.accepts(Word{});
    return d;
  }
  const Relation r = c.compile(*body, block);
  Word w;
  d.truth = shortest_word(intersect(r.dfa, canonical_tuples(c.structure(), block.size())), w);
  if (d.truth) {
    const auto values = decode_tuple(c.structure().presentation(), w, block.size());
    for (std::size_t i = 0; i < block.size(); ++i) d.witness.emplace_back(block[i], values[i]);
  }
  return d;
}

std::vector<std::vector<Element>> solve(const Compiler& c, const Formula& f,
                                        const std::vector<std::string>& free_vars,
                                        std::size_t max_len, bool canonical) {
  const Relation r = c.compile(f, free_vars);
  const Dfa domain =
      canonical ? intersect(r.dfa, canonical_tuples(c.structure(), free_vars.size())) : r.dfa;
  std::vector<std::vector<Element>> out;
  enumerate(minimize(domain), max_len, [&](const Word& w) {
    out.push_back(decode_tuple(c.structure().presentation(), w, free_vars.size()));
    return true;
  });
  return out;
}

BigInt count(const Compiler& c, const Formula& f, const std::vector<std::string>& free_vars,
             std::size_t n) {
  const Relation r = c.compile(f, free_vars);
  return count_by_length(intersect(r.dfa, canonical_tuples(c.structure(), free_vars.size())), n);
}

namespace {

/// {g : coding(u, g)} for a fixed word u on track 0.
Dfa section(const Relation& coding, const Word& u) {
  const std::size_t n = coding.base;
  const std::size_t len = u.size();
  const auto column = [&](std::size_t i, Symbol b) {
    return static_cast<Symbol>((i < len ? u[i] : 0) + n * b);
  };
  const Dfa& a = coding.dfa;
  // State (q, i) with i = min(position, len).
  Dfa out;
  out.num_symbols = n;
  std::map<std::pair<State, std::size_t>, State> ids;
  std::vector<std::pair<State, std::size_t>> todo;
  const auto id = [&](State q, std::size_t i) {
    const auto key = std::make_pair(q, i);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    State rest = q;
    for (std::size_t j = i; j < len; ++j) rest = a.next(rest, column(j, 0));
    const State s = out.add_state(a.accepting[rest] != 0);
    ids.emplace(key, s);
    todo.push_back(key);
    return s;
  };
  out.initial = id(a.initial, 0);
  while (!todo.empty()) {
    const auto [q, i] = todo.back();
    todo.pop_back();
    const State from = ids.at({q, i});
    for (Symbol b = 0; b < n; ++b) {
      const State to = id(a.next(q, column(i, b)), std::min(i + 1, len));
      out.delta[static_cast<std::size_t>(from) * n + b] = to;
    }
  }
  return minimize(out);
}

}  // namespace

IpSearch ip_witness_search(const Structure& s, std::size_t n, std::size_t search_len,
                           const Relation* coding) {
  const Relation& rel = coding ? *coding : s.occurs();
  const Presentation& p = s.presentation();
  const Dfa domain = canonical_tuples(s, 1);
  IpSearch result;
  std::vector<Word> cands;
  enumerate(intersect(s.in_IF().dfa, domain), search_len, [&](const Word& w) {
    cands.push_back(w);
    return true;
  });
  result.candidates = cands.size();
  if (n == 0 || cands.size() < n) return result;
  std::vector<Dfa> sections, complements;
  for (const auto& w : cands) {
    sections.push_back(section(rel, w));
    complements.push_back(complement(sections.back()));
  }
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  const std::size_t traces = std::size_t{1} << n;
  for (;;) {
    ++result.tuples_tried;
    std::vector<Element> gs(traces);
    std::size_t realized = 0;
    for (std::size_t t = 0; t < traces; ++t) {
      Dfa d = domain;
      for (std::size_t i = 0; i < n; ++i)
        d = intersect(d, (t >> i & 1) ? sections[pick[i]] : complements[pick[i]]);
      Word w;
      if (!shortest_word(d, w)) continue;
      ++realized;
      gs[t] = p.eval(w);
    }
    result.best_traces = std::max(result.best_traces, realized);
    if (realized == traces) {
      IpWitness wit;
      for (std::size_t i : pick) wit.u.push_back(p.eval(cands[i]));
      wit.g = std::move(gs);
      result.witness = std::move(wit);
      return result;
    }
    // Next combination.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == cands.size() - n + i - 1) --i;
    if (i == 0) return result;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace zfm
