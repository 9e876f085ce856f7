#include "zfm/relations.hpp"

#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "zfm/detail/hash.hpp"
#include "zfm/io.hpp"

namespace zfm {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

// ---------------------------------------------------------------- Relation

Relation::Relation(std::size_t b, std::size_t k, const Dfa& a) : base(b), arity(k), dfa(minimize(a)) {
  require_same_alphabet(dfa.num_symbols, ipow(base, arity));
}

Relation Relation::constant(std::size_t base, std::size_t arity, bool value) {
  const std::size_t n = ipow(base, arity);
  return Relation(base, arity, value ? Dfa::universal(n) : Dfa::empty(n));
}

bool Relation::accepts(const std::vector<Word>& tracks) const {
  if (tracks.size() != arity) throw std::invalid_argument("wrong number of tracks");
  std::vector<std::vector<std::size_t>> words;
  for (const auto& t : tracks) words.emplace_back(t.begin(), t.end());
  if (arity == 0) return dfa.accepts(Word{});
  return dfa.accepts(convolve(words, alphabet()));
}

Relation combine(const Relation& a, std::span<const std::size_t> map_a, const Relation& b,
                 std::span<const std::size_t> map_b, std::size_t out_arity, BoolOp op) {
  if (a.base != b.base) throw AlphabetMismatch("relations over different digit sets");
  if (map_a.size() != a.arity || map_b.size() != b.arity) {
    throw std::invalid_argument("track map size does not match arity");
  }
  return Relation(a.base, out_arity,
                  track_product(a.dfa, map_a, b.dfa, map_b, a.base, out_arity, op));
}

Relation remap(const Relation& r, std::span<const std::size_t> map, std::size_t out_arity) {
  if (map.size() != r.arity) throw std::invalid_argument("track map size does not match arity");
  return Relation(r.base, out_arity, remap_tracks(r.dfa, r.base, out_arity, map));
}

Relation exists(const Relation& r, std::size_t track) {
  return Relation(r.base, r.arity - 1, exists_track(r.dfa, r.base, r.arity, track));
}

Relation complement(const Relation& r) { return Relation(r.base, r.arity, complement(r.dfa)); }

bool equivalent(const Relation& a, const Relation& b) {
  return a.base == b.base && a.arity == b.arity && a.dfa == b.dfa;
}

// ------------------------------------------------------------ carry automata

Relation linear_relation(const Presentation& p, std::span<const Coefficient> coeffs,
                         std::size_t cap, std::vector<SmallVec>* carries) {
  const std::size_t n = p.num_digits(), k = coeffs.size(), r = p.rank();
  const std::size_t symbols = ipow(n, k);
  // Contribution of each column.
  std::vector<SmallVec> column(symbols, SmallVec(r, 0));
  for (std::size_t z = 0; z < symbols; ++z) {
    std::size_t code = z;
    for (std::size_t j = 0; j < k; ++j) {
      const SmallVec& a = p.small_digits()[code % n];
      code /= n;
      SmallVec t = a;
      if (coeffs[j] == Coefficient::Minus) {
        for (auto& x : t) x = -x;
      } else if (coeffs[j] == Coefficient::ApplyF) {
        t = p.small_F(a);
      }
      for (std::size_t i = 0; i < r; ++i) column[z][i] += t[i];
    }
  }
  Dfa d;
  d.num_symbols = symbols;
  std::unordered_map<SmallVec, State, detail::VectorHash> index;
  std::vector<SmallVec> states;
  auto intern = [&](const SmallVec& c) {
    auto [it, inserted] = index.try_emplace(c, 0);
    if (inserted) {
      if (states.size() >= cap) {
        std::string carry;
        for (auto x : c) carry += (carry.empty() ? "" : ",") + std::to_string(x);
        throw ResourceCap("carry saturation exceeded " + std::to_string(cap) +
                          " states at carry (" + carry + ")");
      }
      const bool zero = std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x == 0; });
      it->second = d.add_state(zero);
      states.push_back(c);
    }
    return it->second;
  };
  const State dead = d.add_state(false);
  d.initial = intern(SmallVec(r, 0));
  SmallVec t(r), next;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const State q = index.at(states[i]);
    for (std::size_t z = 0; z < symbols; ++z) {
      for (std::size_t c = 0; c < r; ++c) t[c] = states[i][c] + column[z][c];
      State to = dead;
      if (p.small_Finv(t, next)) to = intern(next);
      d.delta[static_cast<std::size_t>(q) * symbols + z] = to;
    }
  }
  if (carries) *carries = states;
  return Relation(n, k, d);
}

// --------------------------------------------------------------- Structure

namespace {

/// Builds a word automaton from a transition function over decoded columns;
/// next returns -1 for the dead state.
Dfa word_dfa(std::size_t base, std::size_t arity, std::size_t states, std::vector<char> accepting,
             const std::function<int(int, const std::vector<std::size_t>&)>& next) {
  const TrackAlphabet alph{base, arity, Padding::Zero};
  Dfa d;
  d.num_symbols = alph.size();
  for (std::size_t q = 0; q < states; ++q) d.add_state(accepting[q] != 0);
  const State dead = d.add_state(false);
  for (std::size_t q = 0; q <= states; ++q) {
    for (Symbol s = 0; s < d.num_symbols; ++s) {
      int t = q == states ? -1 : next(static_cast<int>(q), alph.decode(s));
      d.delta[q * d.num_symbols + s] = t < 0 ? dead : static_cast<State>(t);
    }
  }
  d.initial = 0;
  return d;
}

}  // namespace

Structure::Structure(Presentation p, std::string cache_dir)
    : p_(std::move(p)), cache_dir_(std::move(cache_dir)) {
  const auto rep = check_spanning(p_);
  if (!rep.all_pass()) throw InvalidPresentation("presentation does not span:\n" + rep.to_text());
}

const Relation& Structure::memo(const std::string& key,
                                const std::function<Relation()>& build) const {
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
  std::filesystem::path file;
  if (!cache_dir_.empty()) {
    const auto h = std::hash<std::string>{}(p_.to_text());
    std::string safe;
    for (char c : key) safe += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    file = std::filesystem::path(cache_dir_) / (std::to_string(h) + "-" + safe + ".json");
    if (std::ifstream in(file); in) {
      try {
        const auto j = nlohmann::json::parse(in);
        auto rel = std::make_unique<Relation>(j.at("base").get<std::size_t>(),
                                              j.at("arity").get<std::size_t>(),
                                              dfa_from_json(j.at("automaton")));
        return *cache_.emplace(key, std::move(rel)).first->second;
      } catch (const std::exception&) {
        // Unreadable cache entries are rebuilt.
      }
    }
  }
  auto rel = std::make_unique<Relation>(build());
  if (!file.empty()) {
    std::filesystem::create_directories(file.parent_path());
    nlohmann::json j;
    j["base"] = rel->base;
    j["arity"] = rel->arity;
    j["automaton"] = to_json(rel->dfa, [](Symbol s) { return std::to_string(s); });
    std::ofstream(file) << j.dump();
  }
  return *cache_.emplace(key, std::move(rel)).first->second;
}

const Relation& Structure::cached(const std::string& key,
                                  const std::function<Relation()>& build) const {
  return memo("def:" + key, build);
}

Relation Structure::saturate(const Dfa& words, std::size_t arity,
                             std::span<const std::size_t> tracks) const {
  const TrackAlphabet alph{base(), arity, Padding::Zero};
  Relation r(base(), arity, determinize(pad_closure(Nfa::from_dfa(words), alph)));
  for (std::size_t t : tracks) {
    auto map = iota(arity);
    map[t] = arity;
    const std::vector<std::size_t> eq{t, arity};
    r = exists(combine(r, map, equality(), eq, arity + 1, BoolOp::And), arity);
  }
  return r;
}

const Relation& Structure::equality() const {
  return memo("E", [&] {
    const Coefficient c[] = {Coefficient::Plus, Coefficient::Minus};
    return linear_relation(p_, c, p_.carry_bound());
  });
}

const Relation& Structure::addition() const {
  return memo("add", [&] {
    const Coefficient c[] = {Coefficient::Plus, Coefficient::Plus, Coefficient::Minus};
    return linear_relation(p_, c, p_.carry_bound());
  });
}

const Relation& Structure::f_graph() const {
  return memo("F", [&] {
    const Coefficient c[] = {Coefficient::ApplyF, Coefficient::Minus};
    return linear_relation(p_, c, p_.carry_bound());
  });
}

const Relation& Structure::zero() const {
  return memo("zero", [&] {
    return Relation(base(), 1, word_dfa(base(), 1, 1, {1}, [](int, const auto& c) {
                      return c[0] == 0 ? 0 : -1;
                    }));
  });
}

const Relation& Structure::sigma() const {
  return memo("sigma", [&] {
    const Dfa w = word_dfa(base(), 1, 2, {1, 1}, [](int q, const auto& c) {
      return q == 0 ? 1 : (c[0] == 0 ? 1 : -1);
    });
    const std::size_t t[] = {0};
    return saturate(w, 1, t);
  });
}

namespace {

Dfa support_one(std::size_t base, const std::function<bool(std::size_t)>& allowed) {
  return word_dfa(base, 1, 2, {0, 1}, [&](int q, const auto& c) {
    if (c[0] == 0) return q;
    return q == 0 && allowed(c[0]) ? 1 : -1;
  });
}

}  // namespace

const Relation& Structure::in_IF() const {
  return memo("IF", [&] {
    const std::size_t t[] = {0};
    return saturate(support_one(base(), [](std::size_t d) { return d != 0; }), 1, t);
  });
}

const Relation& Structure::in_IFa(std::size_t a) const {
  if (a == 0 || a >= base()) throw std::invalid_argument("I_{F,a} needs a nonzero digit");
  return memo("IFa" + std::to_string(a), [&] {
    const std::size_t t[] = {0};
    return saturate(support_one(base(), [a](std::size_t d) { return d == a; }), 1, t);
  });
}

const Relation& Structure::f_inverse() const {
  return memo("Finv", [&] {
    const std::vector<std::size_t> u{0}, vu{1, 0};
    Relation r = combine(in_IF(), u, complement(sigma()), u, 2, BoolOp::And);
    const std::vector<std::size_t> id{0, 1};
    return combine(r, id, f_graph(), vu, 2, BoolOp::And);
  });
}

const Relation& Structure::preceq() const {
  return memo("preceq", [&] {
    // 0: nothing seen; 1: u's letter seen; 2: both letters seen.
    const Dfa w = word_dfa(base(), 2, 3, {0, 1, 1}, [](int q, const auto& c) {
      const bool a = c[0] != 0, b = c[1] != 0;
      switch (q) {
        case 0:
          return !a && !b ? 0 : a && !b ? 1 : a && b ? 2 : -1;
        case 1:
          return a ? -1 : b ? 2 : 1;
        default:
          return !a && !b ? 2 : -1;
      }
    });
    const std::size_t t[] = {0, 1};
    return saturate(w, 2, t);
  });
}

const Relation& Structure::prec() const {
  return memo("prec", [&] {
    const std::vector<std::size_t> id{0, 1}, swap{1, 0};
    return combine(preceq(), id, preceq(), swap, 2, BoolOp::AndNot);
  });
}

const Relation& Structure::sim() const {
  return memo("sim", [&] {
    const std::vector<std::size_t> id{0, 1}, swap{1, 0};
    return combine(preceq(), id, preceq(), swap, 2, BoolOp::And);
  });
}

const Relation& Structure::valuation() const {
  return memo("VF", [&] {
    const Dfa w = word_dfa(base(), 2, 2, {1, 1}, [&](int q, const auto& c) {
      if (q == 1) return c[1] == 0 ? 1 : -1;
      if (c[0] == 0) return c[1] == 0 ? 0 : -1;
      return c[1] == p_.coset_rep(c[0]) ? 1 : -1;
    });
    const std::size_t t[] = {0, 1};
    return saturate(w, 2, t);
  });
}

const Relation& Structure::rightmost() const {
  return memo("R", [&] {
    // 0: all columns zero; 1: g digits only; 2: the shared last letter read.
    const Dfa w = word_dfa(base(), 2, 3, {1, 0, 1}, [](int q, const auto& c) {
      if (q == 2) return c[0] == 0 && c[1] == 0 ? 2 : -1;
      if (c[1] != 0) return c[0] == c[1] ? 2 : -1;
      if (q == 0) return c[0] == 0 ? 0 : 1;
      return 1;
    });
    const std::size_t t[] = {0, 1};
    return saturate(w, 2, t);
  });
}

const Relation& Structure::below_valuation() const {
  return memo("belowVF", [&] {
    // (u, g, w): V_F(g) = w and u < w.
    const std::vector<std::size_t> gw{1, 2}, uw{0, 2};
    return exists(combine(valuation(), gw, prec(), uw, 3, BoolOp::And), 2);
  });
}

namespace {

/// (u, g, h): u < V_F(g - h).
const Relation& below_valuation_of_difference(const Structure& s) {
  return s.cached("belowVFdiff", [&] {
    // (u, g, h, d): h + d = g and u < V_F(d).
    const std::vector<std::size_t> add{2, 3, 1}, ud{0, 3};
    return exists(combine(s.addition(), add, s.below_valuation(), ud, 4, BoolOp::And), 3);
  });
}

/// (g, u): V_F(g) precedes-or-equals u.
const Relation& valuation_preceq(const Structure& s) {
  return s.cached("VFpreceq", [&] {
    const std::vector<std::size_t> gw{0, 2}, wu{2, 1};
    return exists(combine(s.valuation(), gw, s.preceq(), wu, 3, BoolOp::And), 2);
  });
}

}  // namespace

const Relation& Structure::occurs() const {
  return memo("eps", [&] {
    const auto& a = below_valuation_of_difference(*this);
    // (u, g, h): R(h, u) and u < V_F(g - h).
    const std::vector<std::size_t> ugh{0, 1, 2}, hu{2, 0};
    const Relation b = combine(a, ugh, rightmost(), hu, 3, BoolOp::And);
    const Relation c = exists(b, 2);
    const std::vector<std::size_t> ug{0, 1}, gu{1, 0}, u{0};
    const Relation either = combine(c, ug, equality(), gu, 2, BoolOp::Or);
    return combine(either, ug, in_IF(), u, 2, BoolOp::And);
  });
}

const Relation& Structure::truncation() const {
  return memo("f", [&] {
    const std::vector<std::size_t> gu{0, 1}, ug{1, 0}, h{2}, guh{0, 1, 2}, hu{2, 1};
    // u < V_F(g) and h = 0.
    const Relation low = combine(below_valuation(), ug, zero(), h, 3, BoolOp::And);
    // V_F(g) <= u, R(h, u), u < V_F(g - h).
    const std::vector<std::size_t> from_ugh{1, 0, 2};
    Relation high = remap(below_valuation_of_difference(*this), from_ugh, 3);
    high = combine(high, guh, rightmost(), hu, 3, BoolOp::And);
    high = combine(high, guh, valuation_preceq(*this), gu, 3, BoolOp::And);
    return combine(low, guh, high, guh, 3, BoolOp::Or);
  });
}

const Relation& Structure::truncation_literal() const {
  return memo("f_literal", [&] {
    const std::vector<std::size_t> gu{0, 1}, ug{1, 0}, h{2}, guh{0, 1, 2};
    const Relation low = combine(below_valuation(), ug, zero(), h, 3, BoolOp::And);
    // (g, u, h, u'): u' <= u and R(h, u').
    const std::vector<std::size_t> u2u{3, 1}, hu2{2, 3};
    Relation witness = combine(preceq(), u2u, rightmost(), hu2, 4, BoolOp::And);
    Relation high = exists(witness, 3);
    const std::vector<std::size_t> from_ugh{1, 0, 2};
    high = combine(high, guh, remap(below_valuation_of_difference(*this), from_ugh, 3), guh, 3,
                   BoolOp::And);
    high = combine(high, guh, valuation_preceq(*this), gu, 3, BoolOp::And);
    return combine(low, guh, high, guh, 3, BoolOp::Or);
  });
}

const Relation& Structure::restriction(bool closed) const {
  return memo(closed ? "restrict_closed" : "restrict_halfopen", [&] {
    // lower(g, u1, h1): h1 = f(g, u1), or for the closed form f(g, F^{-1}(u1))
    // with f(g, F^{-1}(u1)) := 0 when u1 lies at position 0.
    Relation lower = truncation();
    if (closed) {
      // (g, u1, h1, v): F^{-1}(u1) = v and h1 = f(g, v).
      const std::vector<std::size_t> uv{1, 3}, gvh{0, 3, 2};
      const Relation shifted = exists(combine(f_inverse(), uv, truncation(), gvh, 4, BoolOp::And), 3);
      const std::vector<std::size_t> u{1}, h{2}, guh{0, 1, 2};
      Relation bottom = combine(sigma(), u, in_IF(), u, 3, BoolOp::And);
      bottom = combine(bottom, guh, zero(), h, 3, BoolOp::And);
      lower = combine(shifted, guh, bottom, guh, 3, BoolOp::Or);
    }
    // (g, u1, r, h2, h1): lower(g, u1, h1) and r + h1 = h2.
    const std::vector<std::size_t> low_map{0, 1, 4}, add{2, 4, 3};
    const Relation t = exists(combine(lower, low_map, addition(), add, 5, BoolOp::And), 4);
    // (g, u1, u2, r, h2): t(g, u1, r, h2) and h2 = f(g, u2).
    const std::vector<std::size_t> t_map{0, 1, 3, 4}, f_map{0, 2, 4};
    return exists(combine(t, t_map, truncation(), f_map, 5, BoolOp::And), 4);
  });
}

// ------------------------------------------------------------ enumeration

namespace {

/// Nonzero last symbol (or the empty word).
Dfa nonzero_last(std::size_t symbols) {
  Dfa d;
  d.num_symbols = symbols;
  d.add_state(true);
  d.add_state(false);
  for (Symbol s = 0; s < symbols; ++s) {
    d.delta[s] = s == 0 ? 1 : 0;
    d.delta[symbols + s] = s == 0 ? 1 : 0;
  }
  return d;
}

/// (w', w): w' is length-lex smaller than w, lengths taken up to the last
/// nonzero digit.
Dfa lenlex_less(const Presentation& p) {
  const std::size_t n = p.num_digits();
  // state = lex * 3 + len; lex: 0 eq, 1 lt, 2 gt; len: 0 eq, 1 w' longer, 2 w longer.
  Dfa d;
  d.num_symbols = n * n;
  for (int q = 0; q < 9; ++q) {
    const int lex = q / 3, len = q % 3;
    d.add_state(len == 2 || (len == 0 && lex == 1));
  }
  for (int q = 0; q < 9; ++q) {
    for (std::size_t z = 0; z < n * n; ++z) {
      const std::size_t a = z % n, b = z / n;
      int lex = q / 3, len = q % 3;
      if (lex == 0 && a != b) lex = p.rank_of(a) < p.rank_of(b) ? 1 : 2;
      if (a != 0 && b != 0) {
        len = 0;
      } else if (a != 0) {
        len = 1;
      } else if (b != 0) {
        len = 2;
      }
      d.delta[static_cast<std::size_t>(q) * n * n + z] = lex * 3 + len;
    }
  }
  d.initial = 0;
  return d;
}

}  // namespace

const Dfa& Structure::canonical_domain() const {
  std::lock_guard lock(mutex_);
  if (!domain_) {
    const Relation less(base(), 2, lenlex_less(p_));
    const std::vector<std::size_t> id{0, 1};
    const Relation smaller = exists(combine(equality(), id, less, id, 2, BoolOp::And), 0);
    domain_ = std::make_unique<Dfa>(minimize(difference(nonzero_last(base()), smaller.dfa)));
  }
  return *domain_;
}

bool Structure::holds(const Relation& r, const std::vector<Element>& args) const {
  std::vector<Word> words;
  for (const auto& a : args) words.push_back(encode(p_, a));
  return r.accepts(words);
}

Dfa canonical_tuples(const Structure& s, std::size_t arity) {
  const std::size_t n = s.base();
  const TrackAlphabet one{n, 1, Padding::Zero};
  const Dfa padded = minimize(determinize(pad_closure(Nfa::from_dfa(s.canonical_domain()), one)));
  Dfa all = nonzero_last(ipow(n, arity));
  for (std::size_t i = 0; i < arity; ++i) {
    const std::size_t map[] = {i};
    all = intersect(all, remap_tracks(padded, n, arity, map));
  }
  return minimize(all);
}

}  // namespace zfm
