// Brute-force reference implementations shared by the unit and acceptance tests.
#pragma once

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "zfm/automata.hpp"
#include "zfm/regex.hpp"

namespace oracle {

using zfm::Regex;
using zfm::Symbol;
using zfm::Word;

/// End positions reachable by matching r against w starting at `from`.
inline std::set<std::size_t> match_ends(const Regex& r, const Word& w, std::size_t from) {
  using K = Regex::Kind;
  switch (r.kind()) {
    case K::Empty:
      return {};
    case K::Epsilon:
      return {from};
    case K::Lit:
      if (from < w.size() && w[from] == r.symbol()) return {from + 1};
      return {};
    case K::Union: {
      auto a = match_ends(r.left(), w, from);
      auto b = match_ends(r.right(), w, from);
      a.insert(b.begin(), b.end());
      return a;
    }
    case K::Concat: {
      std::set<std::size_t> out;
      for (auto m : match_ends(r.left(), w, from)) {
        auto b = match_ends(r.right(), w, m);
        out.insert(b.begin(), b.end());
      }
      return out;
    }
    case K::Star: {
      std::set<std::size_t> out{from};
      std::vector<std::size_t> todo{from};
      while (!todo.empty()) {
        const auto p = todo.back();
        todo.pop_back();
        for (auto m : match_ends(r.left(), w, p)) {
          if (m > p && out.insert(m).second) todo.push_back(m);
        }
      }
      return out;
    }
  }
  return {};
}

inline bool matches(const Regex& r, const Word& w) {
  return match_ends(r, w, 0).count(w.size()) > 0;
}

/// All words over {0..k-1} of length <= n, length-lex.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= n; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      if (out[i].size() != len - 1) continue;
      for (Symbol s = 0; s < k; ++s) {
        Word w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

/// Random regex with exactly `ops` regular operations.
inline Regex random_regex(std::mt19937& rng, std::size_t ops, std::size_t k) {
  if (ops == 0) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(k) + 1);
    const int c = pick(rng);
    if (c == static_cast<int>(k)) return Regex::epsilon();
    if (c == static_cast<int>(k) + 1) return Regex::empty();
    return Regex::lit(static_cast<Symbol>(c));
  }
  std::uniform_int_distribution<int> kind(0, 2);
  const int c = kind(rng);
  if (c == 2) return Regex::star(random_regex(rng, ops - 1, k));
  std::uniform_int_distribution<std::size_t> split(0, ops - 1);
  const std::size_t l = split(rng);
  auto a = random_regex(rng, l, k);
  auto b = random_regex(rng, ops - 1 - l, k);
  return c == 0 ? Regex::alt(a, b) : Regex::cat(a, b);
}

inline zfm::Dfa random_dfa(std::mt19937& rng, std::size_t states, std::size_t k) {
  zfm::Dfa d;
  d.num_symbols = k;
  std::bernoulli_distribution acc(0.4);
  for (std::size_t q = 0; q < states; ++q) d.add_state(acc(rng));
  std::uniform_int_distribution<zfm::State> to(0, static_cast<zfm::State>(states) - 1);
  for (auto& t : d.delta) t = to(rng);
  return d;
}

/// Numeric growth verdict: polynomial iff the cumulative count from n=20 to
/// n=40 grows by at most 2^(states+1), and never doubles five lengths in a row.
inline bool numerically_sparse(const zfm::Dfa& a) {
  const std::size_t s = a.num_states();
  std::vector<zfm::BigInt> n(41);
  for (std::size_t i = 0; i <= 40; ++i) n[i] = zfm::count_by_length(a, i);
  int run = 0;
  for (std::size_t i = 1; i <= 40; ++i) {
    run = (n[i - 1] > 0 && n[i] >= 2 * n[i - 1]) ? run + 1 : 0;
    if (run >= 5) return false;
  }
  if (n[20] == 0) return true;
  return n[40] <= n[20] * (zfm::BigInt(1) << (s + 1));
}

}  // namespace oracle

#include "zfm/presentation.hpp"

namespace oracle {

/// 2-adic style valuation for base b (v_b(0) is undefined).
inline int valuation(long long n, long long b) {
  int v = 0;
  while (n % b == 0) {
    n /= b;
    ++v;
  }
  return v;
}

inline long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Rank-1 instances over Z with Sigma = {-1,0,1}: facts by integer arithmetic.
struct Line {
  long long base;

  /// Position of u in I_F, or -1.
  int position(long long u) const {
    if (u == 0) return -1;
    const int v = valuation(u, base);
    const long long m = u / ipow(base, v);
    return (m == 1 || m == -1) ? v : -1;
  }
  bool in_IF(long long u) const { return position(u) >= 0; }
  /// Does some representation of g of length n+1 end with letter a?
  bool rightmost(long long g, long long u) const {
    if (u == 0) return g == 0;
    const int n = position(u);
    if (n < 0) return false;
    // g - F^n(a) must be representable by n digits of {-1,0,1}: |.| <= (b^n-1)/(b-1).
    const long long rest = g - u;
    const long long bound = (ipow(base, n) - 1) / (base - 1);
    return rest >= -bound && rest <= bound;
  }
  long long valuation_element(long long g, const zfm::Presentation& p) const {
    if (g == 0) return 0;
    const int v = valuation(g, base);
    const long long unit = g / ipow(base, v);
    // Coset representative of the lowest digit modulo F.
    const long long digit = ((unit % base) + base) % base == 1 ? 1 : -1;
    const auto idx = p.digit_index(zfm::element_of({digit}));
    return static_cast<long long>(p.digit(p.coset_rep(*idx))[0]) * ipow(base, v);
  }
  bool preceq(long long u, long long v) const {
    if (!in_IF(u)) return false;
    return v == 0 || (in_IF(v) && position(u) <= position(v));
  }
  bool prec(long long u, long long v) const { return preceq(u, v) && !preceq(v, u); }
};

}  // namespace oracle
