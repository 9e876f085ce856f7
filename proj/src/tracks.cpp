#include "zfm/tracks.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "zfm/detail/hash.hpp"

namespace zfm {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::size_t TrackAlphabet::size() const {
  const std::size_t n = ipow(radix(), arity);
  return padding == Padding::Sharp ? n - 1 : n;
}

Symbol TrackAlphabet::encode(std::span<const std::size_t> letters) const {
  if (letters.size() != arity) throw AlphabetMismatch("wrong number of tracks");
  std::size_t code = 0;
  for (std::size_t i = arity; i-- > 0;) {
    if (letters[i] >= radix()) throw AlphabetMismatch("letter out of range");
    code = code * radix() + letters[i];
  }
  if (code >= size()) throw AlphabetMismatch("all-pad column is not a letter");
  return static_cast<Symbol>(code);
}

std::vector<std::size_t> TrackAlphabet::decode(Symbol s) const {
  std::vector<std::size_t> out(arity);
  std::size_t code = s;
  for (std::size_t i = 0; i < arity; ++i) {
    out[i] = code % radix();
    code /= radix();
  }
  return out;
}

std::size_t TrackAlphabet::letter(Symbol s, std::size_t track) const {
  return (s / ipow(radix(), track)) % radix();
}

bool TrackAlphabet::is_all_pad(Symbol s) const {
  if (padding == Padding::None) return false;
  for (std::size_t i = 0; i < arity; ++i) {
    if (letter(s, i) != pad_letter()) return false;
  }
  return true;
}

Word convolve(std::span<const std::vector<std::size_t>> words, const TrackAlphabet& alph) {
  if (words.size() != alph.arity) throw AlphabetMismatch("wrong number of tracks");
  std::size_t m = 0;
  for (const auto& w : words) m = std::max(m, w.size());
  if (alph.padding == Padding::None) {
    for (const auto& w : words) {
      if (w.size() != m) throw AlphabetMismatch("unpadded tracks must have equal length");
    }
  }
  Word out;
  out.reserve(m);
  std::vector<std::size_t> column(alph.arity);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t i = 0; i < alph.arity; ++i) {
      column[i] = p < words[i].size() ? words[i][p] : alph.pad_letter();
    }
    out.push_back(alph.encode(column));
  }
  return out;
}

std::vector<std::vector<std::size_t>> deconvolve(std::span<const Symbol> word,
                                                 const TrackAlphabet& alph) {
  std::vector<std::vector<std::size_t>> out(alph.arity);
  for (Symbol s : word) {
    for (std::size_t i = 0; i < alph.arity; ++i) {
      const std::size_t l = alph.letter(s, i);
      if (alph.padding == Padding::Sharp && l == alph.base) continue;
      out[i].push_back(l);
    }
  }
  if (alph.padding == Padding::Zero) {
    for (auto& w : out) {
      while (!w.empty() && w.back() == 0) w.pop_back();
    }
  }
  return out;
}

Dfa well_formed(const TrackAlphabet& alph) {
  if (alph.padding != Padding::Sharp) return Dfa::universal(alph.size());
  const std::size_t masks = std::size_t{1} << alph.arity;
  Dfa d;
  d.num_symbols = alph.size();
  for (std::size_t m = 0; m < masks; ++m) d.add_state(true);
  const State dead = d.add_state(false);
  for (std::size_t m = 0; m < masks; ++m) {
    for (Symbol s = 0; s < d.num_symbols; ++s) {
      std::size_t padded = 0;
      for (std::size_t i = 0; i < alph.arity; ++i) {
        if (alph.letter(s, i) == alph.base) padded |= std::size_t{1} << i;
      }
      d.delta[m * d.num_symbols + s] =
          (m & ~padded) != 0 ? dead : static_cast<State>(padded);
    }
  }
  for (Symbol s = 0; s < d.num_symbols; ++s) d.delta[dead * d.num_symbols + s] = dead;
  d.initial = 0;
  return d;
}

namespace {

TrackAlphabet drop_track(const TrackAlphabet& alph) {
  if (alph.arity < 2) throw std::out_of_range("cannot project the only track");
  return {alph.base, alph.arity - 1, alph.padding};
}

std::vector<std::size_t> without(std::vector<std::size_t> v, std::size_t i) {
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
  return v;
}

/// Raw code of a column in radix representation (may be the all-pad code).
std::size_t raw_code(std::span<const std::size_t> letters, std::size_t radix) {
  std::size_t code = 0;
  for (std::size_t i = letters.size(); i-- > 0;) code = code * radix + letters[i];
  return code;
}

}  // namespace

Nfa project(const Dfa& input, const TrackAlphabet& alph, std::size_t track) {
  require_same_alphabet(input.num_symbols, alph.size());
  if (track >= alph.arity) throw std::out_of_range("track index out of range");
  const TrackAlphabet out = drop_track(alph);
  const Dfa a = alph.padding == Padding::Sharp ? intersect(input, well_formed(alph)) : input;
  Nfa n(out.size());
  for (std::size_t q = 0; q < a.num_states(); ++q) n.add_state(a.accepting[q]);
  n.initial = {a.initial};
  const std::size_t all_pad = ipow(out.radix(), out.arity) - 1;
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const auto rest = without(alph.decode(s), track);
      const std::size_t code = raw_code(rest, out.radix());
      const State t = a.next(static_cast<State>(q), s);
      if (alph.padding == Padding::Sharp && code == all_pad) {
        n.add_eps(static_cast<State>(q), t);
      } else {
        n.add_edge(static_cast<State>(q), static_cast<Symbol>(code), t);
      }
    }
  }
  return alph.padding == Padding::Zero ? pad_closure(n, out) : n;
}

Dfa cylindrify(const Dfa& a, const TrackAlphabet& alph, std::size_t track) {
  require_same_alphabet(a.num_symbols, alph.size());
  if (track > alph.arity) throw std::out_of_range("track index out of range");
  const TrackAlphabet wide{alph.base, alph.arity + 1, alph.padding};
  Dfa d;
  d.num_symbols = wide.size();
  for (std::size_t q = 0; q < a.num_states(); ++q) d.add_state(a.accepting[q]);
  d.initial = a.initial;
  const std::size_t all_pad = ipow(alph.radix(), alph.arity) - 1;
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    for (Symbol s = 0; s < d.num_symbols; ++s) {
      const auto rest = without(wide.decode(s), track);
      const std::size_t code = raw_code(rest, alph.radix());
      State t = static_cast<State>(q);
      if (!(alph.padding == Padding::Sharp && code == all_pad)) {
        t = a.next(static_cast<State>(q), static_cast<Symbol>(code));
      }
      d.delta[q * d.num_symbols + s] = t;
    }
  }
  return wide.padding == Padding::Sharp ? intersect(d, well_formed(wide)) : d;
}

Nfa pad_closure(const Nfa& a, const TrackAlphabet& alph) {
  if (alph.padding != Padding::Zero) return a;
  const Symbol zero = 0;
  Nfa r = a;
  // Backward: accept where trailing zero columns lead to acceptance.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < r.num_states(); ++q) {
      if (r.accepting[q]) continue;
      bool reach = false;
      for (auto [s, t] : r.edges[q]) {
        if (s == zero && r.accepting[t]) reach = true;
      }
      for (State t : r.eps[q]) {
        if (r.accepting[t]) reach = true;
      }
      if (reach) {
        r.accepting[q] = 1;
        changed = true;
      }
    }
  }
  // Forward: accepted words stay accepted after appending zero columns.
  const State tail = r.add_state(true);
  r.add_edge(tail, zero, tail);
  for (std::size_t q = 0; q + 1 < r.num_states(); ++q) {
    if (r.accepting[q]) r.add_edge(static_cast<State>(q), zero, tail);
  }
  return r;
}

// ---------------------------------------------------------- fast paths

std::vector<Symbol> track_map(std::size_t base, std::size_t out_arity,
                              std::span<const std::size_t> map) {
  const std::size_t n = ipow(base, out_arity);
  std::vector<std::size_t> weight(out_arity, 0);
  for (std::size_t j = 0; j < map.size(); ++j) {
    if (map[j] >= out_arity) throw std::out_of_range("track map target out of range");
    weight[map[j]] += ipow(base, j);
  }
  std::vector<Symbol> out(n);
  std::vector<std::size_t> digits(out_arity, 0);
  for (std::size_t z = 0; z < n; ++z) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < out_arity; ++i) code += digits[i] * weight[i];
    out[z] = static_cast<Symbol>(code);
    for (std::size_t i = 0; i < out_arity; ++i) {
      if (++digits[i] < base) break;
      digits[i] = 0;
    }
  }
  return out;
}

Dfa remap_tracks(const Dfa& a, std::size_t base, std::size_t out_arity,
                 std::span<const std::size_t> map) {
  require_same_alphabet(a.num_symbols, ipow(base, map.size()));
  const auto tm = track_map(base, out_arity, map);
  Dfa d;
  d.num_symbols = tm.size();
  d.initial = a.initial;
  d.accepting = a.accepting;
  d.delta.resize(a.num_states() * d.num_symbols);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    for (std::size_t z = 0; z < tm.size(); ++z) {
      d.delta[q * d.num_symbols + z] = a.next(static_cast<State>(q), tm[z]);
    }
  }
  return d;
}

Dfa track_product(const Dfa& a, std::span<const std::size_t> map_a, const Dfa& b,
                  std::span<const std::size_t> map_b, std::size_t base,
                  std::size_t out_arity, BoolOp op) {
  require_same_alphabet(a.num_symbols, ipow(base, map_a.size()));
  require_same_alphabet(b.num_symbols, ipow(base, map_b.size()));
  const auto ma = track_map(base, out_arity, map_a);
  const auto mb = track_map(base, out_arity, map_b);
  const std::size_t k = ma.size();
  auto combine = [op](bool x, bool y) {
    switch (op) {
      case BoolOp::And:
        return x && y;
      case BoolOp::Or:
        return x || y;
      case BoolOp::AndNot:
        return x && !y;
      case BoolOp::Xor:
        return x != y;
    }
    return false;
  };
  Dfa d;
  d.num_symbols = k;
  std::unordered_map<std::uint64_t, State> index;
  std::vector<std::pair<State, State>> pairs;
  auto intern = [&](State p, State q) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p)) << 32) |
        static_cast<std::uint32_t>(q);
    auto [it, inserted] = index.try_emplace(key, 0);
    if (inserted) {
      it->second = d.add_state(combine(a.accepting[p] != 0, b.accepting[q] != 0));
      pairs.emplace_back(p, q);
    }
    return it->second;
  };
  d.initial = intern(a.initial, b.initial);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [p, q] = pairs[i];
    for (std::size_t z = 0; z < k; ++z) {
      const State t = intern(a.next(p, ma[z]), b.next(q, mb[z]));
      d.delta[i * k + z] = t;
    }
  }
  return d;
}

Dfa exists_track(const Dfa& a, std::size_t base, std::size_t arity, std::size_t track) {
  require_same_alphabet(a.num_symbols, ipow(base, arity));
  if (track >= arity) throw std::out_of_range("track index out of range");
  if (arity == 1) {
    // Projecting the last track leaves a 0-ary relation: true iff nonempty.
    return is_empty(a) ? Dfa::empty(1) : Dfa::universal(1);
  }
  const std::size_t out_n = ipow(base, arity - 1);
  const std::size_t stride = ipow(base, track);
  // insert[z'][d]: the source symbol with digit d placed at `track`.
  auto insert = [&](std::size_t z, std::size_t d) {
    const std::size_t low = z % stride;
    const std::size_t high = z / stride;
    return static_cast<Symbol>(low + stride * d + stride * base * high);
  };

  // States that reach acceptance through columns that are zero off `track`.
  std::vector<char> closed(a.num_states(), 0);
  {
    std::vector<std::vector<State>> rev(a.num_states());
    for (std::size_t q = 0; q < a.num_states(); ++q) {
      for (std::size_t d = 0; d < base; ++d) {
        rev[a.next(static_cast<State>(q), insert(0, d))].push_back(static_cast<State>(q));
      }
    }
    std::vector<State> stack;
    for (std::size_t q = 0; q < a.num_states(); ++q) {
      if (a.accepting[q]) {
        closed[q] = 1;
        stack.push_back(static_cast<State>(q));
      }
    }
    while (!stack.empty()) {
      const State q = stack.back();
      stack.pop_back();
      for (State p : rev[q]) {
        if (!closed[p]) {
          closed[p] = 1;
          stack.push_back(p);
        }
      }
    }
  }

  Dfa d;
  d.num_symbols = out_n;
  std::unordered_map<std::vector<State>, State, detail::VectorHash> index;
  std::vector<std::vector<State>> subsets;
  auto intern = [&](std::vector<State>&& s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    const bool acc = std::any_of(s.begin(), s.end(), [&](State q) { return closed[q] != 0; });
    const State id = d.add_state(acc);
    index.emplace(s, id);
    subsets.push_back(std::move(s));
    return id;
  };
  d.initial = intern({a.initial});
  std::vector<char> mark(a.num_states(), 0);
  std::vector<State> target;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t z = 0; z < out_n; ++z) {
      target.clear();
      for (State q : subsets[i]) {
        for (std::size_t dg = 0; dg < base; ++dg) {
          const State t = a.next(q, insert(z, dg));
          if (!mark[t]) {
            mark[t] = 1;
            target.push_back(t);
          }
        }
      }
      for (State t : target) mark[t] = 0;
      std::sort(target.begin(), target.end());
      const State id = intern(std::vector<State>(target));
      d.delta[i * out_n + z] = id;
    }
  }
  return minimize(d);
}

Dfa to_sharp(const Dfa& a, std::size_t base, std::size_t arity) {
  const TrackAlphabet sharp{base, arity, Padding::Sharp}, zero{base, arity, Padding::Zero};
  Dfa r;
  r.num_symbols = sharp.size();
  r.initial = a.initial;
  r.accepting = a.accepting;
  r.delta.resize(a.num_states() * r.num_symbols);
  for (Symbol s = 0; s < r.num_symbols; ++s) {
    auto letters = sharp.decode(s);
    for (auto& l : letters)
      if (l == base) l = 0;
    const Symbol z = zero.encode(letters);
    for (State q = 0; q < static_cast<State>(a.num_states()); ++q) r.delta[q * r.num_symbols + s] = a.next(q, z);
  }
  return minimize(intersect(r, well_formed(sharp)));
}

}  // namespace zfm
