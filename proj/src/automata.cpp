#include "zfm/automata.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "zfm/detail/hash.hpp"

namespace zfm {

void require_same_alphabet(std::size_t a, std::size_t b) {
  if (a != b) {
    throw AlphabetMismatch("alphabet size mismatch: " + std::to_string(a) +
                           " vs " + std::to_string(b));
  }
}

// ---------------------------------------------------------------- Dfa basics

State Dfa::add_state(bool acc) {
  const auto q = static_cast<State>(accepting.size());
  accepting.push_back(acc ? 1 : 0);
  delta.resize(delta.size() + num_symbols, q);
  return q;
}

State Dfa::run(std::span<const Symbol> word) const {
  State q = initial;
  for (Symbol a : word) {
    if (a >= num_symbols) throw AlphabetMismatch("symbol out of range");
    q = next(q, a);
  }
  return q;
}

Dfa Dfa::empty(std::size_t n) {
  Dfa d;
  d.num_symbols = n;
  d.add_state(false);
  return d;
}

Dfa Dfa::universal(std::size_t n) {
  Dfa d;
  d.num_symbols = n;
  d.add_state(true);
  return d;
}

Dfa Dfa::word(std::size_t n, std::span<const Symbol> w) {
  Dfa d;
  d.num_symbols = n;
  for (std::size_t i = 0; i <= w.size(); ++i) d.add_state(i == w.size());
  const State sink = d.add_state(false);
  std::fill(d.delta.begin(), d.delta.end(), sink);
  for (std::size_t i = 0; i < w.size(); ++i) {
    d.delta[i * n + w[i]] = static_cast<State>(i + 1);
  }
  return d;
}

// ---------------------------------------------------------------- Nfa basics

State Nfa::add_state(bool acc) {
  const auto q = static_cast<State>(accepting.size());
  accepting.push_back(acc ? 1 : 0);
  edges.emplace_back();
  eps.emplace_back();
  return q;
}

namespace {

void eps_close(const Nfa& a, std::vector<State>& set) {
  std::vector<char> seen(a.num_states(), 0);
  std::vector<State> stack;
  for (State q : set) {
    if (!seen[q]) {
      seen[q] = 1;
      stack.push_back(q);
    }
  }
  set.clear();
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    set.push_back(q);
    for (State t : a.eps[q]) {
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  std::sort(set.begin(), set.end());
}

}  // namespace

bool Nfa::accepts(std::span<const Symbol> word) const {
  std::vector<State> cur(initial.begin(), initial.end());
  eps_close(*this, cur);
  for (Symbol s : word) {
    std::vector<State> nxt;
    for (State q : cur) {
      for (auto [a, t] : edges[q]) {
        if (a == s) nxt.push_back(t);
      }
    }
    eps_close(*this, nxt);
    cur = std::move(nxt);
  }
  return std::any_of(cur.begin(), cur.end(),
                     [&](State q) { return accepting[q] != 0; });
}

Nfa Nfa::from_dfa(const Dfa& a) {
  Nfa n(a.num_symbols);
  for (std::size_t q = 0; q < a.num_states(); ++q) n.add_state(a.accepting[q]);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      n.add_edge(static_cast<State>(q), s, a.next(static_cast<State>(q), s));
    }
  }
  n.initial = {a.initial};
  return n;
}

// ------------------------------------------------------------ determinize

Dfa determinize(const Nfa& a) {
  Dfa d;
  d.num_symbols = a.num_symbols;
  std::unordered_map<std::vector<State>, State, detail::VectorHash> index;
  std::vector<std::vector<State>> subsets;

  auto intern = [&](std::vector<State>&& s) -> State {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    const bool acc = std::any_of(s.begin(), s.end(),
                                 [&](State q) { return a.accepting[q] != 0; });
    const State id = d.add_state(acc);
    index.emplace(s, id);
    subsets.push_back(std::move(s));
    return id;
  };

  std::vector<State> start(a.initial.begin(), a.initial.end());
  eps_close(a, start);
  d.initial = intern(std::move(start));
  const State dead = intern({});

  std::vector<std::pair<Symbol, State>> moves;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    moves.clear();
    for (State q : subsets[i]) {
      moves.insert(moves.end(), a.edges[q].begin(), a.edges[q].end());
    }
    std::sort(moves.begin(), moves.end());
    std::size_t j = 0;
    std::vector<State> row(a.num_symbols, dead);
    while (j < moves.size()) {
      const Symbol s = moves[j].first;
      std::vector<State> target;
      for (; j < moves.size() && moves[j].first == s; ++j) {
        if (target.empty() || target.back() != moves[j].second) {
          target.push_back(moves[j].second);
        }
      }
      eps_close(a, target);
      row[s] = intern(std::move(target));
    }
    std::copy(row.begin(), row.end(),
              d.delta.begin() + static_cast<std::ptrdiff_t>(i * a.num_symbols));
  }
  return d;
}

// ------------------------------------------------------------- minimize

namespace {

std::vector<char> reachable(const Dfa& a) {
  std::vector<char> seen(a.num_states(), 0);
  std::vector<State> stack{a.initial};
  seen[a.initial] = 1;
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const State t = a.next(q, s);
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

std::vector<char> coreachable(const Dfa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<State>> rev(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      rev[a.next(static_cast<State>(q), s)].push_back(static_cast<State>(q));
    }
  }
  std::vector<char> seen(n, 0);
  std::vector<State> stack;
  for (std::size_t q = 0; q < n; ++q) {
    if (a.accepting[q]) {
      seen[q] = 1;
      stack.push_back(static_cast<State>(q));
    }
  }
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    for (State p : rev[q]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

/// Renumbers reachable states breadth-first from the initial state.
Dfa canonical_order(const Dfa& a) {
  std::vector<State> id(a.num_states(), -1);
  std::vector<State> order{a.initial};
  id[a.initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const State t = a.next(order[i], s);
      if (id[t] < 0) {
        id[t] = static_cast<State>(order.size());
        order.push_back(t);
      }
    }
  }
  Dfa d;
  d.num_symbols = a.num_symbols;
  d.initial = 0;
  d.accepting.resize(order.size());
  d.delta.resize(order.size() * a.num_symbols);
  for (std::size_t i = 0; i < order.size(); ++i) {
    d.accepting[i] = a.accepting[order[i]];
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      d.delta[i * a.num_symbols + s] = id[a.next(order[i], s)];
    }
  }
  return d;
}

}  // namespace

Dfa minimize(const Dfa& input) {
  const Dfa a = canonical_order(input);  // reachable part only
  const std::size_t n = a.num_states();
  const std::size_t k = a.num_symbols;
  std::vector<State> block(n);
  for (std::size_t q = 0; q < n; ++q) block[q] = a.accepting[q] ? 1 : 0;
  // Normalize so that ids are dense.
  std::size_t num_blocks = 0;
  {
    std::vector<State> remap(2, -1);
    for (std::size_t q = 0; q < n; ++q) {
      if (remap[block[q]] < 0) remap[block[q]] = static_cast<State>(num_blocks++);
      block[q] = remap[block[q]];
    }
  }

  std::vector<State> signature(k + 1);
  while (true) {
    std::unordered_map<std::vector<State>, State, detail::VectorHash> ids;
    ids.reserve(n * 2);
    std::vector<State> next_block(n);
    for (std::size_t q = 0; q < n; ++q) {
      signature[0] = block[q];
      for (Symbol s = 0; s < k; ++s) {
        signature[s + 1] = block[a.next(static_cast<State>(q), s)];
      }
      auto [it, inserted] =
          ids.try_emplace(signature, static_cast<State>(ids.size()));
      next_block[q] = it->second;
    }
    const std::size_t count = ids.size();
    block.swap(next_block);
    if (count == num_blocks) break;
    num_blocks = count;
  }

  Dfa q;
  q.num_symbols = k;
  q.accepting.assign(num_blocks, 0);
  q.delta.assign(num_blocks * k, 0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto b = static_cast<std::size_t>(block[s]);
    q.accepting[b] = a.accepting[s];
    for (Symbol c = 0; c < k; ++c) {
      q.delta[b * k + c] = block[a.next(static_cast<State>(s), c)];
    }
  }
  q.initial = block[a.initial];
  return canonical_order(q);
}

std::vector<char> useful_states(const Dfa& a) {
  auto r = reachable(a);
  const auto c = coreachable(a);
  for (std::size_t q = 0; q < r.size(); ++q) r[q] = static_cast<char>(r[q] && c[q]);
  return r;
}

Dfa trim(const Dfa& a) {
  const auto use = useful_states(a);
  if (!use[a.initial]) return Dfa::empty(a.num_symbols);
  std::vector<State> id(a.num_states(), -1);
  Dfa d;
  d.num_symbols = a.num_symbols;
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (use[q]) id[q] = d.add_state(a.accepting[q]);
  }
  const State sink = d.add_state(false);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (!use[q]) continue;
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const State t = a.next(static_cast<State>(q), s);
      d.delta[static_cast<std::size_t>(id[q]) * a.num_symbols + s] =
          use[t] ? id[t] : sink;
    }
  }
  d.initial = id[a.initial];
  return d;
}

Nfa trim(const Nfa& a) {
  const std::size_t n = a.num_states();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<std::vector<State>> rev(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (auto [s, t] : a.edges[q]) rev[t].push_back(static_cast<State>(q));
    for (State t : a.eps[q]) rev[t].push_back(static_cast<State>(q));
  }
  std::vector<State> stack(a.initial.begin(), a.initial.end());
  for (State q : stack) fwd[q] = 1;
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    auto visit = [&](State t) {
      if (!fwd[t]) {
        fwd[t] = 1;
        stack.push_back(t);
      }
    };
    for (auto [s, t] : a.edges[q]) visit(t);
    for (State t : a.eps[q]) visit(t);
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (a.accepting[q]) {
      bwd[q] = 1;
      stack.push_back(static_cast<State>(q));
    }
  }
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    for (State p : rev[q]) {
      if (!bwd[p]) {
        bwd[p] = 1;
        stack.push_back(p);
      }
    }
  }
  Nfa r(a.num_symbols);
  std::vector<State> id(n, -1);
  for (std::size_t q = 0; q < n; ++q) {
    if (fwd[q] && bwd[q]) id[q] = r.add_state(a.accepting[q]);
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (id[q] < 0) continue;
    for (auto [s, t] : a.edges[q]) {
      if (id[t] >= 0) r.add_edge(id[q], s, id[t]);
    }
    for (State t : a.eps[q]) {
      if (id[t] >= 0) r.add_eps(id[q], id[t]);
    }
  }
  for (State q : a.initial) {
    if (id[q] >= 0) r.initial.push_back(id[q]);
  }
  return r;
}

// ------------------------------------------------------- boolean products

namespace {

template <class Combine>
Dfa product(const Dfa& a, const Dfa& b, Combine combine) {
  require_same_alphabet(a.num_symbols, b.num_symbols);
  const std::size_t k = a.num_symbols;
  Dfa d;
  d.num_symbols = k;
  std::unordered_map<std::uint64_t, State> index;
  std::vector<std::pair<State, State>> pairs;
  auto key = [](State p, State q) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p)) << 32) |
           static_cast<std::uint32_t>(q);
  };
  auto intern = [&](State p, State q) {
    auto [it, inserted] = index.try_emplace(key(p, q), 0);
    if (inserted) {
      it->second = d.add_state(combine(a.accepting[p] != 0, b.accepting[q] != 0));
      pairs.emplace_back(p, q);
    }
    return it->second;
  };
  d.initial = intern(a.initial, b.initial);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [p, q] = pairs[i];
    for (Symbol s = 0; s < k; ++s) {
      const State t = intern(a.next(p, s), b.next(q, s));
      d.delta[i * k + s] = t;
    }
  }
  return d;
}

}  // namespace

Dfa complement(const Dfa& a) {
  Dfa d = a;
  for (auto& acc : d.accepting) acc = acc ? 0 : 1;
  return d;
}

Dfa intersect(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && y; });
}

Dfa unite(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x || y; });
}

Dfa difference(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && !y; });
}

namespace {

/// Copies the states of `src` into `dst`, returning the offset.
State embed(Nfa& dst, const Nfa& src) {
  const auto offset = static_cast<State>(dst.num_states());
  for (std::size_t q = 0; q < src.num_states(); ++q) dst.add_state(src.accepting[q]);
  for (std::size_t q = 0; q < src.num_states(); ++q) {
    for (auto [s, t] : src.edges[q]) dst.add_edge(offset + static_cast<State>(q), s, offset + t);
    for (State t : src.eps[q]) dst.add_eps(offset + static_cast<State>(q), offset + t);
  }
  return offset;
}

}  // namespace

Nfa unite(const Nfa& a, const Nfa& b) {
  require_same_alphabet(a.num_symbols, b.num_symbols);
  Nfa r(a.num_symbols);
  const State oa = embed(r, a);
  const State ob = embed(r, b);
  for (State q : a.initial) r.initial.push_back(oa + q);
  for (State q : b.initial) r.initial.push_back(ob + q);
  return r;
}

Nfa concat(const Nfa& a, const Nfa& b) {
  require_same_alphabet(a.num_symbols, b.num_symbols);
  Nfa r(a.num_symbols);
  const State oa = embed(r, a);
  const State ob = embed(r, b);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (!a.accepting[q]) continue;
    r.accepting[oa + static_cast<State>(q)] = 0;
    for (State i : b.initial) r.add_eps(oa + static_cast<State>(q), ob + i);
  }
  for (State q : a.initial) r.initial.push_back(oa + q);
  return r;
}

Nfa star(const Nfa& a) {
  Nfa r(a.num_symbols);
  const State hub = r.add_state(true);
  const State oa = embed(r, a);
  for (State q : a.initial) r.add_eps(hub, oa + q);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (a.accepting[q]) r.add_eps(oa + static_cast<State>(q), hub);
  }
  r.initial = {hub};
  return r;
}

Nfa intersect(const Nfa& a, const Nfa& b) {
  return Nfa::from_dfa(minimize(intersect(determinize(a), determinize(b))));
}

Nfa complement(const Nfa& a) {
  return Nfa::from_dfa(complement(determinize(a)));
}

// ------------------------------------------------------------- decisions

bool is_empty(const Dfa& a) {
  const auto r = reachable(a);
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    if (r[q] && a.accepting[q]) return false;
  }
  return true;
}

bool is_empty(const Nfa& a) { return trim(a).num_states() == 0; }

bool equivalent(const Dfa& a, const Dfa& b) {
  require_same_alphabet(a.num_symbols, b.num_symbols);
  return is_empty(product(a, b, [](bool x, bool y) { return x != y; }));
}

bool equivalent(const Nfa& a, const Nfa& b) {
  return equivalent(determinize(a), determinize(b));
}

bool includes(const Dfa& a, const Dfa& b) { return is_empty(difference(b, a)); }

bool includes(const Nfa& a, const Nfa& b) {
  return includes(determinize(a), determinize(b));
}

bool shortest_word(const Dfa& a, Word& out) {
  std::vector<State> parent(a.num_states(), -1);
  std::vector<Symbol> via(a.num_states(), 0);
  std::vector<char> seen(a.num_states(), 0);
  std::deque<State> queue{a.initial};
  seen[a.initial] = 1;
  while (!queue.empty()) {
    const State q = queue.front();
    queue.pop_front();
    if (a.accepting[q]) {
      out.clear();
      for (State p = q; p != a.initial; p = parent[p]) out.push_back(via[p]);
      std::reverse(out.begin(), out.end());
      return true;
    }
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const State t = a.next(q, s);
      if (!seen[t]) {
        seen[t] = 1;
        parent[t] = q;
        via[t] = s;
        queue.push_back(t);
      }
    }
  }
  return false;
}

// -------------------------------------------------------------- counting

namespace {

template <class Visit>
void count_rounds(const Dfa& a, std::size_t n, Visit visit) {
  const auto use = useful_states(a);
  std::vector<BigInt> cur(a.num_states()), nxt(a.num_states());
  cur[a.initial] = 1;
  for (std::size_t len = 0;; ++len) {
    BigInt total = 0;
    for (std::size_t q = 0; q < cur.size(); ++q) {
      if (a.accepting[q]) total += cur[q];
    }
    visit(len, total);
    if (len == n) break;
    for (auto& x : nxt) x = 0;
    for (std::size_t q = 0; q < cur.size(); ++q) {
      if (!use[q] || cur[q] == 0) continue;
      for (Symbol s = 0; s < a.num_symbols; ++s) {
        const State t = a.next(static_cast<State>(q), s);
        if (use[t]) nxt[t] += cur[q];
      }
    }
    cur.swap(nxt);
  }
}

}  // namespace

BigInt count_exact(const Dfa& a, std::size_t n) {
  BigInt result = 0;
  count_rounds(a, n, [&](std::size_t len, const BigInt& c) {
    if (len == n) result = c;
  });
  return result;
}

BigInt count_by_length(const Dfa& a, std::size_t n) {
  BigInt result = 0;
  count_rounds(a, n, [&](std::size_t, const BigInt& c) { result += c; });
  return result;
}

void enumerate(const Dfa& a, std::size_t max_len,
               const std::function<bool(const Word&)>& visit,
               std::span<const std::size_t> rank) {
  // dist[q]: length of the shortest accepted continuation from q.
  const std::size_t n = a.num_states();
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n, kInf);
  std::vector<std::vector<State>> rev(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      rev[a.next(static_cast<State>(q), s)].push_back(static_cast<State>(q));
    }
  }
  std::deque<State> queue;
  for (std::size_t q = 0; q < n; ++q) {
    if (a.accepting[q]) {
      dist[q] = 0;
      queue.push_back(static_cast<State>(q));
    }
  }
  while (!queue.empty()) {
    const State q = queue.front();
    queue.pop_front();
    for (State p : rev[q]) {
      if (dist[p] == kInf) {
        dist[p] = dist[q] + 1;
        queue.push_back(p);
      }
    }
  }

  std::vector<Symbol> order(a.num_symbols);
  std::iota(order.begin(), order.end(), Symbol{0});
  if (!rank.empty()) {
    std::sort(order.begin(), order.end(),
              [&](Symbol x, Symbol y) { return rank[x] < rank[y]; });
  }

  Word word;
  bool stop = false;
  std::function<void(State, std::size_t)> dfs = [&](State q, std::size_t left) {
    if (stop) return;
    if (left == 0) {
      if (a.accepting[q] && !visit(word)) stop = true;
      return;
    }
    for (Symbol s : order) {
      const State t = a.next(q, s);
      if (dist[t] == kInf || dist[t] > left - 1) continue;
      word.push_back(s);
      dfs(t, left - 1);
      word.pop_back();
      if (stop) return;
    }
  };
  for (std::size_t len = 0; len <= max_len && !stop; ++len) {
    if (dist[a.initial] == kInf || dist[a.initial] > len) continue;
    dfs(a.initial, len);
  }
}

std::vector<Word> enumerate(const Dfa& a, std::size_t max_len) {
  std::vector<Word> out;
  enumerate(a, max_len, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------- sparse

bool is_sparse(const Dfa& a) {
  const auto use = useful_states(a);
  const std::size_t n = a.num_states();
  // Iterative Tarjan over the useful subgraph.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<State> stack;
  int counter = 0, num_comps = 0;
  struct Frame {
    State q;
    Symbol next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (!use[root] || index[root] >= 0) continue;
    std::vector<Frame> call{{static_cast<State>(root), 0}};
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<State>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < a.num_symbols) {
        const State t = a.next(f.q, f.next++);
        if (!use[t]) continue;
        if (index[t] < 0) {
          index[t] = low[t] = counter++;
          stack.push_back(t);
          on_stack[t] = 1;
          call.push_back({t, 0});
        } else if (on_stack[t]) {
          low[f.q] = std::min(low[f.q], index[t]);
        }
        continue;
      }
      const State q = f.q;
      call.pop_back();
      if (!call.empty()) low[call.back().q] = std::min(low[call.back().q], low[q]);
      if (low[q] == index[q]) {
        State t;
        do {
          t = stack.back();
          stack.pop_back();
          on_stack[t] = 0;
          comp[t] = num_comps;
        } while (t != q);
        ++num_comps;
      }
    }
  }
  std::vector<std::size_t> states(num_comps, 0), inner(num_comps, 0);
  for (std::size_t q = 0; q < n; ++q) {
    if (!use[q]) continue;
    ++states[comp[q]];
    for (Symbol s = 0; s < a.num_symbols; ++s) {
      const State t = a.next(static_cast<State>(q), s);
      if (use[t] && comp[t] == comp[q]) ++inner[comp[q]];
    }
  }
  for (int c = 0; c < num_comps; ++c) {
    if (inner[c] > 0 && inner[c] != states[c]) return false;
  }
  return true;
}

}  // namespace zfm
