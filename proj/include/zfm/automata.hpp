#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zfm {

using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Symbol = std::uint32_t;
using State = std::int32_t;
using Word = std::vector<Symbol>;

class AlphabetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Complete deterministic automaton over the alphabet {0, ..., num_symbols-1}.
/// Transitions are stored row-major: delta[q * num_symbols + a].
struct Dfa {
  std::size_t num_symbols = 0;
  State initial = 0;
  std::vector<char> accepting;
  std::vector<State> delta;

  std::size_t num_states() const { return accepting.size(); }
  State next(State q, Symbol a) const {
    return delta[static_cast<std::size_t>(q) * num_symbols + a];
  }
  State add_state(bool acc);
  State run(std::span<const Symbol> word) const;
  bool accepts(std::span<const Symbol> word) const {
    return accepting[run(word)] != 0;
  }

  static Dfa empty(std::size_t num_symbols);
  static Dfa universal(std::size_t num_symbols);
  /// Accepts exactly one word.
  static Dfa word(std::size_t num_symbols, std::span<const Symbol> w);

  bool operator==(const Dfa&) const = default;
};

/// Nondeterministic automaton with epsilon moves.
struct Nfa {
  std::size_t num_symbols = 0;
  std::vector<State> initial;
  std::vector<char> accepting;
  std::vector<std::vector<std::pair<Symbol, State>>> edges;
  std::vector<std::vector<State>> eps;

  explicit Nfa(std::size_t n = 0) : num_symbols(n) {}

  std::size_t num_states() const { return accepting.size(); }
  State add_state(bool acc = false);
  void add_edge(State from, Symbol a, State to) { edges[from].emplace_back(a, to); }
  void add_eps(State from, State to) { eps[from].push_back(to); }
  bool accepts(std::span<const Symbol> word) const;

  static Nfa from_dfa(const Dfa& a);
};

// Determinization, minimization, cleanup.
Dfa determinize(const Nfa& a);
/// Minimal complete DFA with states numbered in breadth-first order from the
/// initial state (symbols in increasing order), so equal languages give equal
/// objects.
Dfa minimize(const Dfa& a);
/// Drops unreachable states and merges states that cannot reach acceptance
/// into one sink. The result stays complete.
Dfa trim(const Dfa& a);
/// Removes states that are unreachable or not co-reachable.
Nfa trim(const Nfa& a);
/// States that are reachable and co-reachable.
std::vector<char> useful_states(const Dfa& a);

// Boolean and regular operations.
Dfa complement(const Dfa& a);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);
Dfa difference(const Dfa& a, const Dfa& b);
Nfa unite(const Nfa& a, const Nfa& b);
Nfa concat(const Nfa& a, const Nfa& b);
Nfa star(const Nfa& a);
Nfa intersect(const Nfa& a, const Nfa& b);
Nfa complement(const Nfa& a);

// Decision procedures.
bool is_empty(const Dfa& a);
bool is_empty(const Nfa& a);
bool equivalent(const Dfa& a, const Dfa& b);
bool equivalent(const Nfa& a, const Nfa& b);
/// L(b) is a subset of L(a).
bool includes(const Dfa& a, const Dfa& b);
bool includes(const Nfa& a, const Nfa& b);
/// Some accepted word of minimal length (length-lex least), if any.
bool shortest_word(const Dfa& a, Word& out);

// Counting and enumeration.
/// Number of accepted words of length exactly n.
BigInt count_exact(const Dfa& a, std::size_t n);
/// Number of accepted words of length <= n (the empty word included).
BigInt count_by_length(const Dfa& a, std::size_t n);
/// Calls visit on accepted words of length <= max_len in length-lex order,
/// with symbols compared through `rank` (identity when empty). Stops early
/// when visit returns false.
void enumerate(const Dfa& a, std::size_t max_len,
               const std::function<bool(const Word&)>& visit,
               std::span<const std::size_t> rank = {});
std::vector<Word> enumerate(const Dfa& a, std::size_t max_len);

/// Polynomial growth test: every strongly connected component of the useful
/// part is either trivial or a single simple cycle.
bool is_sparse(const Dfa& a);

// Checks.
void require_same_alphabet(std::size_t a, std::size_t b);

}  // namespace zfm
