#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zfm/formula.hpp"
#include "zfm/relations.hpp"

namespace zfm {

class UnboundVariable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Compiles formulas to relation automata. Library predicates and functions
/// that the structure provides directly (eps, sim, prec, Finv, f, f_literal,
/// restrict, restrict_open) use the structure's relations; other definitions
/// are compiled once from their bodies and cached in the structure.
class Compiler {
 public:
  Compiler(const Structure& s, const Library& lib) : s_(s), lib_(lib) {}

  /// Relation whose track i is free_vars[i].
  Relation compile(const Formula& f, const std::vector<std::string>& free_vars) const;
  /// The graph (params...) of a library definition.
  Relation definition(const Definition& d) const;

  const Structure& structure() const { return s_; }
  const Library& library() const { return lib_; }

  /// A relation together with the variable carried by each track.
  struct Factor;

 private:
  Factor build(const Formula& f) const;
  void gather(const Formula& f, std::vector<Factor>& factors, std::vector<std::string>& elim) const;
  void atom(const Formula& f, std::vector<Factor>& factors, std::vector<std::string>& elim) const;
  std::string flatten(const Term& t, std::vector<Factor>& factors, std::vector<std::string>& elim) const;
  const Relation& predicate(const Formula& f) const;
  const Relation& function_graph(const std::string& name) const;
  std::string fresh() const;

  const Structure& s_;
  const Library& lib_;
  mutable std::size_t counter_ = 0;
};

/// Element tuple of a convolved relation word.
std::vector<Element> decode_tuple(const Presentation& p, std::span<const Symbol> word,
                                  std::size_t arity);

struct Decision {
  bool truth = false;
  /// Values of the outermost existential block, when the sentence is true.
  std::vector<std::pair<std::string, Element>> witness;
};

Decision decide(const Compiler& c, const Formula& sentence);

/// Satisfying tuples, one per element tuple (canonical words, length-lex),
/// with word length <= max_len. With canonical = false every accepted
/// representation is listed.
std::vector<std::vector<Element>> solve(const Compiler& c, const Formula& f,
                                        const std::vector<std::string>& free_vars,
                                        std::size_t max_len, bool canonical = true);
/// Number of satisfying tuples whose canonical convolution has length <= n.
BigInt count(const Compiler& c, const Formula& f, const std::vector<std::string>& free_vars,
             std::size_t n);

struct IpWitness {
  std::vector<Element> u;
  /// g[T] realizes the trace T (bit i of T set iff the coding holds for u_i).
  std::vector<Element> g;
};

struct IpSearch {
  std::optional<IpWitness> witness;
  std::size_t candidates = 0;
  std::size_t tuples_tried = 0;
  /// Largest number of traces realized by a single tuple.
  std::size_t best_traces = 0;
};

/// Bounded search for n elements of I_F (canonical length <= search_len) that
/// are shattered by the binary relation `coding` (u, g), which defaults to
/// eps_F. Each trace is decided by emptiness of the corresponding boolean
/// combination of the sections {g : coding(u_i, g)}.
IpSearch ip_witness_search(const Structure& s, std::size_t n, std::size_t search_len,
                           const Relation* coding = nullptr);

}  // namespace zfm
