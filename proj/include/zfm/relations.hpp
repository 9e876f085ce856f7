#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "zfm/automata.hpp"
#include "zfm/presentation.hpp"
#include "zfm/tracks.hpp"

namespace zfm {

/// Thrown when a construction exceeds a configured state cap.
class ResourceCap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A k-ary relation on Z^r as a minimal automaton over Sigma^k, tracks packed
/// little-endian in radix |Sigma| and padded with the zero digit. All
/// relations produced here are value-saturated: acceptance depends only on
/// the elements denoted by the tracks, not on the chosen representations.
struct Relation {
  std::size_t base = 0;
  std::size_t arity = 0;
  Dfa dfa;

  Relation() = default;
  Relation(std::size_t base, std::size_t arity, const Dfa& a);
  static Relation constant(std::size_t base, std::size_t arity, bool value);

  TrackAlphabet alphabet() const { return {base, arity, Padding::Zero}; }
  bool accepts(const std::vector<Word>& tracks) const;
  std::size_t num_states() const { return dfa.num_states(); }
};

/// Places a and b on a common set of `out_arity` tracks (track j of a reads
/// result track map_a[j]) and combines them.
Relation combine(const Relation& a, std::span<const std::size_t> map_a, const Relation& b,
                 std::span<const std::size_t> map_b, std::size_t out_arity, BoolOp op);
Relation remap(const Relation& r, std::span<const std::size_t> map, std::size_t out_arity);
/// Projects out one track; the remaining tracks keep their order.
Relation exists(const Relation& r, std::size_t track);
Relation complement(const Relation& r);
bool equivalent(const Relation& a, const Relation& b);

/// Track coefficient in a linear carry automaton.
enum class Coefficient { Plus, Minus, ApplyF };

/// Accepts (w_1, ..., w_k) iff sum_j M_j [w_j]_F = 0, by carry saturation.
/// Throws ResourceCap when more than `cap` carries are reachable.
Relation linear_relation(const Presentation& p, std::span<const Coefficient> coeffs,
                         std::size_t cap, std::vector<SmallVec>* carries = nullptr);

/// The base relations of the expansion and their derived relations, built on
/// demand and cached. Track orders are given with each accessor.
class Structure {
 public:
  explicit Structure(Presentation p, std::string cache_dir = "");

  const Presentation& presentation() const { return p_; }
  std::size_t base() const { return p_.num_digits(); }

  /// (x, y): [x] = [y].
  const Relation& equality() const;
  /// (x, y, z): [x] + [y] = [z].
  const Relation& addition() const;
  /// (x, y): F[x] = [y].
  const Relation& f_graph() const;
  /// (u, v): u in I_F \ Sigma and u = F(v).
  const Relation& f_inverse() const;
  /// (x): x = 0.
  const Relation& zero() const;
  /// (x): x in Sigma.
  const Relation& sigma() const;
  /// (x): x in I_F.
  const Relation& in_IF() const;
  /// (x): x in I_{F,a} for digit index a != 0.
  const Relation& in_IFa(std::size_t a) const;
  /// (u, v): u precedes-or-equals v.
  const Relation& preceq() const;
  /// (u, v): u strictly precedes v.
  const Relation& prec() const;
  /// (u, v): same position.
  const Relation& sim() const;
  /// (g, u): u = V_F(g).
  const Relation& valuation() const;
  /// (g, u): R(g, u).
  const Relation& rightmost() const;
  /// (u, g): u < V_F(g).
  const Relation& below_valuation() const;
  /// (u, g): eps_F(u, g).
  const Relation& occurs() const;
  /// (g, u, h): the displayed definition of f, read literally.
  const Relation& truncation_literal() const;
  /// (g, u, h): f with the rightmost letter pinned at u's position.
  const Relation& truncation() const;
  /// (g, u1, u2, r): r = g|[u1 u2] (closed) or r = g|[u2 u1[ (half-open).
  const Relation& restriction(bool closed) const;

  /// Named cache for relations built elsewhere (formula definitions).
  const Relation& cached(const std::string& key,
                         const std::function<Relation()>& build) const;

  /// Saturates a word relation: track i then accepts every word with the
  /// same value as some word accepted in track i. `tracks` lists the tracks.
  Relation saturate(const Dfa& words, std::size_t arity,
                    std::span<const std::size_t> tracks) const;

  /// Words (not tuples) that are canonical: nonzero last digit and length-lex
  /// least under the digit order among representations of their value.
  const Dfa& canonical_domain() const;

  /// Element-level membership through canonical words.
  bool holds(const Relation& r, const std::vector<Element>& args) const;

 private:
  const Relation& memo(const std::string& key, const std::function<Relation()>& build) const;

  Presentation p_;
  std::string cache_dir_;
  mutable std::recursive_mutex mutex_;
  mutable std::map<std::string, std::unique_ptr<Relation>> cache_;
  mutable std::unique_ptr<Dfa> domain_;
};

/// Convolutions of canonical words with a nonzero last column: exactly one
/// word per element tuple. The enumeration domain for k-ary relations.
Dfa canonical_tuples(const Structure& s, std::size_t arity);

}  // namespace zfm
