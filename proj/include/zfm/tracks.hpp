#pragma once

#include <span>
#include <vector>

#include "zfm/automata.hpp"

namespace zfm {

/// Padding convention of a multi-track alphabet.
///   Sharp: an extra letter (index `base`) that, once read in a track, fills
///          that track to the end of the word; the all-pad column is excluded.
///   Zero:  no extra letter; shorter tracks are filled with letter 0. This is
///          only meaningful when trailing zeros do not change what a word
///          denotes.
///   None:  all tracks have the same length.
enum class Padding { None, Sharp, Zero };

/// k-tuples over a base alphabet, packed little-endian: track i holds the
/// i-th digit in radix (base + 1) for Sharp padding and radix base otherwise.
struct TrackAlphabet {
  std::size_t base = 0;
  std::size_t arity = 1;
  Padding padding = Padding::None;

  std::size_t radix() const { return padding == Padding::Sharp ? base + 1 : base; }
  std::size_t size() const;
  /// Letter index used for the pad (base for Sharp, 0 for Zero).
  std::size_t pad_letter() const { return padding == Padding::Sharp ? base : 0; }

  Symbol encode(std::span<const std::size_t> letters) const;
  std::vector<std::size_t> decode(Symbol s) const;
  std::size_t letter(Symbol s, std::size_t track) const;
  bool is_all_pad(Symbol s) const;

  bool operator==(const TrackAlphabet&) const = default;
};

/// The convolution u1 * u2 * ... of words over the base alphabet.
Word convolve(std::span<const std::vector<std::size_t>> words, const TrackAlphabet& alph);

/// Splits a convolved word back into its tracks (pads removed).
std::vector<std::vector<std::size_t>> deconvolve(std::span<const Symbol> word,
                                                 const TrackAlphabet& alph);

/// Words over a Sharp alphabet where each track's pad persists to the end.
Dfa well_formed(const TrackAlphabet& alph);

/// Existential projection of one track. For Sharp padding, columns that become
/// all-pad turn into epsilon moves; for Zero padding the result is passed
/// through pad_closure.
Nfa project(const Dfa& a, const TrackAlphabet& alph, std::size_t track);

/// Inserts a free track at position `track`.
Dfa cylindrify(const Dfa& a, const TrackAlphabet& alph, std::size_t track);

/// Makes acceptance invariant under appending or removing trailing all-pad
/// columns (Zero padding). Identity for the other paddings, where such
/// columns are not letters.
Nfa pad_closure(const Nfa& a, const TrackAlphabet& alph);

// ---- Zero-padded fast paths used by relation algebra (alphabet base^k).

/// result[z] for z over `out_arity` tracks is the symbol over `map.size()`
/// tracks whose track j carries digit map[j] of z.
std::vector<Symbol> track_map(std::size_t base, std::size_t out_arity,
                              std::span<const std::size_t> map);

/// Relabels a relation automaton: source track j reads result track map[j].
/// Covers permutation, duplication of arguments and cylindrification.
Dfa remap_tracks(const Dfa& a, std::size_t base, std::size_t out_arity,
                 std::span<const std::size_t> map);

enum class BoolOp { And, Or, AndNot, Xor };

/// Synchronous product of two relation automata placed on a common track set.
Dfa track_product(const Dfa& a, std::span<const std::size_t> map_a, const Dfa& b,
                  std::span<const std::size_t> map_b, std::size_t base,
                  std::size_t out_arity, BoolOp op);

/// Determinized existential projection of one track with zero-column closure,
/// minimized.
Dfa exists_track(const Dfa& a, std::size_t base, std::size_t arity, std::size_t track);

/// The same relation over the Sharp alphabet: pads read as the zero digit and
/// columns are restricted to well-formed convolutions.
Dfa to_sharp(const Dfa& a, std::size_t base, std::size_t arity);

}  // namespace zfm
