#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zfm/automata.hpp"
#include "zfm/lattice.hpp"

namespace zfm {

/// Small-integer mirror of an Element, used inside carry automata.
using SmallVec = std::vector<std::int64_t>;

class InvalidPresentation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An instance (Z^r, F, Sigma, Sigma0). Digits are indexed 0..|Sigma|-1 with
/// index 0 always the zero element, so zero-padding of words is value-neutral.
class Presentation {
 public:
  /// Validates structure (rank, det F != 0, 0 in Sigma, symmetry, standing
  /// assumption, coset representatives) and throws InvalidPresentation on the
  /// first violation. `digit_order`, when non-empty, lists Sigma in the order
  /// used for canonical words; otherwise digits are ordered by max-norm, then
  /// positive-first.
  Presentation(std::string name, IntMatrix f, std::vector<Element> sigma,
               std::vector<Element> sigma0, std::vector<Element> digit_order = {},
               std::size_t carry_bound = 10000);

  /// Reads the flat key = value format (values are JSON literals).
  static Presentation parse(std::string_view text, std::string name = "");
  static Presentation load(const std::string& path);
  /// buchi2, buchi3 or gauss.
  static Presentation builtin(std::string_view name);
  static std::vector<std::string> builtin_names();
  /// The instance file text equivalent to this presentation.
  std::string to_text() const;

  const std::string& name() const { return name_; }
  std::size_t rank() const { return static_cast<std::size_t>(f_.rows()); }
  const IntMatrix& F() const { return f_; }
  const BigInt& det() const { return det_; }
  std::size_t num_digits() const { return sigma_.size(); }
  const Element& digit(std::size_t i) const { return sigma_[i]; }
  const std::vector<Element>& digits() const { return sigma_; }
  /// Index of `e` in Sigma.
  std::optional<std::size_t> digit_index(const Element& e) const;
  bool in_sigma0(std::size_t d) const { return sigma0_[d] != 0; }
  /// The Sigma0 representative of digit d's coset modulo F(Z^r).
  std::size_t coset_rep(std::size_t d) const { return coset_rep_[d]; }
  /// Index of -digit(d).
  std::size_t negated(std::size_t d) const { return negated_[d]; }
  /// Position of digit d in the digit order (0 = smallest).
  std::size_t rank_of(std::size_t d) const { return rank_[d]; }
  const std::vector<std::size_t>& digit_ranks() const { return rank_; }
  std::vector<std::size_t> digits_in_order() const;
  std::size_t carry_bound() const { return carry_bound_; }

  Element zero() const { return Element::Zero(static_cast<Eigen::Index>(rank())); }
  Element apply_F(const Element& x) const { return f_ * x; }
  /// F^{-1}(x) when x is in F(Z^r).
  std::optional<Element> apply_Finv(const Element& x) const;
  bool in_image(const Element& x) const;

  // Machine-integer mirrors for automaton construction.
  const std::vector<SmallVec>& small_digits() const { return small_sigma_; }
  SmallVec small_F(const SmallVec& x) const;
  /// F^{-1}(x) if integral; throws std::overflow_error outside 62-bit range.
  bool small_Finv(const SmallVec& x, SmallVec& out) const;

  /// [w]_F.
  Element eval(std::span<const Symbol> w) const;
  /// Digit word from element literals; throws if a letter is not in Sigma.
  Word word_of(const std::vector<Element>& letters) const;

  // Eigenvalue heuristic: all |lambda| > 1.
  bool expanding(double* min_modulus = nullptr) const;

 private:
  std::string name_;
  IntMatrix f_, adj_;
  BigInt det_;
  std::vector<Element> sigma_;
  std::vector<char> sigma0_;
  std::vector<std::size_t> coset_rep_, negated_, rank_;
  std::size_t carry_bound_;
  std::vector<SmallVec> small_sigma_;
  std::vector<std::int64_t> small_f_, small_adj_;
  std::int64_t small_det_ = 0;
};

std::string to_string(const Element& e);
/// Element literal: an integer (rank 1) or <a,b,...>.
std::optional<Element> parse_element(std::string_view text, std::size_t rank);
std::string word_to_string(const Presentation& p, std::span<const Symbol> w);
Element element_of(std::initializer_list<long long> coords);

struct SpanningReport {
  struct Condition {
    std::string name;
    bool pass = true;
    std::string detail;
  };
  std::vector<Condition> conditions;
  std::vector<std::string> warnings;
  bool all_pass() const;
  std::string to_text() const;
};

/// (C1)-(C3): C2 and C3 exhaustively, C1 as Z[F]-module generation.
SpanningReport check_spanning(const Presentation& p);

/// Word representation by greedy descent of an adapted norm; falls back to a
/// shortest representation if the descent stalls. Last digit nonzero.
Word encode(const Presentation& p, const Element& g);

/// Length of the shortest representation of g (0 for g = 0).
std::size_t min_length(const Presentation& p, const Element& g);

/// Length-lex least word under the digit order with nonzero last digit.
Word canonical_word(const Presentation& p, const Element& g);

/// Rewrites w so that its lowest nonzero digit lies in Sigma0 at the same
/// position. Throws std::invalid_argument if [w]_F = 0.
Word normalize_unicity(const Presentation& p, std::span<const Symbol> w);

}  // namespace zfm
