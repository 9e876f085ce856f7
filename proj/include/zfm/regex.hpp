#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "zfm/automata.hpp"

namespace zfm {

/// Immutable regular expression tree.
class Regex {
 public:
  enum class Kind { Empty, Epsilon, Lit, Union, Concat, Star };

  static Regex empty();
  static Regex epsilon();
  static Regex lit(Symbol s);
  static Regex alt(Regex a, Regex b);
  static Regex cat(Regex a, Regex b);
  static Regex star(Regex a);

  Kind kind() const { return node_->kind; }
  Symbol symbol() const { return node_->symbol; }
  const Regex& left() const { return *node_->left; }
  const Regex& right() const { return *node_->right; }

  /// Number of regular operations (union, concatenation, star) used.
  std::size_t complexity() const;
  bool nullable() const;
  bool is_empty_language() const;
  /// Largest literal plus one (0 if no literal).
  std::size_t symbol_bound() const;

  /// Prints with `name` for literals; `|`, juxtaposition and `*`.
  std::string to_string(const std::function<std::string(Symbol)>& name) const;
  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    Symbol symbol = 0;
    std::shared_ptr<const Regex> left, right;
  };
  explicit Regex(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Thompson construction. Throws AlphabetMismatch if a literal is not below
/// num_symbols.
Nfa compile_regex(const Regex& r, std::size_t num_symbols);

/// State elimination; the result denotes L(a) but is not size-optimal.
Regex to_regex(const Dfa& a);

/// Parses `|`, concatenation, `*`, `+`, `?`, parentheses, `()` for the empty
/// word and `{}` for the empty language. Literals are read by `lit`, which
/// receives the remaining input and returns the symbol and consumed length,
/// or nullopt when no literal starts there.
using LiteralReader =
    std::function<std::optional<std::pair<Symbol, std::size_t>>(std::string_view)>;
Regex parse_regex(std::string_view text, const LiteralReader& lit);

class RegexSyntaxError : public std::runtime_error {
 public:
  RegexSyntaxError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at column " + std::to_string(pos + 1)), column(pos + 1) {}
  std::size_t column;
};

}  // namespace zfm
