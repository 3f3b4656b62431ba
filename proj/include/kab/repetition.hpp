#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kab/word.hpp"

namespace kab {

// The factorial language searched: words without k-abelian n-powers of
// period >= min_period. With square_budget set (power 2 only), a word is
// free when it has at most that many distinct k-abelian square factors
// and, if min_period > 1, no square of period >= min_period at all.
struct AvoidancePredicate {
  int power = 2;
  int order = 1;
  int min_period = 1;
  std::optional<int> square_budget;

  void validate() const;
  std::string describe() const;
};

struct Occurrence {
  std::size_t start = 0;
  std::size_t period = 0;
  std::size_t power = 0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// Distinct square factors keyed by exact word identity.
using SquareInventory = std::set<Word>;

std::optional<Occurrence> find_power(const Word& w, const AvoidancePredicate& pred);
bool is_free(const Word& w, const AvoidancePredicate& pred);
bool extension_is_free(const Word& w, Symbol c, const AvoidancePredicate& pred);
SquareInventory distinct_squares(const Word& w, int k);

// True when blocks [a, a+len) and [b, b+len) of s are k-abelian equivalent.
bool blocks_equivalent(std::span<const Symbol> s, std::size_t a, std::size_t b,
                       std::size_t len, int k, int alphabet_size);

// Letters plus additive fingerprints of their k-windows, so that the
// Psi_k multisets of two blocks can be compared in O(1). Fingerprint
// matches are always confirmed exactly.
class WindowIndex {
 public:
  WindowIndex(int alphabet_size, int k);

  void push(Symbol c);
  void pop();
  void clear();

  std::size_t size() const { return letters_.size(); }
  std::span<const Symbol> letters() const { return letters_; }
  int alphabet_size() const { return alphabet_size_; }
  int order() const { return static_cast<int>(k_); }

  // Blocks [a, a+len) and [b, b+len) are k-abelian equivalent.
  bool equivalent(std::size_t a, std::size_t b, std::size_t len) const;
  bool same_letters(std::size_t a, std::size_t b, std::size_t len) const;

 private:
  int alphabet_size_;
  std::size_t k_;
  std::vector<Symbol> letters_;
  std::vector<std::uint64_t> window_code_;  // code of the k-window starting at i
  std::vector<std::uint64_t> prefix_sum_;   // fingerprint sum of windows [0, i)
  mutable std::vector<std::uint64_t> scratch_a_, scratch_b_;
};

// Grows a word one letter at a time while keeping it free for a predicate.
// Only occurrences ending at the new last position are examined.
class FreenessTracker {
 public:
  FreenessTracker(int alphabet_size, AvoidancePredicate pred);

  // Appends c if the result stays free and reports whether it did. On
  // failure the word is unchanged and violation() describes the
  // offending occurrence.
  bool try_push(Symbol c);
  void pop();
  void clear();

  std::size_t size() const { return index_.size(); }
  std::span<const Symbol> letters() const { return index_.letters(); }
  int alphabet_size() const { return index_.alphabet_size(); }
  const AvoidancePredicate& predicate() const { return pred_; }
  const std::optional<Occurrence>& violation() const { return violation_; }

  // Current distinct squares (budget predicates only).
  std::vector<Word> inventory() const;

 private:
  std::optional<Occurrence> check_power(std::size_t end) const;
  std::optional<Occurrence> check_budget(std::size_t end);

  AvoidancePredicate pred_;
  WindowIndex index_;

  struct Entry {
    std::size_t start;
    std::size_t length;
    std::size_t added_at;  // word length when recorded
  };
  std::vector<Entry> squares_;
  std::optional<Occurrence> violation_;
};

}  // namespace kab
