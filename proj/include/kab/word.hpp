#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kab {

using Symbol = std::uint8_t;
using Counts = std::vector<std::int64_t>;

// Raised when an operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxAlphabet = 10;

// A finite word over the dense alphabet {0, ..., alphabet_size - 1}.
// Textual form uses the characters '0'..'9'.
class Word {
 public:
  Word() = default;
  explicit Word(int alphabet_size, std::vector<Symbol> symbols = {});

  // Alphabet size 0 means "infer as max digit + 1" (at least 1).
  static Word parse(std::string_view text, int alphabet_size = 0);

  int alphabet_size() const { return alphabet_size_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const { return symbols_; }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  Word prefix(std::size_t n) const;
  Word suffix(std::size_t n) const;
  Word factor(std::size_t start, std::size_t length) const;
  void push_back(Symbol c);

  std::string str() const;

  // Identity compares letters only; the alphabet is context.
  friend bool operator==(const Word& a, const Word& b) { return a.symbols_ == b.symbols_; }
  // Lexicographic, proper prefixes first.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    return a.symbols_ <=> b.symbols_;
  }

 private:
  int alphabet_size_ = 1;
  std::vector<Symbol> symbols_;
};

Word operator+(const Word& a, const Word& b);

std::ostream& operator<<(std::ostream& os, const Word& w);

// All words of length n over the alphabet, in lexicographic order.
std::vector<Word> all_words(int alphabet_size, std::size_t n);

// ---------------------------------------------------------------------------
// Counting

using ParikhVector = Counts;

ParikhVector parikh(const Word& w);

// Overlapping occurrences of f in u. Rejects an empty f.
std::size_t count_occurrences(const Word& u, const Word& f);

// An ordered set of distinct words of one common length.
class FactorSet {
 public:
  FactorSet() = default;
  // Members must share a length and have no duplicates. Unless
  // keep_given_order is set they must be strictly increasing.
  FactorSet(std::vector<Word> members, bool keep_given_order = false);

  // Sigma^k in lexicographic order.
  static FactorSet all(int alphabet_size, std::size_t k);

  const std::vector<Word>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t word_length() const { return length_; }
  const Word& operator[](std::size_t i) const { return members_[i]; }
  std::optional<std::size_t> index_of(const Word& w) const;

 private:
  std::vector<Word> members_;
  std::size_t length_ = 0;
};

struct FactorVector {
  FactorSet index;
  Counts counts;
};

FactorVector factor_vector(const Word& w, const FactorSet& s);
FactorVector factor_vector(const Word& w, std::size_t k);

// Dense Psi_k over Sigma^k in lexicographic order; entry for factor f is
// at the base-sigma value of f.
Counts psi_k(std::span<const Symbol> w, int alphabet_size, std::size_t k);

// ---------------------------------------------------------------------------
// k-abelian equivalence

enum class EquivalenceMode { factor_only, prefix_form, suffix_form };

bool k_abelian_eq(const Word& u, const Word& v, std::size_t k,
                  EquivalenceMode mode = EquivalenceMode::prefix_form);

// Checks Psi_k(uv) = Psi_k(u pref_i(v)) + Psi_k(suf_{k-1-i}(u) v).
bool splitting_identity_check(const Word& u, const Word& v, std::size_t k, std::size_t i);

// ---------------------------------------------------------------------------
// Lyndon machinery

std::strong_ordering lex_compare(const Word& u, const Word& v);

bool is_lyndon(const Word& w);

// Chen-Fox-Lyndon factorization (Duval), non-increasing factors.
std::vector<Word> lyndon_factorize(const Word& w);

// Incremental test for "prefix of a power of a Lyndon word".
struct PreLyndonState {
  std::size_t length = 0;
  std::size_t period = 1;
};

std::optional<PreLyndonState> pre_lyndon_extend(const PreLyndonState& state,
                                                std::span<const Symbol> w, Symbol c);

inline std::optional<PreLyndonState> pre_lyndon_extend(const PreLyndonState& state,
                                                       const Word& w, Symbol c) {
  return pre_lyndon_extend(state, w.symbols(), c);
}

bool is_pre_lyndon(const Word& w);

}  // namespace kab
