#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kab/exact.hpp"
#include "kab/word.hpp"

namespace kab {

// A morphism from the domain alphabet {0..|A|-1} to words over a target
// alphabet. Common prefix and suffix are derived on construction.
class Morphism {
 public:
  explicit Morphism(std::vector<Word> images);

  std::size_t domain_size() const { return images_.size(); }
  int target_alphabet() const { return target_alphabet_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(Symbol a) const { return images_.at(a); }

  const Word& common_prefix() const { return prefix_; }
  const Word& common_suffix() const { return suffix_; }
  std::size_t min_image_length() const { return min_len_; }
  std::size_t max_image_length() const { return max_len_; }
  bool uniform() const { return min_len_ == max_len_; }

  Word apply(const Word& w) const;

  friend bool operator==(const Morphism& a, const Morphism& b) { return a.images_ == b.images_; }

 private:
  std::vector<Word> images_;
  int target_alphabet_ = 2;
  Word prefix_;
  Word suffix_;
  std::size_t min_len_ = 0;
  std::size_t max_len_ = 0;
};

inline Word apply(const Morphism& h, const Word& w) { return h.apply(w); }

// Text form:
//   # comment
//   let u = 1100...
//   0 -> u1001...v
// Whitespace inside an expression is ignored, and a line holding neither
// "->" nor "let" continues the previous definition.
Morphism parse_morphism(std::string_view text);
Morphism load_morphism(const std::filesystem::path& path);
std::string format_morphism(const Morphism& h);

// N[f, x] = |h(x) pref_{k-1}(P)|_f with rows Sigma^k in lexicographic order.
struct CountMatrix {
  std::size_t k = 0;
  FactorSet rows;
  IntMatrix entries;  // rows.size() x domain size
  std::size_t cols() const { return entries.empty() ? 0 : entries[0].size(); }
};

CountMatrix build_count_matrix(const Morphism& h, std::size_t k);

class RankDeficientError : public PreconditionError {
 public:
  RankDeficientError(std::size_t rank, std::size_t needed);
  std::size_t rank() const { return rank_; }

 private:
  std::size_t rank_;
};

struct RowSelection {
  FactorSet factors;              // S
  std::vector<std::size_t> rows;  // indices of S in the count matrix
  IntMatrix matrix;               // M
  RationalMatrix inverse;         // M^-1
  Rational det;
};

// Uses `preferred` when it gives a nonsingular M, otherwise the first
// nonsingular row subset in lexicographic order of index tuples.
RowSelection select_rows(const CountMatrix& n, const std::optional<FactorSet>& preferred = {});

}  // namespace kab
