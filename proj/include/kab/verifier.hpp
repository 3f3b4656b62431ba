#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kab/morphism.hpp"
#include "kab/repetition.hpp"

namespace kab {

// Three letters a1 a2 a3 and cuts h(ai) = ui vi with vi nonempty; cuts[i]
// is |ui|.
struct CutTriple {
  std::array<Symbol, 3> letters{};
  std::array<std::size_t, 3> cuts{};

  Word u(const Morphism& h, int i) const;
  Word v(const Morphism& h, int i) const;

  friend auto operator<=>(const CutTriple&, const CutTriple&) = default;
};

// psi_full = Psi_k(v1 P) + Psi_k(Q u2) - Psi_k(v2 P) - Psi_k(Q u3), with P
// and Q the (k-1)-letter common prefix and suffix of the images.
struct BoundaryVector {
  Counts psi_full;
  Counts psi_s;
};

BoundaryVector boundary_vector(const Morphism& h, std::size_t k, const CutTriple& t,
                               const RowSelection& sel);

struct AlphaAssignment {
  std::array<int, 3> alpha{};
  friend bool operator==(const AlphaAssignment&, const AlphaAssignment&) = default;
};

// First (a1, a2, a3) in {0,1}^3, lexicographically, with
//   z = a1 Psi(l1) - (2 a2 - 1) Psi(l2) - (1 - a3) Psi(l3).
std::optional<AlphaAssignment> claim_check(std::span<const std::int64_t> z, Symbol l1, Symbol l2,
                                           Symbol l3);

enum class Verdict { accepted, rejected, precondition_failed };
std::string to_string(Verdict v);

enum class VerifyEngine {
  indexed,  // hashes (v1, cut2) targets against a lattice-coset index of u3
  direct,   // evaluates every triple literally with rational arithmetic
};

struct VerifyOptions {
  std::optional<std::size_t> span;  // default 2 for uniform morphisms, else 3
  std::optional<FactorSet> preferred_rows;
  bool congruence_filter = false;  // uniform morphisms only
  unsigned threads = 1;
  VerifyEngine engine = VerifyEngine::indexed;
};

struct VerificationStats {
  std::uint64_t short_span_words = 0;
  std::uint64_t raw_triples = 0;
  std::uint64_t affix_survivors = 0;    // after the prefix/suffix (and congruence) filters
  std::uint64_t lattice_survivors = 0;  // after integrality and Im(N) membership
  std::uint64_t claim_checks = 0;

  friend bool operator==(const VerificationStats&, const VerificationStats&) = default;
};

struct ShortSpanFailure {
  Word base;
  Word image;
  Occurrence occurrence;
};

struct VerificationReport {
  Verdict verdict = Verdict::precondition_failed;
  std::string reason;
  std::optional<CutTriple> counterexample;
  std::optional<ShortSpanFailure> short_span_failure;
  VerificationStats stats;
  std::size_t k = 0;
  std::size_t p = 0;
  std::size_t span = 0;
  std::optional<FactorSet> rows_used;
  Rational det;
  std::vector<std::string> notes;
};

VerificationReport verify(const Morphism& h, std::size_t k, std::size_t p,
                          const VerifyOptions& opts = {});

// Abelian-square-free words over `alphabet_size` letters with length in
// [1, max_len], in length-lexicographic order.
std::vector<Word> abelian_square_free_words(int alphabet_size, std::size_t max_len);

// Exact squares of period < p occurring in h(z) for abelian-square-free z
// long enough to cover any such square. Meaningful once verify accepted.
SquareInventory surviving_squares(const Morphism& h, std::size_t k, std::size_t p,
                                  std::optional<std::size_t> span = {});

}  // namespace kab
