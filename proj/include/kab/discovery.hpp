#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kab/repetition.hpp"
#include "kab/search.hpp"
#include "kab/verifier.hpp"

namespace kab {

struct DiscoveryConfig {
  AvoidancePredicate target{2, 3, 3, {}};  // the language W
  int target_alphabet = 2;
  std::size_t seed_word_length = 20000;
  std::size_t factor_length = 4;  // L, even
  std::size_t top_m = 8;
  std::size_t family_min_length = 0;
  std::size_t family_max_length = 12;
  std::uint64_t family_max_nodes = 5'000'000;
  std::size_t clique_size = 4;
  std::size_t verify_k = 3;
  std::size_t verify_p = 3;
  std::uint64_t seed = 1;
  std::uint64_t max_cliques_per_family = 100'000;  // 0 = unlimited
  std::size_t max_accepted = 1;                    // stop after this many; 0 = unlimited
  unsigned threads = 1;
  // When nonempty these factors are used directly and no seed word is built.
  std::vector<Word> factors;

  void validate() const;
};

// Flat "key = value" text; '#' starts a comment.
DiscoveryConfig parse_discovery_config(std::string_view text);
DiscoveryConfig load_discovery_config(const std::filesystem::path& path);
std::string format_discovery_config(const DiscoveryConfig& cfg);

// Most frequent length-L factors (overlapping counts), ties lexicographic.
std::vector<Word> harvest_factors(const Word& w, std::size_t length, std::size_t top_m);

struct CandidateFamily {
  Word shared_prefix;
  Word shared_suffix;
  std::vector<Word> members;  // sorted
  bool truncated = false;     // node limit hit
};

// Free words extending `prefix` that end with `suffix`, with length in
// [max(|prefix|, |suffix|, min_len), max_len].
CandidateFamily build_family(int alphabet_size, const AvoidancePredicate& pred, const Word& prefix,
                             const Word& suffix, std::size_t max_len, std::size_t min_len = 0,
                             std::uint64_t max_nodes = 0);

struct CompatibilityGraph {
  std::size_t vertex_count = 0;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted neighbour lists
  std::size_t edge_count() const;
  bool has_edge(std::size_t a, std::size_t b) const;
};

// Edge {x, y} iff xyx and yxy are both free.
CompatibilityGraph build_graph(const std::vector<Word>& family, const AvoidancePredicate& pred,
                               int alphabet_size);

// Streams all cliques of a fixed size in lexicographic order of sorted
// vertex tuples, extending only through higher-numbered neighbours and
// pruning branches without enough candidates left.
class CliqueStream {
 public:
  CliqueStream(const CompatibilityGraph& g, std::size_t size);
  std::optional<std::vector<std::size_t>> next();

 private:
  const CompatibilityGraph* g_;
  std::size_t size_;
  std::vector<std::size_t> chosen_;
  std::vector<std::vector<std::size_t>> candidates_;  // per level
  std::vector<std::size_t> cursor_;
  std::size_t root_ = 0;
  bool done_ = false;
};

std::vector<std::vector<std::size_t>> enumerate_cliques(const CompatibilityGraph& g, std::size_t size);

struct DiscoveredMorphism {
  Morphism morphism;
  VerificationReport report;
  Word seed_factor;
  std::size_t clique_index = 0;
};

struct FamilyRun {
  Word factor;
  std::size_t family_size = 0;
  bool family_truncated = false;
  std::size_t edges = 0;
  std::uint64_t cliques_checked = 0;
  bool clique_limit_hit = false;
  std::uint64_t accepted = 0;
};

struct DiscoveryResult {
  std::optional<Word> seed_word;
  std::vector<Word> factors;
  std::vector<FamilyRun> families;
  std::vector<DiscoveredMorphism> accepted;
};

// Graph, cliques and verification over one family; clique words are
// assigned to letters in lexicographic order.
std::vector<DiscoveredMorphism> search_family(const CandidateFamily& family, const DiscoveryConfig& cfg,
                                              FamilyRun* run = nullptr);

DiscoveryResult run_pipeline(const DiscoveryConfig& cfg);

}  // namespace kab
