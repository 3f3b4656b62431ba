#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kab/repetition.hpp"
#include "kab/word.hpp"

namespace kab {

enum class SearchMode { full, pre_lyndon };

std::string to_string(SearchMode mode);
SearchMode parse_search_mode(std::string_view text);

struct SearchLimits {
  std::optional<std::size_t> max_length;
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::chrono::milliseconds> wall_time;

  void validate() const;
};

struct ExecutionOptions {
  unsigned threads = 1;
  // Depth at which the tree is cut into independent subtree tasks; 0 picks
  // a default when threads > 1.
  std::size_t split_depth = 0;
  // Called with "nodes=<n> depth=<d>" every progress_interval nodes.
  std::function<void(const std::string&)> progress;
  std::uint64_t progress_interval = 100'000'000;
  // Called for every visited word, in depth-first order. Forces a single
  // worker.
  std::function<void(std::span<const Symbol>)> on_node;
};

struct SearchReport {
  bool exhausted = false;
  std::uint64_t node_count = 0;  // nonempty words visited; the root is not counted
  std::size_t max_depth = 0;
  Word witness;  // lexicographically least word of length max_depth
  std::vector<std::uint64_t> per_depth_counts;  // index = word length, entry 0 is 0
  std::chrono::milliseconds elapsed{0};
};

SearchReport exhaustive_search(int alphabet_size, const AvoidancePredicate& pred, SearchMode mode,
                               const SearchLimits& limits = {},
                               const ExecutionOptions& exec = {});

// Binary words with at most `budget` distinct k-abelian squares.
SearchReport budget_search(int k, int budget, SearchMode mode, const SearchLimits& limits = {},
                           const ExecutionOptions& exec = {});

struct RandomSearchConfig {
  std::uint64_t seed = 1;
  std::size_t target_length = 100;
  std::uint64_t max_restarts = 1'000'000;  // dead ends tolerated before giving up
  double backoff = 4.0;                    // mean letters removed at a dead end

  void validate() const;
};

std::optional<Word> random_long_word(int alphabet_size, const AvoidancePredicate& pred,
                                     const RandomSearchConfig& cfg);

enum class Finiteness { finite, unknown };

struct FinitenessResult {
  Finiteness verdict = Finiteness::unknown;
  SearchReport report;
  std::size_t power_base_length = 0;  // bases x with |x| up to this were checked
  std::size_t power_exponent_bound = 0;
};

// Pre-Lyndon exhaustion packaged with the power-boundedness check that
// makes it a finiteness certificate. Throws PreconditionError when some
// short base x has no non-free power x^t within the exponent bound.
FinitenessResult prove_finite(int alphabet_size, const AvoidancePredicate& pred,
                              const SearchLimits& limits = {}, const ExecutionOptions& exec = {});

}  // namespace kab
