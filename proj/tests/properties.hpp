#pragma once

// Randomized and exhaustive agreement checks between the library and the
// oracles. Each returns an empty string on success, otherwise the first
// disagreement.

#include <random>
#include <sstream>
#include <string>

#include "kab/repetition.hpp"
#include "kab/word.hpp"
#include "oracles.hpp"

namespace props {

inline kab::Word W(const std::string& s, int sigma) { return kab::Word::parse(s, sigma); }

inline std::string three_definitions(std::size_t pairs, std::uint64_t seed, std::size_t* positives = nullptr) {
  using kab::EquivalenceMode;
  std::mt19937_64 rng(seed);
  std::size_t pos = 0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const int sigma = 2 + static_cast<int>(rng() % 2);
    const std::size_t k = 1 + rng() % 4;
    const std::size_t n = rng() % 11;
    const std::string u = oracle::random_word(rng, sigma, n);
    std::string v = oracle::random_word(rng, sigma, n);
    if (rng() % 2 && n > 1) {
      // Shuffling a copy of u makes abelian (and sometimes k-abelian) hits common.
      v = u;
      std::shuffle(v.begin(), v.end(), rng);
    }
    const bool want = oracle::k_equivalent(u, v, k);
    pos += want;
    for (auto mode : {EquivalenceMode::factor_only, EquivalenceMode::prefix_form, EquivalenceMode::suffix_form}) {
      if (kab::k_abelian_eq(W(u, sigma), W(v, sigma), k, mode) != want) {
        std::ostringstream os;
        os << "k_abelian_eq(" << u << ", " << v << ", " << k << ", mode " << static_cast<int>(mode)
           << ") != " << want;
        return os.str();
      }
    }
  }
  if (positives) *positives = pos;
  return {};
}

inline std::string splitting_identity(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const int sigma = 2 + static_cast<int>(rng() % 3);
    const std::size_t k = 1 + rng() % 5;
    const std::size_t i = rng() % k;
    const std::string u = oracle::random_word(rng, sigma, (k - 1 - i) + rng() % 8);
    const std::string v = oracle::random_word(rng, sigma, i + rng() % 8);
    if (!kab::splitting_identity_check(W(u, sigma), W(v, sigma), k, i)) {
      return "splitting identity failed for u=" + u + " v=" + v + " k=" + std::to_string(k) +
             " i=" + std::to_string(i);
    }
    // Independent restatement with the oracle's counts.
    auto lhs = oracle::factor_counts(u + v, k);
    auto a = oracle::factor_counts(u + v.substr(0, i), k);
    for (auto& [f, c] : oracle::factor_counts(u.substr(u.size() - (k - 1 - i)) + v, k)) a[f] += c;
    if (lhs != a) return "oracle restatement disagrees for u=" + u + " v=" + v;
  }
  return {};
}

inline std::string lyndon_exhaustive(int sigma, std::size_t max_len) {
  for (std::size_t n = 1; n <= max_len; ++n) {
    for (const std::string& s : oracle::words(sigma, n)) {
      const kab::Word w = W(s, sigma);
      if (kab::is_lyndon(w) != oracle::lyndon(s)) return "is_lyndon disagrees on " + s;
      const auto all = oracle::lyndon_factorizations(s);
      if (all.size() != 1) return "oracle found " + std::to_string(all.size()) + " factorizations of " + s;
      const auto got = kab::lyndon_factorize(w);
      if (got.size() != all[0].size()) return "factor count differs on " + s;
      for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i].str() != all[0][i]) return "factorization differs on " + s;
      }
    }
  }
  return {};
}

inline std::string pre_lyndon_exhaustive(int sigma, std::size_t max_len) {
  for (std::size_t n = 1; n <= max_len; ++n) {
    for (const std::string& s : oracle::words(sigma, n)) {
      const kab::Word w = W(s, sigma);
      const bool want = oracle::pre_lyndon(s);
      if (kab::is_pre_lyndon(w) != want) return "is_pre_lyndon disagrees on " + s;
      // Iterated extension from the empty word.
      std::optional<kab::PreLyndonState> st = kab::PreLyndonState{};
      std::vector<kab::Symbol> pre;
      for (char c : s) {
        st = kab::pre_lyndon_extend(*st, std::span<const kab::Symbol>(pre), static_cast<kab::Symbol>(c - '0'));
        if (!st) break;
        pre.push_back(static_cast<kab::Symbol>(c - '0'));
      }
      if (st.has_value() != want) return "pre_lyndon_extend disagrees on " + s;
    }
  }
  return {};
}

// find_power against the quadratic oracle on every binary word up to
// max_len, for a spread of predicates.
inline std::string detector_exhaustive(std::size_t max_len, std::size_t* checked = nullptr) {
  const kab::AvoidancePredicate preds[] = {
      {2, 1, 1, {}}, {2, 1, 2, {}}, {3, 1, 1, {}}, {3, 1, 2, {}}, {2, 2, 1, {}},
      {2, 2, 3, {}}, {2, 3, 3, {}}, {3, 2, 2, {}}, {4, 1, 2, {}},
  };
  std::size_t count = 0;
  for (std::size_t n = 1; n <= max_len; ++n) {
    for (const std::string& s : oracle::words(2, n)) {
      const kab::Word w = W(s, 2);
      for (const auto& p : preds) {
        const auto want = oracle::find_power(s, p.power, p.order, p.min_period);
        const auto got = kab::find_power(w, p);
        ++count;
        const bool same = want.has_value() == got.has_value() &&
                          (!want || (want->start == got->start && want->period == got->period &&
                                     want->power == got->power));
        if (!same) return "find_power disagrees on " + s + " for " + p.describe();
      }
    }
  }
  if (checked) *checked = count;
  return {};
}

// Budget predicates: freeness only (the reported occurrence is the square
// that broke the budget, which the oracle does not model).
inline std::string budget_exhaustive(std::size_t max_len) {
  struct B {
    int k, budget, p;
  };
  const B cases[] = {{1, 0, 1}, {1, 3, 1}, {2, 4, 1}, {2, 2, 1}, {3, 3, 1}, {2, 5, 3}};
  for (std::size_t n = 1; n <= max_len; ++n) {
    for (const std::string& s : oracle::words(2, n)) {
      for (const B& b : cases) {
        kab::AvoidancePredicate pred{2, b.k, b.p, b.budget};
        if (kab::is_free(W(s, 2), pred) != oracle::budget_free(s, b.k, b.budget, b.p)) {
          return "budget freeness disagrees on " + s + " for " + pred.describe();
        }
      }
    }
  }
  return {};
}

}  // namespace props
