#include <doctest.h>

#include "kab/word.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace kab;

namespace {
Word W(const char* s, int sigma = 2) { return Word::parse(s, sigma); }
}

TEST_CASE("parse and print") {
  CHECK(W("0120", 3).str() == "0120");
  CHECK(Word::parse("0120").alphabet_size() == 3);
  CHECK(Word::parse("").empty());
  CHECK_THROWS_AS(Word::parse("012", 2), PreconditionError);
  CHECK_THROWS_AS(Word::parse("01a"), PreconditionError);
  CHECK(W("0011").prefix(2) == W("00"));
  CHECK(W("0011").suffix(3) == W("011"));
  CHECK(W("0011").factor(1, 2) == W("01"));
}

TEST_CASE("parikh vectors") {
  CHECK(parikh(Word(2)) == ParikhVector{0, 0});
  CHECK(parikh(W("00011111010")) == ParikhVector{5, 6});
  CHECK(parikh(W("0120", 3)) == ParikhVector{2, 1, 1});
}

TEST_CASE("count occurrences") {
  CHECK(count_occurrences(W("0000"), W("00")) == 3);
  CHECK(count_occurrences(W("0000110101000"), W("000")) == 3);
  CHECK(count_occurrences(W("0101"), W("11")) == 0);
  CHECK_THROWS_AS(count_occurrences(W("01"), Word(2)), PreconditionError);
}

TEST_CASE("factor vectors") {
  const auto fv = factor_vector(W("0000110101000"), 3);
  CHECK(fv.counts == Counts{3, 1, 2, 1, 1, 2, 1, 0});
  CHECK(factor_vector(W("00111"), 2).counts == Counts{1, 1, 0, 2});

  const FactorSet s({W("11"), W("00")}, /*keep_given_order=*/true);
  CHECK(s[0] == W("11"));
  CHECK(factor_vector(W("00111"), s).counts == Counts{2, 1});
  CHECK_THROWS_AS(FactorSet({W("11"), W("00")}), PreconditionError);
  CHECK_THROWS_AS(FactorSet({W("00"), W("0")}), PreconditionError);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const int sigma = 2 + static_cast<int>(rng() % 3);
    const std::size_t k = 1 + rng() % 4;
    const std::string s = oracle::random_word(rng, sigma, k + rng() % 20);
    const Word w = Word::parse(s, sigma);
    const auto got = factor_vector(w, k);
    const auto want = oracle::factor_counts(s, k);
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < got.index.size(); ++i) {
      auto it = want.find(got.index[i].str());
      CHECK(got.counts[i] == (it == want.end() ? 0 : it->second));
      sum += got.counts[i];
    }
    CHECK(sum == static_cast<std::int64_t>(s.size() - k + 1));
    if (k == 1) CHECK(got.counts == parikh(w));
  }
}

TEST_CASE("k-abelian equivalence examples") {
  CHECK_FALSE(k_abelian_eq(W("01"), W("10"), 2));
  CHECK(k_abelian_eq(W("00101"), W("01001"), 2));
  CHECK(k_abelian_eq(W("0110"), W("0110"), 5));
  CHECK(k_abelian_eq(Word(2), Word(2), 3));
  CHECK_FALSE(k_abelian_eq(W("0"), W("00"), 1));
}

TEST_CASE("short words are k-equivalent only when equal") {
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t n = 0; n <= 2 * k - 1; ++n) {
      for (const auto& a : oracle::words(2, n)) {
        for (const auto& b : oracle::words(2, n)) {
          CHECK(k_abelian_eq(Word::parse(a, 2), Word::parse(b, 2), k) == (a == b));
        }
      }
    }
  }
}

TEST_CASE("three characterizations agree with the oracle") {
  std::size_t positives = 0;
  CHECK(props::three_definitions(4000, 11, &positives) == "");
  CHECK(positives > 200);
}

TEST_CASE("monotonicity in k") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = rng() % 9;
    std::string u = oracle::random_word(rng, 2, n), v = u;
    std::shuffle(v.begin(), v.end(), rng);
    for (std::size_t k = 1; k < 4; ++k) {
      if (k_abelian_eq(Word::parse(u, 2), Word::parse(v, 2), k + 1)) {
        CHECK(k_abelian_eq(Word::parse(u, 2), Word::parse(v, 2), k));
      }
    }
  }
}

TEST_CASE("splitting identity") {
  CHECK(splitting_identity_check(W("001"), W("110"), 3, 1));
  CHECK(splitting_identity_check(W("0"), W("1"), 2, 0));
  CHECK_THROWS_AS(splitting_identity_check(W("0"), W("1"), 2, 2), PreconditionError);
  CHECK_THROWS_AS(splitting_identity_check(W(""), W("1"), 3, 0), PreconditionError);
  CHECK(props::splitting_identity(3000, 17) == "");
}

TEST_CASE("lexicographic order") {
  CHECK(lex_compare(W("001"), W("01")) == std::strong_ordering::less);
  CHECK(lex_compare(W("01"), W("010")) == std::strong_ordering::less);
  CHECK(lex_compare(W("0110"), W("0110")) == std::strong_ordering::equal);
  CHECK(lex_compare(W("1"), W("0111")) == std::strong_ordering::greater);
}

TEST_CASE("Lyndon words and factorization") {
  CHECK(is_lyndon(W("0")));
  CHECK(is_lyndon(W("0011")));
  CHECK_FALSE(is_lyndon(W("0101")));
  CHECK_THROWS_AS(is_lyndon(Word(2)), PreconditionError);
  CHECK_THROWS_AS(lyndon_factorize(Word(2)), PreconditionError);

  auto strs = [](const std::vector<Word>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) out.push_back(w.str());
    return out;
  };
  CHECK(strs(lyndon_factorize(W("0011"))) == std::vector<std::string>{"0011"});
  CHECK(strs(lyndon_factorize(W("1001"))) == std::vector<std::string>{"1", "001"});
  CHECK(strs(lyndon_factorize(W("010010"))) == std::vector<std::string>{"01", "001", "0"});
  CHECK(props::lyndon_exhaustive(2, 10) == "");
  CHECK(props::lyndon_exhaustive(3, 6) == "");
}

TEST_CASE("pre-Lyndon extension") {
  auto extend_all = [](const std::string& s) {
    std::optional<PreLyndonState> st = PreLyndonState{};
    std::vector<Symbol> pre;
    for (char c : s) {
      st = pre_lyndon_extend(*st, std::span<const Symbol>(pre), static_cast<Symbol>(c - '0'));
      if (!st) return st;
      pre.push_back(static_cast<Symbol>(c - '0'));
    }
    return st;
  };
  CHECK(extend_all("000111000").has_value());
  CHECK_FALSE(extend_all("00111000").has_value());
  CHECK(extend_all("111").has_value());
  CHECK(extend_all("111")->period == 1);
  CHECK(extend_all("0011")->period == 4);
  CHECK(extend_all("00100")->period == 3);
  CHECK(props::pre_lyndon_exhaustive(2, 10) == "");
  CHECK(props::pre_lyndon_exhaustive(3, 6) == "");
}

TEST_CASE("all_words is lexicographic") {
  const auto ws = all_words(2, 3);
  REQUIRE(ws.size() == 8);
  CHECK(ws.front() == W("000"));
  CHECK(ws.back() == W("111"));
  CHECK(std::is_sorted(ws.begin(), ws.end()));
}
