#include <doctest.h>

#include <numeric>

#include "kab/discovery.hpp"
#include "kab/search.hpp"
#include "kab/verifier.hpp"
#include "oracles.hpp"

using namespace kab;

namespace {

const std::string kFixtures = KAB_FIXTURE_DIR;
Morphism fixture(const char* name) { return load_morphism(kFixtures + "/" + name + ".morphism"); }
Word W(const char* s, int sigma = 2) { return Word::parse(s, sigma); }

std::vector<std::int64_t> unit(std::size_t a, std::int64_t scale = 1) {
  std::vector<std::int64_t> z(4, 0);
  z[a] = scale;
  return z;
}

std::set<std::string> strs(const SquareInventory& inv) {
  std::set<std::string> out;
  for (const Word& w : inv) out.insert(w.str());
  return out;
}

FactorSet h_rows() { return FactorSet({W("000"), W("001"), W("010"), W("011")}); }
FactorSet h2_rows() { return FactorSet({W("00", 3), W("01", 3), W("02", 3), W("11", 3)}); }

}  // namespace

TEST_CASE("claim_check") {
  // z = a1 Psi(l1) - (2 a2 - 1) Psi(l2) - (1 - a3) Psi(l3)
  auto z = unit(2, -1);
  auto a = claim_check(z, 0, 2, 3);
  REQUIRE(a);
  CHECK(a->alpha == std::array<int, 3>{0, 1, 1});

  a = claim_check(unit(2), 0, 2, 3);
  REQUIRE(a);
  CHECK(a->alpha == std::array<int, 3>{0, 0, 1});

  z = {1, 1, -1, 0};
  a = claim_check(z, 0, 1, 2);
  REQUIRE(a);
  CHECK(a->alpha == std::array<int, 3>{1, 0, 0});

  CHECK_FALSE(claim_check(unit(0, 2), 0, 1, 2));

  // Every candidate value is recovered, with the lexicographically first
  // assignment when letters repeat.
  for (Symbol l1 = 0; l1 < 4; ++l1)
    for (Symbol l2 = 0; l2 < 4; ++l2)
      for (Symbol l3 = 0; l3 < 4; ++l3)
        for (int bits = 0; bits < 8; ++bits) {
          const int a1 = bits >> 2 & 1, a2 = bits >> 1 & 1, a3 = bits & 1;
          std::vector<std::int64_t> v(4, 0);
          v[l1] += a1;
          v[l2] -= 2 * a2 - 1;
          v[l3] -= 1 - a3;
          const auto got = claim_check(v, l1, l2, l3);
          REQUIRE(got);
          const int code = got->alpha[0] * 4 + got->alpha[1] * 2 + got->alpha[2];
          CHECK(code <= bits);
        }
}

TEST_CASE("boundary vectors") {
  const Morphism h = fixture("h");
  const RowSelection sel = select_rows(build_count_matrix(h, 3), h_rows());
  const CountMatrix n = build_count_matrix(h, 3);

  CutTriple t{{1, 2, 2}, {0, 0, 0}};
  auto b = boundary_vector(h, 3, t, sel);
  for (std::size_t f = 0; f < 8; ++f) CHECK(b.psi_full[f] == n.entries[f][1] - n.entries[f][2]);

  std::mt19937_64 rng(6);
  for (int i = 0; i < 500; ++i) {
    CutTriple r{{static_cast<Symbol>(rng() % 4), static_cast<Symbol>(rng() % 4), static_cast<Symbol>(rng() % 4)},
                {rng() % 11, rng() % 11, rng() % 11}};
    b = boundary_vector(h, 3, r, sel);
    const std::int64_t want = static_cast<std::int64_t>(r.v(h, 0).size() + r.u(h, 1).size()) -
                              static_cast<std::int64_t>(r.v(h, 1).size() + r.u(h, 2).size());
    std::int64_t sum = 0;
    for (auto x : b.psi_full) sum += x;
    CHECK(sum == want);
    for (std::size_t j = 0; j < 4; ++j) CHECK(b.psi_s[j] == b.psi_full[sel.rows[j]]);
    // (v1, u2) = (v2, u3) gives zero.
    const CutTriple sym{{r.letters[0], r.letters[0], r.letters[0]}, {r.cuts[0], r.cuts[0], r.cuts[0]}};
    for (auto x : boundary_vector(h, 3, sym, sel).psi_full) CHECK(x == 0);
  }
}

TEST_CASE("abelian-square-free base words") {
  const auto ws = abelian_square_free_words(4, 3);
  CHECK(ws.size() == 4 + 12 + 36);
  for (const Word& w : ws) CHECK_FALSE(oracle::find_power(w.str(), 2, 1, 1));
  CHECK(std::is_sorted(ws.begin(), ws.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }));
}

TEST_CASE("h is (3,3)-abelian-square-free") {
  const Morphism h = fixture("h");
  VerifyOptions o;
  o.preferred_rows = h_rows();
  const auto r = verify(h, 3, 3, o);
  CHECK(r.verdict == Verdict::accepted);
  CHECK(r.stats.raw_triples == 85184);
  CHECK(r.det == Rational(-2));
  CHECK(r.span == 2);
  CHECK(r.stats.affix_survivors < r.stats.raw_triples);
  CHECK(r.stats.lattice_survivors <= r.stats.affix_survivors);

  o.engine = VerifyEngine::direct;
  const auto d = verify(h, 3, 3, o);
  CHECK(d.verdict == Verdict::accepted);
  CHECK(d.stats == r.stats);

  o.engine = VerifyEngine::indexed;
  o.threads = 3;
  CHECK(verify(h, 3, 3, o).stats == r.stats);

  o.congruence_filter = true;
  const auto c = verify(h, 3, 3, o);
  CHECK(c.verdict == Verdict::accepted);
  CHECK(c.stats.affix_survivors <= r.stats.affix_survivors);
}

TEST_CASE("h2 is (2,2)-abelian-square-free") {
  const Morphism h2 = fixture("h2");
  VerifyOptions o;
  o.preferred_rows = h2_rows();
  const auto r = verify(h2, 2, 2, o);
  CHECK(r.verdict == Verdict::accepted);
  CHECK(r.rows_used->members() == h2_rows().members());
  o.engine = VerifyEngine::direct;
  CHECK(verify(h2, 2, 2, o).stats == r.stats);
  CHECK(verify(h2, 2, 2).verdict == Verdict::accepted);

  // Surviving squares: direct scan of images of abelian-square-free pairs.
  std::vector<std::string> images;
  for (const Word& w : h2.images()) images.push_back(w.str());
  std::set<std::string> want;
  for (const auto& z : oracle::words(4, 2)) {
    if (z[0] == z[1]) continue;
    const std::string img = oracle::apply(images, z);
    for (std::size_t i = 0; i + 2 <= img.size(); ++i) {
      if (img[i] == img[i + 1]) want.insert(img.substr(i, 2));
    }
  }
  CHECK(strs(surviving_squares(h2, 2, 2)) == want);
}

TEST_CASE("h4 and its four squares") {
  const Morphism h4 = fixture("h4");
  const auto r = verify(h4, 3, 3);
  CHECK(r.verdict == Verdict::accepted);
  CHECK(r.span == 3);
  CHECK_FALSE(r.notes.empty());
  CHECK(strs(surviving_squares(h4, 3, 3)) == std::set<std::string>{"00", "11", "0101", "1010"});
}

TEST_CASE("h3: 5-abelian squares of period >= 3 are avoided") {
  const Morphism h3 = fixture("h3");
  const auto r = verify(h3, 5, 3);
  CHECK(r.verdict == Verdict::accepted);
  CHECK(strs(surviving_squares(h3, 5, 3)) == std::set<std::string>{"00", "11", "0101"});
}

TEST_CASE("h3 image of one letter holds a 3-abelian square of period 12") {
  const Morphism h3 = fixture("h3");
  const auto r = verify(h3, 3, 5);
  CHECK(r.verdict == Verdict::rejected);
  REQUIRE(r.short_span_failure);
  CHECK(r.short_span_failure->base.str() == "0");
  const std::string img = h3.image(0).str();
  CHECK(oracle::find_power(img, 2, 3, 5) ==
        oracle::Hit{r.short_span_failure->occurrence.start, r.short_span_failure->occurrence.period, 2});
}

TEST_CASE("preconditions") {
  const Morphism id({W("0", 4), W("1", 4), W("2", 4), W("3", 4)});
  auto r = verify(id, 1, 1);
  CHECK(r.verdict == Verdict::precondition_failed);
  CHECK_FALSE(r.reason.empty());

  const Morphism tiny({W("0010"), W("0110"), W("0100"), W("0000")});
  CHECK(verify(tiny, 3, 3).verdict == Verdict::precondition_failed);

  const Morphism h = fixture("h");
  r = verify(h, 2, 2);
  CHECK(r.verdict == Verdict::precondition_failed);
  CHECK(r.reason.find("rank") != std::string::npos);

  VerifyOptions o;
  o.congruence_filter = true;
  CHECK(verify(fixture("h4"), 3, 3, o).verdict == Verdict::precondition_failed);
  CHECK(verify(h, 0, 3).verdict == Verdict::precondition_failed);
}

TEST_CASE("accepted morphisms map abelian-square-free words to free words") {
  const Morphism h = fixture("h");
  const AvoidancePredicate base{2, 1, 1, {}};
  const AvoidancePredicate target{2, 3, 3, {}};
  std::vector<std::string> images;
  for (const Word& w : h.images()) images.push_back(w.str());
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    RandomSearchConfig cfg;
    cfg.seed = seed;
    cfg.target_length = 1 + seed % 40;
    const auto w = random_long_word(4, base, cfg);
    REQUIRE(w);
    const Word img = h.apply(w->prefix(cfg.target_length));
    CHECK_FALSE(find_power(img, target));
    if (seed % 100 == 0) CHECK_FALSE(oracle::find_power(oracle::apply(images, w->str().substr(0, 12)), 2, 3, 3));
  }
}

TEST_CASE("indexed and direct engines agree on random candidates") {
  const AvoidancePredicate pred{2, 3, 3, {}};
  const CandidateFamily fam = build_family(2, pred, W("00"), W("10"), 11, 11);
  REQUIRE(fam.members.size() >= 4);
  std::mt19937_64 rng(31);
  int rejected = 0, accepted = 0;
  for (int t = 0; t < 60; ++t) {
    std::vector<Word> imgs;
    std::vector<std::size_t> pick(fam.members.size());
    std::iota(pick.begin(), pick.end(), 0);
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(4);
    std::sort(pick.begin(), pick.end());
    for (std::size_t i : pick) imgs.push_back(fam.members[i]);
    const Morphism m(imgs);
    VerifyOptions o;
    const auto a = verify(m, 3, 3, o);
    o.engine = VerifyEngine::direct;
    const auto b = verify(m, 3, 3, o);
    CHECK(to_string(a.verdict) == to_string(b.verdict));
    CHECK(a.stats == b.stats);
    CHECK(a.counterexample == b.counterexample);
    rejected += a.verdict == Verdict::rejected;
    accepted += a.verdict == Verdict::accepted;
  }
  CHECK(rejected > 0);
}
