#include "kab/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace kab {

Word CutTriple::u(const Morphism& h, int i) const {
  return h.image(letters[static_cast<std::size_t>(i)]).prefix(cuts[static_cast<std::size_t>(i)]);
}

Word CutTriple::v(const Morphism& h, int i) const {
  const Word& img = h.image(letters[static_cast<std::size_t>(i)]);
  return img.suffix(img.size() - cuts[static_cast<std::size_t>(i)]);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::accepted: return "accepted";
    case Verdict::rejected: return "rejected";
    case Verdict::precondition_failed: return "precondition_failed";
  }
  return "?";
}

namespace {

Word affix_prefix(const Morphism& h, std::size_t k) { return h.common_prefix().prefix(k - 1); }
Word affix_suffix(const Morphism& h, std::size_t k) { return h.common_suffix().suffix(k - 1); }

Counts psi(const Word& w, int sigma, std::size_t k) { return psi_k(w.symbols(), sigma, k); }

void add_into(Counts& acc, const Counts& x, std::int64_t sign) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign * x[i];
}

}  // namespace

BoundaryVector boundary_vector(const Morphism& h, std::size_t k, const CutTriple& t,
                               const RowSelection& sel) {
  const Word p = affix_prefix(h, k);
  const Word q = affix_suffix(h, k);
  const int sigma = h.target_alphabet();
  BoundaryVector out;
  out.psi_full = psi(t.v(h, 0) + p, sigma, k);
  add_into(out.psi_full, psi(q + t.u(h, 1), sigma, k), 1);
  add_into(out.psi_full, psi(t.v(h, 1) + p, sigma, k), -1);
  add_into(out.psi_full, psi(q + t.u(h, 2), sigma, k), -1);
  for (std::size_t r : sel.rows) out.psi_s.push_back(out.psi_full[r]);
  return out;
}

std::optional<AlphaAssignment> claim_check(std::span<const std::int64_t> z, Symbol l1, Symbol l2,
                                           Symbol l3) {
  std::vector<std::int64_t> target(z.size());
  for (int a1 = 0; a1 <= 1; ++a1) {
    for (int a2 = 0; a2 <= 1; ++a2) {
      for (int a3 = 0; a3 <= 1; ++a3) {
        std::fill(target.begin(), target.end(), 0);
        target.at(l1) += a1;
        target.at(l2) -= 2 * a2 - 1;
        target.at(l3) -= 1 - a3;
        if (std::equal(target.begin(), target.end(), z.begin())) {
          return AlphaAssignment{{a1, a2, a3}};
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<Word> abelian_square_free_words(int alphabet_size, std::size_t max_len) {
  std::vector<Word> out;
  FreenessTracker tracker(alphabet_size, AvoidancePredicate{2, 1, 1, {}});
  // Breadth by length keeps the output length-lexicographic.
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<int> next{0};
    while (!next.empty()) {
      const int c = next.back();
      if (c == alphabet_size) {
        next.pop_back();
        if (tracker.size() > 0) tracker.pop();
        continue;
      }
      ++next.back();
      if (!tracker.try_push(static_cast<Symbol>(c))) continue;
      if (tracker.size() == len) {
        auto s = tracker.letters();
        out.emplace_back(alphabet_size, std::vector<Symbol>(s.begin(), s.end()));
        tracker.pop();
      } else {
        next.push_back(0);
      }
    }
  }
  return out;
}

namespace {

// Shared, immutable data of one verification run.
struct Setup {
  const Morphism* h = nullptr;
  std::size_t k = 0;
  int sigma = 2;
  Word p, q;
  CountMatrix n;
  RowSelection sel;
  std::int64_t denom = 1;             // D: common denominator of M^-1
  IntMatrix scaled_inverse;           // D * M^-1
  std::vector<std::size_t> other_rows;  // rows of N outside S
  bool congruence = false;
  std::size_t modulus = 0;  // image length for the congruence filter
};

std::int64_t affix_code(std::span<const Symbol> s, int sigma) {
  std::int64_t code = 0;
  for (Symbol c : s) code = code * sigma + c;
  return code;
}

// Integer coordinates of a boundary piece d that are additive in d:
//   lattice = D*d - N*(D*M^-1*d_S) on the rows outside S (zero iff d in Im(N)
//   given the S rows), and coeff = D*M^-1*d_S.
struct Projection {
  std::vector<std::int64_t> lattice;
  std::vector<std::int64_t> coeff;
};

Projection project(const Setup& s, const Counts& d) {
  constexpr __int128 kLimit = static_cast<__int128>(1) << 60;
  auto check = [&](__int128 x) {
    if (x > kLimit || x < -kLimit) throw PreconditionError("verifier arithmetic range exceeded");
    return static_cast<std::int64_t>(x);
  };
  const std::size_t m = s.sel.rows.size();
  Projection out;
  out.coeff.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += static_cast<__int128>(s.scaled_inverse[i][j]) * d[s.sel.rows[j]];
    }
    out.coeff[i] = check(acc);
  }
  out.lattice.reserve(s.other_rows.size());
  for (std::size_t r : s.other_rows) {
    __int128 acc = static_cast<__int128>(s.denom) * d[r];
    for (std::size_t x = 0; x < m; ++x) acc -= static_cast<__int128>(s.n.entries[r][x]) * out.coeff[x];
    out.lattice.push_back(check(acc));
  }
  return out;
}

// Per-letter, per-cut pieces of the boundary vector.
struct Cut {
  std::size_t cut = 0;             // |u|
  std::int64_t v_class = 0;        // pref_{k-1}(v P)
  std::int64_t u_class = 0;        // suf_{k-1}(Q u)
  Counts v_vec;                    // Psi_k(v P)
  Counts u_vec;                    // Psi_k(Q u)
  Projection v_proj, u_proj;
};

std::vector<std::vector<Cut>> build_cuts(const Setup& s) {
  std::vector<std::vector<Cut>> out(s.h->domain_size());
  for (std::size_t a = 0; a < s.h->domain_size(); ++a) {
    const Word& img = s.h->images()[a];
    for (std::size_t c = 0; c < img.size(); ++c) {
      Cut cut;
      cut.cut = c;
      const Word vp = img.suffix(img.size() - c) + s.p;
      const Word qu = s.q + img.prefix(c);
      cut.v_class = affix_code(vp.symbols().first(s.k - 1), s.sigma);
      cut.u_class = affix_code(qu.symbols().last(s.k - 1), s.sigma);
      cut.v_vec = psi(vp, s.sigma, s.k);
      cut.u_vec = psi(qu, s.sigma, s.k);
      cut.v_proj = project(s, cut.v_vec);
      cut.u_proj = project(s, cut.u_vec);
      out[a].push_back(std::move(cut));
    }
  }
  return out;
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (std::int64_t x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

using KeyIndex = std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash>;

std::int64_t mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// u3 index: key = (suffix class, [|u3| mod L], lattice(H), coeff(H) mod D).
void append_key(std::vector<std::int64_t>& key, const Setup& s, const std::vector<std::int64_t>& lattice,
                const std::vector<std::int64_t>& coeff) {
  key.insert(key.end(), lattice.begin(), lattice.end());
  for (std::int64_t c : coeff) key.push_back(mod(c, s.denom));
}

struct TaskResult {
  VerificationStats stats;
  std::optional<CutTriple> failure;
};

void note_failure(TaskResult& r, const CutTriple& t) {
  if (!r.failure || t < *r.failure) r.failure = t;
}

TaskResult run_indexed(const Setup& s, const std::vector<std::vector<Cut>>& cuts,
                       const std::vector<KeyIndex>& u_index,
                       const std::vector<std::unordered_map<std::int64_t, std::size_t>>& u_class_counts,
                       std::array<Symbol, 3> letters) {
  TaskResult r;
  const auto& c1 = cuts[letters[0]];
  const auto& c2 = cuts[letters[1]];
  const auto& c3 = cuts[letters[2]];
  r.stats.raw_triples = static_cast<std::uint64_t>(c1.size()) * c2.size() * c3.size();

  std::unordered_map<std::int64_t, std::vector<std::size_t>> v1_by_class;
  for (std::size_t i = 0; i < c1.size(); ++i) v1_by_class[c1[i].v_class].push_back(i);

  const std::size_t m = s.sel.rows.size();
  std::vector<std::int64_t> key;
  std::vector<std::int64_t> lattice(s.other_rows.size()), coeff(m), z(m);
  for (const Cut& mid : c2) {
    auto group = v1_by_class.find(mid.v_class);
    if (group == v1_by_class.end()) continue;
    const auto cls = u_class_counts[letters[2]].find(mid.u_class);
    if (cls == u_class_counts[letters[2]].end()) continue;
    if (!s.congruence) r.stats.affix_survivors += group->second.size() * cls->second;

    for (std::size_t i1 : group->second) {
      const Cut& first = c1[i1];
      for (std::size_t j = 0; j < lattice.size(); ++j) {
        lattice[j] = first.v_proj.lattice[j] + mid.u_proj.lattice[j] - mid.v_proj.lattice[j];
      }
      for (std::size_t j = 0; j < m; ++j) {
        coeff[j] = first.v_proj.coeff[j] + mid.u_proj.coeff[j] - mid.v_proj.coeff[j];
      }
      key.clear();
      key.push_back(mid.u_class);
      if (s.congruence) {
        const auto len_v1 = static_cast<std::int64_t>(s.h->image(letters[0]).size() - first.cut);
        const auto len_v2 = static_cast<std::int64_t>(s.h->image(letters[1]).size() - mid.cut);
        const std::int64_t want =
            mod(len_v1 + static_cast<std::int64_t>(mid.cut) - len_v2, static_cast<std::int64_t>(s.modulus));
        key.push_back(want);
        for (const Cut& last : c3) {
          if (last.u_class == mid.u_class &&
              static_cast<std::int64_t>(last.cut % s.modulus) == want) {
            ++r.stats.affix_survivors;
          }
        }
      }
      append_key(key, s, lattice, coeff);
      auto hit = u_index[letters[2]].find(key);
      if (hit == u_index[letters[2]].end()) continue;
      for (std::size_t i3 : hit->second) {
        const Cut& last = c3[i3];
        ++r.stats.lattice_survivors;
        for (std::size_t j = 0; j < m; ++j) {
          const std::int64_t num = coeff[j] - last.u_proj.coeff[j];
          if (num % s.denom != 0) throw std::logic_error("lattice index returned a non-integral point");
          z[j] = num / s.denom;
        }
        ++r.stats.claim_checks;
        if (!claim_check(z, letters[0], letters[1], letters[2])) {
          note_failure(r, CutTriple{letters, {first.cut, mid.cut, last.cut}});
        }
      }
    }
  }
  return r;
}

TaskResult run_direct(const Setup& s, std::array<Symbol, 3> letters) {
  TaskResult r;
  const Morphism& h = *s.h;
  const std::size_t m = s.sel.rows.size();
  const std::size_t l1 = h.image(letters[0]).size();
  const std::size_t l2 = h.image(letters[1]).size();
  const std::size_t l3 = h.image(letters[2]).size();
  std::vector<std::int64_t> z(m);
  for (std::size_t c1 = 0; c1 < l1; ++c1) {
    for (std::size_t c2 = 0; c2 < l2; ++c2) {
      for (std::size_t c3 = 0; c3 < l3; ++c3) {
        const CutTriple t{letters, {c1, c2, c3}};
        ++r.stats.raw_triples;
        const Word v1p = t.v(h, 0) + s.p, v2p = t.v(h, 1) + s.p;
        const Word qu2 = s.q + t.u(h, 1), qu3 = s.q + t.u(h, 2);
        if (v1p.prefix(s.k - 1) != v2p.prefix(s.k - 1)) continue;
        if (qu2.suffix(s.k - 1) != qu3.suffix(s.k - 1)) continue;
        if (s.congruence && ((l1 - c1) + c2) % s.modulus != ((l2 - c2) + c3) % s.modulus) continue;
        ++r.stats.affix_survivors;

        const BoundaryVector b = boundary_vector(h, s.k, t, s.sel);
        const std::vector<Rational> zq = multiply(s.sel.inverse, b.psi_s);
        if (!std::all_of(zq.begin(), zq.end(), [](const Rational& x) { return x.denominator() == 1; })) {
          continue;
        }
        for (std::size_t j = 0; j < m; ++j) z[j] = zq[j].numerator();
        bool in_image = true;
        for (std::size_t row = 0; row < s.n.entries.size() && in_image; ++row) {
          std::int64_t acc = 0;
          for (std::size_t x = 0; x < m; ++x) acc += s.n.entries[row][x] * z[x];
          in_image = acc == b.psi_full[row];
        }
        if (!in_image) continue;
        ++r.stats.lattice_survivors;
        ++r.stats.claim_checks;
        if (!claim_check(z, letters[0], letters[1], letters[2])) note_failure(r, t);
      }
    }
  }
  return r;
}

template <typename Fn>
std::vector<TaskResult> run_tasks(std::size_t domain, unsigned threads, Fn&& fn) {
  std::vector<std::array<Symbol, 3>> tasks;
  for (std::size_t a = 0; a < domain; ++a) {
    for (std::size_t b = 0; b < domain; ++b) {
      for (std::size_t c = 0; c < domain; ++c) {
        tasks.push_back({static_cast<Symbol>(a), static_cast<Symbol>(b), static_cast<Symbol>(c)});
      }
    }
  }
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = fn(tasks[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace

VerificationReport verify(const Morphism& h, std::size_t k, std::size_t p, const VerifyOptions& opts) {
  VerificationReport report;
  report.k = k;
  report.p = p;
  report.span = opts.span.value_or(h.uniform() ? 2 : 3);
  if (!h.uniform() && !opts.span) {
    report.notes.push_back(
        "non-uniform morphism: short-span check covers images of abelian-square-free words of "
        "length up to 3");
  }
  auto fail = [&](std::string why) {
    report.verdict = Verdict::precondition_failed;
    report.reason = std::move(why);
    return report;
  };

  if (k == 0 || p == 0) return fail("k and p must be positive");
  const std::size_t need = std::max<std::size_t>(1, k - 1);
  if (h.common_prefix().size() < need || h.common_suffix().size() < need) {
    return fail("common prefix/suffix shorter than max(1, k-1)");
  }
  if ((2 + h.min_image_length()) / 2 < 3 * (k - 1)) {
    return fail("images too short: ceil((1 + min image length)/2) < 3(k-1)");
  }
  if (opts.congruence_filter && !h.uniform()) {
    return fail("congruence filter requires a uniform morphism");
  }

  Setup s;
  s.h = &h;
  s.k = k;
  s.sigma = h.target_alphabet();
  s.p = affix_prefix(h, k);
  s.q = affix_suffix(h, k);
  s.congruence = opts.congruence_filter;
  s.modulus = h.min_image_length();
  try {
    s.n = build_count_matrix(h, k);
    s.sel = select_rows(s.n, opts.preferred_rows);
  } catch (const PreconditionError& e) {
    return fail(e.what());
  }
  report.rows_used = s.sel.factors;
  report.det = s.sel.det;
  for (const auto& row : s.sel.inverse) {
    for (const Rational& x : row) s.denom = std::lcm(s.denom, x.denominator());
  }
  s.scaled_inverse.assign(s.sel.inverse.size(), {});
  for (std::size_t i = 0; i < s.sel.inverse.size(); ++i) {
    for (const Rational& x : s.sel.inverse[i]) {
      s.scaled_inverse[i].push_back(x.numerator() * (s.denom / x.denominator()));
    }
  }
  for (std::size_t r = 0; r < s.n.rows.size(); ++r) {
    if (std::find(s.sel.rows.begin(), s.sel.rows.end(), r) == s.sel.rows.end()) s.other_rows.push_back(r);
  }

  // Stage 1: squares inside the image of a short word.
  const AvoidancePredicate target{2, static_cast<int>(k), static_cast<int>(p), {}};
  for (const Word& z : abelian_square_free_words(static_cast<int>(h.domain_size()), report.span)) {
    ++report.stats.short_span_words;
    const Word image = h.apply(z);
    if (auto occ = find_power(image, target)) {
      report.verdict = Verdict::rejected;
      report.reason = "k-abelian square of period >= p inside h(" + z.str() + ")";
      report.short_span_failure = ShortSpanFailure{z, image, *occ};
      return report;
    }
  }

  // Stage 2: cut triples.
  std::vector<TaskResult> results;
  try {
    if (opts.engine == VerifyEngine::direct) {
      results = run_tasks(h.domain_size(), opts.threads,
                          [&](std::array<Symbol, 3> t) { return run_direct(s, t); });
    } else {
      const auto cuts = build_cuts(s);
      std::vector<KeyIndex> u_index(h.domain_size());
      std::vector<std::unordered_map<std::int64_t, std::size_t>> u_counts(h.domain_size());
      for (std::size_t a = 0; a < h.domain_size(); ++a) {
        for (std::size_t i = 0; i < cuts[a].size(); ++i) {
          const Cut& c = cuts[a][i];
          std::vector<std::int64_t> key{c.u_class};
          if (s.congruence) key.push_back(static_cast<std::int64_t>(c.cut % s.modulus));
          append_key(key, s, c.u_proj.lattice, c.u_proj.coeff);
          u_index[a][key].push_back(i);
          ++u_counts[a][c.u_class];
        }
      }
      results = run_tasks(h.domain_size(), opts.threads, [&](std::array<Symbol, 3> t) {
        return run_indexed(s, cuts, u_index, u_counts, t);
      });
    }
  } catch (const PreconditionError& e) {
    return fail(e.what());
  }

  for (const TaskResult& r : results) {
    report.stats.raw_triples += r.stats.raw_triples;
    report.stats.affix_survivors += r.stats.affix_survivors;
    report.stats.lattice_survivors += r.stats.lattice_survivors;
    report.stats.claim_checks += r.stats.claim_checks;
    if (r.failure && (!report.counterexample || *r.failure < *report.counterexample)) {
      report.counterexample = r.failure;
    }
  }
  if (report.counterexample) {
    report.verdict = Verdict::rejected;
    report.reason = "cut triple passes every filter but admits no alpha assignment";
  } else {
    report.verdict = Verdict::accepted;
  }
  return report;
}

SquareInventory surviving_squares(const Morphism& h, std::size_t k, std::size_t p,
                                  std::optional<std::size_t> span) {
  const std::size_t min_len = h.min_image_length();
  const std::size_t covering = 1 + (2 * p - 2 + min_len - 1) / min_len;
  const std::size_t m = span.value_or(std::max<std::size_t>(2, covering));
  SquareInventory out;
  for (const Word& z : abelian_square_free_words(static_cast<int>(h.domain_size()), m)) {
    for (const Word& sq : distinct_squares(h.apply(z), static_cast<int>(k))) {
      if (sq.size() < 2 * p) out.insert(sq);
    }
  }
  return out;
}

}  // namespace kab
