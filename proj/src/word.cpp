#include "kab/word.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

namespace kab {

Word::Word(int alphabet_size, std::vector<Symbol> symbols)
    : alphabet_size_(alphabet_size), symbols_(std::move(symbols)) {
  if (alphabet_size_ < 1 || alphabet_size_ > kMaxAlphabet) {
    throw PreconditionError("alphabet size must be in 1..10");
  }
  for (Symbol c : symbols_) {
    if (c >= alphabet_size_) throw PreconditionError("symbol outside alphabet");
  }
}

Word Word::parse(std::string_view text, int alphabet_size) {
  std::vector<Symbol> symbols;
  symbols.reserve(text.size());
  int max_digit = -1;
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      throw PreconditionError(std::string("invalid letter '") + ch + "' in word");
    }
    symbols.push_back(static_cast<Symbol>(ch - '0'));
    max_digit = std::max(max_digit, ch - '0');
  }
  if (alphabet_size == 0) alphabet_size = std::max(1, max_digit + 1);
  return Word(alphabet_size, std::move(symbols));
}

Word Word::prefix(std::size_t n) const { return factor(0, n); }

Word Word::suffix(std::size_t n) const {
  if (n > size()) throw PreconditionError("suffix longer than word");
  return factor(size() - n, n);
}

Word Word::factor(std::size_t start, std::size_t length) const {
  if (start + length > size()) throw PreconditionError("factor out of range");
  Word out;
  out.alphabet_size_ = alphabet_size_;
  out.symbols_.assign(symbols_.begin() + static_cast<std::ptrdiff_t>(start),
                      symbols_.begin() + static_cast<std::ptrdiff_t>(start + length));
  return out;
}

void Word::push_back(Symbol c) {
  if (c >= alphabet_size_) throw PreconditionError("symbol outside alphabet");
  symbols_.push_back(c);
}

std::string Word::str() const {
  std::string s(symbols_.size(), '0');
  for (std::size_t i = 0; i < symbols_.size(); ++i) s[i] = static_cast<char>('0' + symbols_[i]);
  return s;
}

Word operator+(const Word& a, const Word& b) {
  std::vector<Symbol> s(a.begin(), a.end());
  s.insert(s.end(), b.begin(), b.end());
  return Word(std::max(a.alphabet_size(), b.alphabet_size()), std::move(s));
}

std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

std::vector<Word> all_words(int alphabet_size, std::size_t n) {
  std::vector<Word> out;
  std::vector<Symbol> cur(n, 0);
  while (true) {
    out.emplace_back(alphabet_size, cur);
    std::size_t i = n;
    while (i > 0 && cur[i - 1] + 1 == alphabet_size) cur[--i] = 0;
    if (i == 0) break;
    ++cur[i - 1];
  }
  return out;
}

ParikhVector parikh(const Word& w) {
  ParikhVector v(static_cast<std::size_t>(w.alphabet_size()), 0);
  for (Symbol c : w) ++v[c];
  return v;
}

std::size_t count_occurrences(const Word& u, const Word& f) {
  if (f.empty()) throw PreconditionError("empty factor");
  if (f.size() > u.size()) return 0;
  std::size_t n = 0;
  auto us = u.symbols();
  auto fs = f.symbols();
  for (std::size_t i = 0; i + f.size() <= u.size(); ++i) {
    if (std::equal(fs.begin(), fs.end(), us.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------

FactorSet::FactorSet(std::vector<Word> members, bool keep_given_order)
    : members_(std::move(members)) {
  if (members_.empty()) return;
  length_ = members_.front().size();
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].size() != length_) throw PreconditionError("factor set lengths differ");
    if (!keep_given_order && i > 0 && !(members_[i - 1] < members_[i])) {
      throw PreconditionError("factor set must be strictly increasing");
    }
  }
  if (keep_given_order) {
    auto sorted = members_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw PreconditionError("duplicate factor in set");
    }
  }
}

FactorSet FactorSet::all(int alphabet_size, std::size_t k) {
  return FactorSet(all_words(alphabet_size, k));
}

std::optional<std::size_t> FactorSet::index_of(const Word& w) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] == w) return i;
  }
  return std::nullopt;
}

namespace {

std::uint64_t encode(std::span<const Symbol> s, int base) {
  std::uint64_t code = 0;
  for (Symbol c : s) code = code * static_cast<std::uint64_t>(base) + c;
  return code;
}

}  // namespace

Counts psi_k(std::span<const Symbol> w, int alphabet_size, std::size_t k) {
  std::size_t rows = 1;
  for (std::size_t i = 0; i < k; ++i) rows *= static_cast<std::size_t>(alphabet_size);
  Counts out(rows, 0);
  if (w.size() < k) return out;
  for (std::size_t i = 0; i + k <= w.size(); ++i) ++out[encode(w.subspan(i, k), alphabet_size)];
  return out;
}

FactorVector factor_vector(const Word& w, const FactorSet& s) {
  if (s.size() == 0) throw PreconditionError("empty factor set");
  const std::size_t k = s.word_length();
  const int base = std::max(w.alphabet_size(), s[0].alphabet_size());
  FactorVector out{s, Counts(s.size(), 0)};
  if (k == 0 || w.size() < k) return out;

  // Dense lookup while sigma^k is small, sparse map above that.
  double space = 1;
  for (std::size_t i = 0; i < k; ++i) space *= base;
  auto symbols = w.symbols();
  if (space <= 4096) {
    std::vector<std::int64_t> slot(static_cast<std::size_t>(space), -1);
    for (std::size_t j = 0; j < s.size(); ++j) {
      slot[encode(s[j].symbols(), base)] = static_cast<std::int64_t>(j);
    }
    for (std::size_t i = 0; i + k <= w.size(); ++i) {
      auto j = slot[encode(symbols.subspan(i, k), base)];
      if (j >= 0) ++out.counts[static_cast<std::size_t>(j)];
    }
  } else {
    std::unordered_map<std::uint64_t, std::size_t> slot;
    for (std::size_t j = 0; j < s.size(); ++j) slot[encode(s[j].symbols(), base)] = j;
    for (std::size_t i = 0; i + k <= w.size(); ++i) {
      auto it = slot.find(encode(symbols.subspan(i, k), base));
      if (it != slot.end()) ++out.counts[it->second];
    }
  }
  return out;
}

FactorVector factor_vector(const Word& w, std::size_t k) {
  return factor_vector(w, FactorSet::all(w.alphabet_size(), k));
}

// ---------------------------------------------------------------------------

bool k_abelian_eq(const Word& u, const Word& v, std::size_t k, EquivalenceMode mode) {
  if (k == 0) throw PreconditionError("k must be positive");
  if (u.size() != v.size()) return false;
  const int sigma = std::max(u.alphabet_size(), v.alphabet_size());
  switch (mode) {
    case EquivalenceMode::factor_only:
      for (std::size_t j = 1; j <= k; ++j) {
        if (psi_k(u.symbols(), sigma, j) != psi_k(v.symbols(), sigma, j)) return false;
      }
      return true;
    case EquivalenceMode::prefix_form:
    case EquivalenceMode::suffix_form: {
      if (u.size() + 1 < k) return u == v;
      const bool pre = mode == EquivalenceMode::prefix_form;
      const Word a = pre ? u.prefix(k - 1) : u.suffix(k - 1);
      const Word b = pre ? v.prefix(k - 1) : v.suffix(k - 1);
      return a == b && psi_k(u.symbols(), sigma, k) == psi_k(v.symbols(), sigma, k);
    }
  }
  return false;
}

bool splitting_identity_check(const Word& u, const Word& v, std::size_t k, std::size_t i) {
  if (k == 0 || i >= k || u.size() < k - 1 - i || v.size() < i) {
    throw PreconditionError("splitting identity preconditions violated");
  }
  const int sigma = std::max(u.alphabet_size(), v.alphabet_size());
  const Counts whole = psi_k((u + v).symbols(), sigma, k);
  Counts left = psi_k((u + v.prefix(i)).symbols(), sigma, k);
  const Counts right = psi_k((u.suffix(k - 1 - i) + v).symbols(), sigma, k);
  for (std::size_t j = 0; j < left.size(); ++j) left[j] += right[j];
  return whole == left;
}

// ---------------------------------------------------------------------------

std::strong_ordering lex_compare(const Word& u, const Word& v) { return u <=> v; }

std::vector<Word> lyndon_factorize(const Word& w) {
  if (w.empty()) throw PreconditionError("empty word has no Lyndon factorization");
  std::vector<Word> out;
  const std::size_t n = w.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1, k = i;
    while (j < n && w[k] <= w[j]) {
      k = (w[k] < w[j]) ? i : k + 1;
      ++j;
    }
    while (i <= k) {
      out.push_back(w.factor(i, j - k));
      i += j - k;
    }
  }
  return out;
}

bool is_lyndon(const Word& w) {
  if (w.empty()) throw PreconditionError("empty word");
  return lyndon_factorize(w).size() == 1;
}

std::optional<PreLyndonState> pre_lyndon_extend(const PreLyndonState& state,
                                                std::span<const Symbol> w, Symbol c) {
  if (state.length == 0) return PreLyndonState{1, 1};
  const Symbol ref = w[state.length - state.period];
  if (c == ref) return PreLyndonState{state.length + 1, state.period};
  if (c > ref) return PreLyndonState{state.length + 1, state.length + 1};
  return std::nullopt;
}

bool is_pre_lyndon(const Word& w) {
  PreLyndonState st;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto next = pre_lyndon_extend(st, w.symbols().first(i), w[i]);
    if (!next) return false;
    st = *next;
  }
  return true;
}

}  // namespace kab
