#include "kab/repetition.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace kab {

void AvoidancePredicate::validate() const {
  if (power < 2) throw PreconditionError("power must be at least 2");
  if (order < 1) throw PreconditionError("order k must be at least 1");
  if (min_period < 1) throw PreconditionError("min period must be at least 1");
  if (square_budget) {
    if (power != 2) throw PreconditionError("square budget requires power 2");
    if (*square_budget < 0) throw PreconditionError("square budget must be nonnegative");
  }
}

std::string AvoidancePredicate::describe() const {
  std::ostringstream os;
  os << "power=" << power << " k=" << order << " min_period=" << min_period;
  if (square_budget) os << " budget=" << *square_budget;
  return os.str();
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

bool blocks_equivalent(std::span<const Symbol> s, std::size_t a, std::size_t b,
                       std::size_t len, int k, int alphabet_size) {
  const auto uk = static_cast<std::size_t>(k);
  auto u = s.subspan(a, len);
  auto v = s.subspan(b, len);
  if (len + 1 < uk) return std::equal(u.begin(), u.end(), v.begin());
  if (!std::equal(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(uk - 1), v.begin())) {
    return false;
  }
  return psi_k(u, alphabet_size, uk) == psi_k(v, alphabet_size, uk);
}

// ---------------------------------------------------------------------------

WindowIndex::WindowIndex(int alphabet_size, int k)
    : alphabet_size_(alphabet_size), k_(static_cast<std::size_t>(k)) {
  if (k < 1) throw PreconditionError("order k must be at least 1");
  if (alphabet_size < 1 || alphabet_size > kMaxAlphabet) {
    throw PreconditionError("alphabet size must be in 1..10");
  }
  unsigned __int128 space = 1;
  for (int i = 0; i < k; ++i) {
    space *= static_cast<unsigned>(alphabet_size);
    if (space > (static_cast<unsigned __int128>(1) << 62)) {
      throw PreconditionError("order too large for alphabet");
    }
  }
  prefix_sum_.push_back(0);
}

void WindowIndex::push(Symbol c) {
  letters_.push_back(c);
  const std::size_t n = letters_.size();
  if (n < k_) return;
  std::uint64_t code = 0;
  for (std::size_t i = n - k_; i < n; ++i) {
    code = code * static_cast<std::uint64_t>(alphabet_size_) + letters_[i];
  }
  window_code_.push_back(code);
  prefix_sum_.push_back(prefix_sum_.back() + mix(code));
}

void WindowIndex::pop() {
  if (letters_.size() >= k_) {
    window_code_.pop_back();
    prefix_sum_.pop_back();
  }
  letters_.pop_back();
}

void WindowIndex::clear() {
  letters_.clear();
  window_code_.clear();
  prefix_sum_.assign(1, 0);
}

bool WindowIndex::same_letters(std::size_t a, std::size_t b, std::size_t len) const {
  const Symbol* p = letters_.data();
  return std::equal(p + a, p + a + len, p + b);
}

bool WindowIndex::equivalent(std::size_t a, std::size_t b, std::size_t len) const {
  if (len + 1 < k_) return same_letters(a, b, len);
  if (!same_letters(a, b, k_ - 1)) return false;
  const std::size_t windows = len + 1 - k_;
  if (windows == 0) return true;
  if (prefix_sum_[a + windows] - prefix_sum_[a] != prefix_sum_[b + windows] - prefix_sum_[b]) {
    return false;
  }
  scratch_a_.assign(window_code_.begin() + static_cast<std::ptrdiff_t>(a),
                    window_code_.begin() + static_cast<std::ptrdiff_t>(a + windows));
  scratch_b_.assign(window_code_.begin() + static_cast<std::ptrdiff_t>(b),
                    window_code_.begin() + static_cast<std::ptrdiff_t>(b + windows));
  std::sort(scratch_a_.begin(), scratch_a_.end());
  std::sort(scratch_b_.begin(), scratch_b_.end());
  return scratch_a_ == scratch_b_;
}

// ---------------------------------------------------------------------------

FreenessTracker::FreenessTracker(int alphabet_size, AvoidancePredicate pred)
    : pred_(pred), index_(alphabet_size, pred.order) {
  pred_.validate();
}

bool FreenessTracker::try_push(Symbol c) {
  if (c >= index_.alphabet_size()) throw PreconditionError("symbol outside alphabet");
  index_.push(c);
  const std::size_t end = index_.size();
  violation_ = pred_.square_budget ? check_budget(end) : check_power(end);
  if (violation_) {
    pop();
    return false;
  }
  return true;
}

void FreenessTracker::pop() {
  const std::size_t n = index_.size();
  while (!squares_.empty() && squares_.back().added_at == n) squares_.pop_back();
  index_.pop();
}

void FreenessTracker::clear() {
  index_.clear();
  squares_.clear();
  violation_.reset();
}

std::optional<Occurrence> FreenessTracker::check_power(std::size_t end) const {
  const auto n = static_cast<std::size_t>(pred_.power);
  for (auto len = static_cast<std::size_t>(pred_.min_period); n * len <= end; ++len) {
    const std::size_t start = end - n * len;
    bool all = true;
    // Last pair first: it is the one the new letter can break.
    for (std::size_t j = n - 1; j >= 1 && all; --j) {
      all = index_.equivalent(start + (j - 1) * len, start + j * len, len);
    }
    if (all) return Occurrence{start, len, n};
  }
  return std::nullopt;
}

std::optional<Occurrence> FreenessTracker::check_budget(std::size_t end) {
  const auto budget = static_cast<std::size_t>(*pred_.square_budget);
  const auto min_period = static_cast<std::size_t>(pred_.min_period);
  for (std::size_t len = 1; 2 * len <= end; ++len) {
    const std::size_t start = end - 2 * len;
    if (!index_.equivalent(start, start + len, len)) continue;
    if (min_period > 1 && len >= min_period) return Occurrence{start, len, 2};
    bool known = false;
    for (const Entry& e : squares_) {
      if (e.length == 2 * len && index_.same_letters(e.start, start, 2 * len)) {
        known = true;
        break;
      }
    }
    if (known) continue;
    squares_.push_back({start, 2 * len, end});
    if (squares_.size() > budget) return Occurrence{start, len, 2};
  }
  return std::nullopt;
}

std::vector<Word> FreenessTracker::inventory() const {
  std::vector<Word> out;
  auto s = index_.letters();
  for (const Entry& e : squares_) {
    out.emplace_back(index_.alphabet_size(),
                     std::vector<Symbol>(s.begin() + static_cast<std::ptrdiff_t>(e.start),
                                         s.begin() + static_cast<std::ptrdiff_t>(e.start + e.length)));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::optional<Occurrence> find_power(const Word& w, const AvoidancePredicate& pred) {
  FreenessTracker tracker(w.alphabet_size(), pred);
  for (Symbol c : w) {
    if (!tracker.try_push(c)) return tracker.violation();
  }
  return std::nullopt;
}

bool is_free(const Word& w, const AvoidancePredicate& pred) { return !find_power(w, pred); }

bool extension_is_free(const Word& w, Symbol c, const AvoidancePredicate& pred) {
  FreenessTracker tracker(w.alphabet_size(), pred);
  for (Symbol x : w) {
    if (!tracker.try_push(x)) throw PreconditionError("word is not free for the predicate");
  }
  return tracker.try_push(c);
}

SquareInventory distinct_squares(const Word& w, int k) {
  WindowIndex index(w.alphabet_size(), k);
  for (Symbol c : w) index.push(c);
  SquareInventory out;
  for (std::size_t len = 1; 2 * len <= w.size(); ++len) {
    for (std::size_t start = 0; start + 2 * len <= w.size(); ++start) {
      if (index.equivalent(start, start + len, len)) out.insert(w.factor(start, 2 * len));
    }
  }
  return out;
}

}  // namespace kab
