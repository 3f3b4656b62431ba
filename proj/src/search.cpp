#include "kab/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

namespace kab {

std::string to_string(SearchMode mode) {
  return mode == SearchMode::full ? "full" : "prelyndon";
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "full") return SearchMode::full;
  if (text == "prelyndon" || text == "pre_lyndon") return SearchMode::pre_lyndon;
  throw PreconditionError("unknown search mode: " + std::string(text));
}

void SearchLimits::validate() const {
  if (max_length && *max_length == 0) throw PreconditionError("max_length must be positive");
  if (max_nodes && *max_nodes == 0) throw PreconditionError("max_nodes must be positive");
  if (wall_time && wall_time->count() <= 0) throw PreconditionError("wall_time must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

struct Shared {
  SearchLimits limits;
  Clock::time_point deadline;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  std::uint64_t next_progress = 0;
  std::mutex progress_mutex;
  const ExecutionOptions* exec = nullptr;
};

// Statistics of one subtree; merged in task order.
struct Tally {
  std::uint64_t nodes = 0;
  std::size_t max_depth = 0;
  std::vector<Symbol> witness;
  std::vector<std::uint64_t> per_depth;
  bool limit_hit = false;

  void visit(std::span<const Symbol> w) {
    const std::size_t d = w.size();
    ++nodes;
    if (per_depth.size() <= d) per_depth.resize(d + 1, 0);
    ++per_depth[d];
    if (d > max_depth) {
      max_depth = d;
      witness.assign(w.begin(), w.end());
    }
  }

  void merge(const Tally& o) {
    nodes += o.nodes;
    if (per_depth.size() < o.per_depth.size()) per_depth.resize(o.per_depth.size(), 0);
    for (std::size_t i = 0; i < o.per_depth.size(); ++i) per_depth[i] += o.per_depth[i];
    if (o.max_depth > max_depth || (o.max_depth == max_depth && o.witness < witness)) {
      max_depth = o.max_depth;
      witness = o.witness;
    }
    limit_hit = limit_hit || o.limit_hit;
  }
};

class Explorer {
 public:
  Explorer(int alphabet_size, const AvoidancePredicate& pred, SearchMode mode, Shared& shared)
      : sigma_(alphabet_size), mode_(mode), tracker_(alphabet_size, pred), shared_(shared) {}

  // Rebuilds a frontier prefix; returns false if it is not a valid node.
  bool load(std::span<const Symbol> prefix) {
    tracker_.clear();
    states_.assign(1, PreLyndonState{});
    for (Symbol c : prefix) {
      if (!step(c)) return false;
    }
    return true;
  }

  // Depth-first walk below the current word. Words of length stop_depth
  // are recorded in `frontier` and not expanded (when frontier != null).
  void explore(Tally& tally, std::size_t stop_depth = 0,
               std::vector<std::vector<Symbol>>* frontier = nullptr) {
    const std::size_t base = tracker_.size();
    const std::size_t max_len = shared_.limits.max_length.value_or(SIZE_MAX);
    if (base >= max_len) {
      if (has_child()) tally.limit_hit = true;
      return;
    }
    std::vector<int> next{0};
    while (!next.empty()) {
      if (shared_.stop.load(std::memory_order_relaxed)) {
        tally.limit_hit = true;
        break;
      }
      const int c = next.back();
      if (c == sigma_) {
        next.pop_back();
        if (tracker_.size() > base) unstep();
        continue;
      }
      ++next.back();
      if (!step(static_cast<Symbol>(c))) continue;
      auto w = tracker_.letters();
      tally.visit(w);
      if (on_node_) on_node_(w);
      if (++local_ >= flush_every_) flush(tally);
      if (frontier && w.size() == stop_depth) {
        frontier->emplace_back(w.begin(), w.end());
        unstep();
      } else if (w.size() >= max_len) {
        if (has_child()) tally.limit_hit = true;
        unstep();
      } else {
        next.push_back(0);
      }
    }
    flush(tally);
  }

  void set_on_node(std::function<void(std::span<const Symbol>)> f) { on_node_ = std::move(f); }
  void set_flush_every(std::uint64_t n) { flush_every_ = n; }

 private:
  bool step(Symbol c) {
    if (mode_ == SearchMode::pre_lyndon) {
      auto next = pre_lyndon_extend(states_.back(), tracker_.letters(), c);
      if (!next) return false;
      if (!tracker_.try_push(c)) return false;
      states_.push_back(*next);
      return true;
    }
    return tracker_.try_push(c);
  }

  void unstep() {
    tracker_.pop();
    if (mode_ == SearchMode::pre_lyndon) states_.pop_back();
  }

  bool has_child() {
    for (int c = 0; c < sigma_; ++c) {
      if (step(static_cast<Symbol>(c))) {
        unstep();
        return true;
      }
    }
    return false;
  }

  void flush(Tally& tally) {
    if (local_ == 0) return;
    const std::uint64_t total =
        shared_.nodes.fetch_add(local_, std::memory_order_relaxed) + local_;
    local_ = 0;
    const auto& limits = shared_.limits;
    if (limits.max_nodes && total >= *limits.max_nodes) shared_.stop = true;
    if (limits.wall_time && Clock::now() >= shared_.deadline) shared_.stop = true;
    if (shared_.exec->progress && total >= shared_.next_progress) {
      std::lock_guard lock(shared_.progress_mutex);
      if (total >= shared_.next_progress) {
        shared_.exec->progress("nodes=" + std::to_string(total) +
                               " depth=" + std::to_string(tally.max_depth));
        shared_.next_progress = (total / shared_.exec->progress_interval + 1) *
                                shared_.exec->progress_interval;
      }
    }
    if (shared_.stop) tally.limit_hit = true;
  }

  int sigma_;
  SearchMode mode_;
  FreenessTracker tracker_;
  std::vector<PreLyndonState> states_{PreLyndonState{}};
  Shared& shared_;
  std::uint64_t local_ = 0;
  std::uint64_t flush_every_ = 4096;
  std::function<void(std::span<const Symbol>)> on_node_;
};

}  // namespace

SearchReport exhaustive_search(int alphabet_size, const AvoidancePredicate& pred, SearchMode mode,
                               const SearchLimits& limits, const ExecutionOptions& exec) {
  pred.validate();
  limits.validate();
  const auto started = Clock::now();

  Shared shared;
  shared.limits = limits;
  shared.exec = &exec;
  shared.next_progress = exec.progress_interval;
  if (limits.wall_time) shared.deadline = started + *limits.wall_time;

  unsigned threads = std::max(1u, exec.threads);
  if (exec.on_node) threads = 1;

  Tally total;
  if (threads == 1) {
    Explorer root(alphabet_size, pred, mode, shared);
    if (exec.on_node) root.set_on_node(exec.on_node);
    if (limits.max_nodes) root.set_flush_every(1);
    root.explore(total);
  } else {
    const std::size_t split = exec.split_depth ? exec.split_depth : 12;
    std::vector<std::vector<Symbol>> frontier;
    {
      Explorer root(alphabet_size, pred, mode, shared);
      root.explore(total, split, &frontier);
    }
    std::vector<Tally> tallies(frontier.size());
    std::atomic<std::size_t> next_task{0};
    auto work = [&] {
      Explorer ex(alphabet_size, pred, mode, shared);
      for (std::size_t t = next_task++; t < frontier.size(); t = next_task++) {
        if (shared.stop) {
          tallies[t].limit_hit = true;
          continue;
        }
        if (ex.load(frontier[t])) ex.explore(tallies[t]);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (const Tally& t : tallies) total.merge(t);
  }

  SearchReport report;
  report.exhausted = !total.limit_hit;
  report.node_count = total.nodes;
  report.max_depth = total.max_depth;
  report.witness = Word(alphabet_size, total.witness);
  report.per_depth_counts = total.per_depth;
  if (report.per_depth_counts.empty()) report.per_depth_counts.push_back(0);
  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started);
  if (!report.witness.empty() && !is_free(report.witness, pred)) {
    throw std::logic_error("search produced a witness that is not free");
  }
  return report;
}

SearchReport budget_search(int k, int budget, SearchMode mode, const SearchLimits& limits,
                           const ExecutionOptions& exec) {
  AvoidancePredicate pred{2, k, 1, budget};
  return exhaustive_search(2, pred, mode, limits, exec);
}

// ---------------------------------------------------------------------------

void RandomSearchConfig::validate() const {
  if (target_length == 0) throw PreconditionError("target length must be positive");
  if (max_restarts == 0) throw PreconditionError("max restarts must be positive");
  if (!(backoff >= 1.0)) throw PreconditionError("backoff must be at least 1");
}

namespace {

// Seed-reproducible draws built on the raw mt19937_64 stream, whose output
// sequence is fixed by the standard (distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = gen_();
    while (x >= limit);
    return x % n;
  }

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // At least 1, mean `mean`.
  std::size_t geometric(double mean) {
    const double stop = 1.0 / mean;
    std::size_t n = 1;
    while (unit() >= stop) ++n;
    return n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

std::optional<Word> random_long_word(int alphabet_size, const AvoidancePredicate& pred,
                                     const RandomSearchConfig& cfg) {
  pred.validate();
  cfg.validate();
  Rng rng(cfg.seed);
  FreenessTracker tracker(alphabet_size, pred);
  std::vector<Symbol> order(static_cast<std::size_t>(alphabet_size));
  std::uint64_t dead_ends = 0;
  while (tracker.size() < cfg.target_length) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Symbol>(i);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    bool extended = false;
    for (Symbol c : order) {
      if (tracker.try_push(c)) {
        extended = true;
        break;
      }
    }
    if (extended) continue;
    if (++dead_ends > cfg.max_restarts) return std::nullopt;
    const std::size_t drop = std::min(tracker.size(), rng.geometric(cfg.backoff));
    for (std::size_t i = 0; i < drop; ++i) tracker.pop();
  }
  auto s = tracker.letters();
  Word w(alphabet_size, std::vector<Symbol>(s.begin(), s.end()));
  if (!is_free(w, pred)) throw std::logic_error("random search produced a non-free word");
  return w;
}

// ---------------------------------------------------------------------------

FinitenessResult prove_finite(int alphabet_size, const AvoidancePredicate& pred,
                              const SearchLimits& limits, const ExecutionOptions& exec) {
  pred.validate();
  FinitenessResult result;
  // Every base x must have a non-free power x^t with t bounded. For a plain
  // n-power predicate x^(n p) always qualifies; a budget needs budget+1
  // distinct squares (x^j)^2 on top of that.
  const auto n = static_cast<std::size_t>(pred.power);
  const auto p = static_cast<std::size_t>(pred.min_period);
  result.power_exponent_bound = 2 * n * p;
  if (pred.square_budget) result.power_exponent_bound += 2 * (static_cast<std::size_t>(*pred.square_budget) + 1);
  std::size_t base_len = std::max<std::size_t>(2, n * p);
  while (base_len > 1 && std::pow(alphabet_size, static_cast<double>(base_len)) > 65536.0) --base_len;
  result.power_base_length = base_len;

  for (std::size_t len = 1; len <= base_len; ++len) {
    for (const Word& x : all_words(alphabet_size, len)) {
      FreenessTracker tracker(alphabet_size, pred);
      bool bounded = false;
      for (std::size_t t = 0; t < result.power_exponent_bound && !bounded; ++t) {
        for (Symbol c : x) {
          if (!tracker.try_push(c)) {
            bounded = true;
            break;
          }
        }
      }
      if (!bounded) {
        throw PreconditionError("predicate does not bound powers: " + x.str() + "^" +
                                std::to_string(result.power_exponent_bound) + " is free");
      }
    }
  }

  result.report = exhaustive_search(alphabet_size, pred, SearchMode::pre_lyndon, limits, exec);
  result.verdict = result.report.exhausted ? Finiteness::finite : Finiteness::unknown;
  return result;
}

}  // namespace kab
