#include "kab/discovery.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace kab {

void DiscoveryConfig::validate() const {
  target.validate();
  if (target_alphabet < 2 || target_alphabet > kMaxAlphabet) {
    throw PreconditionError("target alphabet must be in 2..10");
  }
  if (factor_length == 0 || factor_length % 2 != 0) {
    throw PreconditionError("factor_length must be positive and even");
  }
  if (top_m == 0) throw PreconditionError("top_m must be positive");
  if (clique_size != 4) throw PreconditionError("clique_size is fixed at 4");
  if (verify_k == 0 || verify_p == 0) throw PreconditionError("verify_k and verify_p must be positive");
  if (seed_word_length < factor_length) throw PreconditionError("seed word shorter than factor_length");
  for (const Word& f : factors) {
    if (f.empty() || f.size() % 2 != 0) throw PreconditionError("factors must have positive even length");
    for (Symbol c : f) {
      if (c >= target_alphabet) throw PreconditionError("factor letter outside the target alphabet");
    }
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw PreconditionError("config key '" + key + "': expected a nonnegative integer, got '" + value + "'");
  }
  return out;
}

}  // namespace

DiscoveryConfig parse_discovery_config(std::string_view text) {
  DiscoveryConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    auto u = [&] { return to_u64(key, value); };
    auto i = [&] { return static_cast<int>(to_u64(key, value)); };
    if (key == "power") cfg.target.power = i();
    else if (key == "k") cfg.target.order = i();
    else if (key == "min_period") cfg.target.min_period = i();
    else if (key == "budget") cfg.target.square_budget = i();
    else if (key == "alphabet") cfg.target_alphabet = i();
    else if (key == "seed_word_length") cfg.seed_word_length = u();
    else if (key == "factor_length") cfg.factor_length = u();
    else if (key == "top_m") cfg.top_m = u();
    else if (key == "family_min_length") cfg.family_min_length = u();
    else if (key == "family_max_length") cfg.family_max_length = u();
    else if (key == "family_max_nodes") cfg.family_max_nodes = u();
    else if (key == "clique_size") cfg.clique_size = u();
    else if (key == "verify_k") cfg.verify_k = u();
    else if (key == "verify_p") cfg.verify_p = u();
    else if (key == "seed") cfg.seed = u();
    else if (key == "max_cliques_per_family") cfg.max_cliques_per_family = u();
    else if (key == "max_accepted") cfg.max_accepted = u();
    else if (key == "threads") cfg.threads = static_cast<unsigned>(u());
    else if (key == "factors") {
      cfg.factors.clear();
      std::istringstream parts(value);
      std::string item;
      while (std::getline(parts, item, ',')) {
        item = trim(item);
        if (!item.empty()) cfg.factors.push_back(Word::parse(item));
      }
    }
    else throw PreconditionError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

DiscoveryConfig load_discovery_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_discovery_config(buf.str());
}

std::string format_discovery_config(const DiscoveryConfig& c) {
  std::ostringstream os;
  os << "power = " << c.target.power << "\n"
     << "k = " << c.target.order << "\n"
     << "min_period = " << c.target.min_period << "\n";
  if (c.target.square_budget) os << "budget = " << *c.target.square_budget << "\n";
  os << "alphabet = " << c.target_alphabet << "\n"
     << "seed_word_length = " << c.seed_word_length << "\n"
     << "factor_length = " << c.factor_length << "\n"
     << "top_m = " << c.top_m << "\n"
     << "family_min_length = " << c.family_min_length << "\n"
     << "family_max_length = " << c.family_max_length << "\n"
     << "family_max_nodes = " << c.family_max_nodes << "\n"
     << "clique_size = " << c.clique_size << "\n"
     << "verify_k = " << c.verify_k << "\n"
     << "verify_p = " << c.verify_p << "\n"
     << "seed = " << c.seed << "\n"
     << "max_cliques_per_family = " << c.max_cliques_per_family << "\n"
     << "max_accepted = " << c.max_accepted << "\n"
     << "threads = " << c.threads << "\n";
  if (!c.factors.empty()) {
    os << "factors = ";
    for (std::size_t i = 0; i < c.factors.size(); ++i) os << (i ? "," : "") << c.factors[i];
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<Word> harvest_factors(const Word& w, std::size_t length, std::size_t top_m) {
  if (length == 0 || w.size() < length) throw PreconditionError("word shorter than factor length");
  const std::string text = w.str();
  std::unordered_map<std::string_view, std::size_t> counts;
  for (std::size_t i = 0; i + length <= text.size(); ++i) {
    ++counts[std::string_view(text).substr(i, length)];
  }
  std::vector<std::pair<std::string_view, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<Word> out;
  for (std::size_t i = 0; i < ranked.size() && i < top_m; ++i) {
    out.push_back(Word::parse(ranked[i].first, w.alphabet_size()));
  }
  return out;
}

CandidateFamily build_family(int alphabet_size, const AvoidancePredicate& pred, const Word& prefix,
                             const Word& suffix, std::size_t max_len, std::size_t min_len,
                             std::uint64_t max_nodes) {
  CandidateFamily family;
  family.shared_prefix = prefix;
  family.shared_suffix = suffix;
  FreenessTracker tracker(alphabet_size, pred);
  for (Symbol c : prefix) {
    if (!tracker.try_push(c)) throw PreconditionError("family prefix is not free");
  }
  if (prefix.size() > max_len) return family;
  const std::size_t shortest = std::max({prefix.size(), suffix.size(), min_len});
  auto s_sym = suffix.symbols();

  auto consider = [&] {
    auto w = tracker.letters();
    if (w.size() < shortest) return;
    if (!std::equal(s_sym.begin(), s_sym.end(), w.end() - static_cast<std::ptrdiff_t>(s_sym.size()))) return;
    family.members.emplace_back(alphabet_size, std::vector<Symbol>(w.begin(), w.end()));
  };

  const std::size_t base = tracker.size();
  std::uint64_t nodes = 1;
  consider();
  std::vector<int> next{0};
  while (!next.empty()) {
    const int c = next.back();
    if (c == alphabet_size || tracker.size() >= max_len) {
      next.pop_back();
      if (tracker.size() > base) tracker.pop();
      continue;
    }
    ++next.back();
    if (!tracker.try_push(static_cast<Symbol>(c))) continue;
    if (max_nodes && ++nodes > max_nodes) {
      family.truncated = true;
      break;
    }
    consider();
    next.push_back(0);
  }
  std::sort(family.members.begin(), family.members.end());
  return family;
}

std::size_t CompatibilityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : adjacency) n += adj.size();
  return n / 2;
}

bool CompatibilityGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto& adj = adjacency.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

namespace {

bool concat_free(FreenessTracker& t, std::initializer_list<const Word*> parts) {
  t.clear();
  for (const Word* w : parts) {
    for (Symbol c : *w) {
      if (!t.try_push(c)) return false;
    }
  }
  return true;
}

}  // namespace

CompatibilityGraph build_graph(const std::vector<Word>& family, const AvoidancePredicate& pred,
                               int alphabet_size) {
  CompatibilityGraph g;
  g.vertex_count = family.size();
  g.adjacency.assign(family.size(), {});
  FreenessTracker tracker(alphabet_size, pred);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const Word& x = family[i];
      const Word& y = family[j];
      if (concat_free(tracker, {&x, &y, &x}) && concat_free(tracker, {&y, &x, &y})) {
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
      }
    }
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

// ---------------------------------------------------------------------------

CliqueStream::CliqueStream(const CompatibilityGraph& g, std::size_t size) : g_(&g), size_(size) {
  if (size == 0) throw PreconditionError("clique size must be positive");
  std::vector<std::size_t> all(g.vertex_count);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  candidates_.push_back(std::move(all));
  cursor_.push_back(0);
}

std::optional<std::vector<std::size_t>> CliqueStream::next() {
  while (!done_) {
    const std::size_t level = chosen_.size();
    auto& cand = candidates_[level];
    std::size_t& cur = cursor_[level];
    // Not enough candidates left to complete a clique from this level.
    if (cur >= cand.size() || cand.size() - cur < size_ - level) {
      if (level == 0) {
        done_ = true;
        break;
      }
      chosen_.pop_back();
      candidates_.pop_back();
      cursor_.pop_back();
      continue;
    }
    const std::size_t v = cand[cur++];
    if (level + 1 == size_) {
      auto out = chosen_;
      out.push_back(v);
      return out;
    }
    const auto& adj = g_->adjacency[v];
    std::vector<std::size_t> narrowed;
    std::set_intersection(cand.begin() + static_cast<std::ptrdiff_t>(cur), cand.end(), adj.begin(),
                          adj.end(), std::back_inserter(narrowed));
    if (narrowed.size() + level + 1 < size_) continue;
    chosen_.push_back(v);
    candidates_.push_back(std::move(narrowed));
    cursor_.push_back(0);
  }
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> enumerate_cliques(const CompatibilityGraph& g, std::size_t size) {
  std::vector<std::vector<std::size_t>> out;
  CliqueStream stream(g, size);
  while (auto c = stream.next()) out.push_back(std::move(*c));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<DiscoveredMorphism> search_family(const CandidateFamily& family, const DiscoveryConfig& cfg,
                                              FamilyRun* run) {
  std::vector<DiscoveredMorphism> out;
  const CompatibilityGraph g = build_graph(family.members, cfg.target, cfg.target_alphabet);
  if (run) {
    run->family_size = family.members.size();
    run->family_truncated = family.truncated;
    run->edges = g.edge_count();
  }
  CliqueStream stream(g, cfg.clique_size);
  VerifyOptions vopts;
  vopts.threads = cfg.threads;
  std::uint64_t index = 0;
  while (auto clique = stream.next()) {
    if (cfg.max_cliques_per_family && index >= cfg.max_cliques_per_family) {
      if (run) run->clique_limit_hit = true;
      break;
    }
    std::vector<Word> images;
    for (std::size_t v : *clique) images.push_back(family.members[v]);
    std::sort(images.begin(), images.end());
    Morphism h(std::move(images));
    VerificationReport report = verify(h, cfg.verify_k, cfg.verify_p, vopts);
    ++index;
    if (run) run->cliques_checked = index;
    if (report.verdict != Verdict::accepted) continue;
    out.push_back({std::move(h), std::move(report),
                   family.shared_suffix + family.shared_prefix, index - 1});
    if (run) ++run->accepted;
    if (cfg.max_accepted && out.size() >= cfg.max_accepted) break;
  }
  return out;
}

DiscoveryResult run_pipeline(const DiscoveryConfig& cfg) {
  cfg.validate();
  DiscoveryResult result;
  if (!cfg.factors.empty()) {
    result.factors = cfg.factors;
  } else {
    RandomSearchConfig rcfg;
    rcfg.seed = cfg.seed;
    rcfg.target_length = cfg.seed_word_length;
    result.seed_word = random_long_word(cfg.target_alphabet, cfg.target, rcfg);
    if (!result.seed_word) return result;
    result.factors = harvest_factors(*result.seed_word, cfg.factor_length, cfg.top_m);
  }

  for (const Word& raw : result.factors) {
    if (cfg.max_accepted && result.accepted.size() >= cfg.max_accepted) break;
    const Word f(cfg.target_alphabet, std::vector<Symbol>(raw.begin(), raw.end()));
    const std::size_t half = f.size() / 2;
    const Word f1 = f.prefix(half);
    const Word f2 = f.suffix(half);
    // Members start with f2 and end with f1, so each junction x|y reads f1 f2 = f.
    const CandidateFamily family = build_family(cfg.target_alphabet, cfg.target, f2, f1,
                                                cfg.family_max_length, cfg.family_min_length,
                                                cfg.family_max_nodes);
    DiscoveryConfig local = cfg;
    if (cfg.max_accepted) local.max_accepted = cfg.max_accepted - result.accepted.size();
    FamilyRun run;
    run.factor = f;
    for (auto& found : search_family(family, local, &run)) result.accepted.push_back(std::move(found));
    result.families.push_back(std::move(run));
  }
  return result;
}

}  // namespace kab
