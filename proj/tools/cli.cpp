#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kab/discovery.hpp"
#include "kab/morphism.hpp"
#include "kab/repetition.hpp"
#include "kab/search.hpp"
#include "kab/verifier.hpp"
#include "kab/version.hpp"

namespace kab::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kLongTripleCount = 1'000'000'000;

struct Outcome {
  json payload;
  int code = 0;
  std::string text;
};

struct Context {
  std::ostream* err = nullptr;
  bool progress = false;
};

template <class T>
std::optional<T> opt(const json& p, const char* key) {
  auto it = p.find(key);
  if (it == p.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

json occurrence_json(const std::optional<Occurrence>& o) {
  if (!o) return nullptr;
  return {{"start", o->start}, {"period", o->period}, {"power", o->power}};
}

json words_json(const std::vector<Word>& ws) {
  json out = json::array();
  for (const Word& w : ws) out.push_back(w.str());
  return out;
}

json report_json(const SearchReport& r) {
  return {{"exhausted", r.exhausted},
          {"node_count", r.node_count},
          {"max_depth", r.max_depth},
          {"witness", r.witness.str()},
          {"per_depth_counts", r.per_depth_counts}};
}

AvoidancePredicate predicate_from(const json& p) {
  AvoidancePredicate pred;
  pred.power = p.at("power").get<int>();
  pred.order = p.at("k").get<int>();
  pred.min_period = p.at("min_period").get<int>();
  pred.square_budget = opt<int>(p, "budget");
  pred.validate();
  return pred;
}

SearchLimits limits_from(const json& p) {
  SearchLimits l;
  l.max_length = opt<std::size_t>(p, "max_length");
  l.max_nodes = opt<std::uint64_t>(p, "max_nodes");
  l.validate();
  return l;
}

ExecutionOptions exec_from(const json& p, const Context& ctx) {
  ExecutionOptions e;
  e.threads = std::max(1u, p.value("threads", 1u));
  if (ctx.progress && ctx.err) {
    std::ostream* err = ctx.err;
    e.progress = [err](const std::string& line) { *err << line << std::endl; };
  }
  return e;
}

bool bounded(const json& p) { return opt<std::size_t>(p, "max_length") || opt<std::uint64_t>(p, "max_nodes"); }

void require_long(const json& p, const std::string& what) {
  if (!p.value("allow_long", false)) {
    throw PreconditionError(what + " can run for hours; pass --allow-long (or bound it with --max-nodes / --max-length)");
  }
}

std::string search_text(const SearchReport& r) {
  std::ostringstream os;
  os << (r.exhausted ? "exhausted" : "limit reached") << " nodes=" << r.node_count
     << " max_depth=" << r.max_depth << " witness=" << r.witness;
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome do_check(const json& p) {
  const Word w = Word::parse(p.at("word").get<std::string>(), p.value("alphabet", 0));
  const AvoidancePredicate pred = predicate_from(p);
  const auto occ = find_power(w, pred);
  Outcome o;
  o.payload = {{"free", !occ}, {"occurrence", occurrence_json(occ)}};
  if (pred.square_budget) {
    std::vector<Word> inv;
    for (const Word& s : distinct_squares(w, pred.order)) inv.push_back(s);
    o.payload["squares"] = words_json(inv);
  }
  o.code = occ ? 1 : 0;
  if (occ) {
    o.text = "not free: start=" + std::to_string(occ->start) + " period=" + std::to_string(occ->period) +
             " power=" + std::to_string(occ->power);
  } else {
    o.text = "free";
  }
  return o;
}

Outcome do_search(const json& p, const Context& ctx) {
  const SearchReport r = exhaustive_search(p.at("alphabet").get<int>(), predicate_from(p),
                                           parse_search_mode(p.at("mode").get<std::string>()),
                                           limits_from(p), exec_from(p, ctx));
  return {report_json(r), 0, search_text(r)};
}

Outcome do_budget_search(const json& p, const Context& ctx) {
  if (!bounded(p)) require_long(p, "an unbounded budget search");
  const SearchReport r = budget_search(p.at("k").get<int>(), p.at("budget").get<int>(),
                                       parse_search_mode(p.at("mode").get<std::string>()),
                                       limits_from(p), exec_from(p, ctx));
  return {report_json(r), 0, search_text(r)};
}

Outcome do_random(const json& p) {
  const AvoidancePredicate pred = predicate_from(p);
  RandomSearchConfig cfg;
  cfg.seed = p.at("seed").get<std::uint64_t>();
  cfg.target_length = p.at("target").get<std::size_t>();
  cfg.max_restarts = p.at("max_restarts").get<std::uint64_t>();
  cfg.backoff = p.at("backoff").get<double>();
  cfg.validate();
  const int sigma = p.at("alphabet").get<int>();
  const auto w = random_long_word(sigma, pred, cfg);
  Outcome o;
  if (!w) {
    o.payload = {{"found", false}, {"word", nullptr}, {"length", 0}, {"verified", false}};
    o.code = 1;
    o.text = "no word found within the restart budget";
    return o;
  }
  const bool ok = is_free(*w, pred);
  o.payload = {{"found", true}, {"word", w->str()}, {"length", w->size()}, {"verified", ok}};
  o.code = ok ? 0 : 1;
  o.text = "length=" + std::to_string(w->size()) + (ok ? " verified" : " FAILED self-check") + "\n" + w->str();
  return o;
}

Outcome do_prove_finite(const json& p, const Context& ctx) {
  if (!bounded(p)) require_long(p, "prove-finite");
  const FinitenessResult r =
      prove_finite(p.at("alphabet").get<int>(), predicate_from(p), limits_from(p), exec_from(p, ctx));
  Outcome o;
  const bool fin = r.verdict == Finiteness::finite;
  o.payload = {{"verdict", fin ? "finite" : "unknown"},
               {"power_base_length", r.power_base_length},
               {"power_exponent_bound", r.power_exponent_bound},
               {"report", report_json(r.report)}};
  o.text = std::string(fin ? "finite" : "unknown") + ": " + search_text(r.report);
  o.code = fin ? 0 : 1;
  return o;
}

json triple_json(const CutTriple& t) {
  json letters = json::array(), cuts = json::array();
  for (int i = 0; i < 3; ++i) {
    letters.push_back(t.letters[i]);
    cuts.push_back(t.cuts[i]);
  }
  return {{"letters", letters}, {"cuts", cuts}};
}

std::string rational_str(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

Outcome do_verify(const json& p) {
  const Morphism h = parse_morphism(p.at("morphism").get<std::string>());
  const auto k = p.at("k").get<std::size_t>();
  const auto pp = p.at("p").get<std::size_t>();
  VerifyOptions opts;
  opts.span = opt<std::size_t>(p, "span");
  opts.congruence_filter = p.value("congruence", false);
  opts.threads = std::max(1u, p.value("threads", 1u));
  const std::string engine = p.value("engine", std::string("indexed"));
  if (engine == "indexed") {
    opts.engine = VerifyEngine::indexed;
  } else if (engine == "direct") {
    opts.engine = VerifyEngine::direct;
  } else {
    throw PreconditionError("unknown engine '" + engine + "'");
  }
  if (auto rows = opt<std::vector<std::string>>(p, "rows"); rows && !rows->empty()) {
    std::vector<Word> members;
    for (const std::string& r : *rows) members.push_back(Word::parse(r, h.target_alphabet()));
    opts.preferred_rows = FactorSet(std::move(members), true);
  }
  if (opts.engine == VerifyEngine::direct) {
    std::uint64_t total = 0;
    for (const Word& w : h.images()) total += w.size();
    if (total * total * total > kLongTripleCount) require_long(p, "the direct engine on this morphism");
  }

  const VerificationReport r = verify(h, k, pp, opts);
  Outcome o;
  json stats = {{"short_span_words", r.stats.short_span_words},
                {"raw_triples", r.stats.raw_triples},
                {"affix_survivors", r.stats.affix_survivors},
                {"lattice_survivors", r.stats.lattice_survivors},
                {"claim_checks", r.stats.claim_checks}};
  o.payload = {{"verdict", to_string(r.verdict)},
               {"reason", r.reason},
               {"k", r.k},
               {"p", r.p},
               {"span", r.span},
               {"rows_used", r.rows_used ? words_json(r.rows_used->members()) : json(nullptr)},
               {"det", rational_str(r.det)},
               {"stats", stats},
               {"counterexample", r.counterexample ? triple_json(*r.counterexample) : json(nullptr)},
               {"notes", r.notes}};
  if (r.short_span_failure) {
    o.payload["short_span_failure"] = {{"base", r.short_span_failure->base.str()},
                                       {"occurrence", occurrence_json(r.short_span_failure->occurrence)}};
  }
  std::ostringstream os;
  os << to_string(r.verdict);
  if (!r.reason.empty()) os << ": " << r.reason;
  os << "\nraw_triples=" << r.stats.raw_triples << " affix_survivors=" << r.stats.affix_survivors
     << " lattice_survivors=" << r.stats.lattice_survivors << " det=" << rational_str(r.det);
  if (r.short_span_failure) {
    const Occurrence& at = r.short_span_failure->occurrence;
    os << "\nbase=" << r.short_span_failure->base << " start=" << at.start << " period=" << at.period;
  }
  for (const std::string& n : r.notes) os << "\nnote: " << n;
  if (p.value("squares", false) && r.verdict == Verdict::accepted) {
    std::vector<Word> sq;
    for (const Word& w : surviving_squares(h, k, pp, opts.span)) sq.push_back(w);
    o.payload["squares"] = words_json(sq);
    os << "\nsquares:";
    for (const Word& w : sq) os << " " << w;
  }
  o.text = os.str();
  o.code = r.verdict == Verdict::accepted ? 0 : r.verdict == Verdict::rejected ? 1 : 2;
  return o;
}

Outcome do_discover(const json& p, bool write_files) {
  const DiscoveryConfig cfg = parse_discovery_config(p.at("config").get<std::string>());
  const DiscoveryResult r = run_pipeline(cfg);
  Outcome o;
  json families = json::array();
  for (const FamilyRun& f : r.families) {
    families.push_back({{"factor", f.factor.str()},
                        {"family_size", f.family_size},
                        {"family_truncated", f.family_truncated},
                        {"edges", f.edges},
                        {"cliques_checked", f.cliques_checked},
                        {"clique_limit_hit", f.clique_limit_hit},
                        {"accepted", f.accepted}});
  }
  json accepted = json::array();
  for (const DiscoveredMorphism& m : r.accepted) {
    accepted.push_back({{"images", words_json(m.morphism.images())},
                        {"seed_factor", m.seed_factor.str()},
                        {"clique_index", m.clique_index},
                        {"verdict", to_string(m.report.verdict)},
                        {"k", m.report.k},
                        {"p", m.report.p},
                        {"det", rational_str(m.report.det)},
                        {"raw_triples", m.report.stats.raw_triples},
                        {"lattice_survivors", m.report.stats.lattice_survivors}});
  }
  o.payload = {{"seed_word_length", r.seed_word ? r.seed_word->size() : 0},
               {"factors", words_json(r.factors)},
               {"families", families},
               {"accepted", accepted}};

  const std::string dir = p.value("out", std::string());
  if (write_files && !dir.empty()) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < r.accepted.size(); ++i) {
      std::ofstream f(std::filesystem::path(dir) / ("morphism_" + std::to_string(i) + ".txt"));
      f << format_morphism(r.accepted[i].morphism);
      std::ofstream rep(std::filesystem::path(dir) / ("report_" + std::to_string(i) + ".json"));
      rep << accepted[i].dump(2) << "\n";
    }
  }
  o.text = std::to_string(r.accepted.size()) + " accepted morphism(s) from " +
           std::to_string(r.families.size()) + " famil" + (r.families.size() == 1 ? "y" : "ies");
  for (const DiscoveredMorphism& m : r.accepted) o.text += "\n" + format_morphism(m.morphism);
  return o;
}

Outcome execute(const std::string& command, const json& params, const Context& ctx, bool write_files) {
  if (command == "check") return do_check(params);
  if (command == "search") return do_search(params, ctx);
  if (command == "budget-search") return do_budget_search(params, ctx);
  if (command == "random") return do_random(params);
  if (command == "prove-finite") return do_prove_finite(params, ctx);
  if (command == "verify") return do_verify(params);
  if (command == "discover") return do_discover(params, write_files);
  throw PreconditionError("unknown command '" + command + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json nullable(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-abelian repetition avoidance toolkit", "kab"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  bool as_json = false, progress = false, allow_long = false;
  std::string replay;
  unsigned threads = 1;
  app.add_flag("--json", as_json, "Print a JSON run certificate");
  app.add_option("--replay", replay, "Re-run a saved certificate and compare outcomes");
  app.add_flag("--progress", progress, "Report search progress on stderr");

  // Shared predicate flags.
  struct Pred {
    int alphabet = 2, power = 2, k = 1, min_period = 1;
    std::optional<int> budget;
  };
  auto add_pred = [](CLI::App* sub, Pred& p, bool with_alphabet) {
    if (with_alphabet) sub->add_option("--alphabet", p.alphabet, "Alphabet size")->capture_default_str();
    sub->add_option("--power", p.power, "Repetition exponent n")->capture_default_str();
    sub->add_option("--k", p.k, "Equivalence order k")->capture_default_str();
    sub->add_option("--min-period", p.min_period, "Minimum period")->capture_default_str();
    sub->add_option("--budget", p.budget, "Distinct square budget (power 2)");
  };
  auto pred_json = [](const Pred& p) {
    json j = {{"alphabet", p.alphabet}, {"power", p.power}, {"k", p.k}, {"min_period", p.min_period}};
    j["budget"] = p.budget ? json(*p.budget) : json(nullptr);
    return j;
  };

  std::optional<std::size_t> max_length;
  std::optional<std::uint64_t> max_nodes;
  std::string mode = "full";
  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--mode", mode, "full or prelyndon")->capture_default_str();
    sub->add_option("--max-length", max_length, "Stop expanding at this length");
    sub->add_option("--max-nodes", max_nodes, "Stop after this many nodes");
    sub->add_option("--threads", threads, "Worker threads")->capture_default_str();
    sub->add_flag("--allow-long", allow_long, "Permit multi-hour runs");
  };

  auto* check = app.add_subcommand("check", "Look for a repetition in one word");
  std::string word;
  Pred check_pred;
  check_pred.alphabet = 0;
  check->add_option("word", word, "Word over digits")->required();
  check->add_option("--alphabet", check_pred.alphabet, "Alphabet size (default: inferred)");
  add_pred(check, check_pred, false);

  auto* search = app.add_subcommand("search", "Exhaustive backtracking search");
  Pred search_pred;
  add_pred(search, search_pred, true);
  add_limits(search);

  auto* budget = app.add_subcommand("budget-search", "Binary words with few distinct k-abelian squares");
  int bk = 2, bbudget = 4;
  budget->add_option("--k", bk, "Equivalence order k")->capture_default_str();
  budget->add_option("--budget", bbudget, "Distinct square budget")->capture_default_str();
  add_limits(budget);

  auto* random = app.add_subcommand("random", "Randomized backtracking towards a long word");
  Pred random_pred;
  std::size_t target = 100;
  std::uint64_t seed = 1, max_restarts = 1'000'000;
  double backoff = 4.0;
  add_pred(random, random_pred, true);
  random->add_option("--target", target, "Target length")->capture_default_str();
  random->add_option("--seed", seed, "RNG seed")->capture_default_str();
  random->add_option("--max-restarts", max_restarts, "Dead ends tolerated")->capture_default_str();
  random->add_option("--backoff", backoff, "Mean letters dropped at a dead end")->capture_default_str();

  auto* prove = app.add_subcommand("prove-finite", "Certify that a language is finite");
  Pred prove_pred;
  add_pred(prove, prove_pred, true);
  add_limits(prove);

  auto* verify_cmd = app.add_subcommand("verify", "Check a morphism's square-freeness certificate");
  std::string morphism_path, engine = "indexed";
  std::size_t vk = 3, vp = 3;
  std::optional<std::size_t> span;
  std::vector<std::string> rows;
  bool congruence = false, squares = false;
  verify_cmd->add_option("morphism", morphism_path, "Morphism file")->required();
  verify_cmd->add_option("--k", vk, "Equivalence order k")->capture_default_str();
  verify_cmd->add_option("--p", vp, "Minimum period p")->capture_default_str();
  verify_cmd->add_option("--span", span, "Short-span word length");
  verify_cmd->add_option("--rows", rows, "Preferred row factors for M")->delimiter(',');
  verify_cmd->add_option("--engine", engine, "indexed or direct")->capture_default_str();
  verify_cmd->add_flag("--congruence", congruence, "Length congruence filter (uniform morphisms)");
  verify_cmd->add_flag("--squares", squares, "Also list surviving short squares");
  verify_cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();
  verify_cmd->add_flag("--allow-long", allow_long, "Permit multi-hour runs");

  auto* discover = app.add_subcommand("discover", "Search for square-free morphisms");
  std::string config_path, out_dir;
  discover->add_option("config", config_path, "Configuration file")->required();
  discover->add_option("--out", out_dir, "Directory for accepted morphisms");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  Context ctx{&err, progress};
  std::string command;
  json params;
  try {
    if (!replay.empty()) {
      const json cert = json::parse(read_file(replay));
      command = cert.at("command").get<std::string>();
      params = cert.at("params");
      const Outcome o = execute(command, params, ctx, false);
      const bool same = o.payload == cert.at("outcome");
      out << (same ? "replay matches" : "replay differs") << " (" << command << ")\n";
      if (!same) err << "expected " << cert.at("outcome").dump() << "\ngot      " << o.payload.dump() << "\n";
      return same ? 0 : 1;
    }
    if (app.get_subcommands().empty()) {
      err << app.help();
      return 2;
    }
    const CLI::App* sub = app.get_subcommands().front();
    command = sub->get_name();
    if (sub == check) {
      params = pred_json(check_pred);
      params["word"] = word;
    } else if (sub == search || sub == prove) {
      params = pred_json(sub == search ? search_pred : prove_pred);
    } else if (sub == budget) {
      params = {{"k", bk}, {"budget", bbudget}};
    } else if (sub == random) {
      params = pred_json(random_pred);
      params["target"] = target;
      params["seed"] = seed;
      params["max_restarts"] = max_restarts;
      params["backoff"] = backoff;
    } else if (sub == verify_cmd) {
      params = {{"source", morphism_path},
                {"morphism", read_file(morphism_path)},
                {"k", vk},
                {"p", vp},
                {"span", span ? json(*span) : json(nullptr)},
                {"rows", rows},
                {"engine", engine},
                {"congruence", congruence},
                {"squares", squares},
                {"threads", threads},
                {"allow_long", allow_long}};
    } else if (sub == discover) {
      params = {{"source", config_path},
                {"config", format_discovery_config(load_discovery_config(config_path))},
                {"out", out_dir}};
    }
    if (sub == search || sub == budget) params["mode"] = to_string(parse_search_mode(mode));
    if (sub == search || sub == budget || sub == prove) {
      params["max_length"] = max_length ? json(*max_length) : json(nullptr);
      params["max_nodes"] = nullable(max_nodes);
      params["threads"] = threads;
      params["allow_long"] = allow_long;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = execute(command, params, ctx, true);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    if (as_json) {
      json cert = {{"command", command},
                   {"params", params},
                   {"outcome", o.payload},
                   {"version", kVersion},
                   {"elapsed_ms", ms.count()},
                   {"seed", params.contains("seed") ? params["seed"] : json(nullptr)}};
      out << cert.dump(2) << "\n";
    } else {
      out << o.text << "\n";
    }
    return o.code;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: malformed certificate: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace kab::cli
