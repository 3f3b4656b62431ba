#include "kab/morphism.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace kab {

Morphism::Morphism(std::vector<Word> images) {
  if (images.empty()) throw PreconditionError("morphism needs at least one image");
  if (images.size() > static_cast<std::size_t>(kMaxAlphabet)) {
    throw PreconditionError("domain alphabet too large");
  }
  int sigma = 1;
  for (const Word& w : images) {
    if (w.empty()) throw PreconditionError("morphism images must be nonempty");
    for (Symbol c : w) sigma = std::max(sigma, c + 1);
  }
  target_alphabet_ = std::max(sigma, 2);
  for (const Word& w : images) {
    images_.emplace_back(target_alphabet_, std::vector<Symbol>(w.begin(), w.end()));
  }

  min_len_ = max_len_ = images_[0].size();
  for (const Word& w : images_) {
    min_len_ = std::min(min_len_, w.size());
    max_len_ = std::max(max_len_, w.size());
  }
  std::size_t p = 0;
  while (p < min_len_ && std::all_of(images_.begin(), images_.end(),
                                     [&](const Word& w) { return w[p] == images_[0][p]; })) {
    ++p;
  }
  std::size_t s = 0;
  while (s < min_len_ && std::all_of(images_.begin(), images_.end(), [&](const Word& w) {
           return w[w.size() - 1 - s] == images_[0][images_[0].size() - 1 - s];
         })) {
    ++s;
  }
  prefix_ = images_[0].prefix(p);
  suffix_ = images_[0].suffix(s);
}

Word Morphism::apply(const Word& w) const {
  std::vector<Symbol> out;
  for (Symbol a : w) {
    if (a >= images_.size()) throw PreconditionError("letter outside the morphism domain");
    out.insert(out.end(), images_[a].begin(), images_[a].end());
  }
  return Word(target_alphabet_, std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string expand(const std::string& expr, const std::map<std::string, std::string>& macros,
                   int line) {
  std::string out;
  for (std::size_t i = 0; i < expr.size();) {
    const char c = expr[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      out.push_back(c);
      ++i;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < expr.size() && ident_char(expr[j])) ++j;
      const std::string name = expr.substr(i, j - i);
      auto it = macros.find(name);
      if (it == macros.end()) {
        throw PreconditionError("line " + std::to_string(line) + ": unknown macro '" + name + "'");
      }
      out += it->second;
      i = j;
    } else {
      throw PreconditionError("line " + std::to_string(line) + ": unexpected '" +
                              std::string(1, c) + "'");
    }
  }
  return out;
}

}  // namespace

Morphism parse_morphism(std::string_view text) {
  struct Pending {
    bool is_macro = false;
    std::string name;
    std::string expr;
    int line = 0;
  };
  std::vector<Pending> defs;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("let ", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw PreconditionError("line " + std::to_string(line_no) + ": expected '='");
      }
      std::string name = trim(std::string_view(line).substr(4, eq - 4));
      if (name.empty() || !ident_start(name[0]) ||
          !std::all_of(name.begin(), name.end(), ident_char)) {
        throw PreconditionError("line " + std::to_string(line_no) + ": bad macro name");
      }
      defs.push_back({true, name, line.substr(eq + 1), line_no});
    } else if (auto arrow = line.find("->"); arrow != std::string::npos) {
      std::string letter = trim(std::string_view(line).substr(0, arrow));
      if (letter.size() != 1 || !std::isdigit(static_cast<unsigned char>(letter[0]))) {
        throw PreconditionError("line " + std::to_string(line_no) + ": bad letter '" + letter + "'");
      }
      defs.push_back({false, letter, line.substr(arrow + 2), line_no});
    } else {
      if (defs.empty()) {
        throw PreconditionError("line " + std::to_string(line_no) + ": continuation without definition");
      }
      defs.back().expr += line;
    }
  }

  std::map<std::string, std::string> macros;
  std::map<int, std::string> images;
  for (const Pending& d : defs) {
    std::string value = expand(d.expr, macros, d.line);
    if (d.is_macro) {
      macros[d.name] = value;
    } else {
      const int letter = d.name[0] - '0';
      if (images.count(letter)) {
        throw PreconditionError("line " + std::to_string(d.line) + ": letter defined twice");
      }
      images[letter] = value;
    }
  }
  if (images.empty()) throw PreconditionError("no images defined");
  std::vector<Word> words;
  for (int a = 0; a < static_cast<int>(images.size()); ++a) {
    auto it = images.find(a);
    if (it == images.end()) throw PreconditionError("missing image for letter " + std::to_string(a));
    words.push_back(Word::parse(it->second));
  }
  return Morphism(std::move(words));
}

Morphism load_morphism(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_morphism(buf.str());
}

std::string format_morphism(const Morphism& h) {
  std::string out;
  for (std::size_t a = 0; a < h.domain_size(); ++a) {
    out += std::to_string(a) + " -> " + h.images()[a].str() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

CountMatrix build_count_matrix(const Morphism& h, std::size_t k) {
  if (k == 0) throw PreconditionError("k must be positive");
  if (h.common_prefix().size() + 1 < k) {
    throw PreconditionError("common prefix shorter than k-1");
  }
  const int sigma = h.target_alphabet();
  const Word ext = h.common_prefix().prefix(k - 1);
  CountMatrix n;
  n.k = k;
  n.rows = FactorSet::all(sigma, k);
  n.entries.assign(n.rows.size(), std::vector<std::int64_t>(h.domain_size(), 0));
  for (std::size_t x = 0; x < h.domain_size(); ++x) {
    const Counts col = psi_k((h.images()[x] + ext).symbols(), sigma, k);
    for (std::size_t f = 0; f < col.size(); ++f) n.entries[f][x] = col[f];
  }
  return n;
}

RankDeficientError::RankDeficientError(std::size_t rank, std::size_t needed)
    : PreconditionError("count matrix has rank " + std::to_string(rank) + ", need " +
                        std::to_string(needed)),
      rank_(rank) {}

namespace {

std::optional<RowSelection> try_rows(const CountMatrix& n, std::vector<std::size_t> rows) {
  IntMatrix m;
  for (std::size_t r : rows) m.push_back(n.entries[r]);
  auto inv = inverse(m);
  if (!inv) return std::nullopt;
  std::vector<Word> members;
  for (std::size_t r : rows) members.push_back(n.rows[r]);
  RowSelection sel;
  sel.factors = FactorSet(std::move(members), /*keep_given_order=*/true);
  sel.rows = std::move(rows);
  sel.det = determinant(m);
  sel.matrix = std::move(m);
  sel.inverse = std::move(*inv);
  return sel;
}

}  // namespace

RowSelection select_rows(const CountMatrix& n, const std::optional<FactorSet>& preferred) {
  const std::size_t cols = n.cols();
  const std::size_t r = rank(n.entries);
  if (r < cols) throw RankDeficientError(r, cols);

  if (preferred) {
    if (preferred->size() != cols) throw PreconditionError("preferred row set has the wrong size");
    std::vector<std::size_t> rows;
    for (const Word& f : preferred->members()) {
      auto i = n.rows.index_of(f);
      if (!i) throw PreconditionError("preferred row " + f.str() + " is not a matrix row");
      rows.push_back(*i);
    }
    if (auto sel = try_rows(n, rows)) return *sel;
  }

  std::vector<std::size_t> idx(cols);
  for (std::size_t i = 0; i < cols; ++i) idx[i] = i;
  const std::size_t total = n.rows.size();
  while (true) {
    if (auto sel = try_rows(n, idx)) return *sel;
    std::size_t i = cols;
    while (i > 0 && idx[i - 1] == total - cols + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < cols; ++j) idx[j] = idx[j - 1] + 1;
  }
  throw RankDeficientError(r, cols);  // unreachable when rank is full
}

}  // namespace kab
