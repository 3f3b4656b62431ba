#pragma once

// Brute-force reference implementations over std::string. Nothing here
// uses the library, so agreement is meaningful.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

inline std::map<std::string, int> factor_counts(const std::string& w, std::size_t k) {
  std::map<std::string, int> out;
  if (k == 0 || w.size() < k) return out;
  for (std::size_t i = 0; i + k <= w.size(); ++i) ++out[w.substr(i, k)];
  return out;
}

// Equal counts of every factor of length 1..k.
inline bool k_equivalent(const std::string& u, const std::string& v, std::size_t k) {
  if (u.size() != v.size()) return false;
  for (std::size_t j = 1; j <= k; ++j) {
    if (factor_counts(u, j) != factor_counts(v, j)) return false;
  }
  return true;
}

struct Hit {
  std::size_t start, period, power;
  bool operator==(const Hit&) const = default;
};

// First k-abelian n-power of period >= p, scanning end positions left to
// right and periods upward.
inline std::optional<Hit> find_power(const std::string& w, std::size_t n, std::size_t k,
                                     std::size_t p) {
  for (std::size_t end = 1; end <= w.size(); ++end) {
    for (std::size_t per = std::max<std::size_t>(p, 1); per * n <= end; ++per) {
      const std::size_t start = end - per * n;
      bool ok = true;
      for (std::size_t b = 1; b < n && ok; ++b) {
        ok = k_equivalent(w.substr(start, per), w.substr(start + b * per, per), k);
      }
      if (ok) return Hit{start, per, n};
    }
  }
  return std::nullopt;
}

// Distinct factor words that are k-abelian squares.
inline std::set<std::string> squares(const std::string& w, std::size_t k) {
  std::set<std::string> out;
  for (std::size_t per = 1; 2 * per <= w.size(); ++per) {
    for (std::size_t i = 0; i + 2 * per <= w.size(); ++i) {
      if (k_equivalent(w.substr(i, per), w.substr(i + per, per), k)) out.insert(w.substr(i, 2 * per));
    }
  }
  return out;
}

inline bool budget_free(const std::string& w, std::size_t k, std::size_t budget, std::size_t p) {
  const auto sq = squares(w, k);
  if (sq.size() > budget) return false;
  if (p > 1) {
    for (const auto& s : sq) {
      if (s.size() / 2 >= p) return false;
    }
  }
  return true;
}

inline bool lyndon(const std::string& w) {
  if (w.empty()) return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (!(w < w.substr(i) + w.substr(0, i))) return false;
  }
  return true;
}

// Prefix of l^m for some Lyndon word l.
inline bool pre_lyndon(const std::string& w) {
  for (std::size_t d = 1; d <= w.size(); ++d) {
    if (!lyndon(w.substr(0, d))) continue;
    bool ok = true;
    for (std::size_t i = d; i < w.size() && ok; ++i) ok = w[i] == w[i % d];
    if (ok) return true;
  }
  return false;
}

// All factorizations into Lyndon words with non-increasing factors.
inline void lyndon_splits(const std::string& w, std::size_t from, std::vector<std::string>& cur,
                          std::vector<std::vector<std::string>>& out) {
  if (from == w.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t len = 1; from + len <= w.size(); ++len) {
    const std::string f = w.substr(from, len);
    if (!lyndon(f)) continue;
    if (!cur.empty() && cur.back() < f) continue;
    cur.push_back(f);
    lyndon_splits(w, from + len, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<std::string>> lyndon_factorizations(const std::string& w) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  lyndon_splits(w, 0, cur, out);
  return out;
}

inline std::vector<std::string> words(int sigma, std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> next;
    for (const auto& w : out) {
      for (int c = 0; c < sigma; ++c) next.push_back(w + static_cast<char>('0' + c));
    }
    out = std::move(next);
  }
  return out;
}

inline std::string random_word(std::mt19937_64& rng, int sigma, std::size_t n) {
  std::string w;
  for (std::size_t i = 0; i < n; ++i) w += static_cast<char>('0' + rng() % sigma);
  return w;
}

// Every nonempty word over sigma letters, up to max_len, satisfying keep;
// keep must describe a factorial language.
template <class Keep>
std::set<std::string> factorial_language(int sigma, std::size_t max_len, Keep keep) {
  std::set<std::string> out;
  std::vector<std::string> frontier{""};
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const auto& w : frontier) {
      if (w.size() == max_len) continue;
      for (int c = 0; c < sigma; ++c) {
        std::string x = w + static_cast<char>('0' + c);
        if (keep(x)) {
          out.insert(x);
          next.push_back(x);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

inline std::string apply(const std::vector<std::string>& images, const std::string& w) {
  std::string out;
  for (char c : w) out += images.at(c - '0');
  return out;
}

}  // namespace oracle
