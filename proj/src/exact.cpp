#include "kab/exact.hpp"

#include <stdexcept>
#include <utility>

namespace kab {

RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i].assign(m[i].begin(), m[i].end());
  return out;
}

namespace {

// Gauss-Jordan to reduced row echelon form; returns the pivot count and
// accumulates the determinant factor of the performed operations.
std::size_t reduce(RationalMatrix& a, RationalMatrix* companion, Rational* det) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  if (det) *det = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a[pivot][c].numerator() == 0) ++pivot;
    if (pivot == rows) {
      if (det) *det = 0;
      continue;
    }
    if (pivot != r) {
      std::swap(a[pivot], a[r]);
      if (companion) std::swap((*companion)[pivot], (*companion)[r]);
      if (det) *det = -*det;
    }
    const Rational p = a[r][c];
    if (det) *det *= p;
    for (auto& x : a[r]) x /= p;
    if (companion) {
      for (auto& x : (*companion)[r]) x /= p;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].numerator() == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
      if (companion) {
        auto& ci = (*companion)[i];
        const auto& cr = (*companion)[r];
        for (std::size_t j = 0; j < ci.size(); ++j) ci[j] -= f * cr[j];
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank(const IntMatrix& m) {
  auto a = to_rational(m);
  return reduce(a, nullptr, nullptr);
}

Rational determinant(const IntMatrix& square) {
  if (!square.empty() && square[0].size() != square.size()) {
    throw std::invalid_argument("determinant of a non-square matrix");
  }
  auto a = to_rational(square);
  Rational det;
  if (reduce(a, nullptr, &det) < square.size()) return 0;
  return det;
}

std::optional<RationalMatrix> inverse(const IntMatrix& square) {
  const std::size_t n = square.size();
  auto a = to_rational(square);
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  if (reduce(a, &inv, nullptr) < n) return std::nullopt;
  return inv;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), inner = b.size();
  RationalMatrix out(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].numerator() == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

std::vector<Rational> multiply(const RationalMatrix& a, const std::vector<std::int64_t>& x) {
  std::vector<Rational> out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
  }
  return out;
}

bool is_identity(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (m[i][j] != Rational(i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

}  // namespace kab
