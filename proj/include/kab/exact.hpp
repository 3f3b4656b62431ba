#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

namespace kab {

using Rational = boost::rational<std::int64_t>;

// Row-major dense matrices; all arithmetic is exact.
using IntMatrix = std::vector<std::vector<std::int64_t>>;
using RationalMatrix = std::vector<std::vector<Rational>>;

std::size_t rank(const IntMatrix& m);
Rational determinant(const IntMatrix& square);
std::optional<RationalMatrix> inverse(const IntMatrix& square);

RationalMatrix to_rational(const IntMatrix& m);
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
std::vector<Rational> multiply(const RationalMatrix& a, const std::vector<std::int64_t>& x);
bool is_identity(const RationalMatrix& m);

}  // namespace kab
