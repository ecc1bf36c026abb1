#pragma once

#include <vector>

#include "ergocube/core.hpp"

namespace ergocube {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Basis of {v : M v = 0}, exact. M is rows x cols; every basis vector has
/// length cols and a 1 in its free pivot position.
std::vector<std::vector<Rational>> null_space(RationalMatrix m, std::size_t cols);

std::size_t rank(RationalMatrix m, std::size_t cols);

std::vector<Rational> multiply(const RationalMatrix& m, const std::vector<Rational>& v);

}  // namespace ergocube
